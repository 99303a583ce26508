"""Cyclic-symmetry machinery for the closed chain: shift action, projection
onto irreducible (discrete Fourier) components, Poisson/ad_H formulation,
and the transformed chain equations in the irreducible variables.

Conventions: the shift acts as (T v)_i = v_{i+1 mod N}; the characters are
a_j = exp(2 pi i j / N); the projection is the normalized DFT

    s_j = (1/N) sum_k conj(a_{j-1})^{k-1} v_k,

so that s_1 is the mean, T-equivariance reads s_j(T v) = a_{j-1} s_j(v),
and the inverse map is v_k = sum_j a_{j-1}^{k-1} s_j.  For N = 3 the
irreducible variables close the chain into

    s1' = 0
    s2' = -(2a+1) (s3^2 + 2 s1 s2) + (-(2a+1) mu1 + (a-1) mu2 + (a+2) mu3)/3
    s3' = +(2a+1) (s2^2 + 2 s1 s3) + ((2a+1) mu1 - (a+2) mu2 + (1-a) mu3)/3

with a = exp(2 pi i/3); these are the exact change of variables of the
chain equations (2a+1 = i sqrt(3)).
"""

from __future__ import annotations

import numpy as np

from .errors import UnsupportedNError

A3 = np.exp(2j * np.pi / 3)
_W3 = 2 * A3 + 1  # = i sqrt(3)


def characters(n: int) -> np.ndarray:
    """a_j = exp(2 pi i j / n), j = 0..n-1."""
    return np.exp(2j * np.pi * np.arange(n) / n)


def cyclic_shift(v) -> np.ndarray:
    """(T v)_i = v_{i+1 mod N}: (1,2,3) -> (2,3,1)."""
    return np.roll(np.asarray(v), -1)


def to_irreducible(v) -> np.ndarray:
    """Normalized DFT projection onto the irreducible components."""
    v = np.asarray(v, dtype=complex)
    return np.fft.fft(v) / v.size


def from_irreducible(s) -> np.ndarray:
    """Inverse of to_irreducible: v_k = sum_j a_{j-1}^{k-1} s_j."""
    s = np.asarray(s, dtype=complex)
    return np.fft.ifft(s) * s.size


def projector(j: int, v) -> np.ndarray:
    """Component of v in the j-th irreducible subspace (0-based j)."""
    v = np.asarray(v, dtype=complex)
    s = to_irreducible(v)
    picked = np.zeros_like(s)
    picked[j] = s[j]
    return from_irreducible(picked)


def poisson_matrix(n: int = 3) -> np.ndarray:
    """Antisymmetric bracket matrix Omega_{ik} = {sigma_i, sigma_k},
    defined by (-1)^{k-i} (1 - delta_{ik}) for k <= i and antisymmetry."""
    om = np.zeros((n, n))
    for i in range(n):
        for k in range(i):
            om[i, k] = (-1) ** (k - i)
            om[k, i] = -om[i, k]
    return om


def poisson_bracket(i: int, k: int, n: int = 3) -> float:
    """{sigma_i, sigma_k} with 1-based indices."""
    return float(poisson_matrix(n)[i - 1, k - 1])


def hamiltonian(sigma, mu) -> float:
    """H = sum_i (sigma_i^3 / 3 + mu_i sigma_i)."""
    sigma = np.asarray(sigma)
    mu = np.asarray(mu)
    return float(np.sum(sigma ** 3 / 3.0 + mu * sigma))


def ad_H(sigma, mu) -> np.ndarray:
    """{H, sigma_j} = sum_i (sigma_i^2 + mu_i) Omega_{ij}; equals the
    chain right-hand side (N = 3)."""
    sigma = np.asarray(sigma, dtype=float)
    mu = np.asarray(mu, dtype=float)
    if sigma.size != 3:
        raise UnsupportedNError("explicit bracket implemented for N = 3")
    grad_h = sigma ** 2 + mu
    return grad_h @ poisson_matrix(3)


def ad_H_scalar(grad_f, sigma, mu) -> float:
    """{H, f} for a scalar observable with gradient grad_f at sigma."""
    sigma = np.asarray(sigma, dtype=float)
    mu = np.asarray(mu, dtype=float)
    if sigma.size != 3:
        raise UnsupportedNError("explicit bracket implemented for N = 3")
    grad_h = sigma ** 2 + mu
    return float(np.real_if_close(grad_h @ poisson_matrix(3) @ np.asarray(grad_f)))


def ss_rhs(s, mu) -> np.ndarray:
    """Chain equations in the irreducible variables (N = 3).

    The first component is conserved; the other two are exact images of
    the chain right-hand side under to_irreducible.
    """
    s = np.asarray(s, dtype=complex)
    mu = np.asarray(mu, dtype=complex)
    if s.size != 3:
        raise UnsupportedNError("irreducible chain implemented for N = 3")
    a = A3
    w = _W3
    ds2 = -w * (s[2] ** 2 + 2 * s[0] * s[1]) + (
        -w * mu[0] + (a - 1) * mu[1] + (a + 2) * mu[2]
    ) / 3.0
    ds3 = w * (s[1] ** 2 + 2 * s[0] * s[2]) + (
        w * mu[0] - (a + 2) * mu[1] + (1 - a) * mu[2]
    ) / 3.0
    return np.array([0.0 + 0.0j, ds2, ds3])
