"""Cyclic-symmetry action, projectors, Poisson formulation, s-variables."""

import numpy as np
import pytest

from dresschain.chain import ChainState, casimir_c, chain_rhs, integrate_chain, invariant_A
from dresschain.errors import UnsupportedNError
from dresschain.symmetry import (
    A3,
    ad_H,
    ad_H_scalar,
    characters,
    cyclic_shift,
    from_irreducible,
    hamiltonian,
    poisson_bracket,
    poisson_matrix,
    projector,
    ss_rhs,
    to_irreducible,
)

SIG = np.array([1.0, 2.0, 3.0])
MU = np.array([0.1, 0.2, 0.3])


def test_cyclic_shift_examples():
    assert np.allclose(cyclic_shift([1, 2, 3]), [2, 3, 1])
    v = np.array([0.3, -1.0, 2.2])
    out = v.copy()
    for _ in range(3):
        out = cyclic_shift(out)
    assert np.allclose(out, v)
    # H is invariant under the joint shift of (sigma, mu)
    assert hamiltonian(cyclic_shift(SIG), cyclic_shift(MU)) == pytest.approx(
        hamiltonian(SIG, MU))


def test_to_irreducible_examples():
    s = to_irreducible([1.0, 1.0, 1.0])
    assert np.allclose(s, [1.0, 0.0, 0.0], atol=1e-15)
    s = to_irreducible(SIG)
    a = A3
    assert s[0] == pytest.approx(2.0)
    # DFT convention: the conjugate-character component carries (1+2a+3a^2)/3
    assert s[2] == pytest.approx((1 + 2 * a + 3 * a ** 2) / 3)
    assert s[1] == pytest.approx(np.conj(s[2]))


def test_from_irreducible_examples():
    assert np.allclose(from_irreducible([1, 0, 0]), [1, 1, 1])
    a = A3
    assert np.allclose(from_irreducible([0, 1, 0]), [1, a, a ** 2])
    s = np.array([0.3, 1.0 - 0.5j, 2.0])
    assert np.allclose(from_irreducible(2.5 * s), 2.5 * from_irreducible(s))


def test_roundtrip():
    rng = np.random.default_rng(1)
    for _ in range(20):
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        assert np.abs(from_irreducible(to_irreducible(v)) - v).max() <= 1e-14


def test_projectors():
    rng = np.random.default_rng(2)
    for _ in range(10):
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        parts = [projector(j, v) for j in range(3)]
        assert np.abs(sum(parts) - v).max() <= 1e-14
        for j in range(3):
            assert np.abs(projector(j, parts[j]) - parts[j]).max() <= 1e-14
            for l in range(3):
                if l != j:
                    assert np.abs(projector(l, parts[j])).max() <= 1e-14


def test_shift_equivariance_and_tensor_products():
    rng = np.random.default_rng(3)
    a = characters(3)
    for _ in range(15):
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        s = to_irreducible(v)
        sh = to_irreducible(cyclic_shift(v))
        assert np.abs(sh - a * s).max() <= 1e-14
        # tensor products pick up the product of the characters
        for i in range(3):
            for k in range(3):
                assert abs(sh[i] * sh[k] - a[i] * a[k] * s[i] * s[k]) <= 1e-13


def test_poisson_bracket_entries():
    assert poisson_bracket(1, 2) == 1
    assert poisson_bracket(2, 3) == 1
    assert poisson_bracket(3, 1) == 1
    om = poisson_matrix(3)
    assert np.allclose(om, -om.T)
    assert np.allclose(np.diag(om), 0)


def test_ad_H_is_chain_rhs():
    assert np.allclose(ad_H(SIG, np.zeros(3)), [5, -8, 3])
    rng = np.random.default_rng(4)
    for _ in range(100):
        sig = rng.normal(size=3) * 2
        mu = rng.normal(size=3)
        st = ChainState(sig, mu)
        assert np.abs(ad_H(sig, mu) - chain_rhs(st)).max() <= 1e-13
    grad_h = SIG ** 2 + MU
    assert abs(ad_H_scalar(grad_h, SIG, MU)) <= 1e-13
    with pytest.raises(UnsupportedNError):
        ad_H(np.ones(5), np.zeros(5))


def test_ss_rhs_change_of_variables():
    out = ss_rhs(to_irreducible(SIG), MU)
    assert out[0] == 0
    lhs = to_irreducible(chain_rhs(ChainState(SIG, MU)))
    assert np.abs(lhs - out).max() <= 1e-12
    assert np.abs(ss_rhs(np.zeros(3), np.zeros(3))).max() == 0


def test_s1_conserved_along_trajectories():
    traj = integrate_chain(ChainState(SIG, MU), 1e-3, 3000)
    s1 = np.array([to_irreducible(s)[0] for s in traj.sigmas])
    assert np.abs(s1 - s1[0]).max() <= 1e-10


def test_conserved_quantities_shift_invariant():
    st = ChainState(SIG, MU)
    st_sh = ChainState(cyclic_shift(SIG), cyclic_shift(MU))
    assert abs(casimir_c(st_sh) - casimir_c(st)) <= 1e-13
    assert abs(invariant_A(st_sh) - invariant_A(st)) <= 1e-13
