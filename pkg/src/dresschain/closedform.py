"""Closed-form jets of the seed functions used throughout the tests.

Everything here is exact calculus, no finite differences: jets are built
from the derivative towers of exp/sinh/cosh and combined with truncated
Taylor-series arithmetic (product and reciprocal), then converted back to
derivative lists.
"""

from __future__ import annotations

import math

from .diffpoly import Jet


def _to_taylor(derivs):
    fact = 1.0
    out = []
    for m, d in enumerate(derivs):
        if m > 0:
            fact *= m
        out.append(d / fact)
    return out


def _from_taylor(coeffs):
    fact = 1.0
    out = []
    for m, c in enumerate(coeffs):
        if m > 0:
            fact *= m
        out.append(c * fact)
    return out


def _series_mul(a, b):
    n = len(a)
    out = [0j] * n
    for i, ai in enumerate(a):
        for j in range(n - i):
            out[i + j] += ai * b[j]
    return out


def _series_recip(a):
    # 1/a as a truncated series; a[0] must be nonzero
    if a[0] == 0:
        raise ZeroDivisionError("reciprocal of series with zero constant term")
    n = len(a)
    out = [1.0 / a[0]] + [0j] * (n - 1)
    for m in range(1, n):
        s = 0j
        for k in range(1, m + 1):
            s += a[k] * out[m - k]
        out[m] = -s / a[0]
    return out


def jet_mul(f: Jet, g: Jet) -> Jet:
    n = min(len(f), len(g))
    prod = _series_mul(_to_taylor(f.values[:n]), _to_taylor(g.values[:n]))
    return Jet(_from_taylor(prod))


def jet_reciprocal(f: Jet) -> Jet:
    return Jet(_from_taylor(_series_recip(_to_taylor(f.values))))


def jet_div(f: Jet, g: Jet) -> Jet:
    return jet_mul(f, jet_reciprocal(g))


def exp_jet(lam, x, order) -> Jet:
    """Jet of exp(lam*x)."""
    v = complex(math.e) ** 0  # keep complex path
    base = complex(lam) * complex(x)
    val = complex(math.exp(base.real)) * complex(math.cos(base.imag), math.sin(base.imag))
    return Jet([val * complex(lam) ** m for m in range(order + 1)])


def cosh_jet(x, order, k=1.0) -> Jet:
    """Jet of cosh(k*x): derivatives alternate k^m cosh / k^m sinh."""
    c, s = math.cosh(k * x), math.sinh(k * x)
    return Jet([(k ** m) * (c if m % 2 == 0 else s) for m in range(order + 1)])


def sinh_jet(x, order, k=1.0) -> Jet:
    c, s = math.cosh(k * x), math.sinh(k * x)
    return Jet([(k ** m) * (s if m % 2 == 0 else c) for m in range(order + 1)])


def tanh_sigma_jet(x, order, k=1.0) -> Jet:
    """Jet of sigma(x) = k*tanh(k*x), the log-derivative of cosh(k*x)."""
    t = jet_div(sinh_jet(x, order, k), cosh_jet(x, order, k))
    return Jet([k * v for v in t.values])


def soliton_partner_jet(x, order) -> Jet:
    """Jet of 2/sinh(2x), the second-step chain partner of tanh(x).

    phi0 = cosh x seeds sigma0 = tanh x with mu0 = -1; the dressed
    potential -2 sech^2 x admits phi1 = tanh x at mu1 = 0, whose
    log-derivative is sech^2 x / tanh x = 2/sinh(2x).
    """
    if x == 0:
        raise ZeroDivisionError("2/sinh(2x) is singular at x=0")
    rec = jet_reciprocal(sinh_jet(x, order, 2.0))
    return Jet([2.0 * v for v in rec.values])


def log_derivative_jet(phi: Jet) -> Jet:
    """Jet of sigma = phi'/phi, one order lower than phi."""
    shifted = Jet(phi.values[1:])
    trunc = Jet(phi.values[:-1])
    return jet_div(shifted, trunc)
