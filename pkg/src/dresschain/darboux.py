"""Darboux transformation of eigenfunctions and operator coefficients,
scalar Miura links, and the scalar chain-equation residuals.

The operator is L = sum_n a_n D^n with coefficient jets a_0..a_N given at a
single point; sigma = phi'/phi is the log-derivative jet of the seed.  The
coefficient transform is

    a_N[1] = a_N
    a_n[1] = a_n + sum_{k=n+1}^{N} [ a_k B_{k,k-n}
                                     + (a_k' - sigma a_k) B_{k-1,k-1-n} ]

with the generalized Bell polynomials evaluated on the sigma jet.  Sign
conventions fixed here: a_2 = -1 for second order (giving u[1] = u - 2 s'),
a_3 = +1 for third order (giving u[1] = u + 3 s').
"""

from __future__ import annotations

from .bell import bell_generalized_recurrence, bell_standard
from .diffpoly import Jet
from .errors import DivisionByZeroSigmaError, OrderTooLowError


class OperatorCoeffs:
    """Coefficient jets a_0..a_N of L = sum a_n D^n at one point.

    coeffs[n] multiplies D^n; each entry is a Jet (order >= 1 wherever the
    transform differentiates it).  The top coefficient must be nonzero.
    """

    def __init__(self, coeffs):
        self.coeffs = [c if isinstance(c, Jet) else Jet(c) for c in coeffs]
        if not self.coeffs:
            raise ValueError("operator needs at least one coefficient")
        if self.coeffs[-1][0] == 0:
            raise ValueError("top coefficient vanishes at the point")

    @property
    def order(self):
        return len(self.coeffs) - 1

    def value(self, n):
        return self.coeffs[n][0]

    def derivative(self, n):
        return self.coeffs[n][1]


def dt_eigenfunction(psi: Jet, sigma: Jet) -> complex:
    """psi[1] = D psi - sigma psi at the point."""
    if psi.order < 1:
        raise OrderTooLowError("psi jet needs first derivative")
    return psi[1] - sigma[0] * psi[0]


def dt_eigenfunction_jet(psi: Jet, sigma: Jet) -> Jet:
    """Jet of psi[1] = D psi - sigma psi, by the Leibniz rule.

    The result has order min(psi.order - 1, sigma.order).
    """
    order = min(psi.order - 1, sigma.order)
    if order < 0:
        raise OrderTooLowError("psi jet needs first derivative")
    from math import comb

    vals = []
    for j in range(order + 1):
        prod = sum(comb(j, i) * sigma[i] * psi[j - i] for i in range(j + 1))
        vals.append(psi[j + 1] - prod)
    return Jet(vals)


def stationary_residual(op: OperatorCoeffs, psi: Jet, mu) -> complex:
    """(L psi - mu psi) at the point, L = sum a_n D^n from the values."""
    if psi.order < op.order:
        raise OrderTooLowError("psi jet shorter than the operator order")
    return sum(op.value(n) * psi[n] for n in range(op.order + 1)) - mu * psi[0]


def dt_coefficients(op: OperatorCoeffs, sigma: Jet) -> OperatorCoeffs:
    """Transformed coefficients of L[1] as order-0 jets at the point."""
    n_top = op.order
    bell = {}

    def B(n, k):
        if (n, k) not in bell:
            bell[(n, k)] = bell_generalized_recurrence(n, k).evaluate(sigma)
        return bell[(n, k)]

    out = []
    for n in range(n_top):
        acc = op.value(n)
        for k in range(n + 1, n_top + 1):
            acc += op.value(k) * B(k, k - n)
            acc += (op.derivative(k) - sigma[0] * op.value(k)) * B(k - 1, k - 1 - n)
        out.append(Jet([acc]))
    out.append(Jet([op.value(n_top)]))
    return OperatorCoeffs(out)


def miura_r(op: OperatorCoeffs, sigma: Jet) -> complex:
    """r = sum_n a_n B_n(sigma); constant in x in the scalar stationary case."""
    return sum(
        op.value(n) * bell_standard(n).evaluate(sigma) for n in range(op.order + 1)
    )


def miura_r_derivative(op: OperatorCoeffs, sigma: Jet) -> complex:
    """d/dx of miura_r by the chain rule; needs one more sigma order and
    coefficient first derivatives.  Vanishes for genuine eigenfunction data."""
    total = 0j
    for n in range(op.order + 1):
        bn = bell_standard(n)
        total += op.derivative(n) * bn.evaluate(sigma)
        total += op.value(n) * bn.total_derivative().evaluate(sigma)
    return total


def a0_from_invariant(op: OperatorCoeffs, sigma: Jet, c) -> complex:
    """Potential a_0 = -sum_{n>=1} a_n B_n(sigma) + c (single-potential case)."""
    s = sum(
        op.value(n) * bell_standard(n).evaluate(sigma) for n in range(1, op.order + 1)
    )
    return c - s


def potential_from_sigma(order: int, sigma: Jet, mu, w=0.0) -> complex:
    """Solve the scalar Miura link for the potential u.

    order 2:  u = s' + s^2 + mu
    order 3:  u = (mu - s'' - 3 s s' - s^3 - w) / s
    """
    if order == 2:
        if sigma.order < 1:
            raise OrderTooLowError("order 2 needs sigma' in the jet")
        return sigma[1] + sigma[0] ** 2 + mu
    if order == 3:
        if sigma.order < 2:
            raise OrderTooLowError("order 3 needs sigma'' in the jet")
        if sigma[0] == 0:
            raise DivisionByZeroSigmaError("sigma = 0 at the point")
        s0, s1, s2 = sigma[0], sigma[1], sigma[2]
        return (mu - s2 - 3 * s0 * s1 - s0 ** 3 - w) / s0
    raise ValueError("order must be 2 or 3")


def chain_residual_n2(sig_i: Jet, sig_next: Jet, mu_i, mu_next) -> complex:
    """Residual of the second-order dressing chain equation

        s_{i+1}' + s_{i+1}^2 + mu_{i+1} = -s_i' + s_i^2 + mu_i
    """
    if sig_i.order < 1 or sig_next.order < 1:
        raise OrderTooLowError("chain residual needs first derivatives")
    lhs = sig_next[1] + sig_next[0] ** 2 + mu_next
    rhs = -sig_i[1] + sig_i[0] ** 2 + mu_i
    return lhs - rhs


def chain_residual_n3(sig_i: Jet, sig_next: Jet, mu_i, mu_next) -> complex:
    """Residual of the third-order chain equation (w = 0 reduction)

        (s_{i+1}'' + 3 s_{i+1} s_{i+1}' + s_{i+1}^3 - mu_{i+1}) s_i
          = (s_i'' + 3 s_i s_i' + s_i^3 - mu_i) s_{i+1}
            + 3 s_i' s_i s_{i+1}
    """
    if sig_i.order < 2 or sig_next.order < 2:
        raise OrderTooLowError("chain residual needs second derivatives")

    def third_form(s, mu):
        return s[2] + 3 * s[0] * s[1] + s[0] ** 3 - mu

    lhs = third_form(sig_next, mu_next) * sig_i[0]
    rhs = third_form(sig_i, mu_i) * sig_next[0] + 3 * sig_i[1] * sig_i[0] * sig_next[0]
    return lhs - rhs


def covariance_residual_n2(psi: Jet, sigma: Jet, u: Jet, mu_psi) -> complex:
    """Stationary residual of the transformed data for L = -D^2 + u.

    With psi1 = psi' - sigma psi and u1 = u - 2 sigma', returns
    -psi1'' + u1 psi1 - mu_psi psi1 computed from closed-form jets
    (psi needs order 3, sigma order 2).
    """
    if psi.order < 3:
        raise OrderTooLowError("psi jet needs order 3")
    if sigma.order < 2:
        raise OrderTooLowError("sigma jet needs order 2")
    psi1 = psi[1] - sigma[0] * psi[0]
    psi1_dd = psi[3] - sigma[2] * psi[0] - 2 * sigma[1] * psi[1] - sigma[0] * psi[2]
    u1 = u[0] - 2 * sigma[1]
    return -psi1_dd + u1 * psi1 - mu_psi * psi1
