"""Darboux transform, Miura links, and chain residuals (scalar case)."""

import numpy as np
import pytest

from dresschain.closedform import (
    cosh_jet,
    exp_jet,
    log_derivative_jet,
    soliton_partner_jet,
    tanh_sigma_jet,
)
from dresschain.darboux import (
    OperatorCoeffs,
    a0_from_invariant,
    chain_residual_n2,
    chain_residual_n3,
    covariance_residual_n2,
    dt_coefficients,
    dt_eigenfunction,
    dt_eigenfunction_jet,
    miura_r,
    miura_r_derivative,
    potential_from_sigma,
    stationary_residual,
)
from dresschain.diffpoly import Jet
from dresschain.errors import DivisionByZeroSigmaError, OrderTooLowError


def schrodinger_op(u=0.0, du=0.0):
    return OperatorCoeffs([Jet([u, du]), Jet([0.0, 0.0]), Jet([-1.0, 0.0])])


def test_dt_eigenfunction_examples():
    # the seed is annihilated: psi = phi, sigma = phi'/phi
    phi = cosh_jet(0.8, 2)
    sig = log_derivative_jet(phi)
    assert abs(dt_eigenfunction(phi, sig)) < 1e-14
    assert dt_eigenfunction(Jet([1, 2]), Jet([3, 0])) == -1
    # psi = exp(kx) at x=0 against the tanh seed at 0
    k = 1.7
    assert dt_eigenfunction(Jet([1, k]), Jet([0, 1])) == pytest.approx(k)
    with pytest.raises(OrderTooLowError):
        dt_eigenfunction(Jet([1.0]), Jet([0.0]))


def test_dt_coefficients_second_order():
    x, k = 0.7, 1.3
    sig = tanh_sigma_jet(x, 3, k=k)
    u = 0.4
    op1 = dt_coefficients(schrodinger_op(u=u), sig)
    assert op1.value(0) == pytest.approx(u - 2 * sig[1])
    assert op1.value(1) == 0
    assert op1.value(2) == -1


def test_dt_coefficients_top_unchanged_and_zero_sigma():
    sig = Jet([0.0, 0.0, 0.0, 0.0])
    op = OperatorCoeffs([Jet([2.0, 0.0]), Jet([5.0, 0.0]), Jet([0.0, 0.0]),
                         Jet([1.0, 0.0])])
    op1 = dt_coefficients(op, sig)
    # constant coefficients with sigma = 0: the operator is unchanged
    for n in range(4):
        assert op1.value(n) == op.value(n)


def test_dt_coefficients_third_order_shift():
    # a3 = +1 turns the potential shift into +3 sigma'
    x = 0.4
    sig = tanh_sigma_jet(x, 3)
    zero = Jet([0.0, 0.0])
    op = OperatorCoeffs([zero, Jet([2.5, 0.0]), zero, Jet([1.0, 0.0])])
    op1 = dt_coefficients(op, sig)
    assert op1.value(2) == pytest.approx(0.0, abs=1e-14)
    assert op1.value(1) == pytest.approx(2.5 + 3 * sig[1])


def test_miura_r_examples():
    k = 0.9
    assert miura_r(schrodinger_op(), Jet([k, 0, 0])) == pytest.approx(-k ** 2)
    zero_op = OperatorCoeffs([Jet([0.0, 0.0]), Jet([0.0, 0.0]), Jet([1e-30, 0.0])])
    assert abs(miura_r(zero_op, Jet([1.0, 2.0, 3.0]))) < 1e-25
    # u = 0, sigma = tanh: r = -(sech^2 + tanh^2) = -1 at every x
    for x in (-2.0, 0.3, 1.5):
        assert miura_r(schrodinger_op(), tanh_sigma_jet(x, 2)) == pytest.approx(-1.0)


def test_miura_r_constant_along_eigen_sigma():
    for x in np.linspace(-3, 3, 13):
        d = miura_r_derivative(schrodinger_op(), tanh_sigma_jet(x, 3))
        assert abs(d) <= 1e-9


def test_potential_from_sigma():
    k, mu = 1.2, 0.7
    assert potential_from_sigma(2, Jet([k, 0]), mu) == pytest.approx(k ** 2 + mu)
    for x in (0.2, 1.1):
        assert potential_from_sigma(2, tanh_sigma_jet(x, 1), -1.0) == pytest.approx(0.0, abs=1e-14)
    assert potential_from_sigma(3, Jet([1, 0, 0]), 2.0) == pytest.approx(1.0)
    with pytest.raises(DivisionByZeroSigmaError):
        potential_from_sigma(3, Jet([0, 0, 0]), 1.0)


def test_invariant_route_matches_potential():
    # a0 from the chain constant c = r agrees with the order-2 Miura link
    sig = Jet([2.0, 3.0])
    op = schrodinger_op(u=5.5)
    r = miura_r(op, sig)
    assert a0_from_invariant(op, sig, r) == potential_from_sigma(2, sig, r)


def test_chain_residual_n2_examples():
    assert chain_residual_n2(Jet([0, 0]), Jet([0, 0]), 0.3, 0.3) == 0
    # balanced constants: q^2 + mu2 = p^2 + mu1
    p, q, mu1 = 1.5, 0.5, 0.2
    mu2 = p ** 2 + mu1 - q ** 2
    assert chain_residual_n2(Jet([p, 0]), Jet([q, 0]), mu1, mu2) == 0
    # one-soliton pair phi0 = cosh x, phi1 = tanh x
    x = 1.0
    res = chain_residual_n2(tanh_sigma_jet(x, 1), soliton_partner_jet(x, 1), -1.0, 0.0)
    assert abs(res) <= 1e-12


def test_chain_residual_n3_examples():
    z = Jet([0, 0, 0])
    assert chain_residual_n3(z, z, 0.0, 0.0) == 0
    p, q, mu1, mu2 = 1.3, -0.4, 0.6, 2.0
    res = chain_residual_n3(Jet([p, 0, 0]), Jet([q, 0, 0]), mu1, mu2)
    assert res == pytest.approx((q ** 3 - mu2) * p - (p ** 3 - mu1) * q)
    assert chain_residual_n3(Jet([1, 0, 0]), Jet([1, 0, 0]), 0.8, 0.8) == 0


def test_covariance_across_interval():
    # u = 0, seed cosh(kx), test eigenfunction exp(lam x)
    k, lam = 1.0, 0.7
    for x in np.linspace(-5, 5, 200):
        res = covariance_residual_n2(
            exp_jet(lam, x, 3), tanh_sigma_jet(x, 2, k=k), Jet([0.0]), -lam ** 2)
        assert abs(res) <= 1e-8


def test_transformed_eigenfunction_solves_transformed_operator():
    # third-order covariance with the exponential seed: jets end to end
    k, lam = 0.6, 1.1
    sig = Jet([k, 0.0, 0.0, 0.0])
    zero = Jet([0.0, 0.0])
    op = OperatorCoeffs([zero, zero, zero, Jet([1.0, 0.0])])
    op1 = dt_coefficients(op, sig)
    for x in (-1.0, 0.0, 2.0):
        psi1 = dt_eigenfunction_jet(exp_jet(lam, x, 4), sig)
        assert abs(stationary_residual(op1, psi1, lam ** 3)) <= 1e-10
