"""Closed chain: right-hand side, integrals, g-reduction, t-chain."""

import numpy as np
import pytest

from dresschain.chain import (
    ChainState,
    TChainField,
    build_periodic_field,
    casimir_c,
    cfl_dt,
    chain_rhs,
    find_period,
    fixed_point_state,
    g2_branches,
    g_rhs,
    g_vars,
    integrate_chain,
    integrate_reduced,
    integrate_tchain,
    invariant_A,
    quartic_Q,
    reduced_rhs,
    tchain_F,
    tchain_rhs,
    tchain_speeds,
)
from dresschain.errors import (
    CFLViolationError,
    ComplexBranchError,
    EvenNError,
    NonFiniteError,
    UnsupportedNError,
)

MU = np.array([0.1, 0.2, 0.3])


def test_rhs_examples():
    st = ChainState([1, 2, 3], [0, 0, 0])
    assert np.allclose(chain_rhs(st), [5, -8, 3])
    st = ChainState([1.3, 1.3, 1.3], [0.7, 0.7, 0.7])
    assert np.allclose(chain_rhs(st), 0.0)
    # only mu differences matter
    st7 = ChainState([1, 2, 3], [7, 7, 7])
    assert np.allclose(chain_rhs(st7), [5, -8, 3])


def test_rhs_sums_to_zero_and_odd_n():
    rng = np.random.default_rng(3)
    for _ in range(25):
        st = ChainState(rng.normal(size=5) * 2, rng.normal(size=5))
        r = chain_rhs(st)
        assert abs(r.sum()) <= 1e-14 * max(1.0, np.abs(r).max())
    with pytest.raises(EvenNError):
        ChainState([1, 2], [0, 0])


def test_casimir_and_A_examples():
    assert casimir_c(ChainState([1, 2, 3], MU)) == 6
    assert casimir_c(ChainState([0, 0, 0], MU)) == 0
    assert casimir_c(ChainState([2, 2, 2], MU)) == 6
    st = ChainState([1, 2, 3], [0, 0, 0])
    assert np.allclose(g_vars(st.sigma), [3, 5, 4])
    assert invariant_A(st) == 60
    assert invariant_A(ChainState([0, 0, 0], [0, 0, 0])) == 0
    assert invariant_A(ChainState([1, 1, 1], [1, 1, 1])) == 14
    with pytest.raises(UnsupportedNError):
        invariant_A(ChainState([1, 2, 3, 4, 5], np.zeros(5)))


def test_A_is_first_integral_analytically():
    rng = np.random.default_rng(5)
    for _ in range(30):
        st = ChainState(rng.normal(size=3) * 2, rng.normal(size=3))
        g = g_vars(st.sigma)
        mu = st.mu
        grad = np.array([
            g[1] * (g[0] + g[2]) + mu[1] + mu[2],
            g[2] * (g[0] + g[1]) + mu[0] + mu[2],
            g[0] * (g[1] + g[2]) + mu[0] + mu[1],
        ])
        scale = max(1.0, np.abs(grad).max() * np.abs(chain_rhs(st)).max())
        assert abs(grad @ chain_rhs(st)) <= 1e-12 * scale


def test_integrate_fixed_point_and_conservation():
    fp = ChainState([1.4, 1.4, 1.4], [0.2, 0.2, 0.2])
    traj = integrate_chain(fp, 1e-2, 200)
    assert np.abs(traj.sigmas - 1.4).max() <= 1e-15
    st = ChainState([1, 2, 3], MU)
    traj = integrate_chain(st, 1e-3, 2000, record_every=5)
    assert np.abs(traj.cs - 6.0).max() <= 1e-12
    assert np.abs(traj.As - traj.As[0]).max() <= 1e-8


def test_integrate_nonfinite_reports_last_valid():
    st = ChainState([1e160, 0.0, 0.0], np.zeros(3))
    with pytest.raises(NonFiniteError) as err:
        integrate_chain(st, 1.0, 10)
    assert err.value.last_x is not None
    assert err.value.trajectory is not None


def test_g_rhs_examples():
    dg1, dg2 = g_rhs(3.0, 5.0, 6.0, np.zeros(3))
    assert dg1 == -3 and dg2 == -5
    dg1, dg2 = g_rhs(0.0, 0.0, 6.0, MU)
    assert dg1 == pytest.approx(MU[0] - MU[1])
    assert dg2 == pytest.approx(MU[1] - MU[2])
    # consistency with the sigma-space flow
    st = ChainState([1, 2, 3], MU)
    r = chain_rhs(st)
    g = g_vars(st.sigma)
    dg1, dg2 = g_rhs(g[0], g[1], casimir_c(st), MU)
    assert dg1 == pytest.approx(r[0] + r[1])
    assert dg2 == pytest.approx(r[1] + r[2])


def test_g2_branches_examples():
    lo, hi = g2_branches(3.0, 6.0, 60.0, np.zeros(3))
    assert (lo, hi) == (4.0, 5.0)
    # tangency: A tuned so the discriminant vanishes -> double root
    c, mu = 6.0, np.zeros(3)
    g1 = 3.0
    beta = 2 * c * g1 - g1 ** 2
    A_double = beta ** 2 / (4 * g1)
    lo, hi = g2_branches(g1, c, A_double, mu)
    assert lo == pytest.approx(hi)
    with pytest.raises(ComplexBranchError):
        g2_branches(g1, c, A_double + 1.0, mu)


def test_reduced_rhs_examples():
    mu0 = np.zeros(3)
    assert reduced_rhs(3.0, "high", 6.0, 60.0, mu0) == pytest.approx(-3.0)
    assert reduced_rhs(3.0, "low", 6.0, 60.0, mu0) == pytest.approx(3.0)
    g1, c = 3.0, 6.0
    A_double = (2 * c * g1 - g1 ** 2) ** 2 / (4 * g1)
    assert reduced_rhs(g1, "low", c, A_double, mu0) == pytest.approx(
        reduced_rhs(g1, "high", c, A_double, mu0))


def test_reduced_integration_tracks_sigma_space():
    st = ChainState([1, 2, 3], MU)
    c, A = casimir_c(st), invariant_A(st)
    h, steps = 1e-3, 5000
    traj = integrate_chain(st, h, steps)
    ref_g1 = traj.sigmas[:, 0] + traj.sigmas[:, 1]
    red = integrate_reduced(ref_g1[0], "high", c, A, MU, h, steps)
    assert np.abs(red["g1"] - ref_g1).max() <= 1e-6
    assert red["turning_points"].size >= 2  # branch flips were exercised
    # velocity stays on the spectral curve
    q = quartic_Q(red["g1"], c, A, MU)
    assert np.abs(red["v"] ** 2 - q).max() <= 1e-7 * max(1.0, np.abs(q).max())


def make_field(grid=64):
    mu = np.array([0.1, 0.100002, 0.100004])
    base = fixed_point_state(mu, 4.0)
    st = ChainState(base.sigma + 0.003 * np.array([1.0, -0.5, -0.5]), mu)
    return build_periodic_field(st, grid)


def test_tchain_speeds_and_F():
    field = TChainField(np.array([[1.0], [2.0], [3.0]]), 1.0, np.zeros(3))
    assert tchain_F(field)[0] == pytest.approx(36.0)
    lam = tchain_speeds(field)
    assert lam[2, 0] == pytest.approx(-18.0)
    # F equals c^2 pointwise as an algebraic identity
    fld = make_field(32)
    c = fld.values.sum(axis=0)
    assert np.abs(tchain_F(fld) - c ** 2).max() <= 1e-12


def test_tchain_rhs_zero_for_constant_field():
    field = TChainField(np.tile([[1.0], [2.0], [3.0]], (1, 16)), 2.0, MU)
    assert np.abs(tchain_rhs(field)).max() == 0.0


def test_tchain_cfl_guard_and_zero_field():
    field = TChainField(np.zeros((3, 16)), 1.0, MU)
    res = integrate_tchain(field, 1e-3, 10)
    assert np.abs(res["field"].values).max() == 0.0
    fld = make_field(32)
    with pytest.raises(CFLViolationError):
        integrate_tchain(fld, 10 * cfl_dt(fld), 5)


def test_tchain_mean_conservation_short():
    fld = make_field(256)
    dt = cfl_dt(fld, gap=2e-3)
    res = integrate_tchain(fld, dt, int(0.05 / dt))
    assert np.abs(res["c_mean"] - res["c_mean"][0]).max() <= 1e-10
    assert res["max_F_minus_c2"] <= 1e-10


def test_find_period_small_oscillation():
    mu = np.array([0.1, 0.100002, 0.100004])
    base = fixed_point_state(mu, 4.0)
    st = ChainState(base.sigma + 1e-3 * np.array([1.0, -0.5, -0.5]), mu)
    X = find_period(st, h=1e-4, xmax=1.2)
    # linearized frequency at the near-symmetric point is 2 sqrt(3) sbar
    sbar = base.sigma.mean()
    assert X == pytest.approx(2 * np.pi / (2 * np.sqrt(3) * sbar), rel=1e-3)
