"""Fast cross-module invariant suite behind the `selftest` and
`symmetry --check` subcommands.

Each check returns (name, value, tolerance); a check passes when
value <= tolerance.  Everything is deterministic (fixed seeds) and cheap
enough to run in a couple of seconds.
"""

from __future__ import annotations

import numpy as np

from . import bell, chain, darboux, lattice_zs, symmetry, zs
from .closedform import exp_jet, soliton_partner_jet, tanh_sigma_jet
from .diffpoly import DiffPoly, Jet


def _rand_poly(rng, max_order=2, max_terms=3):
    terms = {}
    for _ in range(rng.integers(1, max_terms + 1)):
        exps = tuple(int(e) for e in rng.integers(0, 3, size=max_order + 1))
        terms[exps] = int(rng.integers(-4, 5))
    return DiffPoly(terms)


def diffpoly_checks(rng):
    out = []
    worst = 0
    for _ in range(20):
        p, q, r = (_rand_poly(rng) for _ in range(3))
        leib = (p * q).total_derivative() - (p.total_derivative() * q + p * q.total_derivative())
        assoc = (p * q) * r - p * (q * r)
        dist = p * (q + r) - (p * q + p * r)
        worst = max(worst, len(leib.terms), len(assoc.terms), len(dist.terms))
    out.append(("diffpoly Leibniz/ring axioms (exact)", worst, 0))
    # D vs finite differences of the evaluation along tanh jets
    p = DiffPoly.sigma(0) ** 2 * DiffPoly.sigma(1) + DiffPoly.sigma(2)
    dp = p.total_derivative()
    h = 1e-5
    err = 0.0
    for x in (0.4, 1.1):
        fd = (p.evaluate(tanh_sigma_jet(x + h, 3)) - p.evaluate(tanh_sigma_jet(x - h, 3))) / (2 * h)
        ex = dp.evaluate(tanh_sigma_jet(x, 3))
        err = max(err, abs(fd - ex) / max(1.0, abs(ex)))
    out.append(("diffpoly D vs central differences", err, 1e-6))
    return out


def bell_checks(rng):
    out = []
    mism = sum(
        bell.bell_generalized_recurrence(n, k) != bell.bell_generalized_explicit(n, k)
        for n in range(7)
        for k in range(n + 1)
    )
    out.append(("bell recurrence == explicit, n <= 6 (exact)", mism, 0))
    err = 0.0
    for x in (0.3, 1.0, 2.5):
        jet = tanh_sigma_jet(x, 5)
        for n in range(6):
            val = bell.bell_standard(n).evaluate(jet)
            ref = np.tanh(x) if n % 2 else 1.0
            err = max(err, abs(val - ref) / max(abs(ref), 1e-30))
    out.append(("bell numeric oracle (cosh seed)", err, 1e-9))
    return out


def darboux_checks(rng):
    out = []
    s0, s1 = DiffPoly.sigma(0), DiffPoly.sigma(1)
    b22 = bell.bell_generalized_recurrence(2, 2)
    b21 = bell.bell_generalized_recurrence(2, 1)
    a0_shift = (-1) * b22 + s0 * bell.bell_generalized_recurrence(1, 1)
    ident_a0 = a0_shift + 2 * s1
    ident_a1 = (-1) * b21 + s0 * DiffPoly.constant(1)
    out.append(("darboux a0[1]=u-2s', a1[1]=0 (exact polynomials)",
                len(ident_a0.terms) + len(ident_a1.terms), 0))
    k, lam = 1.0, 0.7
    worst_cov = worst_miu = 0.0
    for x in np.linspace(-5, 5, 41):
        sig = tanh_sigma_jet(x, 3, k=k)
        psi = exp_jet(lam, x, 3)
        worst_cov = max(worst_cov, abs(darboux.covariance_residual_n2(
            psi, sig, Jet([0.0]), -lam ** 2)))
        op = darboux.OperatorCoeffs([Jet([0.0, 0.0]), Jet([0.0, 0.0]), Jet([-1.0, 0.0])])
        worst_miu = max(worst_miu, abs(darboux.miura_r_derivative(op, sig)))
    out.append(("darboux covariance residual (cosh seed)", worst_cov, 1e-8))
    out.append(("darboux miura r constant along x", worst_miu, 1e-9))
    x = 1.0
    res = darboux.chain_residual_n2(tanh_sigma_jet(x, 1), soliton_partner_jet(x, 1), -1.0, 0.0)
    out.append(("darboux one-soliton chain pair residual", abs(res), 1e-12))
    return out


def chain_checks(rng):
    out = []
    worst_sum = worst_dA = 0.0
    for _ in range(20):
        st = chain.ChainState(rng.normal(size=3) * 2, rng.normal(size=3))
        r = chain.chain_rhs(st)
        worst_sum = max(worst_sum, abs(r.sum()) / max(1.0, np.abs(r).max()))
        g = chain.g_vars(st.sigma)
        mu = st.mu
        grad = np.array([
            g[1] * (g[0] + g[2]) + mu[1] + mu[2],
            g[2] * (g[0] + g[1]) + mu[0] + mu[2],
            g[0] * (g[1] + g[2]) + mu[0] + mu[1],
        ])
        worst_dA = max(worst_dA, abs(grad @ r) / max(1.0, np.abs(grad @ np.abs(r)).max()))
    out.append(("chain rhs components sum to zero", worst_sum, 1e-14))
    out.append(("chain dA/dx vanishes along the flow", worst_dA, 1e-12))
    st = chain.ChainState([1.0, 2.0, 3.0], [0.1, 0.2, 0.3])
    shifted = chain.ChainState(st.sigma, st.mu + 5.0)
    # the shifted mu entries are rounded before subtraction, so the
    # cancellation is exact only to representation accuracy
    out.append(("chain mu-shift invariance (machine precision)",
                float(np.abs(chain.chain_rhs(st) - chain.chain_rhs(shifted)).max()), 1e-14))
    traj = chain.integrate_chain(st, 1e-3, 2000)
    out.append(("chain c drift, short run", float(np.abs(traj.cs - traj.cs[0]).max()), 1e-12))
    out.append(("chain A drift, short run", float(np.abs(traj.As - traj.As[0]).max()), 1e-8))
    return out


def symmetry_checks(rng):
    out = []
    worst_rt = worst_proj = worst_eq = worst_ad = 0.0
    for _ in range(30):
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        rt = symmetry.from_irreducible(symmetry.to_irreducible(v)) - v
        worst_rt = max(worst_rt, float(np.abs(rt).max()))
        total = sum(symmetry.projector(j, v) for j in range(3))
        worst_proj = max(worst_proj, float(np.abs(total - v).max()))
        for j in range(3):
            pj = symmetry.projector(j, v)
            worst_proj = max(worst_proj, float(np.abs(symmetry.projector(j, pj) - pj).max()))
            for l in range(3):
                if l != j:
                    worst_proj = max(worst_proj, float(np.abs(
                        symmetry.projector(l, pj)).max()))
        s = symmetry.to_irreducible(v)
        sh = symmetry.to_irreducible(symmetry.cyclic_shift(v))
        a = symmetry.characters(3)
        worst_eq = max(worst_eq, float(np.abs(sh - a * s).max()))
    out.append(("symmetry roundtrip to/from irreducible", worst_rt, 1e-14))
    out.append(("symmetry projector idempotent/complete/orthogonal", worst_proj, 1e-14))
    out.append(("symmetry shift equivariance T s_j = a_j s_j", worst_eq, 1e-14))
    for _ in range(100):
        sig = rng.normal(size=3) * 2
        mu = rng.normal(size=3)
        st = chain.ChainState(sig, mu)
        worst_ad = max(worst_ad, float(np.abs(
            symmetry.ad_H(sig, mu) - chain.chain_rhs(st)).max()))
    out.append(("symmetry ad_H equals chain rhs (100 states)", worst_ad, 1e-13))
    sig = np.array([1.0, 2.0, 3.0])
    mu = np.array([0.1, 0.2, 0.3])
    lhs = symmetry.to_irreducible(chain.chain_rhs(chain.ChainState(sig, mu)))
    rhs = symmetry.ss_rhs(symmetry.to_irreducible(sig), mu)
    out.append(("symmetry ss change-of-variables consistency",
                float(np.abs(lhs - rhs).max()), 1e-12))
    st = chain.ChainState(sig, mu)
    c0, A0 = chain.casimir_c(st), chain.invariant_A(st)
    st2 = chain.ChainState(symmetry.cyclic_shift(sig).real, symmetry.cyclic_shift(mu).real)
    out.append(("symmetry c,A invariant under joint shift",
                max(abs(chain.casimir_c(st2) - c0), abs(chain.invariant_A(st2) - A0)), 1e-13))
    grad_h = sig ** 2 + mu
    out.append(("symmetry ad_H annihilates H",
                abs(symmetry.ad_H_scalar(grad_h, sig, mu)), 1e-13))
    return out


def zs_checks(rng):
    out = []
    worst = 0.0
    for _ in range(20):
        eta = rng.normal(size=3) + 1j * rng.normal(size=3)
        u = rng.normal(size=2) + 1j * rng.normal(size=2)
        u1n, u2n = zs.ns_dt(u, eta)
        umat = u[0] * zs.SIGMA1 + u[1] * zs.SIGMA2
        smat = zs.pauli_matrix(eta)
        alt = zs.operator_dt(umat, smat)
        comp = zs.pauli_components(alt)
        worst = max(worst, abs(comp[0] - u1n), abs(comp[1] - u2n), abs(comp[2]))
    out.append(("zs ns_dt equals operator_dt (exact Pauli algebra)", worst, 1e-13))
    worst = 0.0
    for _ in range(20):
        jet = zs.EtaJet(*(rng.normal(size=4)), m=4.0 + rng.random())
        u = zs.ns_potential_from_eta(jet)
        r = zs.etas_residual(jet, 0.0, u)
        worst = max(worst, abs(r[0]), abs(r[1]))
    out.append(("zs potential extraction inverts the first two equations", worst, 1e-12))
    e2, m = 0.8, 2.0
    e3 = zs.eta3(0.0, e2, m, real_mode=True)
    sig = e2 * zs.SIGMA2 + e3 * zs.SIGMA3
    u_rec, kdim = zs.solve_u_from_sigma(sig, zs.SIGMA3)
    jet = zs.EtaJet(0.0, e2, 0.0, 0.0, m)
    u1, u2 = zs.ns_potential_from_eta(jet)
    ref = u1 * zs.SIGMA1 + u2 * zs.SIGMA2
    out.append(("zs solve_u_from_sigma recovers the eta parametrization",
                float(np.abs(u_rec - ref).max()), 1e-10))
    traj, rep = zs.integrate_closure(0.5, 0.0, -2.0, -1.0, 1e-3, 400)
    out.append(("zs closure dual-route discrepancy, short run",
                rep["max_route_discrepancy"], 1e-6))
    out.append(("zs closure xy = c first integral", rep["xy_drift"], 1e-8))
    out.append(("zs closure det constraint drift", rep["det_drift"], 1e-8))
    B = zs.lie_B_matrix([0, 0, 1])
    ref = np.zeros((3, 3), dtype=complex)
    ref[0, 1], ref[1, 0] = 2j, -2j
    out.append(("zs lie_B structure entries", float(np.abs(B - ref).max()), 0))
    nu = 0.4
    xi = np.array([np.cos(0.6), -np.sin(0.6), 0.0])
    dxi = 2 * nu * np.array([-np.sin(0.6) * -1, -np.cos(0.6), 0.0])
    dxi = np.array([2 * nu * xi[1], -2 * nu * xi[0], 0.0])
    eta = zs.eta_from_xi(xi, dxi)
    out.append(("zs eta_from_xi recovers a Cartan rotation",
                float(np.abs(eta - np.array([0, 0, 1j * nu])).max()), 1e-12))
    return out


def lattice_checks(rng):
    out = []
    J = np.diag([1.0, -1.0]).astype(complex)
    mu = np.diag([0.3, 1.7]).astype(complex)
    fr = lattice_zs.frame_random(24, rng)
    U = lattice_zs.lattice_potential_U(fr, mu, J)
    out.append(("lattice spectral reconstruction on a random frame",
                lattice_zs.spectral_residual(fr, U, mu, J), 1e-12))
    out.append(("lattice shifted-sigma identity",
                lattice_zs.shifted_sigma_residual(fr), 1e-12))
    fr2 = lattice_zs.frame_period2_random(16, rng)
    sig2 = lattice_zs.sigma_plus(fr2)
    U2 = lattice_zs.lattice_potential_U(fr2, mu, J)
    worst_mt = max(
        float(np.abs(lattice_zs.miura_residual(U2, sig2, J, n)).max()) for n in U2
    )
    out.append(("lattice Miura link on period-2 frames", worst_mt, 1e-12))
    _, diff = lattice_zs.lattice_dt(U2, sig2, J)
    out.append(("lattice two Darboux forms agree on period-2 frames", diff, 1e-12))
    res = lattice_zs.s_chain_residuals(
        lattice_zs.frame_period2_diag(16, 1.5, 0.7), mu, J)
    out.append(("lattice s-identities on the diagonal period-2 family",
                max(res.values()), 1e-12))
    g = np.diag([2.0, 0.5]).astype(complex)  # commutes with diagonal mu
    frg = lattice_zs.gauge_transform(fr, g)
    Ug = lattice_zs.lattice_potential_U(frg, mu, J)
    worst_g = max(float(np.abs(Ug[n] - U[n]).max()) for n in U)
    out.append(("lattice gauge invariance", worst_g, 1e-10))
    return out


SECTIONS = {
    "diffpoly": diffpoly_checks,
    "bell": bell_checks,
    "darboux": darboux_checks,
    "chain": chain_checks,
    "symmetry": symmetry_checks,
    "zs": zs_checks,
    "lattice": lattice_checks,
}


def run_selftest(sections=None, seed: int = 0):
    """Run the invariant suite; returns a list of (name, value, tol, ok)."""
    rng = np.random.default_rng(seed)
    records = []
    for name, fn in SECTIONS.items():
        if sections and name not in sections:
            continue
        for check, value, tol in fn(rng):
            records.append((check, float(value), float(tol), float(value) <= float(tol)))
    return records
