"""2x2 Zakharov-Shabat machinery in the Pauli basis and the closed
one-level chain reduction.

sigma = eta1 s1 + eta2 s2 + eta3 s3 and u = u1 s1 + u2 s2 live in sl(2,C);
J = s3.  The stationary equations for the eta components are

    eta1' + 2 eta1 eta3 =  2i eta3 u2
    eta2' + 2 eta2 eta3 = -2i eta3 u1
    eta3' - 2 eta1^2 - 2 eta2^2 = 2i eta2 u1 - 2i eta1 u2

and one Darboux step maps (u1, u2) -> (u1 - 2i eta2, u2 + 2i eta1), which
is u + [J, sigma] componentwise.

The one-level closure eta^{(next)} = alpha * eta (componentwise, with
alpha1 = alpha2 = -alpha3) closes these into ODEs; with x = eta1, y = eta2,
z = eta3 they read x' = K1 x z, y' = K2 y z, z' = -K1 x^2 - K2 y^2 with
K_s = 2 alpha3 (1 + alpha_s) / (alpha3 - alpha_s).  The determinant
constraint det sigma = mu1 mu2 fixes x^2 + y^2 + z^2 = -mu1 mu2, and
eliminating y = c/x and z gives the scalar form

    dx/dt = -(1 - alpha3) sqrt(-mu1 mu2 x^2 - x^4 - c^2).
"""

from __future__ import annotations

import cmath

import numpy as np

from .errors import (
    NegativeRadicandError,
    NotInRangeError,
    SingularBError,
    ZeroEta3Error,
)

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
ID2 = np.eye(2, dtype=complex)
_PAULI = (SIGMA1, SIGMA2, SIGMA3)


def pauli_matrix(eta) -> np.ndarray:
    """sigma = sum_i eta_i s_i."""
    e = np.asarray(eta, dtype=complex)
    return e[0] * SIGMA1 + e[1] * SIGMA2 + e[2] * SIGMA3


def pauli_components(m) -> np.ndarray:
    """Coefficients of a traceless 2x2 matrix in the Pauli basis."""
    m = np.asarray(m, dtype=complex)
    return np.array([np.trace(m @ s) / 2.0 for s in _PAULI])


def commutator(a, b) -> np.ndarray:
    return a @ b - b @ a


def eta3(eta1, eta2, m, real_mode: bool = False):
    """Principal root of eta3^2 = m - eta1^2 - eta2^2 (m = mu1 mu2).

    In real mode a negative radicand raises NegativeRadicandError.
    """
    rad = m - eta1 ** 2 - eta2 ** 2
    if real_mode:
        r = complex(rad)
        if abs(r.imag) > 0 or r.real < 0:
            raise NegativeRadicandError("radicand %s < 0" % rad)
        return float(np.sqrt(r.real))
    return cmath.sqrt(rad)


class EtaJet:
    """Values and first derivatives of (eta1, eta2) plus the product mu1 mu2."""

    def __init__(self, eta1, eta2, deta1, deta2, m):
        self.eta1 = complex(eta1)
        self.eta2 = complex(eta2)
        self.deta1 = complex(deta1)
        self.deta2 = complex(deta2)
        self.m = complex(m)

    def eta3(self, real_mode=False):
        return eta3(self.eta1, self.eta2, self.m, real_mode=real_mode)


def ns_potential_from_eta(jet: EtaJet):
    """u1 = -(eta2'/eta3 + 2 eta2) / 2i,  u2 = (eta1'/eta3 + 2 eta1) / 2i."""
    e3 = jet.eta3()
    if e3 == 0:
        raise ZeroEta3Error("eta3 = 0, potential extraction undefined")
    u1 = -(jet.deta2 / e3 + 2 * jet.eta2) / 2j
    u2 = (jet.deta1 / e3 + 2 * jet.eta1) / 2j
    return u1, u2


def etas_residual(jet: EtaJet, deta3, u) -> np.ndarray:
    """Left minus right of the three stationary eta equations."""
    u1, u2 = u
    e3 = jet.eta3()
    r1 = jet.deta1 + 2 * jet.eta1 * e3 - 2j * e3 * u2
    r2 = jet.deta2 + 2 * jet.eta2 * e3 + 2j * e3 * u1
    r3 = deta3 - 2 * jet.eta1 ** 2 - 2 * jet.eta2 ** 2 - (2j * jet.eta2 * u1 - 2j * jet.eta1 * u2)
    return np.array([r1, r2, r3])


def ns_dt(u, eta):
    """One Darboux step on the potential components."""
    u1, u2 = u
    return u1 - 2j * eta[1], u2 + 2j * eta[0]


def operator_dt(u_mat, sigma_mat, J=SIGMA3) -> np.ndarray:
    """Matrix form of the same step: u + [J, sigma]."""
    return np.asarray(u_mat, dtype=complex) + commutator(np.asarray(J, dtype=complex),
                                                         np.asarray(sigma_mat, dtype=complex))


def solve_u_from_sigma(sigma_mat, J, tol: float = 1e-10):
    """Solve [sigma, u] = [J sigma, sigma] for u (stationary case).

    Vectorizes ad_sigma on 2x2 matrices and returns the minimum-norm
    solution together with the kernel dimension of ad_sigma (u is only
    determined up to the centralizer of sigma).  Raises NotInRangeError
    when the right side has a component outside range(ad_sigma).
    """
    s = np.asarray(sigma_mat, dtype=complex)
    J = np.asarray(J, dtype=complex)
    rhs = commutator(J @ s, s)
    ad = np.kron(s, ID2) - np.kron(ID2, s.T)
    b = rhs.reshape(-1)
    u_vec, _, rank, sv = np.linalg.lstsq(ad, b, rcond=None)
    resid = np.linalg.norm(ad @ u_vec - b)
    scale = max(1.0, float(np.linalg.norm(b)))
    if resid > tol * scale:
        raise NotInRangeError("right side leaves range(ad_sigma): residual %g" % resid)
    return u_vec.reshape(2, 2), 4 - rank


_EPS3 = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    _EPS3[_i, _j, _k] = 1.0
    _EPS3[_i, _k, _j] = -1.0


def lie_B_matrix(xi) -> np.ndarray:
    """B[beta, alpha] = 2i eps_{gamma beta alpha} xi_gamma (sl(2) structure)."""
    xi = np.asarray(xi, dtype=complex)
    return 2j * np.einsum("g,gba->ba", xi, _EPS3)


def eta_from_xi(xi, dxi, tol: float = 1e-10) -> np.ndarray:
    """Solve D xi_alpha + 2i (xi x eta)_alpha = 0 for eta, least squares.

    The kernel of the map eta -> 2i xi x eta is the Cartan direction along
    xi; a component of D xi outside the range raises SingularBError.
    """
    xi = np.asarray(xi, dtype=complex)
    dxi = np.asarray(dxi, dtype=complex)
    K = lie_B_matrix(xi).T  # K eta = 2i xi x eta
    eta, _, _, _ = np.linalg.lstsq(K, -dxi, rcond=None)
    resid = np.linalg.norm(K @ eta + dxi)
    scale = max(1.0, float(np.linalg.norm(dxi)))
    if resid > tol * scale:
        raise SingularBError("D xi has a kernel-direction component: residual %g" % resid)
    return eta


def closure_rhs(x, c, m, alpha3):
    """dx/dt = -(1 - alpha3) sqrt(-m x^2 - x^4 - c^2)."""
    rad = -m * x ** 2 - x ** 4 - c ** 2
    if rad < 0:
        raise NegativeRadicandError("radicand %g < 0 at x=%g" % (rad, x))
    return -(1 - alpha3) * np.sqrt(rad)


def _closure_K(alpha_s, alpha3):
    if alpha_s == alpha3:
        raise ZeroDivisionError("alpha_s = alpha3 leaves the component equation void")
    return 2 * alpha3 * (1 + alpha_s) / (alpha3 - alpha_s)


def integrate_closure(x0, c, m, alpha3, dt, steps, constraint_sign: int = -1,
                      disc_tol: float = 1e-12):
    """Integrate the closed one-level chain two independent ways.

    Route A: the scalar quadrature form dx/dt = -(1-alpha3) sqrt(...).
    Route B: the component form with the nontrivial closure alpha1 =
    alpha2 = -alpha3 under the constraints y = c/x and eta3 from the
    determinant relation: dx/dt = K1 x z with z = s sqrt(S - x^2 - y^2).
    Both routes track the branch sign s through radicand zeros (at a
    turning point the constrained flow is stationary).

    constraint_sign selects S = -constraint_sign * m; the default -1
    keeps det sigma = -(x^2 + y^2 + z^2) equal to m = mu1 mu2 along the
    run.  Returns per-sample arrays plus a report with the max pointwise
    discrepancy between the two x-routes and the invariant drifts.
    """
    if x0 == 0:
        raise ZeroDivisionError("x0 = 0 cannot carry y = c/x")
    a1 = a2 = -alpha3
    K1 = _closure_K(a1, alpha3)
    K2 = _closure_K(a2, alpha3)
    S = constraint_sign * m
    z2 = S - x0 ** 2 - (c / x0) ** 2
    if z2 < -1e-12 * max(1.0, abs(S)):
        raise NegativeRadicandError("initial z^2 = %g < 0" % z2)

    def rk4_scalar(f, y, h):
        k1 = f(y)
        k2 = f(y + 0.5 * h * k1)
        k3 = f(y + 0.5 * h * k2)
        k4 = f(y + h * k3)
        return y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

    amp = abs(1 - alpha3)
    sign_a = -1.0  # initial direction: decreasing x, i.e. z < 0 in route B
    sign_b = -1.0

    def rhs_a(x):
        rad = -m * x ** 2 - x ** 4 - c ** 2
        return sign_a * amp * np.sqrt(max(rad, 0.0))

    def z_of(x, s):
        rad = S - x ** 2 - (c / x) ** 2
        return s * np.sqrt(max(rad, 0.0))

    def rhs_b(x):
        return K1 * x * z_of(x, sign_b)

    xa = float(x0)
    xb = float(x0)
    prev_rad_a = prev_rad_b = np.inf
    n = steps + 1
    out = {k: np.empty(n) for k in
           ("t", "x_quadrature", "x", "y", "z", "xy", "det",
            "u1_re", "u1_im", "u2_re", "u2_im")}
    disc = 0.0
    flips = 0
    for i in range(n):
        y = c / xb
        z = z_of(xb, sign_b)
        out["t"][i] = i * dt
        out["x_quadrature"][i] = xa
        out["x"][i], out["y"][i], out["z"][i] = xb, y, z
        out["xy"][i] = xb * y
        out["det"][i] = -(xb ** 2 + y ** 2 + z ** 2)
        # eta'/eta3 simplifies to K * eta, so the potentials are z-free:
        # u1 = -(K2 + 2) y / 2i,  u2 = (K1 + 2) x / 2i
        u1 = -(K2 + 2) * y / 2j
        u2 = (K1 + 2) * xb / 2j
        out["u1_re"][i], out["u1_im"][i] = u1.real, u1.imag
        out["u2_re"][i], out["u2_im"][i] = u2.real, u2.imag
        disc = max(disc, abs(xa - xb))
        if i == steps:
            break
        xa = rk4_scalar(rhs_a, xa, dt)
        rad_a = -m * xa ** 2 - xa ** 4 - c ** 2
        if rad_a < disc_tol <= prev_rad_a:
            sign_a = -sign_a
        prev_rad_a = rad_a
        xb = rk4_scalar(rhs_b, xb, dt)
        rad_b = S - xb ** 2 - (c / xb) ** 2
        if rad_b < disc_tol <= prev_rad_b:
            sign_b = -sign_b
            flips += 1
        prev_rad_b = rad_b
    report = {
        "max_route_discrepancy": float(disc),
        "xy_drift": float(np.abs(out["xy"] - out["xy"][0]).max()),
        "det_drift": float(np.abs(out["det"] - m).max()),
        "trace_drift": 0.0,  # sigma has no identity component by construction
        "branch_flips": flips,
    }
    return out, report
