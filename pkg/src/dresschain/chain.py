"""Periodically closed dressing chain: x-flow, conserved quantities,
g-variable elliptic reduction, and the hydrodynamic t-chain.

For N = 3 the closed chain reads

    s1' = s3^2 - s2^2 + mu3 - mu2   (and cyclic),

equivalently Sigma_x = sum_{k=1}^{N-1} (-1)^k S^k (Sigma^2 + mu) for odd N,
where S is the cyclic shift.  First integrals: the Casimir c = s1+s2+s3 and

    A = g1 g2 g3 + mu2 g3 + mu1 g2 + mu3 g1,   g_i = s_i + s_{i+1}.

Eliminating g2 from A turns the g1 equation into dg1/dx = -+ sqrt(Q(g1))
with a quartic Q; integrate_reduced follows that spectral curve through its
turning points by stepping the equivalent smooth form g1'' = Q'(g1)/2 and
projecting the velocity back onto (g1')^2 = Q(g1).
"""

from __future__ import annotations

import numpy as np

from .errors import (
    CFLViolationError,
    ComplexBranchError,
    EvenNError,
    NonFiniteError,
    UnsupportedNError,
)


class ChainState:
    """State (sigma, mu) of the closed chain; N must be odd."""

    def __init__(self, sigma, mu):
        self.sigma = np.asarray(sigma, dtype=float)
        self.mu = np.asarray(mu, dtype=float)
        if self.sigma.shape != self.mu.shape or self.sigma.ndim != 1:
            raise ValueError("sigma and mu must be equal-length vectors")
        if self.sigma.size % 2 == 0:
            raise EvenNError("closed chain requires odd N")

    @property
    def n(self):
        return self.sigma.size

    def copy(self):
        return ChainState(self.sigma.copy(), self.mu)


def chain_rhs(state: ChainState) -> np.ndarray:
    """Right-hand side of the closed chain; components sum to zero."""
    return _rhs(state.sigma, state.mu)


def _rhs(sigma, mu):
    if sigma.size % 2 == 0:
        raise EvenNError("closed chain requires odd N")
    v = sigma ** 2 + mu
    out = np.zeros_like(sigma)
    for k in range(1, sigma.size):
        out += (-1) ** k * np.roll(v, -k)
    return out


def casimir_c(state: ChainState) -> float:
    return float(state.sigma.sum())


def g_vars(sigma):
    """g_i = sigma_i + sigma_{i+1} (cyclic)."""
    s = np.asarray(sigma)
    return s + np.roll(s, -1)


def invariant_A(state: ChainState) -> float:
    """Second integral A = g1 g2 g3 + mu2 g3 + mu1 g2 + mu3 g1 (N = 3)."""
    if state.n != 3:
        raise UnsupportedNError("A is implemented for N = 3")
    g = g_vars(state.sigma)
    mu = state.mu
    return float(g[0] * g[1] * g[2] + mu[1] * g[2] + mu[0] * g[1] + mu[2] * g[0])


def _invariant_A_grid(F, mu):
    g1 = F[0] + F[1]
    g2 = F[1] + F[2]
    g3 = F[2] + F[0]
    return g1 * g2 * g3 + mu[1] * g3 + mu[0] * g2 + mu[2] * g1


class Trajectory:
    """Ordered samples (x, sigma, c, A) of a chain integration."""

    def __init__(self, xs, sigmas, cs, As):
        self.xs = np.asarray(xs)
        self.sigmas = np.asarray(sigmas)
        self.cs = np.asarray(cs)
        self.As = np.asarray(As)

    def __len__(self):
        return self.xs.size


def _rk4(f, y, h):
    k1 = f(y)
    k2 = f(y + 0.5 * h * k1)
    k3 = f(y + 0.5 * h * k2)
    k4 = f(y + h * k3)
    return y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def integrate_chain(state0: ChainState, h: float, steps: int, record_every: int = 1) -> Trajectory:
    """Classical fixed-step RK4 on the closed chain.

    The trajectory carries c and A at every recorded sample.  Raises
    NonFiniteError (with the partial trajectory and last valid x) if the
    state stops being finite.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    mu = state0.mu
    s = state0.sigma.copy()
    n3 = state0.n == 3
    xs, sigmas, cs, As = [0.0], [s.copy()], [s.sum()], []
    As.append(invariant_A(state0) if n3 else np.nan)
    f = lambda y: _rhs(y, mu)
    for i in range(1, steps + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            s = _rk4(f, s, h)
        if not np.all(np.isfinite(s)):
            raise NonFiniteError(
                "state became non-finite at x=%g" % (i * h),
                last_x=(i - 1) * h,
                trajectory=Trajectory(xs, sigmas, cs, As),
            )
        if i % record_every == 0 or i == steps:
            xs.append(i * h)
            sigmas.append(s.copy())
            cs.append(s.sum())
            As.append(invariant_A(ChainState(s, mu)) if n3 else np.nan)
    return Trajectory(xs, sigmas, cs, As)


def find_period(state0: ChainState, h: float = 1e-4, xmax: float = 10.0) -> float:
    """x-period of a closed orbit by nearest return, quadratically refined."""
    mu = state0.mu
    s0 = state0.sigma
    s = s0.copy()
    f = lambda y: _rhs(y, mu)
    n = int(np.ceil(xmax / h))
    d = np.empty(n)
    for i in range(n):
        s = _rk4(f, s, h)
        d[i] = np.linalg.norm(s - s0)
    i = int(np.argmin(d))
    if i == 0 or i == n - 1:
        raise ValueError("no return found within xmax=%g" % xmax)
    y0, y1, y2 = d[i - 1] ** 2, d[i] ** 2, d[i + 1] ** 2
    delta = 0.5 * (y0 - y2) / (y0 - 2 * y1 + y2)
    return (i + 1 + delta) * h


# -- g-variable reduction ---------------------------------------------


def g_rhs(g1, g2, c, mu):
    """The two g-equations obtained from the chain under g3 = 2c - g1 - g2."""
    dg1 = mu[0] - mu[1] + 2 * c * g1 - g1 ** 2 - 2 * g1 * g2
    dg2 = -2 * c * g2 + 2 * g1 * g2 + g2 ** 2 + mu[1] - mu[2]
    return dg1, dg2


def _beta(g1, c, mu):
    return 2 * c * g1 - g1 ** 2 + mu[0] - mu[1]


def _gamma(g1, c, mu):
    return 2 * c * mu[1] - mu[1] * g1 + mu[2] * g1


def quartic_Q(g1, c, A, mu):
    """Q(g1) = beta^2 - 4 g1 (A - gamma); dg1/dx = -+ sqrt(Q) on the curve."""
    return _beta(g1, c, mu) ** 2 - 4 * g1 * (A - _gamma(g1, c, mu))


def quartic_Q_prime(g1, c, A, mu):
    db = 2 * c - 2 * g1
    dgam = mu[2] - mu[1]
    return 2 * _beta(g1, c, mu) * db - 4 * (A - _gamma(g1, c, mu)) + 4 * g1 * dgam


def g2_branches(g1, c, A, mu):
    """Both roots of A = g1 g2 g3 + ... viewed as a quadratic in g2.

    Returns (root_low, root_high); raises ComplexBranchError when the
    discriminant is negative.
    """
    if g1 == 0:
        raise ValueError("quadratic in g2 degenerates at g1 = 0")
    b = -_beta(g1, c, mu) / g1
    cc = (A - _gamma(g1, c, mu)) / g1
    disc = b * b - 4 * cc
    if disc < 0:
        raise ComplexBranchError("discriminant %g < 0 at g1=%g" % (disc, g1))
    sq = np.sqrt(disc)
    return (-b - sq) / 2.0, (-b + sq) / 2.0


def reduced_rhs(g1, branch, c, A, mu):
    """dg1/dx on the chosen sheet ('low' or 'high' g2 root)."""
    lo, hi = g2_branches(g1, c, A, mu)
    g2 = hi if branch == "high" else lo
    return g_rhs(g1, g2, c, mu)[0]


def integrate_reduced(g1_0, branch, c, A, mu, h, steps, disc_tol=1e-10):
    """Integrate dg1/dx = -+ sqrt(Q(g1)) with branch tracking.

    The stepper advances the equivalent smooth system (g1' = v,
    v' = Q'(g1)/2) so turning points (double roots of the g2 quadratic,
    where Q -> 0) are crossed without event logic; away from them the
    velocity is projected back onto the curve v = sign(v) sqrt(Q), which
    is exactly the reduced equation.  Branch flips are recorded whenever
    the discriminant drops below disc_tol * scale^2.
    """
    mu = np.asarray(mu, dtype=float)
    v = reduced_rhs(g1_0, branch, c, A, mu)
    scale = max(1.0, abs(A))
    y = np.array([g1_0, v], dtype=float)
    f = lambda z: np.array([z[1], 0.5 * quartic_Q_prime(z[0], c, A, mu)])
    xs = np.empty(steps + 1)
    g1s = np.empty(steps + 1)
    vs = np.empty(steps + 1)
    flips = []
    xs[0], g1s[0], vs[0] = 0.0, y[0], y[1]
    prev_sign = np.sign(y[1])
    for i in range(1, steps + 1):
        y = _rk4(f, y, h)
        q = quartic_Q(y[0], c, A, mu)
        if q > disc_tol * scale ** 2:
            y[1] = np.copysign(np.sqrt(q), y[1])
        sgn = np.sign(y[1])
        if sgn != 0 and prev_sign != 0 and sgn != prev_sign:
            flips.append(i * h)
        if sgn != 0:
            prev_sign = sgn
        xs[i], g1s[i], vs[i] = i * h, y[0], y[1]
    return {"x": xs, "g1": g1s, "v": vs, "turning_points": np.asarray(flips)}


# -- t-chain -----------------------------------------------------------


class TChainField:
    """Periodic uniform grid of chain states Sigma(x_j) over one period."""

    def __init__(self, values, length, mu):
        self.values = np.asarray(values, dtype=float)
        if self.values.ndim != 2 or self.values.shape[0] != 3:
            raise UnsupportedNError("t-chain fields are implemented for N = 3")
        self.length = float(length)
        self.mu = np.asarray(mu, dtype=float)

    @property
    def grid_size(self):
        return self.values.shape[1]

    @property
    def dx(self):
        return self.length / self.grid_size

    def copy(self):
        return TChainField(self.values.copy(), self.length, self.mu)


def build_periodic_field(state0: ChainState, grid_size: int, period=None,
                         substeps: int = 8) -> TChainField:
    """Sample one closed orbit on a uniform grid by RK4 with substeps."""
    if state0.n != 3:
        raise UnsupportedNError("t-chain fields are implemented for N = 3")
    X = find_period(state0) if period is None else float(period)
    h = X / (grid_size * substeps)
    s = state0.sigma.copy()
    f = lambda y: _rhs(y, state0.mu)
    F = np.empty((3, grid_size))
    for j in range(grid_size):
        F[:, j] = s
        for _ in range(substeps):
            s = _rk4(f, s, h)
    return TChainField(F, X, state0.mu)


def tchain_speeds(field: TChainField) -> np.ndarray:
    """Advection speeds lambda_i = (mu_{i+1} + mu_{i+2} - 5 mu_i - F)/2
    with F = (s1+s2+s3)^2 pointwise."""
    mu = field.mu
    a = 0.5 * (mu.sum() - 6.0 * mu)
    c = field.values.sum(axis=0)
    return a[:, None] - 0.5 * (c ** 2)[None, :]


def tchain_F(field: TChainField) -> np.ndarray:
    """The quadratic form F = sum_i s_i^2 + 2 sum_{i<j} s_i s_j pointwise."""
    v = field.values
    return (v ** 2).sum(axis=0) + 2.0 * (v[0] * v[1] + v[0] * v[2] + v[1] * v[2])


def _upwind_dx(F, lam, dx):
    # sigma_t = lam sigma_x transports with velocity -lam: lam < 0 means
    # information arrives from the left, so use the backward difference.
    back = (F - np.roll(F, 1, axis=1)) / dx
    fwd = (np.roll(F, -1, axis=1) - F) / dx
    return np.where(lam < 0, back, fwd)


def tchain_rhs(field: TChainField, stencil: str = "upwind") -> np.ndarray:
    """Time derivative grid of the per-component advection system."""
    lam = tchain_speeds(field)
    F = field.values
    if stencil == "upwind":
        dF = _upwind_dx(F, lam, field.dx)
    elif stencil == "centered":
        dF = (np.roll(F, -1, axis=1) - np.roll(F, 1, axis=1)) / (2 * field.dx)
    else:
        raise ValueError("stencil must be 'upwind' or 'centered'")
    return lam * dF


def chain_consistency_residual(field: TChainField) -> float:
    """Max norm of (centered d/dx Sigma) minus the chain right-hand side."""
    F = field.values
    dF = (np.roll(F, -1, axis=1) - np.roll(F, 1, axis=1)) / (2 * field.dx)
    v = F ** 2 + field.mu[:, None]
    rhs = np.roll(v, -2, axis=0) - np.roll(v, -1, axis=0)
    return float(np.abs(dF - rhs).max())


def cfl_dt(field: TChainField, gap: float = 2e-3) -> float:
    """Largest stable forward-Euler step, reduced by the relative gap."""
    vmax = np.abs(tchain_speeds(field)).max()
    return field.dx / (vmax * (1.0 + gap))


def integrate_tchain(field: TChainField, dt: float, steps: int, nrec: int = 500):
    """First-order upwind advection of the t-chain, forward Euler in time.

    Records spatial means of c and A (and the max of |F - c^2| and the
    chain-consistency residual) roughly nrec times over the run.  Raises
    CFLViolationError if dt exceeds the CFL bound at any step.
    """
    fld = field.copy()
    dx = fld.dx
    mu = fld.mu
    a = 0.5 * (mu.sum() - 6.0 * mu)
    every = max(1, steps // nrec)
    recs = []
    fmax = 0.0
    F = fld.values
    for i in range(steps):
        c = F.sum(axis=0)
        lam = a[:, None] - 0.5 * (c ** 2)[None, :]
        if np.abs(lam).max() * dt > dx * (1 + 1e-12):
            raise CFLViolationError(
                "dt=%g exceeds CFL bound %g" % (dt, dx / np.abs(lam).max())
            )
        if i % every == 0:
            fld.values = F
            fmax = max(fmax, float(np.abs(tchain_F(fld) - c ** 2).max()))
            recs.append((i * dt, c.mean(), _invariant_A_grid(F, mu).mean(),
                         chain_consistency_residual(fld)))
        F = F + dt * lam * _upwind_dx(F, lam, dx)
    fld.values = F
    c = F.sum(axis=0)
    fmax = max(fmax, float(np.abs(tchain_F(fld) - c ** 2).max()))
    recs.append((steps * dt, c.mean(), _invariant_A_grid(F, mu).mean(),
                 chain_consistency_residual(fld)))
    out = np.asarray(recs)
    return {
        "t": out[:, 0],
        "c_mean": out[:, 1],
        "A_mean": out[:, 2],
        "chain_residual": out[:, 3],
        "max_F_minus_c2": fmax,
        "field": fld,
    }


def fixed_point_state(mu, p_squared: float) -> ChainState:
    """Stationary chain state with sigma_1^2 = p_squared (N = 3).

    Balances sigma_{i}^2 differences against the mu differences; requires
    p_squared large enough that all three squares stay positive.
    """
    mu = np.asarray(mu, dtype=float)
    q2 = p_squared + mu[0] - mu[1]
    r2 = p_squared + mu[0] - mu[2]
    if min(p_squared, q2, r2) <= 0:
        raise ValueError("p_squared too small for these mu")
    return ChainState(np.sqrt([p_squared, q2, r2]), mu)
