"""Shift-operator (difference) Zakharov-Shabat problem on lattices of 2x2
matrices: sigma and s objects, potential extraction, the Miura-like link,
and both forms of the Darboux step, all as residual-checkable identities.

With T(f)(n) = f(n+1) and an invertible frame phi:

    sigma(n) = phi(n) phi(n+1)^{-1}
    s(n)     = phi(n) mu phi(n+1)^{-1}
    U(n)     = s(n) - J sigma(n)            (solves (J + U T) phi = phi mu)

The Miura-like link sigma T(U) sigma = U + [J, sigma] and the equivalence
of the two Darboux forms hold on frames with T(sigma) = sigma^{-1}, i.e.
period-2 frames; on generic frames the residuals are reported, not
asserted.  The s-identities for an iterate pair read

    s_n = sigma_n T(s_n) sigma_n
    s_{n+1} - s_n = J sigma_{n+1} - sigma_n J

(the second follows from U[n] = s_n - J sigma_n and U[n+1] = U[n] +
[J, sigma_n]).
"""

from __future__ import annotations

import numpy as np

from .errors import SingularPhiError, SingularSigmaError

_DET_TOL = 1e-12


class LatticeFrame:
    """Invertible 2x2 frame phi(n), n in [0, M); periodic or free boundary."""

    def __init__(self, phi, boundary: str = "periodic"):
        self.phi = np.asarray(phi, dtype=complex)
        if self.phi.ndim != 3 or self.phi.shape[1:] != (2, 2):
            raise ValueError("phi must have shape (M, 2, 2)")
        if boundary not in ("periodic", "free"):
            raise ValueError("boundary must be 'periodic' or 'free'")
        self.boundary = boundary
        dets = np.linalg.det(self.phi)
        bad = np.abs(dets) < _DET_TOL
        if bad.any():
            raise SingularPhiError("phi singular at n=%d" % int(np.argmax(bad)))
        self.condition_numbers = np.linalg.cond(self.phi)

    @property
    def size(self):
        return self.phi.shape[0]

    def at(self, n):
        if self.boundary == "periodic":
            return self.phi[n % self.size]
        if not 0 <= n < self.size:
            raise IndexError("free boundary: index %d out of range" % n)
        return self.phi[n]

    def interior(self, depth: int = 1):
        """Indices n where accesses up to phi(n+depth) stay in range."""
        if self.boundary == "periodic":
            return range(self.size)
        return range(self.size - depth)


def sigma_plus(frame: LatticeFrame) -> dict:
    """sigma(n) = phi(n) phi(n+1)^{-1} on the valid index range."""
    out = {}
    for n in frame.interior(1):
        out[n] = frame.at(n) @ np.linalg.inv(frame.at(n + 1))
    return out


def s_field(frame: LatticeFrame, mu) -> dict:
    """s(n) = phi(n) mu phi(n+1)^{-1}."""
    mu = np.asarray(mu, dtype=complex)
    out = {}
    for n in frame.interior(1):
        out[n] = frame.at(n) @ mu @ np.linalg.inv(frame.at(n + 1))
    return out


def lattice_potential_U(frame: LatticeFrame, mu, J) -> dict:
    """U(n) = phi(n) mu phi(n+1)^{-1} - J sigma(n)."""
    mu = np.asarray(mu, dtype=complex)
    J = np.asarray(J, dtype=complex)
    sig = sigma_plus(frame)
    s = s_field(frame, mu)
    return {n: s[n] - J @ sig[n] for n in sig}


def spectral_residual(frame: LatticeFrame, U, mu, J) -> float:
    """max_n |J phi(n) + U(n) phi(n+1) - phi(n) mu|."""
    mu = np.asarray(mu, dtype=complex)
    J = np.asarray(J, dtype=complex)
    worst = 0.0
    for n in frame.interior(1):
        r = J @ frame.at(n) + U[n] @ frame.at(n + 1) - frame.at(n) @ mu
        worst = max(worst, float(np.abs(r).max()))
    return worst


def shifted_sigma_residual(frame: LatticeFrame) -> float:
    """max_n |T(sigma)(n) phi(n+2) - phi(n+1)| (exact by construction)."""
    sig = sigma_plus(frame)
    worst = 0.0
    for n in frame.interior(2):
        nn = (n + 1) % frame.size if frame.boundary == "periodic" else n + 1
        r = sig[nn] @ frame.at(n + 2) - frame.at(n + 1)
        worst = max(worst, float(np.abs(r).max()))
    return worst


def miura_residual(U, sigma, J, n) -> np.ndarray:
    """sigma(n) U(n+1) sigma(n) - U(n) - [J, sigma(n)].

    Raises IndexError when n+1 is not available.
    """
    J = np.asarray(J, dtype=complex)
    keys = sorted(U)
    succ = n + 1 if n + 1 in U else (n + 1) % (max(keys) + 1)
    if succ not in U or n not in U:
        raise IndexError("miura residual needs U at n and n+1")
    s = sigma[n]
    return s @ U[succ] @ s - U[n] - (J @ s - s @ J)


def lattice_dt(U, sigma, J):
    """Both Darboux forms of the transformed potential.

    Returns (U_plus, max pointwise difference) where U_plus(n) =
    U(n) + [J, sigma(n)] and the second route is
    sigma(n) U(n+1) sigma(n+1)^{-1}.
    """
    J = np.asarray(J, dtype=complex)
    size = max(U) + 1
    u_plus = {}
    diff = 0.0
    for n in U:
        s = sigma[n]
        u_plus[n] = U[n] + (J @ s - s @ J)
        succ = (n + 1) % size
        if succ in U and succ in sigma:
            s_next = sigma[succ]
            if abs(np.linalg.det(s_next)) < _DET_TOL:
                raise SingularSigmaError("sigma singular at n=%d" % succ)
            alt = s @ U[succ] @ np.linalg.inv(s_next)
            diff = max(diff, float(np.abs(u_plus[n] - alt).max()))
    return u_plus, diff


def next_frame(frame: LatticeFrame, U_next, mu2, J, phi0=None) -> LatticeFrame:
    """Forward-solve (J + U_next T) phi = phi mu2 from phi(0).

    phi(n+1) = U_next(n)^{-1} (phi(n) mu2 - J phi(n)); requires the
    transformed potential to be invertible along the lattice.
    """
    mu2 = np.asarray(mu2, dtype=complex)
    J = np.asarray(J, dtype=complex)
    size = frame.size
    phi = np.empty((size, 2, 2), dtype=complex)
    phi[0] = np.eye(2) if phi0 is None else np.asarray(phi0, dtype=complex)
    for n in range(size - 1):
        un = U_next[n]
        if abs(np.linalg.det(un)) < _DET_TOL:
            raise SingularPhiError("transformed potential singular at n=%d" % n)
        phi[n + 1] = np.linalg.inv(un) @ (phi[n] @ mu2 - J @ phi[n])
    return LatticeFrame(phi, boundary=frame.boundary)


def s_chain_residuals(frame: LatticeFrame, mu, J, mu2=None):
    """Residuals of the two s-identities on a pair of Darboux iterates.

    Builds level-1 data from the frame, performs one Darboux step, solves
    the level-2 spectral problem forward with eigenvalue matrix mu2
    (default: the mirror 2 diag(J) - mu, which keeps diagonal period-2
    families period-2), and evaluates

        (S)  s_k - sigma_k T(s_k) sigma_k          per level k = 1, 2
        (Ss) s_2 - s_1 - (J sigma_2 - sigma_1 J)   pointwise.
    """
    mu = np.asarray(mu, dtype=complex)
    J = np.asarray(J, dtype=complex)
    if mu2 is None:
        mu2 = 2 * np.diag(np.diag(J)) - mu
    sig1 = sigma_plus(frame)
    s1 = s_field(frame, mu)
    U1 = {n: s1[n] - J @ sig1[n] for n in sig1}
    U2 = {n: U1[n] + (J @ sig1[n] - sig1[n] @ J) for n in U1}
    frame2 = next_frame(frame, U2, mu2, J)
    sig2 = sigma_plus(frame2)
    s2 = s_field(frame2, mu2)

    def s_identity(sig, s, fr):
        worst = 0.0
        for n in fr.interior(2):
            nn = (n + 1) % fr.size if fr.boundary == "periodic" else n + 1
            r = s[n] - sig[n] @ s[nn] @ sig[n]
            worst = max(worst, float(np.abs(r).max()))
        return worst

    res_S1 = s_identity(sig1, s1, frame)
    res_S2 = s_identity(sig2, s2, frame2)
    worst = 0.0
    for n in set(s1) & set(s2):
        r = s2[n] - s1[n] - (J @ sig2[n] - sig1[n] @ J)
        worst = max(worst, float(np.abs(r).max()))
    return {"S_level1": res_S1, "S_level2": res_S2, "Ss": worst}


# -- frame families ----------------------------------------------------


def frame_geometric_diag(size: int, ratio: float = 2.0, boundary="free") -> LatticeFrame:
    """phi(n) = diag(ratio^n, 1)."""
    phi = np.zeros((size, 2, 2), dtype=complex)
    for n in range(size):
        phi[n] = np.diag([ratio ** n, 1.0])
    return LatticeFrame(phi, boundary=boundary)


def frame_period2_diag(size: int, a: complex, b: complex) -> LatticeFrame:
    """Alternating diag(1,1), diag(a,b): period-2 with T(sigma) = sigma^{-1}."""
    if size % 2:
        raise ValueError("period-2 frame needs even size")
    phi = np.empty((size, 2, 2), dtype=complex)
    for n in range(size):
        phi[n] = np.eye(2) if n % 2 == 0 else np.diag([a, b])
    return LatticeFrame(phi, boundary="periodic")


def frame_period2_random(size: int, rng) -> LatticeFrame:
    """Random invertible pair repeated with period 2."""
    if size % 2:
        raise ValueError("period-2 frame needs even size")

    def rand_inv():
        while True:
            m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            if abs(np.linalg.det(m)) > 0.3:
                return m

    p0, p1 = rand_inv(), rand_inv()
    phi = np.empty((size, 2, 2), dtype=complex)
    phi[0::2] = p0
    phi[1::2] = p1
    return LatticeFrame(phi, boundary="periodic")


def frame_random(size: int, rng, boundary="free") -> LatticeFrame:
    """Independent random invertible matrices at every site."""
    phi = np.empty((size, 2, 2), dtype=complex)
    for n in range(size):
        while True:
            m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            if abs(np.linalg.det(m)) > 0.3:
                phi[n] = m
                break
    return LatticeFrame(phi, boundary=boundary)


def gauge_transform(frame: LatticeFrame, g) -> LatticeFrame:
    """phi(n) -> phi(n) g for a constant invertible g."""
    g = np.asarray(g, dtype=complex)
    return LatticeFrame(frame.phi @ g, boundary=frame.boundary)
