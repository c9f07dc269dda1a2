"""
Collisions of purely imaginary eigenvalues of the flat-state operator away
from the origin, their Krein signatures, and the reduced 2x2 problems that
follow a colliding pair as the amplitude grows.

At the flat state the eigenvalues are i omega(n + xi, +/-) with

    omega(n + xi, +/-) = (n + xi)(c(kappa) +/- c(kappa (n + xi))).

A collision is omega(n1 + xi, -) = omega(n2 + xi, +).
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .dispersion import phase_speed, speed_squared, tension
from .errors import UnsupportedCollision, ZeroEigenvalue
from .stokes import build_wave

PLUS, MINUS = 1, -1
SCAN_POINTS = 1024
XTOL = 1e-12
OMEGA_ZERO = 1e-9


@dataclass(frozen=True)
class BranchPoint:
    n: int
    xi: float
    branch: int  # PLUS or MINUS
    kappa: float
    T: float = 0.0

    @property
    def omega(self):
        return omega(self.n, self.xi, self.kappa, self.T, self.branch)


@dataclass(frozen=True)
class CollisionRecord:
    p1: BranchPoint  # minus branch, index n1
    p2: BranchPoint  # plus branch, index n2
    omega0: float
    sig1: int
    sig2: int

    @property
    def n1(self):
        return self.p1.n

    @property
    def n2(self):
        return self.p2.n

    @property
    def xi(self):
        return self.p1.xi

    @property
    def kappa(self):
        return self.p1.kappa


@dataclass(frozen=True)
class Pencil2:
    L: np.ndarray
    I: np.ndarray
    order: str
    xi0: float
    xi: float
    a: float
    kappa: float
    eigenvalues: np.ndarray


def omega(n, xi, kappa, medium=0.0, branch=PLUS):
    x = np.asarray(n, dtype=float) + xi
    T = tension(medium)
    out = x * (phase_speed(kappa, T) + branch * np.sqrt(speed_squared(kappa * x, T)))
    return float(out) if np.ndim(out) == 0 else out


def _residual(n1, n2, xi, kappa, T):
    return omega(n1, xi, kappa, T, MINUS) - omega(n2, xi, kappa, T, PLUS)


def _roots_in_xi(n1, n2, kappa, T, grid, values=None):
    if values is None:
        values = _residual(n1, n2, grid, kappa, T)
    out = []
    for j in range(len(grid) - 1):
        lo, hi = values[j], values[j + 1]
        if lo == 0.0:
            if grid[j] > 0:
                out.append(grid[j])
            continue
        if lo * hi < 0:
            out.append(brentq(lambda x: _residual(n1, n2, x, kappa, T),
                              grid[j], grid[j + 1], xtol=XTOL, rtol=1e-15))
    if values[-1] == 0.0:
        out.append(grid[-1])
    return out


def krein_signature(b):
    """Sign of -+2 kappa omega for branch +/- (the sign of the energy form)."""
    w = b.omega
    if abs(w) < 1e-13:
        raise ZeroEigenvalue("Krein signature is inconclusive at the origin")
    return int(np.sign(-b.branch * 2 * b.kappa * w))


def energy_form(b):
    """Closed form of the second variation of the Hamiltonian evaluated on
    the flat-state eigenvector e = (1, -+c(kappa(n+xi))) of branch +/-."""
    c0 = phase_speed(b.kappa, b.T)
    cn = np.sqrt(speed_squared(b.kappa * (b.n + b.xi), b.T))
    return 2 * cn * (cn + b.branch * c0)


def find_collisions(kappa, medium=0.0, n_max=16, points=SCAN_POINTS):
    """All nonzero collisions with |n1|, |n2| <= n_max and 0 < xi <= 1/2."""
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    T = tension(medium)
    grid = np.linspace(0.0, 0.5, points + 1)
    ns = np.arange(-n_max, n_max + 1)
    wm = omega(ns[:, None], grid[None, :], kappa, T, MINUS)
    wp = omega(ns[:, None], grid[None, :], kappa, T, PLUS)
    records = []
    for i, n1 in enumerate(ns):
        diff = wm[i][None, :] - wp
        s = np.sign(diff)
        cand = np.nonzero(np.any(s[:, :-1] * s[:, 1:] <= 0, axis=1))[0]
        for j in cand:
            n2 = ns[j]
            if n1 == n2:
                continue
            for xi in _roots_in_xi(int(n1), int(n2), kappa, T, grid, diff[j]):
                w0 = omega(n1, xi, kappa, T, MINUS)
                if abs(w0) < OMEGA_ZERO or xi <= 0:
                    continue
                p1 = BranchPoint(int(n1), float(xi), MINUS, float(kappa), T)
                p2 = BranchPoint(int(n2), float(xi), PLUS, float(kappa), T)
                records.append(CollisionRecord(p1, p2, float(w0),
                                               krein_signature(p1), krein_signature(p2)))
    records.sort(key=lambda r: (r.xi, r.n1, r.n2))
    return records


def collision_curve(n1, n2, kappas, medium=0.0, points=SCAN_POINTS):
    """Polyline segments of (kappa, xi) along which the pair collides."""
    T = tension(medium)
    grid = np.linspace(0.0, 0.5, points + 1)
    segments, current = [], []
    for k in np.asarray(kappas, dtype=float):
        roots = [x for x in _roots_in_xi(n1, n2, k, T, grid)
                 if abs(omega(n1, x, k, T, MINUS)) >= OMEGA_ZERO]
        if roots:
            if current:
                prev = current[-1][1]
                xi = min(roots, key=lambda x: abs(x - prev))
            else:
                xi = roots[0]
            current.append((k, xi))
        elif current:
            segments.append(np.array(current))
            current = []
    if current:
        segments.append(np.array(current))
    return segments


def flat_matrix(n, xi0, xi, kappa, T=0.0):
    """C_{n,xi} = [[c0, -1], [-c(kappa(n+xi0+xi))^2, c0]]."""
    c0 = phase_speed(kappa, T)
    return np.array([[c0, -1.0], [-speed_squared(kappa * (n + xi0 + xi), T), c0]])


def first_order_vector(rec, which, shift):
    """Coefficient q_{n,shift} (shift = +/-1) of the order-a eigenfunction
    correction for member `which` (1: minus branch, 2: plus branch)."""
    p = rec.p1 if which == 1 else rec.p2
    k, T, xi0, w0 = p.kappa, p.T, p.xi, rec.omega0
    c0 = phase_speed(k, T)
    cn = np.sqrt(speed_squared(k * (p.n + xi0), T))
    m = p.n + shift + xi0
    cm2 = speed_squared(k * m, T)
    pre = 0.5 * m / ((w0 - c0 * m) ** 2 - cm2 * m * m)
    if which == 1:
        v = [c0 * m * (c0 + 2 * cn) - w0 * (c0 + cn),
             m * (c0 * c0 * cn + cm2 * (c0 + cn)) - w0 * c0 * cn]
    else:
        v = [c0 * m * (c0 - 2 * cn) - w0 * (c0 - cn),
             m * (-c0 * c0 * cn + cm2 * (c0 - cn)) + w0 * c0 * cn]
    return pre * np.array(v)


def _eigenfunction(rec, which, xi, a):
    """Fourier coefficients {n: 2-vector} of psi_k(xi, a) to order a."""
    p = rec.p1 if which == 1 else rec.p2
    cn = np.sqrt(speed_squared(p.kappa * (p.n + p.xi + xi), p.T))
    sgn = 1.0 if which == 1 else -1.0
    out = {p.n: np.array([1.0, sgn * cn])}
    for s in (1, -1):
        out[p.n + s] = out.get(p.n + s, 0) + a * first_order_vector(rec, which, s)
    return out


def _apply(wave, xi_total, vec):
    """Apply the linearized operator of `wave` to a finite Fourier vector."""
    k, T, c = wave.kappa, wave.T, wave.c
    cu = -np.asarray(wave.u_cos, float).copy()
    cu[0] += c
    eb = np.asarray(wave.eta_cos, float).copy()
    eb[0] += 1.0
    from .stokes import two_sided
    A = two_sided(cu)
    B = two_sided(eb)
    M = (len(A) - 1) // 2
    out = {}
    for n, (z, v) in vec.items():
        for d in range(-M, M + 1):
            m = n + d
            top = A[d + M] * z - B[d + M] * v
            bot = A[d + M] * v - (speed_squared(k * (n + xi_total), T) * z if d == 0 else 0.0)
            row = 1j * (m + xi_total) * np.array([top, bot])
            out[m] = out.get(m, 0) + row
    return out


def _inner(f, g):
    return sum(np.vdot(g[n], f[n]) for n in f if n in g)


def away_origin_pencil(rec, xi, a, order="First"):
    """Reduced 2x2 pencil (L, I) near i omega0 at Floquet exponent xi0 + xi."""
    k, T, xi0 = rec.kappa, rec.p1.T, rec.xi
    w1 = omega(rec.n1, xi0 + xi, k, T, MINUS)
    w2 = omega(rec.n2, xi0 + xi, k, T, PLUS)
    if order == "First":
        L = np.diag([1j * w1, 1j * w2])
        I = np.eye(2, dtype=complex)
        eig = np.array([1j * w1, 1j * w2])
        return Pencil2(L, I, "First", xi0, float(xi), float(a), k, eig)
    if order != "Second":
        raise ValueError("order must be 'First' or 'Second'")
    if (rec.n1, rec.n2) != (2, 0):
        raise UnsupportedCollision(f"second order only for (2, 0), got ({rec.n1}, {rec.n2})")
    # raw inner products contain all powers of a; keep the terms through a^2
    # exactly by fitting a polynomial in a on a symmetric stencil
    h = max(abs(a), 1e-3)
    stencil = h * np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
    raw = np.array([_raw_pencil(rec, xi, s) for s in stencil])
    V = np.vander(stencil, 5, increasing=True)
    coef = np.linalg.solve(V, raw.reshape(5, -1)).reshape(5, 2, 2, 2)
    L = coef[0, 0] + a * coef[1, 0] + a * a * coef[2, 0]
    I = coef[0, 1] + a * coef[1, 1] + a * a * coef[2, 1]
    eig = _pencil_roots(L, I)
    return Pencil2(L, I, "Second", xi0, float(xi), float(a), k, eig)


def _raw_pencil(rec, xi, a):
    """Normalized inner products of the operator about the second-order
    wave with the order-a eigenfunctions psi_1, psi_2."""
    k, T, xi0 = rec.kappa, rec.p1.T, rec.xi
    wave = build_wave(k, a, 0.0, 0.0, T, M=2)
    psi = [_eigenfunction(rec, 1, xi, a), _eigenfunction(rec, 2, xi, a)]
    Lpsi = [_apply(wave, xi0 + xi, p) for p in psi]
    L = np.empty((2, 2), dtype=complex)
    I = np.empty((2, 2), dtype=complex)
    for r in range(2):
        norm = _inner(psi[r], psi[r]).real
        for s in range(2):
            L[r, s] = _inner(Lpsi[r], psi[s]) / norm
            I[r, s] = _inner(psi[r], psi[s]) / norm
    return np.stack([L, I])


def _pencil_roots(L, I):
    """Roots of det(L - lambda I).  When L is i times a real matrix and I is
    real the quadratic is solved in real arithmetic for mu = lambda / i."""
    if np.abs(L.real).max() <= 1e-14 * np.abs(L).max() and np.abs(I.imag).max() == 0:
        A, B = L.imag, I.real
        q2 = B[0, 0] * B[1, 1] - B[0, 1] * B[1, 0]
        q1 = -(A[0, 0] * B[1, 1] + A[1, 1] * B[0, 0] - A[0, 1] * B[1, 0] - A[1, 0] * B[0, 1])
        q0 = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
        mu = np.roots([q2, q1, q0]).astype(complex)
        r = 1j * mu
    else:
        a2 = I[0, 0] * I[1, 1] - I[0, 1] * I[1, 0]
        a1 = -(L[0, 0] * I[1, 1] + L[1, 1] * I[0, 0] - L[0, 1] * I[1, 0] - L[1, 0] * I[0, 1])
        a0 = L[0, 0] * L[1, 1] - L[0, 1] * L[1, 0]
        r = np.roots([a2, a1, a0])
    return r[np.argsort(r.imag)]
