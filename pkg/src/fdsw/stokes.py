"""
Small-amplitude periodic traveling waves.

A wave train is 2pi-periodic and even in z = kappa (x - c t):

    eta(z) = sum_n eta_cos[n] cos(n z),   u(z) = sum_n u_cos[n] cos(n z)

and solves

    -c eta + u + u eta                 = (1 - c^2) b1
    -c u + c^2(kappa |d_z|) eta + u^2/2 = (1 - c^2) b2

where the multiplier acts on cos(n z) as c(n kappa; T)^2.  build_wave gives
the second-order expansion in the amplitude a; refine_wave solves the
cosine-Galerkin truncation by Newton's method.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .dispersion import phase_speed, speed_squared, tension
from .errors import (LongWaveResonance, NoConvergence, SecondHarmonicResonance,
                     SingularJacobian)

EPS_RES = 1e-8
DEFAULT_MODES = 32
MAX_NEWTON = 50


@dataclass(frozen=True)
class ExpansionCoefficients:
    h0: float
    h2: float
    c2: float
    eta0: float
    u0: float
    c0: float


@dataclass(frozen=True)
class WaveTrain:
    kappa: float
    a: float
    b1: float
    b2: float
    T: float
    c: float
    eta_cos: np.ndarray = field(repr=False)
    u_cos: np.ndarray = field(repr=False)
    provenance: str = "Expansion"
    residual: float = None

    @property
    def modes(self):
        """Highest cosine index carrying a nonzero coefficient."""
        nz = np.nonzero((np.abs(self.eta_cos) > 0) | (np.abs(self.u_cos) > 0))[0]
        return int(nz[-1]) if nz.size else 0

    def eta(self, z):
        return cosine_eval(self.eta_cos, z)

    def u(self, z):
        return cosine_eval(self.u_cos, z)

    def satisfies_hypotheses(self, samples=512):
        z = np.linspace(0, 2 * np.pi, samples, endpoint=False)
        return bool(1 + self.eta(z).min() > 0 and self.c - self.u(z).max() > 0)

    def to_dict(self):
        return {"kappa": self.kappa, "a": self.a, "b1": self.b1, "b2": self.b2,
                "T": self.T, "c": self.c,
                "eta_cos": [float(x) for x in self.eta_cos],
                "u_cos": [float(x) for x in self.u_cos],
                "provenance": self.provenance, "residual": self.residual}

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d):
        return cls(kappa=float(d["kappa"]), a=float(d["a"]), b1=float(d["b1"]),
                   b2=float(d["b2"]), T=float(d["T"]), c=float(d["c"]),
                   eta_cos=np.asarray(d["eta_cos"], dtype=float),
                   u_cos=np.asarray(d["u_cos"], dtype=float),
                   provenance=d["provenance"], residual=d.get("residual"))

    @classmethod
    def from_json(cls, s):
        return cls.from_dict(json.loads(s))


def cosine_eval(coef, z):
    n = np.arange(len(coef))
    z = np.asarray(z, dtype=float)
    return np.cos(np.multiply.outer(z, n)) @ coef


def two_sided(coef):
    """Exponential coefficients f_k, k = -M..M, of a cosine series."""
    coef = np.asarray(coef)
    half = 0.5 * coef[1:]
    return np.concatenate([half[::-1], coef[:1], half])


def cosine_product(f, g, size=None):
    """Cosine coefficients of f*g, exact (no aliasing), truncated to size."""
    h = np.convolve(two_sided(f), two_sided(g))
    mid = len(h) // 2
    out = h[mid:].copy()
    out[1:] *= 2.0
    if size is not None:
        if size <= len(out):
            out = out[:size]
        else:
            out = np.concatenate([out, np.zeros(size - len(out))])
    return out


def multiplier(kappa, size, medium=0.0):
    """Symbol c(n kappa)^2 for n = 0..size-1."""
    return speed_squared(kappa * np.arange(size), medium)


def expansion_coefficients(kappa, b1=0.0, b2=0.0, medium=0.0):
    """Second-order expansion coefficients of the wave train family."""
    T = tension(medium)
    c = phase_speed(kappa, T)
    cc = c * c
    cc2 = speed_squared(2 * kappa, T)
    if abs(cc - 1.0) < EPS_RES:
        raise LongWaveResonance(f"c(kappa)^2 = 1 at kappa={kappa}, T={T}")
    if abs(cc - cc2) < EPS_RES * cc:
        raise SecondHarmonicResonance(f"c(kappa) = c(2 kappa) at kappa={kappa}, T={T}")
    h0 = 0.75 * cc / (cc - 1.0)
    h2 = 0.75 * cc / (cc - cc2)
    c2 = 0.75 * c * (2 * h0 + h2 - 1.0)
    eta0 = b1 * c + b2
    u0 = b1 + b2 * c
    c0 = c + b1 * (0.5 * cc + 1.0) + 1.5 * b2 * c
    return ExpansionCoefficients(h0, h2, c2, eta0, u0, c0)


def build_wave(kappa, a, b1=0.0, b2=0.0, medium=0.0, M=DEFAULT_MODES):
    """Second-order amplitude expansion of the wave train."""
    T = tension(medium)
    e = expansion_coefficients(kappa, b1, b2, T)
    c = phase_speed(kappa, T)
    s = b1 * c + b2
    eta = np.zeros(M + 1)
    u = np.zeros(M + 1)
    eta[0] = e.eta0 + a * a * e.h0
    eta[1] = a * (1 + s)
    eta[2] = a * a * e.h2
    u[0] = e.u0 + a * a * c * (e.h0 - 0.5)
    u[1] = a * c * (1 + 0.5 * s)
    u[2] = a * a * c * (e.h2 - 0.5)
    return WaveTrain(float(kappa), float(a), float(b1), float(b2), T,
                     float(e.c0 + a * a * e.c2), eta, u, "Expansion", None)


def _equations(eta, u, c, kappa, b1, b2, T, size):
    m = multiplier(kappa, size, T)
    eta = _pad(eta, size)
    u = _pad(u, size)
    r1 = -c * eta + u + cosine_product(u, eta, size)
    r2 = -c * u + m * eta + 0.5 * cosine_product(u, u, size)
    r1[0] -= (1 - c * c) * b1
    r2[0] -= (1 - c * c) * b2
    return r1, r2


def _pad(x, size):
    x = np.asarray(x, dtype=float)
    if len(x) >= size:
        return x[:size]
    return np.concatenate([x, np.zeros(size - len(x))])


def residual(w, M_eval=None):
    """Sup-norm of the cosine coefficients of both equations' residuals."""
    M = len(w.eta_cos) - 1
    if M_eval is None:
        M_eval = 2 * max(M, 1)
    r1, r2 = _equations(w.eta_cos, w.u_cos, w.c, w.kappa, w.b1, w.b2, w.T, M_eval + 1)
    return float(max(np.abs(r1).max(), np.abs(r2).max()))


def product_matrix(f, size):
    """Matrix of g -> P_size(f g) on cosine coefficients 0..size-1."""
    out = np.empty((size, size))
    for j in range(size):
        e = np.zeros(size)
        e[j] = 1.0
        out[:, j] = cosine_product(f, e, size)
    return out


def refine_wave(seed, M=DEFAULT_MODES, tol=1e-12, max_iter=MAX_NEWTON):
    """Newton-Galerkin solution of the traveling-wave equations.

    Unknowns are the cosine coefficients 0..M of eta and u and the speed c;
    the amplitude is pinned by eta_cos[1] = a (1 + b1 c(kappa) + b2).
    """
    if M < 8:
        raise ValueError("refine_wave needs M >= 8")
    k, a, b1, b2, T = seed.kappa, seed.a, seed.b1, seed.b2, seed.T
    size = M + 1
    eta = _pad(seed.eta_cos, size)
    u = _pad(seed.u_cos, size)
    c = seed.c
    target = a * (1 + b1 * phase_speed(k, T) + b2)

    def pack_residual(eta, u, c):
        r1, r2 = _equations(eta, u, c, k, b1, b2, T, size)
        if a == 0.0:
            return np.concatenate([r1, r2])
        return np.concatenate([r1, r2, [eta[1] - target]])

    r = pack_residual(eta, u, c)
    rn = np.abs(r).max()
    it = 0
    m = multiplier(k, size, T)
    eye = np.eye(size)
    while rn >= tol:
        if it >= max_iter:
            raise NoConvergence(it, rn)
        pu = product_matrix(u, size)
        pe = product_matrix(eta, size)
        e0 = eye[0]
        J = np.zeros((2 * size + 1, 2 * size + 1))
        J[:size, :size] = -c * eye + pu
        J[:size, size:2 * size] = eye + pe
        J[:size, -1] = -eta + 2 * c * b1 * e0
        J[size:2 * size, :size] = np.diag(m)
        J[size:2 * size, size:2 * size] = -c * eye + pu
        J[size:2 * size, -1] = -u + 2 * c * b2 * e0
        J[-1, 1] = 1.0
        if a == 0.0:
            # constant state: speed is a free frame parameter and stays fixed
            J = J[:-1, :-1]
        try:
            step = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError as exc:
            raise SingularJacobian(str(exc)) from None
        if not np.all(np.isfinite(step)) or np.linalg.cond(J) > 1e15:
            raise SingularJacobian(f"Jacobian condition {np.linalg.cond(J):.2e}")
        if a == 0.0:
            step = np.append(step, 0.0)
        lam = 1.0
        while True:
            ne = eta + lam * step[:size]
            nu = u + lam * step[size:2 * size]
            nc = c + lam * step[-1]
            nr = pack_residual(ne, nu, nc)
            nrn = np.abs(nr).max()
            if nrn < rn or lam < 1e-4:
                break
            lam *= 0.5
        eta, u, c, r, rn = ne, nu, nc, nr, nrn
        it += 1

    w = WaveTrain(k, a, b1, b2, T, float(c), eta, u, "Refined", None)
    return WaveTrain(k, a, b1, b2, T, float(c), eta, u, "Refined", residual(w, 2 * M))
