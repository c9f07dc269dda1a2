"""
Pseudo-spectral time integration of

    eta_t + u_x + (u eta)_x = 0
    u_t + c^2(|d_x|) eta_x + u u_x = 0

on a periodic domain of P carrier wavelengths, optionally in a frame moving
at speed `frame` (which adds frame * d_x to both equations).  RK4 in time,
Fourier collocation in space, products dealiased by the 2/3 rule.
"""

from dataclasses import dataclass, replace

import numpy as np

from .dispersion import phase_speed, speed_squared, tension
from .errors import BlowUp, NoLinearRegime, UnderResolved
from .stokes import expansion_coefficients

BLOWUP_FACTOR = 50.0


@dataclass(frozen=True)
class FieldState:
    eta: np.ndarray
    u: np.ndarray
    t: float
    kappa: float
    P: int
    T: float = 0.0
    frame: float = 0.0

    @property
    def G(self):
        return len(self.eta)

    @property
    def length(self):
        return 2 * np.pi * self.P / self.kappa

    @property
    def x(self):
        return np.linspace(0, self.length, self.G, endpoint=False)

    @property
    def wavenumbers(self):
        return 2 * np.pi * np.fft.fftfreq(self.G, d=self.length / self.G)


@dataclass(frozen=True)
class EnergyReport:
    value: float
    eta_norm: float
    u_norm: float
    e_terms: tuple


def make_state(eta, u, kappa, P, T=0.0, t=0.0, frame=0.0):
    eta = np.asarray(eta, dtype=float)
    u = np.asarray(u, dtype=float)
    G = len(eta)
    if G & (G - 1) or G < 8 * P:
        raise ValueError(f"grid size {G} must be a power of two and >= 8P = {8 * P}")
    return FieldState(eta.copy(), u.copy(), float(t), float(kappa), int(P), tension(T), float(frame))


class _Operator:
    """Precomputed Fourier symbols on the half spectrum; fields are stacked
    as rows [eta, u] of a (2, G // 2 + 1) array."""

    def __init__(self, s):
        G = s.G
        k = 2 * np.pi * np.fft.rfftfreq(G, d=s.length / G)
        self.G = G
        self.ik = 1j * k
        self.disp = 1j * k * speed_squared(k, s.T)
        self.mask = k < (2.0 / 3.0) * (np.pi * G / s.length)
        self.frame = s.frame

    def rhs(self, f):
        eta, u = np.fft.irfft(f, n=self.G)
        prod = np.fft.rfft(np.stack([u * eta, 0.5 * u * u])) * self.mask
        out = np.empty_like(f)
        out[0] = -self.ik * (f[1] + prod[0]) + self.frame * self.ik * f[0]
        out[1] = -self.disp * f[0] - self.ik * prod[1] + self.frame * self.ik * f[1]
        return out


def cfl_dt(s, safety=0.5):
    """0.5 dx / max(1, max|u| + max c), and 0.5 dx / sqrt(T k_max) when T > 0."""
    dx = s.length / s.G
    k = np.abs(s.wavenumbers)
    cmax = np.sqrt(speed_squared(k, s.T)).max()
    dt = safety * dx / max(1.0, np.abs(s.u).max() + cmax)
    if s.T > 0:
        dt = min(dt, safety * dx / np.sqrt(s.T * k.max()))
    return dt


def _rk4(op, f, dt):
    k1 = op.rhs(f)
    k2 = op.rhs(f + 0.5 * dt * k1)
    k3 = op.rhs(f + 0.5 * dt * k2)
    k4 = op.rhs(f + dt * k3)
    return f + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def step(s, dt, cap=None):
    """One RK4 step."""
    return run(s, dt, 1, cap=cap)


def run(s, dt, steps, cap=None, stride=None, callback=None):
    """Advance `steps` RK4 steps of size dt.  callback(state) is called every
    `stride` steps when given.  Raises BlowUp past the sup-norm cap."""
    if cap is None:
        cap = BLOWUP_FACTOR * max(np.abs(s.eta).max(), np.abs(s.u).max(), 1e-300)
    op = _Operator(s)
    f = np.fft.rfft(np.stack([s.eta, s.u]))
    t = s.t
    with np.errstate(over="ignore", invalid="ignore"):
        f, t = _advance(s, op, f, dt, steps, cap, stride, callback)
    eta, u = np.fft.irfft(f, n=s.G)
    return replace(s, eta=eta, u=u, t=t)


def _advance(s, op, f, dt, steps, cap, stride, callback):
    t = s.t
    for j in range(steps):
        f = _rk4(op, f, dt)
        t = s.t + (j + 1) * dt
        if callback is not None and stride and (j + 1) % stride == 0:
            eta, u = np.fft.irfft(f, n=s.G)
            callback(replace(s, eta=eta, u=u, t=t))
        if (j + 1) % 64 == 0 or j + 1 == steps:
            # sum of |coefficients| bounds the sup norm
            if not np.all(np.isfinite(f)) or 2 * np.abs(f).sum(axis=1).max() / s.G > cap:
                eta, u = np.fft.irfft(f, n=s.G)
                m = max(np.abs(eta).max(), np.abs(u).max())
                if not np.isfinite(m) or m > cap:
                    raise BlowUp(f"sup norm {m:.3e} exceeds cap {cap:.3e} at t={t:.6g}")
    return f, t


def energy(s, k=1, tail_tol=1e-8):
    """E_k with E_k^2 = |eta|^2/2 + |u|^2/2 + sum_{l=1..k} e_l^2 and
    e_l^2 = (1/2) <(d^l eta)^2 + (d^l u) |d| (d^l u)>, norms averaged over
    the period."""
    if k < 1:
        raise ValueError("k must be >= 1")
    G = s.G
    eh = np.fft.fft(s.eta) / G
    uh = np.fft.fft(s.u) / G
    kk = s.wavenumbers
    pe = np.abs(eh) ** 2
    pu = np.abs(uh) ** 2
    total = pe.sum() + pu.sum()
    if total > 0:
        tail = np.abs(kk) >= (2.0 / 3.0) * np.abs(kk).max()
        if (pe[tail].sum() + pu[tail].sum()) > tail_tol * total:
            raise UnderResolved("spectral tail holds too much energy")
    en = np.sqrt(pe.sum())
    un = np.sqrt(pu.sum())
    terms = []
    for ell in range(1, k + 1):
        w = kk ** (2 * ell)
        terms.append(0.5 * np.sum(w * pe + w * np.abs(kk) * pu))
    value = np.sqrt(0.5 * en ** 2 + 0.5 * un ** 2 + sum(terms))
    return EnergyReport(float(value), float(en), float(un), tuple(float(x) for x in terms))


def wave_to_state(w, P, G, frame=True):
    """Sample a wave train on G points over P carrier periods."""
    L = 2 * np.pi * P / w.kappa
    x = np.linspace(0, L, G, endpoint=False)
    z = w.kappa * x
    return make_state(w.eta(z), w.u(z), w.kappa, P, w.T, frame=w.c if frame else 0.0)


def constant_state_eigs(b1, b2, kappa, n, xi, medium=0.0):
    """Eigenvalues i(n+xi)(c0 - u0 +/- sqrt(1 + eta0) c(kappa(n+xi))) of the
    operator linearized about the constant state (eta0, u0) in the frame
    moving at c0."""
    T = tension(medium)
    e = expansion_coefficients(kappa, b1, b2, T)
    return constant_state_eigs_exact(e.eta0, e.u0, e.c0, kappa, n, xi, T)


def constant_state_eigs_exact(eta0, u0, c0, kappa, n, xi, medium=0.0):
    x = np.asarray(n, dtype=float) + xi
    cx = np.sqrt(speed_squared(kappa * x, tension(medium)))
    r = np.sqrt(1.0 + eta0)
    return 1j * x * (c0 - u0 + r * cx), 1j * x * (c0 - u0 - r * cx)


def bw1_constant_eigs(b, c, n, xi, shifted=False):
    """Eigenvalues i n (c +/- sqrt(c(n+xi)^2 + 2b)) about the constant state
    b of the second-order-in-time model.  With shifted=True the prefactor is
    i(n+xi) instead of i n.  Returns (plus, minus, unstable)."""
    x = np.asarray(n, dtype=float) + xi
    root = np.sqrt(speed_squared(x) + 2 * b + 0j)
    pref = 1j * (x if shifted else np.asarray(n, dtype=float))
    lp = pref * (c + root)
    lm = pref * (c - root)
    unstable = bool(np.any(lp.real > 0) or np.any(lm.real > 0))
    return lp, lm, unstable


@dataclass(frozen=True)
class GrowthResult:
    rate: float  # growth rate of the perturbation amplitude in t
    rate_per_kappa: float  # comparable with Re(lambda) of the Hill spectrum
    window: tuple
    r2: float
    times: np.ndarray
    amplitude: np.ndarray


def mi_growth_experiment(kappa, a, xi, medium=0.0, horizon=None, P=None, G=512,
                         amplitude=1e-6, N=None, wave=None, samples=400, noise_seed=None):
    """Seed a wave train with a small Floquet perturbation from the Hill
    eigenvector of largest real part at exponent xi, evolve in the moving
    frame and fit the exponential growth of the perturbation."""
    from fractions import Fraction
    from . import hill
    from .stokes import build_wave, refine_wave

    T = tension(medium)
    if P is None:
        P = Fraction(xi).limit_denominator(1024).denominator
    q = xi * P
    if abs(q - round(q)) > 1e-9 or round(q) > P / 2:
        raise ValueError("xi must be q/P with integer q <= P/2")
    if wave is None:
        wave = refine_wave(build_wave(kappa, a, 0.0, 0.0, T))
    base = wave_to_state(wave, P, G)

    N = hill.truncation_for(wave, N)
    m = hill.assemble(wave, xi, N)
    vals, vecs = hill.spectrum(m, vectors=True)
    flags = hill.boundary_flags(m, vecs)
    vals = np.where(flags, -np.inf, vals.real) + 1j * vals.imag
    j = int(np.argmax(vals.real))
    lam = vals[j]
    v = vecs[:, j]
    n = np.arange(-N, N + 1)
    x = base.x
    z = kappa * x
    phase = np.exp(1j * np.multiply.outer(n + xi, z))
    pe = (v[:2 * N + 1] @ phase)
    pu = (v[2 * N + 1:] @ phase)
    if noise_seed is not None:
        rng = np.random.default_rng(noise_seed)
        pe = pe + 0.1 * rng.standard_normal(len(x))
        pu = pu + 0.1 * rng.standard_normal(len(x))
    scale = amplitude / max(np.abs(pe.real).max(), np.abs(pu.real).max())
    state = replace(base, eta=base.eta + scale * pe.real, u=base.u + scale * pu.real)

    predicted = kappa * max(lam.real, 0.0)
    if horizon is None:
        # a Hill rate this close to zero is round-off
        carrier = kappa * wave.c
        growth = predicted if predicted > 1e-10 * carrier else 1e-3 * carrier
        horizon = np.log(1e2) / growth
    dt = cfl_dt(state)
    steps = int(np.ceil(horizon / dt))
    dt = horizon / steps
    stride = max(1, steps // samples)
    times, amps = [0.0], [_sideband_size(state)]

    def record(cur):
        times.append(cur.t)
        amps.append(_sideband_size(cur))

    run(state, dt, steps, stride=stride, callback=record)
    times = np.array(times)
    amps = np.array(amps)
    rate, window, r2 = _fit_growth(times, amps)
    if r2 < 0.99:
        raise NoLinearRegime(f"best exponential fit has R^2 = {r2:.3f}")
    return GrowthResult(rate, rate / kappa, window, r2, times, amps)


def _sideband_size(s):
    """RMS size of the Fourier modes that are not carrier harmonics.  The
    unperturbed wave lives on multiples of P only, so this isolates the
    perturbation even when the discrete wave drifts slowly."""
    f = np.fft.rfft(np.stack([s.eta, s.u]), axis=1) / s.G
    side = np.arange(f.shape[1]) % s.P != 0
    return float(np.sqrt(2 * np.sum(np.abs(f[:, side]) ** 2)))


def _fit_growth(t, amp):
    """Least-squares slope of log(amp) over the window where the perturbation
    stays below 1e-2 of the base amplitude; picks the latter 60% of samples
    to skip the transient."""
    good = amp > 0
    t, amp = t[good], amp[good]
    y = np.log(amp)
    lin = y < np.log(amp[0]) + np.log(1e4)
    t, y = t[lin], y[lin]
    start = int(0.4 * len(t))
    tt, yy = t[start:], y[start:]
    if len(tt) < 5:
        return 0.0, (0.0, 0.0), 0.0
    A = np.vstack([tt, np.ones_like(tt)]).T
    coef, *_ = np.linalg.lstsq(A, yy, rcond=None)
    fit = A @ coef
    ss = np.sum((yy - yy.mean()) ** 2)
    r2 = 1 - np.sum((yy - fit) ** 2) / ss if ss > 0 else 0.0
    return float(coef[0]), (float(tt[0]), float(tt[-1])), float(r2)
