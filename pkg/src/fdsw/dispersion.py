"""
Phase speed of linear water waves in unit depth, with optional surface
tension, and its first two derivatives.

    c(k; T)^2 = (1 + T k^2) tanh(k) / k

c is even in k and c(0) = 1.  All functions accept scalars or arrays and
evaluate at |k|.
"""

from dataclasses import dataclass

import numpy as np

# below this |k| the Taylor series of tanh(k)/k is used
KAPPA_SERIES = 1e-2
# above this |k| tanh(k) is 1 to double precision
KAPPA_FLAT = 40.0

# tanh(k)/k = sum_j _TANH_SERIES[j] k^(2j)
_TANH_SERIES = np.array([1.0, -1.0 / 3.0, 2.0 / 15.0, -17.0 / 315.0,
                         62.0 / 2835.0, -1382.0 / 155925.0])


@dataclass(frozen=True)
class Medium:
    """Surface tension coefficient T >= 0 (T = 0 is pure gravity)."""
    T: float = 0.0

    def __post_init__(self):
        if not self.T >= 0:
            raise ValueError("surface tension T must be nonnegative")


@dataclass(frozen=True)
class SpeedJet:
    c: float
    c1: float
    c2: float


def tension(medium):
    """Return T from a Medium or a plain number."""
    if isinstance(medium, Medium):
        return medium.T
    if medium is None:
        return 0.0
    if np.ndim(medium) > 0:
        return np.asarray(medium, dtype=float)
    return float(medium)


def _tanhc_jet(k):
    """tanh(k)/k and its first two derivatives, k >= 0 (array)."""
    t = np.empty_like(k)
    t1 = np.empty_like(k)
    t2 = np.empty_like(k)

    small = k < KAPPA_SERIES
    if small.any():
        ks = k[small]
        k2 = ks * ks
        s = _TANH_SERIES
        t[small] = s[0] + k2 * (s[1] + k2 * (s[2] + k2 * (s[3] + k2 * (s[4] + k2 * s[5]))))
        # d/dk sum s_j k^2j = sum 2j s_j k^(2j-1)
        t1[small] = ks * (2 * s[1] + k2 * (4 * s[2] + k2 * (6 * s[3] + k2 * (8 * s[4] + k2 * 10 * s[5]))))
        t2[small] = (2 * s[1] + k2 * (12 * s[2] + k2 * (30 * s[3] + k2 * (56 * s[4] + k2 * 90 * s[5]))))

    big = k > KAPPA_FLAT
    if big.any():
        kb = k[big]
        t[big] = 1.0 / kb
        t1[big] = -1.0 / kb**2
        t2[big] = 2.0 / kb**3

    mid = ~(small | big)
    if mid.any():
        km = k[mid]
        th = np.tanh(km)
        sech2 = 1.0 / np.cosh(km)**2
        t[mid] = th / km
        t1[mid] = sech2 / km - th / km**2
        t2[mid] = -2.0 * sech2 * th / km - 2.0 * sech2 / km**2 + 2.0 * th / km**3
    return t, t1, t2


def _csq_jet(k, T):
    """c^2 and its first two derivatives in k, at |k|."""
    k, T = np.broadcast_arrays(np.abs(np.asarray(k, dtype=float)), np.asarray(T, dtype=float))
    flat = k.ravel()
    T = T.ravel()
    t, t1, t2 = _tanhc_jet(flat)
    s = 1.0 + T * flat**2
    q = s * t
    q1 = 2.0 * T * flat * t + s * t1
    q2 = 2.0 * T * t + 4.0 * T * flat * t1 + s * t2
    return q.reshape(k.shape), q1.reshape(k.shape), q2.reshape(k.shape)


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def speed_squared(kappa, medium=0.0):
    """c(kappa; T)^2, the Fourier symbol of the dispersive multiplier."""
    q, _, _ = _csq_jet(kappa, tension(medium))
    return _out(q)


def phase_speed(kappa, medium=0.0):
    """Phase speed c(kappa; T); equals 1 at kappa = 0."""
    q, _, _ = _csq_jet(kappa, tension(medium))
    return _out(np.sqrt(q))


def speed_jet(kappa, medium=0.0):
    """(c, dc/dk, d2c/dk2) from closed-form derivatives of c^2."""
    q, q1, q2 = _csq_jet(kappa, tension(medium))
    c = np.sqrt(q)
    c1 = q1 / (2.0 * c)
    c2 = (q2 - 2.0 * c1 * c1) / (2.0 * c)
    return SpeedJet(_out(c), _out(c1), _out(c2))


def group_velocity_jet(kappa, medium=0.0):
    """(k c)' and (k c)'' at kappa >= 0."""
    j = speed_jet(kappa, medium)
    k = np.abs(np.asarray(kappa, dtype=float))
    g = j.c + k * j.c1
    g1 = 2.0 * j.c1 + k * j.c2
    return _out(g), _out(g1)


def omega(n, xi, kappa, medium=0.0, branch=1):
    """Flat-state frequency (n + xi)(c(kappa) +/- c(kappa (n + xi)))."""
    x = np.asarray(n, dtype=float) + xi
    T = tension(medium)
    cx = np.sqrt(_csq_jet(kappa * x, T)[0])
    return _out(x * (phase_speed(kappa, T) + branch * cx))
