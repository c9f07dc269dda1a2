"""
Floquet-Fourier (Hill) truncation of the operator obtained by linearizing
about a wave train,

    L(xi) phi = e^{-i xi z} d_z [[c - u, -1 - eta], [-c^2(kappa|d_z|), c - u]] e^{i xi z} phi,

on the modes e^{i n z}, |n| <= N.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .dispersion import speed_squared
from .errors import ConvergenceFailure, TruncationTooSmall
from .stokes import two_sided

DEFAULT_N = 64
COEF_FLOOR = 1e-15


@dataclass(frozen=True)
class HillMatrix:
    N: int
    xi: float
    entries: np.ndarray
    wave: object

    @property
    def indices(self):
        return np.arange(-self.N, self.N + 1)


def effective_modes(w, floor=COEF_FLOOR):
    """Highest harmonic whose coefficient exceeds floor relative to the largest."""
    coef = np.maximum(np.abs(w.eta_cos[1:]), np.abs(w.u_cos[1:]))
    if coef.size == 0 or coef.max() == 0:
        return 0
    big = np.nonzero(coef > floor * max(coef.max(), 1.0))[0]
    return int(big[-1]) + 1 if big.size else 0


def _toeplitz(coef, N):
    """Matrix of multiplication by a cosine series on modes -N..N."""
    f = two_sided(coef)
    M = (len(f) - 1) // 2
    n = np.arange(-N, N + 1)
    d = n[:, None] - n[None, :]
    out = np.zeros(d.shape)
    inside = np.abs(d) <= M
    out[inside] = f[d[inside] + M]
    return out


def truncation_for(w, N=None):
    """N when given, else the default raised to the 4*modes floor of w."""
    return N if N is not None else max(DEFAULT_N, 4 * effective_modes(w))


def assemble(w, xi, N=DEFAULT_N):
    modes = effective_modes(w)
    if N < 4 * modes:
        raise TruncationTooSmall(f"N={N} < 4*{modes}")
    n = np.arange(-N, N + 1)
    k = n + xi
    cu = -np.asarray(w.u_cos, dtype=float).copy()
    cu[0] += w.c
    one_eta = np.asarray(w.eta_cos, dtype=float).copy()
    one_eta[0] += 1.0
    A = _toeplitz(cu, N)
    B = _toeplitz(one_eta, N)
    S = np.diag(speed_squared(w.kappa * k, w.T))
    top = np.hstack([A, -B])
    bottom = np.hstack([-S, A])
    row = 1j * np.concatenate([k, k])
    mat = row[:, None] * np.vstack([top, bottom])
    return HillMatrix(N, float(xi), mat, w)


def _order(vals):
    return np.lexsort((np.round(vals.real, 13), np.round(vals.imag, 13)))


def spectrum(m, vectors=False):
    """All eigenvalues sorted by (Im, Re); optionally the eigenvectors too."""
    try:
        if vectors:
            vals, vecs = scipy.linalg.eig(m.entries)
        else:
            vals = scipy.linalg.eigvals(m.entries)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ConvergenceFailure(str(exc)) from None
    idx = _order(vals)
    if vectors:
        return vals[idx], vecs[:, idx]
    return vals[idx]


def boundary_flags(m, vecs, outer=0.25, mass=0.10):
    """True where an eigenvector puts more than `mass` of its norm in the
    outer `outer` fraction of Fourier indices."""
    N = m.N
    n = np.abs(np.arange(-N, N + 1))
    edge = n > (1 - outer) * N
    edge = np.concatenate([edge, edge])
    p = np.abs(vecs) ** 2
    frac = p[edge].sum(axis=0) / p.sum(axis=0)
    return frac > mass


def interior_spectrum(m):
    vals, vecs = spectrum(m, vectors=True)
    flags = boundary_flags(m, vecs)
    return vals[~flags]


def max_growth(kappa, a, medium=0.0, xi_grid=None, N=None, wave=None, workers=1):
    """Largest interior Re(lambda) over a grid of Floquet exponents."""
    from .stokes import build_wave, refine_wave
    if xi_grid is None:
        xi_grid = np.linspace(0.0, 0.5, 201)[1:]
    if wave is None:
        wave = refine_wave(build_wave(kappa, a, 0.0, 0.0, medium))
    xi_grid = np.asarray(xi_grid, dtype=float)
    N = truncation_for(wave, N)

    def one(xi):
        vals = interior_spectrum(assemble(wave, xi, N))
        return vals.real.max() if vals.size else -np.inf

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(workers) as ex:
            rates = np.array(list(ex.map(one, xi_grid)))
    else:
        rates = np.array([one(x) for x in xi_grid])
    j = int(np.argmax(rates))
    return float(rates[j]), float(xi_grid[j])


def to_csv_rows(m):
    vals, vecs = spectrum(m, vectors=True)
    flags = boundary_flags(m, vecs)
    return [(m.xi, v.real, v.imag, int(f)) for v, f in zip(vals, flags)]
