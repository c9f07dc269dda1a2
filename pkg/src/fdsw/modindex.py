"""
Modulational instability indices.

    i1 = (kappa c)''                 extremum of the group velocity
    i2 = ((kappa c)')^2 - 1          group velocity equal to the long-wave speed
    i3 = c^2(kappa) - c^2(2 kappa)   second-harmonic resonance
    delta = i1 i2 i4 / i3

delta is the a^2 coefficient of the discriminant of the reduced quartic near
the origin of the spectral plane, evaluated from the exact small-xi limit of
the 4x4 pencil (see spectrum_origin).  i4 is defined from it as
delta i3 / (i1 i2), with removable zeros of i1 i2 filled in by symmetric
averaging.  Negative delta means modulational instability.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .dispersion import group_velocity_jet, speed_squared, tension
from .errors import NoSignChange, SecondHarmonicResonance
from .spectrum_origin import delta_from_pencil

EPS_RES = 1e-8
T_EXCLUDED = 1.0 / 3.0
T_EXCLUDED_TOL = 1e-9
XTOL = 1e-10
_REMOVABLE = 1e-7
INDEX_NAMES = ("i1", "i2", "i3", "i4")
CLASSES = ("ModulationallyUnstable", "StableNearOrigin", "Indeterminate")


@dataclass(frozen=True)
class IndexBundle:
    i1: float
    i2: float
    i3: float
    i4: float
    delta: float
    kappa: float
    T: float


def _basic(kappa, T):
    g1, g2 = group_velocity_jet(kappa, T)
    i1 = np.asarray(g2, dtype=float)
    i2 = np.asarray(g1, dtype=float) ** 2 - 1.0
    i3 = speed_squared(kappa, T) - speed_squared(2 * np.asarray(kappa), T)
    return i1, i2, np.asarray(i3, dtype=float)


def index_arrays(kappa, medium=0.0):
    """Vectorized (i1, i2, i3, i4, delta) over an array of wave numbers.
    No resonance checks; i4 is NaN where i3 vanishes exactly."""
    k, T = np.broadcast_arrays(np.atleast_1d(np.asarray(kappa, dtype=float)),
                               np.asarray(tension(medium), dtype=float))
    i1, i2, i3 = _basic(k, T)
    with np.errstate(divide="ignore", invalid="ignore"):
        delta = np.atleast_1d(delta_from_pencil(k, T))
        i4 = delta * i3 / (i1 * i2)
    # zeros of i1 i2 are zeros of delta too; average across them
    prod = np.abs(i1 * i2)
    bad = prod < _REMOVABLE * np.maximum(np.abs(i1) + np.abs(i2), 1e-300) ** 2
    if np.any(bad):
        h = 1e-4
        side = []
        for f in (1 - h, 1 + h):
            kk, tt = k[bad] * f, T[bad]
            j1, j2, j3 = _basic(kk, tt)
            side.append(np.atleast_1d(delta_from_pencil(kk, tt)) * j3 / (j1 * j2))
        i4[bad] = 0.5 * (side[0] + side[1])
    return i1, i2, i3, i4, delta


def indices(kappa, medium=0.0):
    """The four indices and delta at a single wave number."""
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    T = tension(medium)
    i1, i2, i3, i4, delta = (float(x[0]) for x in index_arrays(kappa, T))
    if abs(i3) < EPS_RES * speed_squared(kappa, T):
        raise SecondHarmonicResonance(f"i3 = {i3:.3e} at kappa={kappa}, T={T}")
    return IndexBundle(i1, i2, i3, i4, delta, float(kappa), T)


def _index(name, T):
    j = INDEX_NAMES.index(name)
    return lambda k: float(index_arrays(k, T)[j][0])


def default_bracket(medium=0.0):
    """(0.5, 3) scaled by 1/sqrt(T) for T > 1, where the root moves like
    1/sqrt(T)."""
    T = tension(medium)
    s = max(1.0, np.sqrt(T))
    return 0.5 / s, 3.0 / s


def index_roots(medium=0.0, bracket=(0.1, 10.0), points=10_000, names=INDEX_NAMES):
    """Sign-change roots of each index on a log-uniform scan of the bracket,
    refined by Brent's method.  Returns {name: [kappa, ...]}."""
    T = tension(medium)
    k = np.geomspace(bracket[0], bracket[1], points)
    vals = dict(zip(INDEX_NAMES, index_arrays(k, T)[:4]))
    out = {}
    for name in names:
        v = vals[name]
        roots = []
        for j in np.nonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0)[0]:
            roots.append(brentq(_index(name, T), k[j], k[j + 1], xtol=XTOL))
        out[name] = roots
    return out


def critical_wavenumber(medium=0.0, bracket=None, points=2048):
    """Root of i4 in the bracket.  For 0 < T < 1/3 every index can change
    sign, and a list of (name, kappa) pairs is returned instead."""
    T = tension(medium)
    if abs(T - T_EXCLUDED) < T_EXCLUDED_TOL:
        raise ValueError("T = 1/3 is excluded: the index is inconclusive there")
    if bracket is None:
        bracket = default_bracket(T)
    lo, hi = bracket
    if 0 < T < T_EXCLUDED:
        roots = index_roots(T, bracket, points)
        found = sorted((k, n) for n, r in roots.items() for k in r)
        if not found:
            raise NoSignChange(f"no index changes sign on {bracket}")
        return [(n, k) for k, n in found]
    f = _index("i4", T)
    flo, fhi = f(lo), f(hi)
    if flo * fhi > 0:
        raise NoSignChange(f"i4 has the same sign at both ends of {bracket}")
    return brentq(f, lo, hi, xtol=XTOL)


# ---------------------------------------------------------------- diagram

@dataclass(frozen=True)
class DiagramCell:
    kappa: float
    kappa_sqrtT: float
    i1: float
    i2: float
    i3: float
    i4: float
    delta: float
    classification: str
    tags: tuple


@dataclass(frozen=True)
class Diagram:
    kappa: np.ndarray
    kappa_sqrtT: np.ndarray
    cells: list
    curves: dict  # name -> list of polylines [(kappa, kappa_sqrtT), ...]


def classify(delta, scale):
    eps = 1e-12 * scale
    if delta < -eps:
        return "ModulationallyUnstable"
    if delta > eps:
        return "StableNearOrigin"
    return "Indeterminate"


def stability_diagram(kappa_range=(0.05, 4.0), y_range=(0.0, 2.0), resolution=64,
                      workers=None):
    """Classify a resolution x resolution grid in (kappa, kappa sqrt(T)) and
    trace the zero sets of i1..i4 by marching squares with Brent refinement
    along cell edges."""
    if resolution < 64:
        raise ValueError("resolution must be at least 64")
    if kappa_range[0] <= 0 or y_range[0] < 0:
        raise ValueError("ranges must be positive")
    kap = np.linspace(*kappa_range, resolution)
    y = np.linspace(*y_range, resolution)
    K, Y = np.meshgrid(kap, y)
    vals = _evaluate(K, Y, workers)  # (5, ny, nk)
    i1, i2, i3, i4, delta = vals

    ad = np.abs(delta)
    pad = np.pad(ad, 1, mode="edge")
    local = np.max([pad[1 + di:1 + di + ad.shape[0], 1 + dj:1 + dj + ad.shape[1]]
                    for di in (-1, 0, 1) for dj in (-1, 0, 1)], axis=0)
    signs = {n: np.sign(v) for n, v in zip(INDEX_NAMES, vals[:4])}
    cells = []
    for r in range(len(y)):
        for j in range(len(kap)):
            tags = []
            for n in INDEX_NAMES:
                s = signs[n]
                nb = s[max(r - 1, 0):r + 2, max(j - 1, 0):j + 2]
                if np.any(nb != s[r, j]):
                    tags.append(n)
            cls = classify(delta[r, j], local[r, j])
            if "i3" in tags:
                cls = "Indeterminate"
            cells.append(DiagramCell(float(kap[j]), float(y[r]), *(float(v[r, j]) for v in vals),
                                     cls, tuple(tags)))
    curves = {n: _trace(kap, y, vals[m], n) for m, n in enumerate(INDEX_NAMES)}
    return Diagram(kap, y, cells, curves)


def _evaluate(K, Y, workers=None):
    """Index arrays on the grid, shape (5, ny, nk).  Rows are independent."""
    T = (Y / K) ** 2

    def row(r):
        return np.array(index_arrays(K[r], T[r]))

    if workers and workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(row, range(K.shape[0])))
    else:
        parts = [row(r) for r in range(K.shape[0])]
    return np.stack(parts, axis=1)


def _point(k, T):
    return [float(x[0]) for x in index_arrays(k, T)]


def _trace(kap, y, v, name):
    """Zero-level polylines of one index on the grid."""
    j_of = {n: m for m, n in enumerate(INDEX_NAMES)}[name]

    def f(k, yy):
        return _point(k, (yy / k) ** 2)[j_of]

    seg = []
    ny, nk = v.shape
    cache = {}

    def edge_point(a, b):
        key = (min(a, b), max(a, b))
        if key in cache:
            return cache[key]
        (r0, c0), (r1, c1) = key
        va, vb = v[r0, c0], v[r1, c1]
        if not (np.isfinite(va) and np.isfinite(vb)):
            cache[key] = None
            return None
        if r0 == r1:
            g = lambda k: f(k, y[r0])  # noqa: E731
            lo, hi = kap[c0], kap[c1]
            try:
                root = brentq(g, lo, hi, xtol=1e-10)
            except ValueError:
                root = lo + (hi - lo) * va / (va - vb)
            pt = (float(root), float(y[r0]))
        else:
            g = lambda yy: f(kap[c0], yy)  # noqa: E731
            lo, hi = y[r0], y[r1]
            try:
                root = brentq(g, lo, hi, xtol=1e-10)
            except ValueError:
                root = lo + (hi - lo) * va / (va - vb)
            pt = (float(kap[c0]), float(root))
        cache[key] = pt
        return pt

    s = np.sign(v)
    for r in range(ny - 1):
        for c in range(nk - 1):
            corners = [(r, c), (r, c + 1), (r + 1, c + 1), (r + 1, c)]
            pts = []
            for a, b in zip(corners, corners[1:] + corners[:1]):
                if s[a] * s[b] < 0:
                    p = edge_point(a, b)
                    if p is not None:
                        pts.append(p)
            if len(pts) == 2:
                seg.append((pts[0], pts[1]))
            elif len(pts) == 4:
                seg.append((pts[0], pts[1]))
                seg.append((pts[2], pts[3]))
    return _chain(seg)


def _chain(segments):
    """Join segments sharing endpoints into polylines."""
    def key(p):
        return (round(p[0], 9), round(p[1], 9))

    adj = {}
    for i, (p, q) in enumerate(segments):
        adj.setdefault(key(p), []).append(i)
        adj.setdefault(key(q), []).append(i)
    used = [False] * len(segments)
    lines = []
    for start in range(len(segments)):
        if used[start]:
            continue
        used[start] = True
        p, q = segments[start]
        line = [p, q]
        for direction in (1, 0):
            while True:
                end = line[-1] if direction else line[0]
                nxt = None
                for i in adj.get(key(end), []):
                    if not used[i]:
                        nxt = i
                        break
                if nxt is None:
                    break
                used[nxt] = True
                a, b = segments[nxt]
                other = b if key(a) == key(end) else a
                if direction:
                    line.append(other)
                else:
                    line.insert(0, other)
        lines.append(line)
    return lines


def curve_crossing(name, kappa, y_bracket, samples=400):
    """kappa sqrt(T) values where index `name` vanishes along a vertical
    line of the diagram."""
    j = INDEX_NAMES.index(name)
    ys = np.linspace(*y_bracket, samples)
    v = np.array([_point(kappa, (yy / kappa) ** 2)[j] for yy in ys])
    out = []
    for i in np.nonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0)[0]:
        g = lambda yy: _point(kappa, (yy / kappa) ** 2)[j]  # noqa: E731
        out.append(brentq(g, ys[i], ys[i + 1], xtol=1e-12))
    return out


def diagram_csv(d):
    lines = ["kappa,kappa_sqrtT,i1,i2,i3,i4,delta,class"]
    for c in d.cells:
        lines.append(",".join([repr(c.kappa), repr(c.kappa_sqrtT), repr(c.i1), repr(c.i2),
                               repr(c.i3), repr(c.i4), repr(c.delta), c.classification]))
    return "\n".join(lines) + "\n"


def diagram_svg(d, width=640, height=480):
    from ._svg import Figure
    fig = Figure(width, height, (d.kappa[0], d.kappa[-1]), (d.kappa_sqrtT[0], d.kappa_sqrtT[-1]),
                 xlabel="kappa", ylabel="kappa sqrt(T)")
    colors = {"ModulationallyUnstable": "#f4c7c3", "StableNearOrigin": "#d9ead3",
              "Indeterminate": "#dddddd"}
    dk = d.kappa[1] - d.kappa[0]
    dy = d.kappa_sqrtT[1] - d.kappa_sqrtT[0]
    for c in d.cells:
        fig.rect(c.kappa - dk / 2, c.kappa_sqrtT - dy / 2, dk, dy, colors[c.classification])
    styles = {"i1": "#1155cc", "i2": "#38761d", "i3": "#990000", "i4": "#000000"}
    for name, lines in d.curves.items():
        for ln in lines:
            fig.polyline(ln, styles[name])
        if lines:
            fig.label(lines[0][len(lines[0]) // 2], name)
    return fig.render()
