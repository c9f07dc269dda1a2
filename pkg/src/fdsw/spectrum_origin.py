"""
Reduced 4x4 spectral problem near the origin of the complex plane.

For small Floquet exponent xi and amplitude a the four eigenvalues of the
linearized operator near 0 are, to the order retained, the roots of

    det(L(xi, a) - lambda I(xi, a)) = p4 l^4 + i p3 l^3 + p2 l^2 + i p1 l + p0

with real p_k = xi^(4-k) q_k.  The sign of the a^2 coefficient of the
quartic's discriminant decides modulational stability.
"""

from dataclasses import dataclass

import numpy as np

from .dispersion import speed_jet, speed_squared, tension
from .errors import IllConditioned, NonRealCoefficient
from .stokes import expansion_coefficients

ROOT_CLASSES = ("TwoRealTwoComplex", "AllComplexDistinct", "AllRealDistinct", "Degenerate")


@dataclass(frozen=True)
class SpectralPencil4:
    L: np.ndarray
    I: np.ndarray
    xi: float
    a: float
    kappa: float
    T: float


@dataclass(frozen=True)
class QuarticCoefficients:
    q: np.ndarray  # q0..q4
    p: np.ndarray  # p0..p4
    delta0: float
    delta1: float
    delta2: float
    root_class: str


def _pencil_arrays(xi, a, kappa, T):
    """Entries of L and I broadcast over kappa; shape kappa.shape + (4, 4)."""
    k = np.asarray(kappa, dtype=float)
    j = speed_jet(k, T)
    c, c1, c2 = np.asarray(j.c), np.asarray(j.c1), np.asarray(j.c2)
    cc = c * c
    h2 = 0.75 * cc / (cc - speed_squared(2 * k, T))
    shape = k.shape + (4, 4)

    L = np.zeros(shape, dtype=complex)
    L[..., 3, 1] += 0.25 * a * (cc + 1)
    L[..., 0, 0] += -1j * xi * k * c1
    L[..., 1, 1] += -1j * xi * k * c1
    L[..., 2, 2] += 1j * xi * c * (cc + 8) / (cc + 4)
    L[..., 2, 3] += 1j * xi * (cc - 4) / (cc + 4)
    L[..., 3, 2] += 1j * xi * (cc - 4) / (cc + 4)
    L[..., 3, 3] += 1j * xi * c**3 / (cc + 4)

    mixed = (-3 * c / (cc + 1) * (2 * h2 * (cc - 1) / (cc + 2) + 1)
             - 0.5 * k * c1 * (cc + 2) / (cc + 1))
    L[..., 0, 2] += 1j * xi * a * mixed * 2
    L[..., 0, 3] += 1j * xi * a * mixed * c
    L31 = c * (6 * h2 * (cc + 1) / (cc + 2) + 0.5 * (cc + 2) + 2 * k * c * c1)
    L41 = 0.25 * (cc**2 + 3 * cc + 4) + 3 * h2 * cc * (cc - 1) / (cc + 2) + 0.5 * k * c**3 * c1
    L[..., 2, 0] += -1j * xi * a * L31 / (cc + 4)
    L[..., 3, 0] += -1j * xi * a * L41 / (cc + 4)

    skew = 0.5 * xi**2 * k * (2 * c1 + k * c2)
    L[..., 0, 1] += skew
    L[..., 1, 0] -= skew

    I = np.zeros(shape, dtype=complex)
    I[...] = np.eye(4)
    A = 1 - 3 * h2 * cc / (cc + 2)
    B = c * (0.25 * cc + 1.5 - 3 * h2)
    I[..., 0, 2] += a * 2 / (cc + 1) * A
    I[..., 0, 3] += a * 2 / (cc + 1) * B
    I[..., 2, 0] += a / (cc + 4) * A
    I[..., 3, 0] += a / (cc + 4) * B
    f = -0.5j * xi * a * k * c * c1 / ((cc + 1)**2 * (cc + 4))
    I[..., 1, 2] += f * 2 * (cc + 4)
    I[..., 1, 3] += f * (cc + 4)
    I[..., 2, 1] += f * (cc + 1)
    I[..., 3, 1] += f * (cc + 1)
    return L, I


def assemble_pencil(xi, a, kappa, medium=0.0):
    """The 4x4 pencil (L, I) at Floquet exponent xi and amplitude a."""
    T = tension(medium)
    expansion_coefficients(kappa, 0.0, 0.0, T)  # resonance checks
    L, I = _pencil_arrays(xi, a, float(kappa), T)
    return SpectralPencil4(L, I, float(xi), float(a), float(kappa), T)


def _poly_det(M):
    """Determinant of a square matrix of polynomials (coefficient arrays,
    lowest degree first) by cofactor expansion."""
    n = len(M)
    if n == 1:
        return M[0][0]
    out = np.zeros(1, dtype=complex)
    for col in range(n):
        minor = [row[:col] + row[col + 1:] for row in M[1:]]
        term = np.convolve(M[0][col], _poly_det(minor))
        if col % 2:
            term = -term
        out = _padd(out, term)
    return out


def _padd(x, y):
    if len(x) < len(y):
        x, y = y, x
    x = x.copy()
    x[:len(y)] += y
    return x


def characteristic(p):
    """Coefficients d0..d4 of det(L - lambda I) in powers of lambda."""
    M = [[np.array([p.L[r, s], -p.I[r, s]]) for s in range(4)] for r in range(4)]
    d = _poly_det(M)
    return np.concatenate([d, np.zeros(5 - len(d))])[:5]


def quartic_discriminant(e0, e1, e2, e3, e4):
    """Discriminant of e4 m^4 + e3 m^3 + e2 m^2 + e1 m + e0.  Works on any
    objects supporting + and * (floats, arrays, numpy Polynomials)."""
    a, b, c, d, e = e4, e3, e2, e1, e0
    return (256 * a**3 * e**3 - 192 * a**2 * b * d * e**2 - 128 * a**2 * c**2 * e**2
            + 144 * a**2 * c * d**2 * e - 27 * a**2 * d**4 + 144 * a * b**2 * c * e**2
            - 6 * a * b**2 * d**2 * e - 80 * a * b * c**2 * d * e + 18 * a * b * c * d**3
            + 16 * a * c**4 * e - 4 * a * c**3 * d**2 - 27 * b**4 * e**2
            + 18 * b**3 * c * d * e - 4 * b**3 * d**3 - 4 * b**2 * c**3 * e + b**2 * c**2 * d**2)


def discriminants(q):
    """Discriminant-type quantities in the q-variables.

    With lambda = i xi m the quartic becomes, after dividing by xi^4,
    q4 m^4 + q3 m^3 - q2 m^2 - q1 m + q0, so delta0 is the discriminant of
    that polynomial.  delta1 and delta2 are the auxiliary quantities that
    separate four real roots m from four complex ones.
    """
    q0, q1, q2, q3, q4 = q
    d0 = quartic_discriminant(q0, -q1, -q2, q3, q4)
    d1 = -8 * q4 * q2 - 3 * q3**2
    d2 = (64 * q4**3 * q0 - 16 * q4**2 * q2**2 - 16 * q4 * q3**2 * q2
          + 16 * q4**2 * q3 * q1 - 3 * q3**4)
    return d0, d1, d2


def classify(d0, d1, d2, tol=0.0):
    if abs(d0) <= tol:
        return "Degenerate"
    if d0 < 0:
        return "TwoRealTwoComplex"
    if d1 < 0 and d2 < 0:
        return "AllRealDistinct"
    return "AllComplexDistinct"


def degeneracy_scale(q):
    q0, q1, q2, q3, q4 = q
    return max(abs(256 * q4**3 * q0**3), abs(27 * q3**4 * q0**2), 1.0)


def quartic_coefficients(p, degeneracy=1e-12, imag_tol=1e-10):
    """Real coefficients p_k, scaled q_k = p_k / xi^(4-k), the discriminant
    quantities and the root class of m = lambda / (i xi)."""
    if p.xi == 0:
        raise ValueError("xi must be nonzero")
    d = characteristic(p)
    raw = np.array([d[0], d[1] / 1j, d[2], d[3] / 1j, d[4]])
    scale = np.abs(raw).max()
    if np.any(np.abs(raw.imag) > imag_tol * max(scale, 1e-300)):
        raise NonRealCoefficient(f"imaginary residue {np.abs(raw.imag).max():.3e}")
    pk = raw.real
    q = np.array([pk[k] / p.xi ** (4 - k) for k in range(5)])
    d0, d1, d2 = discriminants(q)
    tol = degeneracy * degeneracy_scale(q)
    return QuarticCoefficients(q, pk, float(d0), float(d1), float(d2), classify(d0, d1, d2, tol))


def near_origin_eigenvalues(xi, a=None, kappa=None, medium=0.0, rel=1e-8):
    """The four eigenvalues near 0, as roots of det(L - lambda I), sorted by
    imaginary then real part.  Accepts a SpectralPencil4 or (xi, a, kappa)."""
    p = xi if isinstance(xi, SpectralPencil4) else assemble_pencil(xi, a, kappa, medium)
    d = characteristic(p)
    if abs(d[4]) < rel * np.abs(d).max():
        raise IllConditioned(f"leading coefficient {abs(d[4]):.3e} is negligible")
    r = np.roots(d[::-1])
    return r[np.lexsort((r.real, r.imag))]


def _entry_monomials(kappa, T):
    """Split the pencil entries into monomials in (xi, a).  Returns arrays
    indexed [..., row, col, xi degree, a degree]."""
    k = np.asarray(kappa, dtype=float)
    outL = np.zeros(k.shape + (4, 4, 3, 2), dtype=complex)
    outI = np.zeros_like(outL)
    for ja, aval in enumerate((0.0, 1.0)):
        ps = [_pencil_arrays(x, aval, k, T) for x in (0.0, 1.0, -1.0)]
        for out, which in ((outL, 0), (outI, 1)):
            f0, fp, fm = (q[which] for q in ps)
            out[..., 0, ja] = f0
            out[..., 1, ja] = 0.5 * (fp - fm)
            out[..., 2, ja] = 0.5 * (fp + fm) - f0
    for out in (outL, outI):
        out[..., 1] -= out[..., 0]
    return outL, outI


# truncation of the (xi, a, m) coefficient arrays: nothing above xi^4 or
# a^2 can reach the a^2 term of the limit discriminant
_DEG = (5, 3, 5)


def _mul(x, y):
    out = np.zeros(x.shape[:-3] + _DEG, dtype=complex)
    for i, j, k in zip(*np.nonzero(np.any(x != 0, axis=tuple(range(x.ndim - 3))))):
        xs = x[..., i, j, k][..., None, None, None]
        ni, nj, nk = _DEG[0] - i, _DEG[1] - j, _DEG[2] - k
        out[..., i:, j:, k:] += xs * y[..., :ni, :nj, :nk]
    return out


def _tri_det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    out = 0
    for col in range(n):
        minor = [row[:col] + row[col + 1:] for row in M[1:]]
        term = _mul(M[0][col], _tri_det(minor))
        out = out - term if col % 2 else out + term
    return out


def limit_quartic(kappa, medium=0.0):
    """Small-xi limit of det(L - i xi m I) / xi^4 as real coefficients
    e[..., j, k] of a^j m^k, for j <= 2.  Broadcasts over kappa."""
    k, T = np.broadcast_arrays(np.asarray(kappa, dtype=float), np.asarray(tension(medium)))
    if T.ndim == 0:
        T = float(T)
    Lm, Im = _entry_monomials(k, T)
    M = []
    for r in range(4):
        row = []
        for s in range(4):
            e = np.zeros(k.shape + _DEG, dtype=complex)
            e[..., :3, :2, 0] = Lm[..., r, s, :, :]
            e[..., 1:4, :2, 1] = -1j * Im[..., r, s, :, :]
            row.append(e)
        M.append(row)
    D = _tri_det(M)
    body = D[..., 4, :, :]
    low = np.abs(D[..., :4, :, :]).max(axis=(-3, -2, -1))
    ref = np.maximum(np.abs(body).max(axis=(-2, -1)), 1e-300)
    if np.any(low > 1e-9 * ref):
        raise IllConditioned(f"terms below xi^4 do not vanish ({low.max():.2e})")
    return body.real


def _series_mul(x, y):
    """Product of truncated power series in a (last axis, length 3)."""
    out = np.zeros(np.broadcast_shapes(x.shape, y.shape))
    for i in range(3):
        out[..., i:] += x[..., i:i + 1] * y[..., :3 - i]
    return out


def delta_from_pencil(kappa, medium=0.0, xi_probe=None, a_probe=None):
    """a^2 coefficient of the near-origin discriminant.  Negative means
    modulationally unstable.  Broadcasts over kappa.

    By default the coefficient is taken from the exact small-xi limit of the
    pencil, with truncated power series in a.  Given probe values it is
    instead the divided difference (delta0(xi, a) - delta0(xi, 0)) / a^2 at
    those values (scalar kappa only)."""
    if xi_probe is not None or a_probe is not None:
        xi = 1e-4 if xi_probe is None else xi_probe
        a = 1e-3 if a_probe is None else a_probe
        d_a = quartic_coefficients(assemble_pencil(xi, a, kappa, medium)).delta0
        d_0 = quartic_coefficients(assemble_pencil(xi, 0.0, kappa, medium)).delta0
        return (d_a - d_0) / a**2
    e = limit_quartic(kappa, medium)
    co = [e[..., :, k] for k in range(5)]

    class S:
        """Power series in a truncated after a^2."""

        def __init__(self, v):
            self.v = v

        def __add__(self, o):
            return S(self.v + o.v)

        def __sub__(self, o):
            return S(self.v - o.v)

        def __mul__(self, o):
            return S(self.v * o) if np.isscalar(o) else S(_series_mul(self.v, o.v))

        __rmul__ = __mul__

        def __pow__(self, n):
            r = self
            for _ in range(n - 1):
                r = r * self
            return r

    d = quartic_discriminant(*[S(x) for x in co]).v
    out = d[..., 2]
    return float(out) if np.ndim(out) == 0 else out


def pencil_to_json(p, path=None):
    import json
    qc = quartic_coefficients(p)
    out = {
        "xi": p.xi, "a": p.a, "kappa": p.kappa, "T": p.T,
        "L": [[[z.real, z.imag] for z in row] for row in p.L],
        "I": [[[z.real, z.imag] for z in row] for row in p.I],
        "q": qc.q.tolist(), "p": qc.p.tolist(),
        "delta0": qc.delta0, "delta1": qc.delta1, "delta2": qc.delta2,
        "root_class": qc.root_class,
    }
    if path is not None:
        from ._io import atomic_write
        atomic_write(path, json.dumps(out, indent=2, sort_keys=True))
    return out
