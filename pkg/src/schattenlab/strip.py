"""Unit-strip boundary machinery: Poisson densities, boundary measures,
set dilation, the doubling inequality, and the convexity-defect estimate.

The strip is {0 < Re z < 1} with boundary lines at Re z = 0 and Re z = 1.
Harmonic measure seen from the interior point gamma0 has the explicit
density sin(gamma0 pi) / (2 (cosh(pi t) - (-1)^k cos(gamma0 pi))) on the
line Re z = k.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .matcore import ComplexMatrix, ValidationError, herm_eig
from .schatten import schatten_norm_from_singular_values, singular_values

# tail truncation for unbounded boundary integrals: the density at |t| = 40
# is below 1e-54, far under every tolerance used here
TAIL_CUT = 40.0

QUAD_ABS_TOL = 1e-10


def _merge(intervals):
    ivs = sorted((float(a), float(b)) for a, b in intervals)
    for a, b in ivs:
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValidationError("interval endpoints must be finite")
        if b < a:
            raise ValidationError("interval [%r, %r] reversed" % (a, b))
    merged = []
    for a, b in ivs:
        if merged and a <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], b))
        else:
            merged.append((a, b))
    return tuple(merged)


@dataclass(frozen=True)
class BoundarySet:
    """Finite union of closed intervals on the two boundary lines."""

    intervals0: tuple = ()
    intervals1: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "intervals0", _merge(self.intervals0))
        object.__setattr__(self, "intervals1", _merge(self.intervals1))

    @staticmethod
    def full(T=TAIL_CUT):
        return BoundarySet(((-T, T),), ((-T, T),))


def poisson_density(gamma0, k, t):
    """Harmonic-measure density on the boundary line Re z = k."""
    if not 0 < gamma0 < 1:
        raise ValidationError("gamma0 must be in (0, 1), got %r" % (gamma0,))
    if k not in (0, 1):
        raise ValidationError("k must be 0 or 1")
    sign = 1.0 if k == 0 else -1.0
    return math.sin(gamma0 * math.pi) / (
        2.0 * (math.cosh(math.pi * t) - sign * math.cos(gamma0 * math.pi)))


def boundary_measure(gamma0, A):
    """Harmonic measure of a boundary set, by adaptive quadrature."""
    total = 0.0
    for k, intervals in ((0, A.intervals0), (1, A.intervals1)):
        for a, b in intervals:
            a = max(a, -TAIL_CUT)
            b = min(b, TAIL_CUT)
            if b <= a:
                continue
            val, err = quad(lambda t: poisson_density(gamma0, k, t), a, b,
                            epsabs=QUAD_ABS_TOL, limit=200)
            total += val
    return total


def dilate(A):
    """Dilation by a factor 2 in the imaginary direction."""
    return BoundarySet(
        tuple((2 * a, 2 * b) for a, b in A.intervals0),
        tuple((2 * a, 2 * b) for a, b in A.intervals1))


def doubling_bound(gamma0):
    """The constant 4 / (1 - |cos(gamma0 pi)|) from chaining the density
    equivalences with the factor-2 estimate for the cosh reference measure."""
    return 4.0 / (1.0 - abs(math.cos(gamma0 * math.pi)))


def doubling_ratio(gamma0, A):
    """measure(2.A) / measure(A) together with its proven upper bound."""
    base = boundary_measure(gamma0, A)
    if base <= 1e-12:
        raise ValidationError("boundary set has near-null measure")
    ratio = boundary_measure(gamma0, dilate(A)) / base
    return ratio, doubling_bound(gamma0)


def cosh_measure(A):
    """Reference measure with density 1/cosh(pi t) on both boundary lines."""
    total = 0.0
    for intervals in (A.intervals0, A.intervals1):
        for a, b in intervals:
            a = max(a, -TAIL_CUT)
            b = min(b, TAIL_CUT)
            if b <= a:
                continue
            val, _ = quad(lambda t: 1.0 / math.cosh(math.pi * t), a, b,
                          epsabs=QUAD_ABS_TOL, limit=200)
            total += val
    return total


@dataclass(frozen=True)
class AnalyticFamily:
    """The analytic family z -> d^((1+alpha) z) x d^((1+alpha)(1-z))."""

    d: object   # PositiveDefiniteMatrix
    x: object   # ComplexMatrix or ndarray
    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValidationError("alpha must be positive")


def family_eval(F, z):
    """Evaluate the analytic family at a strip point, 0 <= Re z <= 1."""
    z = complex(z)
    if not -1e-12 <= z.real <= 1.0 + 1e-12:
        raise ValidationError("Re z = %r outside [0, 1]" % (z.real,))
    s = herm_eig(F.d)
    lam = s.eigenvalues
    v = s.vectors
    c = 1.0 + F.alpha
    left = (v * np.exp(c * z * np.log(lam))) @ v.conj().T
    right = (v * np.exp(c * (1.0 - z) * np.log(lam))) @ v.conj().T
    xm = F.x.mat if hasattr(F.x, "mat") else np.asarray(F.x, dtype=complex)
    return ComplexMatrix(left @ xm @ right)


def boundary_norm_profile(F, q, t_grid):
    """Schatten q-norms of F along both boundary lines at the given t values."""
    t_grid = np.asarray(t_grid, dtype=float)
    norms0 = np.array([schatten_norm_from_singular_values(
        singular_values(family_eval(F, 1j * t)), q) for t in t_grid])
    norms1 = np.array([schatten_norm_from_singular_values(
        singular_values(family_eval(F, 1.0 + 1j * t)), q) for t in t_grid])
    return norms0, norms1


def _gauss_panels(T=12.0, panel=0.5, order=8):
    """Composite Gauss-Legendre nodes and weights on [-T, T]."""
    xg, wg = np.polynomial.legendre.leggauss(order)
    edges = np.arange(-T, T + 0.5 * panel, panel)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        nodes.append(mid + half * xg)
        weights.append(half * wg)
    return np.concatenate(nodes), np.concatenate(weights)


class BoundaryGridCache:
    """Singular values of F and F - F(gamma0) on a fixed boundary grid.

    Lets several q-exponents share one set of matrix evaluations.
    """

    def __init__(self, F, gamma0, T=12.0, panel=1.0, order=8):
        if not 0 < gamma0 < 1:
            raise ValidationError("gamma0 must be in (0, 1)")
        self.gamma0 = gamma0
        self.nodes, wq = _gauss_panels(T, panel, order)
        # work in the eigenbasis of d: F(z) there is the entrywise scaling
        # lam_i^(c z) X'_ij lam_j^(c (1-z)), and Schatten norms are
        # basis-independent
        s = herm_eig(F.d)
        lam, v = s.eigenvalues, s.vectors
        xm = F.x.mat if hasattr(F.x, "mat") else np.asarray(F.x, dtype=complex)
        xp = v.conj().T @ xm @ v
        c = 1.0 + F.alpha
        log_lam = np.log(lam)
        center = (lam ** (c * gamma0))[:, None] * xp * (lam ** (c * (1 - gamma0)))[None, :]
        self.center_sv = singular_values(center)
        self.sv = {}       # k -> list of singular-value arrays of F(k+it)
        self.diff_sv = {}  # k -> same for F(k+it) - F(gamma0)
        self.weights = {}  # k -> Poisson-weighted quadrature weights
        for k in (0, 1):
            dens = np.array([poisson_density(gamma0, k, t) for t in self.nodes])
            self.weights[k] = wq * dens
            base = (lam ** (c * k))[:, None] * xp * (lam ** (c * (1 - k)))[None, :]
            svs, dsvs = [], []
            for t in self.nodes:
                rot = np.exp(1j * c * t * log_lam)
                m = rot[:, None] * base * np.conj(rot)[None, :]
                svs.append(singular_values(m))
                dsvs.append(singular_values(m - center))
            self.sv[k] = svs
            self.diff_sv[k] = dsvs

    def lq_functional(self, q, which):
        """(integral of ||.||_q^q dP)^(1/q) for F or F - F(gamma0)."""
        table = self.sv if which == "F" else self.diff_sv
        acc = 0.0
        for k in (0, 1):
            norms = np.array([schatten_norm_from_singular_values(sv, q)
                              for sv in table[k]])
            acc += float((self.weights[k] * norms ** q).sum())
        return acc ** (1.0 / q)


def convexity_defect(F, gamma0, q, cache=None):
    """Sample upper bound for the complex uniform-convexity constant.

    Returns (||F||^2 - ||F(gamma0)||_q^2) / ||F - F(gamma0)||^2 where both
    boundary functionals use the same fixed quadrature grid.  Degenerate
    (constant) families raise a validation error.
    """
    if not (0 < q <= 2):
        raise ValidationError("q must be in (0, 2], got %r" % (q,))
    if cache is None:
        cache = BoundaryGridCache(F, gamma0)
    dev = cache.lq_functional(q, "diff")
    if dev <= 1e-12:
        raise ValidationError("degenerate family: F is constant on the boundary")
    full = cache.lq_functional(q, "F")
    center = schatten_norm_from_singular_values(cache.center_sv, q)
    return (full ** 2 - center ** 2) / dev ** 2
