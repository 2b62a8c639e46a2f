"""Dense complex linear algebra and functional calculus on small matrices.

Everything here operates on square complex matrices of dimension at most 64.
The eigensolver is a cyclic Jacobi iteration for Hermitian matrices: slow but
unconditionally stable and bit-reproducible across platforms, which is what
the rest of the package needs.
"""

import numpy as np

MAX_DIM = 64

# Jacobi iteration budget and convergence tolerance (relative to ||A||_F)
JACOBI_MAX_SWEEPS = 100
JACOBI_TOL = 1e-13


class ValidationError(ValueError):
    """Raised when an input matrix violates a structural precondition."""


class DomainError(ValueError):
    """Raised when a scalar function is applied outside its domain."""


class NumericalError(RuntimeError):
    """Raised when an iterative routine fails to converge."""


class ComplexMatrix:
    """Immutable square complex matrix with finite entries, dim <= 64."""

    __slots__ = ("_m",)

    def __init__(self, entries):
        m = np.array(entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError("expected a square matrix, got shape %s" % (m.shape,))
        n = m.shape[0]
        if n < 1 or n > MAX_DIM:
            raise ValidationError("dimension %d outside [1, %d]" % (n, MAX_DIM))
        if not np.all(np.isfinite(m)):
            raise ValidationError("matrix has non-finite entries")
        m.setflags(write=False)
        self._m = m

    @property
    def mat(self):
        return self._m

    @property
    def dim(self):
        return self._m.shape[0]

    def adjoint(self):
        return type(self)(self._m.conj().T) if type(self) is ComplexMatrix \
            else ComplexMatrix(self._m.conj().T)

    def __repr__(self):
        return "%s(dim=%d)" % (type(self).__name__, self.dim)


class HermitianMatrix(ComplexMatrix):
    """Square matrix with A = A* up to 1e-12 relative."""

    __slots__ = ()

    def __init__(self, entries):
        super().__init__(entries)
        m = self._m
        scale = 1.0 + np.abs(m).max()
        dev = np.abs(m - m.conj().T).max()
        if dev > 1e-12 * scale:
            raise ValidationError(
                "matrix is not Hermitian (deviation %.3e, allowed %.3e)"
                % (dev, 1e-12 * scale))


class SpectralDecomposition:
    """Eigenvalues (ascending) and a unitary matrix of eigenvectors."""

    __slots__ = ("eigenvalues", "vectors")

    def __init__(self, eigenvalues, vectors):
        lam = np.asarray(eigenvalues, dtype=float)
        v = np.asarray(vectors, dtype=complex)
        if np.any(np.diff(lam) < 0):
            raise ValidationError("eigenvalues must be nondecreasing")
        n = lam.shape[0]
        ortho = np.abs(v.conj().T @ v - np.eye(n)).max()
        if ortho > 1e-10:
            raise ValidationError("eigenvector matrix not unitary (%.3e)" % ortho)
        lam.setflags(write=False)
        v.setflags(write=False)
        self.eigenvalues = lam
        self.vectors = v

    def reconstruct(self):
        v = self.vectors
        return (v * self.eigenvalues) @ v.conj().T


class PositiveDefiniteMatrix(HermitianMatrix):
    """Hermitian matrix with min eigenvalue > 1e-12 * max eigenvalue.

    The spectral decomposition computed for the positivity check is cached
    and reused by the functional-calculus routines.
    """

    __slots__ = ("_spectral",)

    def __init__(self, entries):
        super().__init__(entries)
        lam, v = _jacobi(self.mat)
        s = SpectralDecomposition(lam, v)
        if lam[0] <= 1e-12 * lam[-1] or lam[0] <= 0.0:
            raise ValidationError(
                "matrix is not positive definite (min eig %.3e, max eig %.3e)"
                % (lam[0], lam[-1]))
        self._spectral = s

    @classmethod
    def from_spectral(cls, eigenvalues, vectors):
        """Build U diag(lam) U* directly from known positive spectral data.

        Skips the redundant re-diagonalization; used by generators that
        construct d from an explicit spectrum and unitary.
        """
        lam = np.asarray(eigenvalues, dtype=float)
        if np.any(lam <= 0.0) or lam.min() <= 1e-12 * lam.max():
            raise ValidationError("spectrum not strictly positive definite")
        order = np.argsort(lam, kind="stable")
        lam = lam[order]
        v = np.asarray(vectors, dtype=complex)[:, order]
        m = (v * lam) @ v.conj().T
        m = 0.5 * (m + m.conj().T)
        obj = cls.__new__(cls)
        HermitianMatrix.__init__(obj, m)
        obj._spectral = SpectralDecomposition(lam, v)
        return obj

    @property
    def spectral(self):
        return self._spectral


def _as_array(a):
    return a.mat if isinstance(a, ComplexMatrix) else np.asarray(a, dtype=complex)


def _jacobi(H, want_vectors=True):
    """Cyclic Jacobi diagonalization of a Hermitian matrix.

    Returns (eigenvalues ascending, unitary of eigenvectors or None).
    """
    n = H.shape[0]
    A = np.array(H, dtype=complex)
    A = 0.5 * (A + A.conj().T)
    V = np.eye(n, dtype=complex) if want_vectors else None
    if n == 1:
        return np.array([A[0, 0].real]), V

    # normalize by the largest entry so that squared magnitudes never
    # underflow for matrices far from unit scale
    amax = np.abs(A).max()
    if amax == 0.0:
        return np.zeros(n), V
    A /= amax

    fro = np.linalg.norm(A)
    tol = JACOBI_TOL * fro
    skip = tol / n

    offmask = ~np.eye(n, dtype=bool)
    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.sqrt((np.abs(A[offmask]) ** 2).sum())
        if off <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = abs(apq)
                if r <= skip:
                    continue
                u = apq / r
                tau = (A[q, q].real - A[p, p].real) / (2.0 * r)
                # stable small root of t^2 - 2 tau t - 1 = 0
                t = -1.0 / (tau + np.hypot(tau, 1.0)) if tau >= 0.0 \
                    else 1.0 / (np.hypot(tau, 1.0) - tau)
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                su = s * u
                suc = s * np.conj(u)
                # rows: A <- G* A with G = [[c, -su], [suc, c]]
                rp = A[p, :].copy()
                rq = A[q, :]
                A[p, :] = c * rp + su * rq
                A[q, :] = c * rq - suc * rp
                # columns: A <- A G
                cp = A[:, p].copy()
                cq = A[:, q]
                A[:, p] = c * cp + suc * cq
                A[:, q] = c * cq - su * cp
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                if want_vectors:
                    vp = V[:, p].copy()
                    vq = V[:, q]
                    V[:, p] = c * vp + suc * vq
                    V[:, q] = c * vq - su * vp
    else:
        raise NumericalError(
            "Jacobi iteration did not converge in %d sweeps" % JACOBI_MAX_SWEEPS)

    lam = amax * np.diagonal(A).real.copy()
    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    if want_vectors:
        V = V[:, order]
    return lam, V


def herm_eig(A):
    """Diagonalize a Hermitian matrix by cyclic Jacobi rotations."""
    if isinstance(A, PositiveDefiniteMatrix):
        return A.spectral
    if not isinstance(A, HermitianMatrix):
        A = HermitianMatrix(_as_array(A))
    lam, v = _jacobi(A.mat)
    return SpectralDecomposition(lam, v)


def matrix_function(S, f):
    """Apply a real scalar function to a spectral decomposition: V f(L) V*."""
    try:
        vals = np.array([float(f(lv)) for lv in S.eigenvalues])
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise DomainError("scalar function undefined on the spectrum: %s" % exc)
    if not np.all(np.isfinite(vals)):
        bad = S.eigenvalues[~np.isfinite(vals)]
        raise DomainError("scalar function non-finite at eigenvalue(s) %s" % bad)
    v = S.vectors
    m = (v * vals) @ v.conj().T
    return HermitianMatrix(0.5 * (m + m.conj().T))


def positive_power(d, t):
    """d**t for positive definite d, via the cached eigendecomposition."""
    s = d.spectral if isinstance(d, PositiveDefiniteMatrix) else herm_eig(d)
    lam = s.eigenvalues ** t
    v = s.vectors
    m = (v * lam) @ v.conj().T
    return 0.5 * (m + m.conj().T)


def polar_decompose(A):
    """Polar decomposition A = U P with P = (A*A)^(1/2) positive.

    U is a partial isometry with U*U the orthogonal projection onto the
    range of P; rank-deficient input is handled on its support.
    """
    m = _as_array(A)
    n = m.shape[0]
    lam, w = _jacobi(m.conj().T @ m)
    sig = np.sqrt(np.clip(lam, 0.0, None))
    P = (w * sig) @ w.conj().T
    P = 0.5 * (P + P.conj().T)
    smax = sig.max() if n else 0.0
    inv = np.where(sig > 1e-13 * (smax + 1e-300), 1.0 / np.where(sig == 0, 1.0, sig), 0.0)
    U = m @ ((w * inv) @ w.conj().T)
    return U, P


def imaginary_power(d, h):
    """The unitary d^(ih) = V diag(exp(i h log lam)) V* for d > 0."""
    s = d.spectral if isinstance(d, PositiveDefiniteMatrix) else herm_eig(d)
    lam = s.eigenvalues
    if np.any(lam <= 0.0):
        raise DomainError("imaginary power needs a strictly positive spectrum")
    phases = np.exp(1j * h * np.log(lam))
    v = s.vectors
    return ComplexMatrix((v * phases) @ v.conj().T)


def anticommutator(d, x):
    """dx + xd."""
    dm, xm = _as_array(d), _as_array(x)
    if dm.shape != xm.shape:
        raise ValidationError("dimension mismatch: %s vs %s" % (dm.shape, xm.shape))
    return ComplexMatrix(dm @ xm + xm @ dm)


def commutator(d, x):
    """dx - xd."""
    dm, xm = _as_array(d), _as_array(x)
    if dm.shape != xm.shape:
        raise ValidationError("dimension mismatch: %s vs %s" % (dm.shape, xm.shape))
    return ComplexMatrix(dm @ xm - xm @ dm)
