"""Density matrices: construction, validation, composition and reduction."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, ValidationError
from .su2 import HalfInteger

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
NORM_TOL = 1e-8


@dataclass(frozen=True)
class BipartiteShape:
    """Two spins ``j1`` and ``j2``; product basis index ``(j1-m1)*n2 + (j2-m2)``."""

    j1: HalfInteger
    j2: HalfInteger

    def __post_init__(self):
        object.__setattr__(self, "j1", HalfInteger.parse(self.j1))
        object.__setattr__(self, "j2", HalfInteger.parse(self.j2))
        if self.j1.twice < 0 or self.j2.twice < 0:
            raise ValueError("spins must be non-negative")

    @classmethod
    def parse(cls, text):
        """``"1/2,1"`` -> BipartiteShape(1/2, 1)."""
        a, b = str(text).split(",")
        return cls(HalfInteger.parse(a), HalfInteger.parse(b))

    @property
    def n1(self):
        return self.j1.dim

    @property
    def n2(self):
        return self.j2.dim

    @property
    def n(self):
        return self.n1 * self.n2

    def __str__(self):
        return f"{self.j1},{self.j2}"


@dataclass(frozen=True)
class Violation:
    invariant: str
    magnitude: float

    def __str__(self):
        return f"{self.invariant} violated by {self.magnitude:.3g}"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def names(self):
        return [v.invariant for v in self.violations]

    def __str__(self):
        if self.ok:
            return "valid density matrix"
        return "; ".join(str(v) for v in self.violations)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated density matrix.  Build with :func:`validate` or the helpers."""

    entries: np.ndarray
    shape: BipartiteShape | None = None

    def __post_init__(self):
        arr = np.array(self.entries, dtype=complex)
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)
        if self.shape is not None and self.shape.n != arr.shape[0]:
            raise DimensionError(f"shape {self.shape} implies dimension {self.shape.n}, matrix is {arr.shape[0]}")

    @property
    def dim(self):
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def with_shape(self, shape):
        return DensityMatrix(self.entries, shape)


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self):
        vec = np.array(self.amplitudes, dtype=complex).ravel()
        vec.flags.writeable = False
        object.__setattr__(self, "amplitudes", vec)

    @property
    def dim(self):
        return self.amplitudes.shape[0]


def check(matrix, hermitian_tol=HERMITIAN_TOL, trace_tol=TRACE_TOL, psd_tol=PSD_TOL):
    """Report every violated density-matrix invariant with its magnitude."""
    m = np.asarray(matrix, dtype=complex)
    report = ValidationReport()
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        report.violations.append(Violation("square", float("inf")))
        return report
    if not np.all(np.isfinite(m)):
        report.violations.append(Violation("finite", float("inf")))
        return report
    herm = float(np.abs(m - m.conj().T).max())
    if herm > hermitian_tol:
        report.violations.append(Violation("hermitian", herm))
    tr = float(abs(np.trace(m) - 1.0))
    if tr > trace_tol:
        report.violations.append(Violation("trace", tr))
    lowest = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])
    if lowest < -psd_tol:
        report.violations.append(Violation("positivity", -lowest))
    return report


def validate(matrix, tol=None, shape=None, *, hermitian_tol=HERMITIAN_TOL,
             trace_tol=TRACE_TOL, psd_tol=PSD_TOL):
    """Return a :class:`DensityMatrix` or raise :class:`ValidationError`.

    ``tol``, when given, replaces all three tolerances at once.
    """
    if tol is not None:
        hermitian_tol = trace_tol = psd_tol = tol
    report = check(matrix, hermitian_tol, trace_tol, psd_tol)
    if not report.ok:
        raise ValidationError(str(report), report)
    return DensityMatrix(np.asarray(matrix, dtype=complex), shape)


def from_pure(psi, norm_tol=NORM_TOL):
    """``|psi><psi|`` for a normalized vector."""
    vec = psi.amplitudes if isinstance(psi, PureState) else np.asarray(psi, dtype=complex).ravel()
    norm = np.linalg.norm(vec)
    if abs(norm - 1.0) > norm_tol:
        raise ValidationError(f"state vector norm is {norm:.12g}, expected 1",
                              ValidationReport([Violation("norm", abs(norm - 1.0))]))
    vec = vec / norm
    return DensityMatrix(np.outer(vec, vec.conj()))


def maximally_mixed(dim):
    return DensityMatrix(np.eye(dim, dtype=complex) / dim)


def bell_state():
    """``(|++> + |-->)/sqrt 2`` for two spin-1/2 particles."""
    vec = np.zeros(4, dtype=complex)
    vec[0] = vec[3] = 1.0 / np.sqrt(2.0)
    return from_pure(vec).with_shape(BipartiteShape(HalfInteger(1), HalfInteger(1)))


def tensor_product(rho1, rho2):
    """Kronecker product with the first factor as the major index."""
    out = np.kron(np.asarray(rho1), np.asarray(rho2))
    shape = None
    if isinstance(rho1, DensityMatrix) and isinstance(rho2, DensityMatrix):
        j1, j2 = HalfInteger(rho1.dim - 1), HalfInteger(rho2.dim - 1)
        shape = BipartiteShape(j1, j2)
    return DensityMatrix(out, shape)


def partial_trace(rho, shape, keep="first"):
    """Reduce a bipartite state to the subsystem named by ``keep``."""
    m = np.asarray(rho)
    if m.shape[0] != shape.n:
        raise DimensionError(f"matrix dimension {m.shape[0]} does not match shape {shape} (n={shape.n})")
    t = m.reshape(shape.n1, shape.n2, shape.n1, shape.n2)
    if keep == "first":
        return DensityMatrix(np.einsum("ajbj->ab", t))
    if keep == "second":
        return DensityMatrix(np.einsum("iaib->ab", t))
    raise ValueError(f"keep must be 'first' or 'second', got {keep!r}")


def random_density(dim, rank=None, seed=0):
    """Ginibre-induced random state ``G G^dagger / Tr(G G^dagger)`` with ``G`` of shape dim x rank."""
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must satisfy 1 <= rank <= dim, got rank={rank}, dim={dim}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    m = 0.5 * (m + m.conj().T)
    return DensityMatrix(m / np.trace(m).real)


def random_unitary(dim, rng):
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def spectrum(rho):
    """Real eigenvalues in descending order (Hermitian solver)."""
    m = np.asarray(rho)
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))[::-1]


def eigenframe(rho):
    """Unitary whose columns are eigenvectors of ``rho``, eigenvalues descending."""
    m = np.asarray(rho)
    _, vecs = np.linalg.eigh(0.5 * (m + m.conj().T))
    return vecs[:, ::-1]


def conjugate(rho, u):
    """``u rho u^dagger`` as a new density matrix (keeps the bipartite shape)."""
    m = np.asarray(rho)
    out = u @ m @ u.conj().T
    out = 0.5 * (out + out.conj().T)
    shape = rho.shape if isinstance(rho, DensityMatrix) else None
    return DensityMatrix(out, shape)
