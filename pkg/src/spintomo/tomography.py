"""Forward maps from density matrices to spin tomograms, and the inverse
reconstruction by integration over the rotation group."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import DimensionError, ReconstructionError, ValidationError, ZeroProbabilityError
from .state import BipartiteShape, DensityMatrix, validate
from .su2 import GROUP_VOLUME, EulerAngles, HalfInteger, wigner_3j, wigner_D

UNITARY_TOL = 1e-12
NORMALIZATION_TOL = 1e-10
# clamp-and-renormalize only below this probability deficit
RENORMALIZE_TOL = 1e-9
CONDITION_EPS = 1e-12


@dataclass(frozen=True, eq=False)
class UnitaryFrame:
    """A measurement basis given by the columns of an ``n x n`` unitary."""

    matrix: np.ndarray

    def __post_init__(self):
        u = np.array(self.matrix, dtype=complex)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise DimensionError(f"frame must be square, got shape {u.shape}")
        err = float(np.abs(u.conj().T @ u - np.eye(u.shape[0])).max())
        if err > UNITARY_TOL * max(1, u.shape[0]):
            raise ValidationError(f"frame is not unitary (max |U^dag U - I| = {err:.3g})")
        u.flags.writeable = False
        object.__setattr__(self, "matrix", u)

    @property
    def n(self):
        return self.matrix.shape[0]

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n, dtype=complex))

    @classmethod
    def from_angles(cls, j, angles):
        return cls(wigner_D(j, angles))

    @classmethod
    def product(cls, j1, angles1, j2, angles2):
        return cls(np.kron(wigner_D(j1, angles1), wigner_D(j2, angles2)))


def clean_probabilities(p, tol=RENORMALIZE_TOL):
    """Clamp round-off negatives to zero and renormalize.

    Anything farther than ``tol`` from a normalized non-negative vector is
    rejected instead of silently repaired.
    """
    p = np.asarray(p, dtype=float)
    lowest = float(p.min())
    if lowest < -tol:
        raise ValidationError(f"negative probability {lowest:.3g}")
    total = float(p.sum())
    if abs(total - 1.0) > tol:
        raise ValidationError(f"probabilities sum to {total!r}, deficit {abs(total - 1.0):.3g}")
    p = np.clip(p, 0.0, 1.0)
    return p / p.sum()


@dataclass(frozen=True, eq=False)
class SpinTomogram:
    """Distribution of the spin projection ``m = j, ..., -j`` in a frame.

    ``frame`` is either :class:`EulerAngles` (psi canonicalized to 0) or a
    :class:`UnitaryFrame`.
    """

    j: HalfInteger
    frame: object
    probabilities: np.ndarray

    def __post_init__(self):
        p = clean_probabilities(self.probabilities)
        if p.shape != (self.j.dim,):
            raise DimensionError(f"spin {self.j} needs {self.j.dim} probabilities, got {p.shape}")
        p.flags.writeable = False
        object.__setattr__(self, "probabilities", p)

    def __getitem__(self, m):
        m = HalfInteger.parse(m)
        return self.probabilities[(self.j.twice - m.twice) // 2]

    def projections(self):
        return self.j.projections()


@dataclass(frozen=True, eq=False)
class JointTomogram:
    """Joint distribution of ``(m1, m2)``, both axes in descending order."""

    shape: BipartiteShape
    frame: object
    probabilities: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        if p.shape != (self.shape.n1, self.shape.n2):
            raise DimensionError(f"shape {self.shape} needs a {self.shape.n1}x{self.shape.n2} table, got {p.shape}")
        p = clean_probabilities(p)
        p.flags.writeable = False
        object.__setattr__(self, "probabilities", p)

    def __getitem__(self, key):
        m1, m2 = (HalfInteger.parse(x) for x in key)
        return self.probabilities[(self.shape.j1.twice - m1.twice) // 2, (self.shape.j2.twice - m2.twice) // 2]


def _matrix(rho):
    return np.asarray(rho.entries if isinstance(rho, DensityMatrix) else rho, dtype=complex)


def _require_dim(m, n, what):
    if m.shape[0] != n:
        raise DimensionError(f"density matrix has dimension {m.shape[0]}, {what} needs {n}")


def spin_tomogram(rho, j, angles):
    """``omega(m, n) = <j m| D^dagger rho D |j m>`` for the direction of ``angles``."""
    j = HalfInteger.parse(j)
    m = _matrix(rho)
    _require_dim(m, j.dim, f"spin {j}")
    frame = angles.with_psi(0.0)
    probs = _backend.kernels.rotated_diagonal(wigner_D(j, frame), m)
    return SpinTomogram(j, frame, probs)


def unitary_tomogram(rho, frame, j=None):
    """``omega(m, U) = <j m| U^dagger rho U |j m>``."""
    if not isinstance(frame, UnitaryFrame):
        frame = UnitaryFrame(frame)
    m = _matrix(rho)
    _require_dim(m, frame.n, f"a {frame.n}-dimensional frame")
    j = HalfInteger(frame.n - 1) if j is None else HalfInteger.parse(j)
    return SpinTomogram(j, frame, _backend.kernels.rotated_diagonal(frame.matrix, m))


def two_spin_tomogram(rho, shape, angles1, angles2):
    """Joint tomogram measured along two directions, one per spin."""
    m = _matrix(rho)
    _require_dim(m, shape.n, f"shape {shape}")
    a1, a2 = angles1.with_psi(0.0), angles2.with_psi(0.0)
    u = np.kron(wigner_D(shape.j1, a1), wigner_D(shape.j2, a2))
    probs = _backend.kernels.rotated_diagonal(u, m).reshape(shape.n1, shape.n2)
    return JointTomogram(shape, (a1, a2), probs)


def two_spin_unitary_tomogram(rho, shape, frame):
    """Joint tomogram in the product basis rotated by a global unitary."""
    if not isinstance(frame, UnitaryFrame):
        frame = UnitaryFrame(frame)
    if frame.n != shape.n:
        raise DimensionError(f"frame dimension {frame.n} does not match shape {shape} (n={shape.n})")
    m = _matrix(rho)
    _require_dim(m, shape.n, f"shape {shape}")
    probs = _backend.kernels.rotated_diagonal(frame.matrix, m).reshape(shape.n1, shape.n2)
    return JointTomogram(shape, frame, probs)


def _side(which):
    if which in ("first", 1, "row"):
        return 1
    if which in ("second", 2, "column"):
        return 2
    raise ValueError(f"expected 'first' or 'second', got {which!r}")


def marginal(joint, keep="first"):
    """Single-spin tomogram of one particle, summing out the other."""
    side = _side(keep)
    p = joint.probabilities.sum(axis=1 if side == 1 else 0)
    j = joint.shape.j1 if side == 1 else joint.shape.j2
    frame = joint.frame
    if isinstance(frame, tuple):
        frame = frame[side - 1]
    return SpinTomogram(j, frame, p)


def conditional(joint, given, outcome, eps=CONDITION_EPS):
    """Distribution of the other spin given the ``given`` spin shows ``outcome``.

    ``P(m1 | m2) = omega(m1, m2) / omega_2(m2)`` for ``given="second"``.
    """
    side = _side(given)
    outcome = HalfInteger.parse(outcome)
    j_given = joint.shape.j2 if side == 2 else joint.shape.j1
    if abs(outcome.twice) > j_given.twice or (j_given.twice - outcome.twice) % 2:
        raise ValueError(f"{outcome} is not a projection of spin {j_given}")
    idx = (j_given.twice - outcome.twice) // 2
    row = joint.probabilities[:, idx] if side == 2 else joint.probabilities[idx, :]
    weight = float(row.sum())
    if weight <= eps:
        raise ZeroProbabilityError(f"outcome {outcome} of the {given} spin has probability {weight:.3g}")
    j_other = joint.shape.j1 if side == 2 else joint.shape.j2
    frame = joint.frame
    if isinstance(frame, tuple):
        frame = frame[2 - side]
    return SpinTomogram(j_other, frame, row / weight)


@dataclass(frozen=True)
class _ReconstructionKernel:
    """Tables independent of the state: 3j products for fixed spin j."""

    j: HalfInteger
    # coeff[k][l_index] is an (n, n, n) array over (i, m, m') already
    # including (2k+1)^2 and the (-1)^(j-i) phase
    coeff: tuple

    @classmethod
    def build(cls, j):
        n = j.dim
        proj = j.projections()
        coeff = []
        for k in range(0, j.twice + 1):
            per_l = []
            for l in range(-k, k + 1):
                c = np.zeros((n, n, n))
                for ii, i in enumerate(proj):
                    a = wigner_3j(j, j, k, i, -i, 0)
                    if a == 0.0:
                        continue
                    phase = -1.0 if (j - i).as_int() % 2 else 1.0
                    for ai, m in enumerate(proj):
                        for bi, mp in enumerate(proj):
                            b = wigner_3j(j, j, k, m, -mp, l)
                            if b:
                                c[ii, ai, bi] = (2 * k + 1) ** 2 * phase * a * b
                per_l.append(c)
            coeff.append(tuple(per_l))
        return cls(j, tuple(coeff))


def reconstruct_density(tomogram_fn, j, quad, tol=1e-6):
    """Rebuild ``rho`` from tomogram samples at the nodes of ``quad``.

    Returns a validated :class:`DensityMatrix` (tolerance ``tol``); see
    :func:`reconstruct_matrix` for the raw result.
    """
    return validate(reconstruct_matrix(tomogram_fn, j, quad), tol=tol)


def reconstruct_matrix(tomogram_fn, j, quad):
    """Unvalidated inverse map; the sum evaluated at the nodes of ``quad``.

    For each node ``u``::

        rho_{m m'} = (-1)^(j-m') sum_{k<=2j} sum_{|l|<=k} (2k+1)^2 sum_i
                     (-1)^(j-i) <omega(i, u) conj(D^k_{l0}(u))>
                     (j j k; i -i 0) (j j k; m -m' l)

    where ``<.>`` is the normalized group average.  ``tomogram_fn`` is
    called once per node and must be safe to call concurrently.  Exactness
    requires ``quad.band_limit >= 4j``; smaller grids return a wrong state
    (or fail validation).
    """
    j = HalfInteger.parse(j)
    n = j.dim
    kmax = j.twice
    # moments[k][l + k][i] = <omega(i) conj(D^k_{l0})>
    moments = [np.zeros((2 * k + 1, n), dtype=complex) for k in range(kmax + 1)]
    ls = [np.arange(-k, k + 1) for k in range(kmax + 1)]
    d_cache = {}
    for angles, weight in quad.iter_nodes():
        t = tomogram_fn(angles)
        if isinstance(t, SpinTomogram):
            if t.j != j:
                raise DimensionError(f"tomogram is for spin {t.j}, expected {j}")
            omega = t.probabilities
        else:
            omega = np.asarray(t, dtype=float)
            if omega.shape != (n,):
                raise DimensionError(f"tomogram sample has shape {omega.shape}, expected ({n},)")
        if abs(omega.sum() - 1.0) > NORMALIZATION_TOL or omega.min() < -RENORMALIZE_TOL:
            raise ReconstructionError(f"non-normalized tomogram sample at {angles} (sum {omega.sum()!r})")
        w = weight / GROUP_VOLUME
        key = angles.theta
        if key not in d_cache:
            # d^k_{0 l}(theta) for l = k..-k, reversed to l ascending below
            d_cache[key] = [_backend.kernels.small_d(2 * k, angles.theta)[k, ::-1] for k in range(kmax + 1)]
        for k in range(kmax + 1):
            # conj(D^k_{l0}) = e^{-i l phi} d^k_{0l}(theta)
            kern = np.exp(-1j * ls[k] * angles.phi) * d_cache[key][k]
            moments[k] += w * np.outer(kern, omega)
    kernel = _reconstruction_kernel(j)
    rho = np.zeros((n, n), dtype=complex)
    for k in range(kmax + 1):
        for li in range(2 * k + 1):
            rho += np.einsum("i,iab->ab", moments[k][li], kernel.coeff[k][li])
    col_phase = np.array([-1.0 if (j - mp).as_int() % 2 else 1.0 for mp in j.projections()])
    return rho * col_phase[None, :]


_KERNELS = {}


def _reconstruction_kernel(j):
    # dict assignment is atomic; a racing rebuild yields an identical table
    kern = _KERNELS.get(j)
    if kern is None:
        kern = _KERNELS[j] = _ReconstructionKernel.build(j)
    return kern


def round_trip(rho, j, quad, tol=1e-6):
    """``rho -> spin tomogram at every node -> reconstructed rho``."""
    j = HalfInteger.parse(j)
    return reconstruct_density(lambda a: spin_tomogram(rho, j, a), j, quad, tol=tol)
