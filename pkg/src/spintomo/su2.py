"""SU(2) representation machinery: half-integers, Euler angles, Wigner d/D
matrices, 3j symbols and product quadrature over the Euler-angle manifold.

Matrix conventions
------------------
Rows and columns of every spin-j matrix are indexed by the projection m in
descending order: index ``a`` corresponds to ``m = j - a``.

The fundamental matrix is::

    u(phi, theta, psi) = [[ cos(t/2) e^{ i(phi+psi)/2},  sin(t/2) e^{ i(phi-psi)/2}],
                          [-sin(t/2) e^{-i(phi-psi)/2},  cos(t/2) e^{-i(phi+psi)/2}]]

and the spin-j representation built on it is::

    D^j_{m m'}(phi, theta, psi) = e^{i m phi} d^j_{m' m}(theta) e^{i m' psi}

with ``d^j`` the standard (Condon-Shortley) small-d matrix.  ``D^{1/2}``
reproduces ``u`` element for element, and ``u -> D^j(u)`` is a group
homomorphism.  Columns carry the psi phase only, so ``D^dagger rho D`` has a
psi-independent diagonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering

import numpy as np

from . import _backend
from .errors import QuadratureError

TWO_PI = 2.0 * math.pi
GROUP_VOLUME = 8.0 * math.pi**2


@total_ordering
@dataclass(frozen=True)
class HalfInteger:
    """An exact integer or half-integer stored as twice its value."""

    twice: int

    def __post_init__(self):
        if not isinstance(self.twice, (int, np.integer)) or isinstance(self.twice, bool):
            raise TypeError(f"twice must be an int, got {type(self.twice).__name__}")
        object.__setattr__(self, "twice", int(self.twice))

    @classmethod
    def parse(cls, value):
        """Build from ``"3/2"``, ``"-1/2"``, ``"2"``, an int or a HalfInteger.

        Floats are refused to keep spin arithmetic exact.
        """
        if isinstance(value, HalfInteger):
            return value
        if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
            return cls(2 * int(value))
        if isinstance(value, Fraction):
            if (2 * value).denominator != 1:
                raise ValueError(f"{value} is not a half-integer")
            return cls(int(2 * value))
        if isinstance(value, str):
            text = value.strip()
            if "/" in text:
                num, den = text.split("/", 1)
                num, den = int(num), int(den)
                if den == 2:
                    return cls(num)
                if den == 1:
                    return cls(2 * num)
                frac = Fraction(num, den)
                return cls.parse(frac)
            return cls(2 * int(text))
        raise TypeError(f"cannot interpret {value!r} as a half-integer")

    @property
    def is_integer(self):
        return self.twice % 2 == 0

    def as_int(self):
        """The value as an int; raises if it is a proper half-integer."""
        if self.twice % 2:
            raise ValueError(f"{self} is not an integer")
        return self.twice // 2

    @property
    def dim(self):
        """Multiplicity ``2j + 1`` when this value is a spin."""
        return self.twice + 1

    def projections(self):
        """Projections ``j, j-1, ..., -j`` in the package's row order."""
        return [HalfInteger(self.twice - 2 * a) for a in range(self.twice + 1)]

    def __add__(self, other):
        return HalfInteger(self.twice + HalfInteger.parse(other).twice)

    __radd__ = __add__

    def __sub__(self, other):
        return HalfInteger(self.twice - HalfInteger.parse(other).twice)

    def __rsub__(self, other):
        return HalfInteger(HalfInteger.parse(other).twice - self.twice)

    def __neg__(self):
        return HalfInteger(-self.twice)

    def __abs__(self):
        return HalfInteger(abs(self.twice))

    def __eq__(self, other):
        if isinstance(other, HalfInteger):
            return self.twice == other.twice
        if isinstance(other, (int, np.integer)) and not isinstance(other, bool):
            return self.twice == 2 * int(other)
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, HalfInteger):
            return self.twice < other.twice
        if isinstance(other, (int, np.integer)):
            return self.twice < 2 * int(other)
        return NotImplemented

    def __hash__(self):
        return hash(("HalfInteger", self.twice))

    def __str__(self):
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"

    def __repr__(self):
        return f"HalfInteger({self})"


def half(value):
    """Shorthand for :meth:`HalfInteger.parse`."""
    return HalfInteger.parse(value)


def _spin(j):
    j = HalfInteger.parse(j)
    if j.twice < 0:
        raise ValueError(f"spin must be non-negative, got {j}")
    return j


@dataclass(frozen=True)
class EulerAngles:
    """Euler angles in canonical ranges: phi, psi in [0, 2pi), theta in [0, pi]."""

    phi: float = 0.0
    theta: float = 0.0
    psi: float = 0.0

    def __post_init__(self):
        theta = float(self.theta)
        if not (0.0 <= theta <= math.pi) or math.isnan(theta):
            raise ValueError(f"theta must lie in [0, pi], got {theta!r}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", _wrap(self.phi))
        object.__setattr__(self, "psi", _wrap(self.psi))

    def direction(self):
        """Unit vector ``(sin t cos phi, sin t sin phi, cos t)``."""
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])

    def with_psi(self, psi):
        return EulerAngles(self.phi, self.theta, psi)


def _wrap(angle):
    a = math.fmod(float(angle), TWO_PI)
    if a < 0.0:
        a += TWO_PI
    if a >= TWO_PI:  # fmod of tiny negatives can round up to 2pi
        a = 0.0
    return a


def su2_fundamental(angles):
    """The 2x2 SU(2) matrix for ``angles`` (see module docstring)."""
    c = math.cos(0.5 * angles.theta)
    s = math.sin(0.5 * angles.theta)
    plus = 0.5 * (angles.phi + angles.psi)
    minus = 0.5 * (angles.phi - angles.psi)
    return np.array(
        [
            [c * np.exp(1j * plus), s * np.exp(1j * minus)],
            [-s * np.exp(-1j * minus), c * np.exp(-1j * plus)],
        ]
    )


def angles_from_su2(u, atol=1e-12):
    """Invert :func:`su2_fundamental`.

    Returns ``(angles, sign)`` with ``u == sign * su2_fundamental(angles)``;
    the sign is needed because canonical angles only cover SU(2) up to -1.
    At gimbal lock (theta = 0 or pi) psi is set to 0.
    """
    u = np.asarray(u, dtype=complex)
    a, b = u[0, 0], u[0, 1]
    theta = 2.0 * math.atan2(abs(b), abs(a))
    theta = min(max(theta, 0.0), math.pi)
    if abs(b) <= atol:
        phi, psi = 2.0 * np.angle(a), 0.0
    elif abs(a) <= atol:
        phi, psi = 2.0 * np.angle(b), 0.0
    else:
        plus, minus = np.angle(a), np.angle(b)
        phi, psi = plus + minus, plus - minus
    angles = EulerAngles(phi, theta, psi)
    rebuilt = su2_fundamental(angles)
    sign = 1 if np.abs(rebuilt - u).max() <= np.abs(rebuilt + u).max() else -1
    return angles, sign


def compose(first, second):
    """Euler angles of the product ``u(first) @ u(second)``, plus the sign.

    ``sign`` is -1 when the canonical angles describe ``-u``; for spin j the
    representation then picks up ``sign ** (2j)``.
    """
    return angles_from_su2(su2_fundamental(first) @ su2_fundamental(second))


def wigner_small_d(j, theta):
    """Real orthogonal matrix ``d[a, b] = d^j_{m' m}(theta)``, ``m' = j - a``, ``m = j - b``.

    For j = 1/2 this is ``[[cos(t/2), -sin(t/2)], [sin(t/2), cos(t/2)]]``.
    Spins with 2j > 24 are computed as ``exp(-i theta J_y)`` from a cached
    eigendecomposition instead of the alternating factorial sum.
    """
    j = _spin(j)
    return _backend.kernels.small_d(j.twice, float(theta))


def _phases(j, angle):
    twice_m = np.arange(j.twice, -j.twice - 1, -2)
    return np.exp(0.5j * twice_m * angle)


def wigner_D(j, angles):
    """Unitary spin-j representation matrix of the SU(2) element ``u(angles)``."""
    j = _spin(j)
    d = _backend.kernels.small_d(j.twice, angles.theta)
    return _phases(j, angles.phi)[:, None] * d.T * _phases(j, angles.psi)[None, :]


def _check_3j_args(js, ms):
    for j, m in zip(js, ms):
        if j.twice < 0 or abs(m.twice) > j.twice or (j.twice - m.twice) % 2:
            return False
    j1, j2, j3 = (j.twice for j in js)
    if sum(m.twice for m in ms) != 0:
        return False
    if (j1 + j2 + j3) % 2:
        return False
    return abs(j1 - j2) <= j3 <= j1 + j2


@lru_cache(maxsize=65536)
def _wigner_3j_twice(j1, j2, j3, m1, m2, m3):
    # all arguments are doubled integers; selection rules already checked
    h = lambda x: x // 2  # noqa: E731
    a1 = h(j1 + j2 - j3)
    a2 = h(j1 - j2 + j3)
    a3 = h(-j1 + j2 + j3)
    big = h(j1 + j2 + j3) + 1
    fac_m = [h(j1 + m1), h(j1 - m1), h(j2 + m2), h(j2 - m2), h(j3 + m3), h(j3 - m3)]
    t1 = h(j3 - j2 + m1)
    t2 = h(j3 - j1 - m2)
    t3 = h(j1 + j2 - j3)
    t4 = h(j1 - m1)
    t5 = h(j2 + m2)
    kmin = max(0, -t1, -t2)
    kmax = min(t3, t4, t5)
    phase = h(j1 - j2 - m3)
    sign = -1 if phase % 2 else 1

    # exact rational arithmetic at every j: the Racah sum alternates and
    # cancels catastrophically in floating point once j reaches a few tens
    f = math.factorial
    pre_sq = Fraction(f(a1) * f(a2) * f(a3), f(big))
    for x in fac_m:
        pre_sq *= f(x)
    total = Fraction(0)
    for k in range(kmin, kmax + 1):
        term = Fraction(1, f(k) * f(t1 + k) * f(t2 + k) * f(t3 - k) * f(t4 - k) * f(t5 - k))
        total += -term if k % 2 else term
    # square exactly, round once (|3j| <= 1 so the float conversion cannot overflow)
    sq = total * total * pre_sq
    if sq == 0:
        return 0.0
    mag = math.sqrt(float(sq))
    return sign * mag if total > 0 else -sign * mag


def wigner_3j(j1, j2, j3, m1, m2, m3):
    """Wigner 3j symbol ``(j1 j2 j3; m1 m2 m3)``.

    Returns 0 whenever a selection rule fails (triangle, ``m1+m2+m3 != 0``,
    ``|m_i| > j_i`` or a non-integer ``j_i - m_i``).
    """
    js = tuple(HalfInteger.parse(x) for x in (j1, j2, j3))
    ms = tuple(HalfInteger.parse(x) for x in (m1, m2, m3))
    if not _check_3j_args(js, ms):
        return 0.0
    return _wigner_3j_twice(*(x.twice for x in js), *(x.twice for x in ms))


@dataclass(frozen=True)
class GroupQuadrature:
    """Product rule over (phi, theta, psi) with weights summing to ``8 pi^2``."""

    band_limit: int
    phis: np.ndarray
    thetas: np.ndarray
    psis: np.ndarray
    theta_weights: np.ndarray

    def __post_init__(self):
        for name in ("phis", "thetas", "psis", "theta_weights"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def size(self):
        return len(self.phis) * len(self.thetas) * len(self.psis)

    @property
    def nodes(self):
        """List of ``(EulerAngles, weight)`` pairs."""
        return list(self.iter_nodes())

    def iter_nodes(self):
        w_phi = TWO_PI / len(self.phis)
        w_psi = TWO_PI / len(self.psis)
        for t, wt in zip(self.thetas, self.theta_weights):
            for phi in self.phis:
                for psi in self.psis:
                    yield EulerAngles(phi, t, psi), wt * w_phi * w_psi

    def integrate(self, fn):
        """``sum_nodes weight * fn(angles)``; ``fn`` may return arrays."""
        total = None
        for angles, w in self.iter_nodes():
            val = w * np.asarray(fn(angles))
            total = val if total is None else total + val
        return total


def quadrature_grid(band_limit, max_nodes=10**7):
    """Product quadrature exact for integrands of degree ``<= band_limit`` in each angle.

    phi and psi use ``band_limit + 1`` equispaced trapezoid nodes; cos(theta)
    uses ``band_limit // 2 + 1`` Gauss-Legendre nodes, whose weights already
    absorb the ``sin(theta)`` Jacobian.
    """
    if int(band_limit) != band_limit or band_limit < 0:
        raise QuadratureError(f"band_limit must be a non-negative integer, got {band_limit!r}")
    band_limit = int(band_limit)
    n_ang = band_limit + 1
    n_theta = band_limit // 2 + 1
    total = n_ang * n_ang * n_theta
    if total > max_nodes:
        raise QuadratureError(f"band_limit {band_limit} needs {total} nodes, cap is {max_nodes}")
    x, w = np.polynomial.legendre.leggauss(n_theta)
    order = np.argsort(-x)  # theta ascending
    thetas = np.arccos(np.clip(x[order], -1.0, 1.0))
    grid = TWO_PI * np.arange(n_ang) / n_ang
    return GroupQuadrature(band_limit, grid, thetas, grid.copy(), w[order])
