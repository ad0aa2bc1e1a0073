"""Shannon-type entropies and informations, for plain distributions and for
tomograms, plus the von Neumann entropy.

All values are in nats.  ``0 ln 0`` is taken as 0 by branching, never by
floating-point limits.
"""

from __future__ import annotations

import math

import numpy as np

from . import _backend
from .errors import ValidationError, ZeroProbabilityError
from .state import spectrum

NORMALIZATION_TOL = 1e-10
IDENTITY_TOL = 1e-10
EIGEN_ZERO = 1e-14


def _distribution(p, ndim):
    p = np.asarray(p, dtype=float)
    if p.ndim != ndim:
        raise ValidationError(f"expected a {ndim}-dimensional probability array, got shape {p.shape}")
    if p.size == 0:
        raise ValidationError("empty probability array")
    if abs(p.sum() - 1.0) > NORMALIZATION_TOL:
        raise ValidationError(f"probabilities sum to {p.sum()!r}")
    return np.clip(p, 0.0, None)


def shannon_entropy(p):
    """``-sum p_i ln p_i``."""
    return _backend.kernels.shannon(_distribution(p, 1))


def joint_entropy(P):
    """Shannon entropy over all cells of a joint distribution."""
    return _backend.kernels.shannon(_distribution(P, 2))


def _oriented(P, condition_on):
    """Return the joint with the conditioning variable on axis 0."""
    if condition_on in ("row", "first"):
        return P
    if condition_on in ("column", "second"):
        return P.T
    raise ValueError(f"condition_on must be 'row' or 'column', got {condition_on!r}")


def conditional_entropy_given(P, condition_on, index, eps=1e-12):
    """Entropy of the other variable given the conditioning one takes ``index``."""
    P = _oriented(_distribution(P, 2), condition_on)
    row = P[index]
    weight = float(row.sum())
    if weight <= eps:
        raise ZeroProbabilityError(f"conditioning {condition_on} {index} has probability {weight:.3g}")
    return _backend.kernels.shannon(row / weight)


def complete_conditional_entropy(P, condition_on="row"):
    """``-sum_ij P_ij ln P(y_j | x_i)``; rows with zero weight contribute nothing."""
    P = _oriented(_distribution(P, 2), condition_on)
    weights = P.sum(axis=1)
    total = 0.0
    for w, row in zip(weights, P):
        if w <= 0.0:
            continue
        for pij in row:
            if pij > 0.0:
                total -= pij * math.log(pij / w)
    return total


def mutual_information(P):
    """``H(X) + H(Y) - H(X, Y)``, clamped at zero."""
    P = _distribution(P, 2)
    k = _backend.kernels
    value = k.shannon(P.sum(axis=1)) + k.shannon(P.sum(axis=0)) - k.shannon(P)
    return max(value, 0.0)


def information_gain(P, observed="column"):
    """``H(X) - H(X|Y)``: information on one variable from observing the other.

    ``observed="column"`` observes Y (the column variable) and returns the
    information about X.
    """
    P = _distribution(P, 2)
    if observed in ("column", "second"):
        return shannon_entropy(P.sum(axis=1)) - complete_conditional_entropy(P, "column")
    return shannon_entropy(P.sum(axis=0)) - complete_conditional_entropy(P, "row")


def kullback_mutual_information(P):
    """``sum P_ij ln(P_ij / (p_i q_j))`` over the support of ``P``."""
    P = _distribution(P, 2)
    rows = P.sum(axis=1)
    cols = P.sum(axis=0)
    total = 0.0
    for a in range(P.shape[0]):
        for b in range(P.shape[1]):
            pij = P[a, b]
            if pij > 0.0:
                # logs separately: the product of marginals can underflow
                total += pij * (math.log(pij) - math.log(rows[a]) - math.log(cols[b]))
    return total


def tomographic_entropy(t):
    """Shannon entropy of a spin tomogram (sphere or unitary frame)."""
    return _backend.kernels.shannon(t.probabilities)


def joint_tomographic_entropy(t):
    return _backend.kernels.shannon(t.probabilities)


def subsystem_tomographic_entropy(t, which="first"):
    axis = 1 if which in ("first", 1) else 0
    return _backend.kernels.shannon(t.probabilities.sum(axis=axis))


def tomographic_mutual_information(t, verify=False):
    """Mutual information of the two spin projections in the tomogram's frame.

    Computed as ``S1 + S2 - S``; with ``verify=True`` the Kullback form is
    evaluated too and the two must agree to 1e-10.
    """
    value = mutual_information(t.probabilities)
    if verify:
        other = kullback_mutual_information(t.probabilities)
        if abs(value - other) > IDENTITY_TOL:
            raise ArithmeticError(f"entropy-difference {value!r} and Kullback {other!r} forms disagree")
    return value


def von_neumann_entropy(rho):
    """``-Tr rho ln rho`` from the Hermitian spectrum."""
    lam = spectrum(rho)
    total = 0.0
    for x in lam:
        if x > EIGEN_ZERO:
            total -= x * math.log(x)
    return total


def to_bits(value):
    return value / math.log(2.0)
