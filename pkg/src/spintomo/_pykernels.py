"""Pure-Python/numpy versions of the hot kernels.

These mirror ``_ckernels.pyx`` function for function and are used when the
compiled extension is unavailable.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

NAME = "python"

# 2j above which the alternating factorial sum loses digits to cancellation
# (about 5e-14 at 2j = 24, 7e-9 at 2j = 60); larger spins use the spectral form
SPECTRAL_TWICE_J = 24

_FACT = [float(math.factorial(k)) for k in range(SPECTRAL_TWICE_J + 1)]


@lru_cache(maxsize=64)
def _jy_eigen(twice_j):
    """Eigenpairs of ``i J_y`` made Hermitian: ``J_y = V diag(w) V^dagger``."""
    n = twice_j + 1
    j = 0.5 * twice_j
    raising = np.zeros((n, n))
    for a in range(1, n):
        m = j - a
        raising[a - 1, a] = math.sqrt(j * (j + 1) - m * (m + 1))
    w, v = np.linalg.eigh((raising - raising.T) / 2j)
    w.flags.writeable = False
    v.flags.writeable = False
    return w, v


def small_d_spectral(twice_j, theta):
    """``d^j(theta) = exp(-i theta J_y)``, accurate to round-off for any j."""
    w, v = _jy_eigen(twice_j)
    return ((v * np.exp(-1j * theta * w)) @ v.conj().T).real


def small_d(twice_j, theta):
    """Wigner small-d matrix ``d[a, b] = d^j_{m'm}(theta)``.

    Row ``a`` carries ``m' = j - a`` and column ``b`` carries ``m = j - b``.
    """
    if twice_j > SPECTRAL_TWICE_J:
        return small_d_spectral(twice_j, theta)
    n = twice_j + 1
    out = np.zeros((n, n))
    c = math.cos(0.5 * theta)
    s = math.sin(0.5 * theta)
    for a in range(n):
        jpmp = twice_j - a  # j + m'
        jmmp = a            # j - m'
        for b in range(n):
            jpm = twice_j - b
            jmm = b
            diff = b - a    # m' - m
            pre = math.sqrt(_FACT[jpmp] * _FACT[jmmp] * _FACT[jpm] * _FACT[jmm])
            total = 0.0
            for k in range(max(0, -diff), min(jpm, jmmp) + 1):
                term = c ** (twice_j - diff - 2 * k) * s ** (diff + 2 * k)
                term /= _FACT[jpm - k] * _FACT[k] * _FACT[diff + k] * _FACT[jmmp - k]
                total += -term if (diff + k) % 2 else term
            out[a, b] = total * pre
    return out


def rotated_diagonal(u, rho):
    """Real diagonal of ``u^dagger rho u``."""
    return np.einsum("ai,ab,bi->i", u.conj(), rho, u).real


def rotated_diagonals(us, rho):
    """Batched ``rotated_diagonal`` over a stack of frames ``us[k]``."""
    return np.einsum("kai,ab,kbi->ki", us.conj(), rho, us).real


def shannon(p):
    """``-sum p ln p`` with ``0 ln 0 = 0``; negatives count as zero."""
    p = np.asarray(p, dtype=float).ravel()
    total = 0.0
    for x in p:
        if x > 0.0:
            total -= x * math.log(x)
    return total
