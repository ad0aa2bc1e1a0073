# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; see ``_pykernels`` for the reference."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, sqrt, log

cnp.import_array()

NAME = "cython"

from ._pykernels import SPECTRAL_TWICE_J, small_d_spectral

cdef enum:
    MAX_SUM_TWICE_J = 24

assert MAX_SUM_TWICE_J == SPECTRAL_TWICE_J

cdef double _FACT[MAX_SUM_TWICE_J + 1]
cdef int _i
_FACT[0] = 1.0
for _i in range(1, MAX_SUM_TWICE_J + 1):
    _FACT[_i] = _FACT[_i - 1] * _i


cdef inline double _ipow(double x, int p) nogil:
    cdef double r = 1.0
    while p > 0:
        if p & 1:
            r *= x
        x *= x
        p >>= 1
    return r


def small_d(int twice_j, double theta):
    if twice_j > MAX_SUM_TWICE_J:
        # large spins: shared spectral form, already dominated by LAPACK
        return small_d_spectral(twice_j, theta)
    cdef int n = twice_j + 1
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((n, n))
    cdef double c = cos(0.5 * theta), s = sin(0.5 * theta)
    cdef int a, b, k, diff, kmin, kmax
    cdef double total, term, pre
    for a in range(n):
        for b in range(n):
            diff = b - a
            kmin = 0 if diff >= 0 else -diff
            kmax = twice_j - b if twice_j - b < a else a
            pre = sqrt(_FACT[twice_j - a] * _FACT[a] * _FACT[twice_j - b] * _FACT[b])
            total = 0.0
            for k in range(kmin, kmax + 1):
                term = _ipow(c, twice_j - diff - 2 * k) * _ipow(s, diff + 2 * k)
                term /= _FACT[twice_j - b - k] * _FACT[k] * _FACT[diff + k] * _FACT[a - k]
                if (diff + k) % 2:
                    total -= term
                else:
                    total += term
            out[a, b] = total * pre
    return out


def rotated_diagonal(cnp.ndarray u_in, cnp.ndarray rho_in):
    cdef const double complex[:, :] u = np.ascontiguousarray(u_in, dtype=np.complex128)
    cdef const double complex[:, :] rho = np.ascontiguousarray(rho_in, dtype=np.complex128)
    cdef Py_ssize_t n = u.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n)
    cdef Py_ssize_t i, a, b
    cdef double complex acc, inner
    for i in range(n):
        acc = 0.0
        for a in range(n):
            inner = 0.0
            for b in range(n):
                inner = inner + rho[a, b] * u[b, i]
            acc = acc + u[a, i].conjugate() * inner
        out[i] = acc.real
    return out


def rotated_diagonals(cnp.ndarray us_in, cnp.ndarray rho_in):
    cdef const double complex[:, :, :] us = np.ascontiguousarray(us_in, dtype=np.complex128)
    cdef const double complex[:, :] rho = np.ascontiguousarray(rho_in, dtype=np.complex128)
    cdef Py_ssize_t nf = us.shape[0], n = us.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((nf, n))
    cdef Py_ssize_t f, i, a, b
    cdef double complex acc, inner
    for f in range(nf):
        for i in range(n):
            acc = 0.0
            for a in range(n):
                inner = 0.0
                for b in range(n):
                    inner = inner + rho[a, b] * us[f, b, i]
                acc = acc + us[f, a, i].conjugate() * inner
            out[f, i] = acc.real
    return out


def shannon(p_in):
    cdef const double[:] p = np.ascontiguousarray(p_in, dtype=np.float64).ravel()
    cdef Py_ssize_t i
    cdef double total = 0.0, x
    for i in range(p.shape[0]):
        x = p[i]
        if x > 0.0:
            total -= x * log(x)
    return total
