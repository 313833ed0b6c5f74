# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the O(N^2) kernels; same contracts as _pykernels."""

import numpy as np

from libc.math cimport expm1, fabs, isfinite, log1p, pow

from ..specfun import gamma
from ._pykernels import SingularPivotError


def caputo_kernel(x_in, double beta):
    cdef const double[::1] x = np.ascontiguousarray(x_in, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0] - 1
    cdef double g = 2.0 - beta
    cdef double scale = 1.0 / gamma(1.0 + g)
    out = np.zeros((n + 1, n), dtype=np.float64)
    cdef double[:, ::1] k = out
    cdef Py_ssize_t i, j
    cdef double h, b

    for i in range(1, n + 1):
        for j in range(i):
            # interval j+1 = (x_j, x_{j+1})
            h = x[j + 1] - x[j]
            b = x[i] - x[j + 1]
            if b > 0.0:
                k[i, j] = scale * pow(b, g) * expm1(g * log1p(h / b))
            else:
                k[i, j] = scale * pow(h, g)
    return out


def hessenberg_solve(a_in, rhs_in):
    m_arr = np.array(a_in, dtype=np.float64, order="C", copy=True)
    y_arr = np.array(rhs_in, dtype=np.float64, copy=True)
    cdef double[:, ::1] m = m_arr
    cdef double[::1] y = y_arr
    cdef Py_ssize_t n = y.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double piv, f, v, acc
    cdef double amax = 0.0
    cdef double growth

    for i in range(n):
        for j in range(min(i + 2, n)):
            v = fabs(m[i, j])
            if v > amax:
                amax = v
    growth = amax

    for k in range(n - 1, 0, -1):
        piv = m[k, k]
        if piv == 0.0 or not isfinite(piv):
            raise SingularPivotError(k, piv)
        f = m[k - 1, k] / piv
        if f != 0.0:
            for j in range(k):
                m[k - 1, j] -= f * m[k, j]
                v = fabs(m[k - 1, j])
                if v > growth:
                    growth = v
            y[k - 1] -= f * y[k]
            m[k - 1, k] = 0.0
    if n and (m[0, 0] == 0.0 or not isfinite(m[0, 0])):
        raise SingularPivotError(0, m[0, 0])

    sol_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] sol = sol_arr
    for i in range(n):
        acc = y[i]
        for j in range(i):
            acc -= m[i, j] * sol[j]
        sol[i] = acc / m[i, i]
    return sol_arr, (growth / amax if amax != 0.0 else 1.0)
