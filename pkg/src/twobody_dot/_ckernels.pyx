# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: symmetric-family bisection and potential grids.

Mirrors ``_pykernels`` operation for operation so both backends return
bit-identical results.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport pow, sqrt, INFINITY

cnp.import_array()

DEF MAX_ITER = 400


cdef inline double _boundary_lhs(double v, double p2, double expo) nogil:
    return pow(v, expo) * p2 + v * v


cdef double _vstar(double p, double u, double M) nogil:
    cdef double target = 1.0 + u * u
    cdef double hi = sqrt(target)
    cdef double p2 = p * p
    cdef double expo = 8.0 / (M + 2.0)
    cdef double lo = 1e-12
    cdef double mid
    cdef int i
    if p2 == 0.0:
        return hi
    if _boundary_lhs(lo, p2, expo) >= target:
        lo = 0.0
    for i in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _boundary_lhs(mid, p2, expo) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


cdef double _veff(double rho, double z, double p, double u, double v, double M) nogil:
    cdef double r2 = rho * rho + z * z
    cdef double val
    if r2 == 0.0:
        return INFINITY
    val = 0.5 * (1.0 + u * u) * rho * rho - u * p + 0.5 * v * v * z * z
    val += pow(r2, -0.5 * M) / M
    if p != 0.0:
        if rho == 0.0:
            return INFINITY
        val += p * p / (2.0 * rho * rho)
    return val


def vstar_bisect(double p, double u, double M):
    return _vstar(p, u, M)


def vstar_bisect_array(p, u, double M):
    pb, ub = np.broadcast_arrays(np.asarray(p, dtype=np.float64), np.asarray(u, dtype=np.float64))
    cdef cnp.ndarray[cnp.float64_t, ndim=1] pf = np.ascontiguousarray(pb).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] uf = np.ascontiguousarray(ub).ravel()
    cdef Py_ssize_t n = pf.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            out[i] = _vstar(pf[i], uf[i], M)
    return out.reshape(pb.shape)


def veff(double rho, double z, double p, double u, double v, double M):
    return _veff(rho, z, p, u, v, M)


def veff_grid(rho, z, double p, double u, double v, double M):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] r = np.ascontiguousarray(rho, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] zz = np.ascontiguousarray(z, dtype=np.float64).ravel()
    cdef Py_ssize_t nr = r.shape[0], nz = zz.shape[0], i, j
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((nr, nz), dtype=np.float64)
    with nogil:
        for i in range(nr):
            for j in range(nz):
                out[i, j] = _veff(r[i], zz[j], p, u, v, M)
    return out
