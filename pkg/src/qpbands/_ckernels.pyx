# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled bisection kernels; keep in step with ``_pykernels.py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, cos, fabs, INFINITY, NAN

cnp.import_array()

OK = 0
ABSENT = 1
MAXITER = 2

cdef struct Root:
    double eps
    double res
    long status


cdef inline double _residual(double eps, double cosk, double c, double a,
                             double b2, double delta) noexcept nogil:
    cdef double x = delta - eps
    cdef double d2 = x * x - c * c
    if d2 < 0.0:
        d2 = 0.0
    if b2 == 0.0:
        return sqrt(d2) - a
    return sqrt(d2) - (a - b2 / (eps + cosk))


cdef Root _bisect(double lo, double glo, double hi, double ghi, double cosk,
                  double c, double a, double b2, double delta, double tol,
                  double gtol, long maxiter) noexcept nogil:
    cdef Root r
    cdef double mid, gm
    cdef long it
    r.status = 2
    for it in range(maxiter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            r.status = 0
            break
        gm = _residual(mid, cosk, c, a, b2, delta)
        if gm > 0.0:
            lo = mid
            glo = gm
        elif gm < 0.0:
            hi = mid
            ghi = gm
        else:
            r.eps = mid
            r.res = gm
            r.status = 0
            return r
        if hi - lo <= tol and fabs(gm) <= gtol:
            r.status = 0
            break
    if hi - lo <= tol:
        r.status = 0
    if fabs(glo) <= fabs(ghi):
        r.eps = lo
        r.res = glo
    else:
        r.eps = hi
        r.res = ghi
    return r


cdef Root _band1(double k, double a, double b, double delta, double tol,
                 double gtol, long maxiter) noexcept nogil:
    cdef Root r
    cdef double cosk = cos(k)
    cdef double c = fabs(cos(0.5 * k))
    cdef double b2 = b * b
    cdef double hi = delta - c
    cdef double lo, glo, ghi
    r.eps = NAN
    r.res = NAN
    r.status = 1
    if b2 == 0.0:
        lo = delta - c - a - 1.0
    else:
        lo = -cosk + b2 / a
    if not lo < hi:
        return r
    glo = _residual(lo, cosk, c, a, b2, delta)
    ghi = _residual(hi, cosk, c, a, b2, delta)
    if not (glo > 0.0 and ghi < 0.0):
        return r
    return _bisect(lo, glo, hi, ghi, cosk, c, a, b2, delta, tol, gtol, maxiter)


cdef Root _band2(double k, double a, double b, double delta, double tol,
                 double gtol, long maxiter) noexcept nogil:
    cdef Root r
    cdef double cosk = cos(k)
    cdef double c = fabs(cos(0.5 * k))
    cdef double b2 = b * b
    cdef double pole = -cosk
    cdef double step, lo, glo
    cdef long n = 0
    r.eps = NAN
    r.res = NAN
    r.status = 1
    if b2 == 0.0 or not pole < delta - c:
        return r
    step = b2 / (delta + a)
    lo = pole - step
    glo = _residual(lo, cosk, c, a, b2, delta)
    while not glo > 0.0:
        n += 1
        if n > maxiter:
            r.status = 2
            return r
        step *= 2.0
        lo = pole - step
        glo = _residual(lo, cosk, c, a, b2, delta)
    return _bisect(lo, glo, pole, -INFINITY, cosk, c, a, b2, delta, tol, gtol, maxiter)


def residual(double eps, double cosk, double c, double a, double b2, double delta):
    return _residual(eps, cosk, c, a, b2, delta)


def band1_root(double k, double a, double b, double delta, double tol,
               double gtol, long maxiter):
    cdef Root r = _band1(k, a, b, delta, tol, gtol, maxiter)
    return r.eps, r.res, r.status


def band2_root(double k, double a, double b, double delta, double tol,
               double gtol, long maxiter):
    cdef Root r = _band2(k, a, b, delta, tol, gtol, maxiter)
    return r.eps, r.res, r.status


def solve_grid(kvals, double a, double b, double delta, double tol,
               double gtol, long maxiter):
    cdef double[::1] kv = np.ascontiguousarray(kvals, dtype=np.float64)
    cdef Py_ssize_t n = kv.shape[0]
    eps1_a = np.empty(n)
    res1_a = np.empty(n)
    st1_a = np.empty(n, dtype=np.int64)
    eps2_a = np.empty(n)
    res2_a = np.empty(n)
    st2_a = np.empty(n, dtype=np.int64)
    cdef double[::1] eps1 = eps1_a, res1 = res1_a, eps2 = eps2_a, res2 = res2_a
    cdef cnp.int64_t[::1] st1 = st1_a, st2 = st2_a
    cdef Py_ssize_t i
    cdef Root r
    with nogil:
        for i in range(n):
            r = _band1(kv[i], a, b, delta, tol, gtol, maxiter)
            eps1[i] = r.eps
            res1[i] = r.res
            st1[i] = r.status
            r = _band2(kv[i], a, b, delta, tol, gtol, maxiter)
            eps2[i] = r.eps
            res2[i] = r.res
            st2[i] = r.status
    return eps1_a, res1_a, st1_a, eps2_a, res2_a, st2_a
