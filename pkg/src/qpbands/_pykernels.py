"""Pure-Python bisection kernels; the Cython module mirrors this file."""
import math

import numpy as np

OK = 0
ABSENT = 1
MAXITER = 2


def residual(eps, cosk, c, a, b2, delta):
    x = delta - eps
    d2 = x * x - c * c
    if d2 < 0.0:
        d2 = 0.0
    if b2 == 0.0:
        return math.sqrt(d2) - a
    return math.sqrt(d2) - (a - b2 / (eps + cosk))


def _bisect(lo, glo, hi, ghi, cosk, c, a, b2, delta, tol, gtol, maxiter):
    # invariant: G(lo) > 0 > G(hi)
    status = MAXITER
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            status = OK
            break
        gm = residual(mid, cosk, c, a, b2, delta)
        if gm > 0.0:
            lo, glo = mid, gm
        elif gm < 0.0:
            hi, ghi = mid, gm
        else:
            return mid, gm, OK
        if hi - lo <= tol and abs(gm) <= gtol:
            status = OK
            break
    if hi - lo <= tol:
        status = OK
    if abs(glo) <= abs(ghi):
        return lo, glo, status
    return hi, ghi, status


def band1_root(k, a, b, delta, tol, gtol, maxiter):
    cosk = math.cos(k)
    c = abs(math.cos(0.5 * k))
    b2 = b * b
    hi = delta - c
    if b2 == 0.0:
        lo = delta - c - a - 1.0
    else:
        lo = -cosk + b2 / a
    if not lo < hi:
        return math.nan, math.nan, ABSENT
    glo = residual(lo, cosk, c, a, b2, delta)
    ghi = residual(hi, cosk, c, a, b2, delta)
    if not (glo > 0.0 and ghi < 0.0):
        return math.nan, math.nan, ABSENT
    return _bisect(lo, glo, hi, ghi, cosk, c, a, b2, delta, tol, gtol, maxiter)


def band2_root(k, a, b, delta, tol, gtol, maxiter):
    cosk = math.cos(k)
    c = abs(math.cos(0.5 * k))
    b2 = b * b
    pole = -cosk
    if b2 == 0.0 or not pole < delta - c:
        return math.nan, math.nan, ABSENT
    step = b2 / (delta + a)
    lo = pole - step
    glo = residual(lo, cosk, c, a, b2, delta)
    n = 0
    while not glo > 0.0:
        n += 1
        if n > maxiter:
            return math.nan, math.nan, MAXITER
        step *= 2.0
        lo = pole - step
        glo = residual(lo, cosk, c, a, b2, delta)
    return _bisect(lo, glo, pole, -math.inf, cosk, c, a, b2, delta, tol, gtol, maxiter)


def solve_grid(kvals, a, b, delta, tol, gtol, maxiter):
    kvals = np.asarray(kvals, dtype=np.float64)
    n = kvals.shape[0]
    eps1 = np.empty(n)
    res1 = np.empty(n)
    st1 = np.empty(n, dtype=np.int64)
    eps2 = np.empty(n)
    res2 = np.empty(n)
    st2 = np.empty(n, dtype=np.int64)
    for i in range(n):
        k = float(kvals[i])
        eps1[i], res1[i], st1[i] = band1_root(k, a, b, delta, tol, gtol, maxiter)
        eps2[i], res2[i], st2[i] = band2_root(k, a, b, delta, tol, gtol, maxiter)
    return eps1, res1, st1, eps2, res2, st2
