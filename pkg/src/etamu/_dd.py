"""Double-double arithmetic for the alternating finite sums.

A value is carried as an unevaluated pair ``(hi, lo)`` with ``|lo| <= ulp(hi)/2``.
The operations are plain arithmetic, so they work on floats, inside numba,
and elementwise on numpy arrays.
"""
from ._backend import jit

_SPLITTER = 134217729.0  # 2**27 + 1


@jit
def two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


@jit
def quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


@jit
def split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


@jit
def two_prod(a, b):
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


@jit
def dd_add(ahi, alo, bhi, blo):
    s, e = two_sum(ahi, bhi)
    t, f = two_sum(alo, blo)
    e = e + t
    s, e = quick_two_sum(s, e)
    e = e + f
    return quick_two_sum(s, e)


@jit
def dd_mul(ahi, alo, bhi, blo):
    p, e = two_prod(ahi, bhi)
    e = e + (ahi * blo + alo * bhi)
    return quick_two_sum(p, e)


@jit
def dd_mul_d(ahi, alo, b):
    p, e = two_prod(ahi, b)
    e = e + alo * b
    return quick_two_sum(p, e)


@jit
def dd_div_d(ahi, alo, b):
    q1 = ahi / b
    p, e = two_prod(q1, b)
    s, f = two_sum(ahi, -p)
    f = f - e + alo
    q2 = (s + f) / b
    return quick_two_sum(q1, q2)


@jit
def dd_div(ahi, alo, bhi, blo):
    q1 = ahi / bhi
    rhi, rlo = dd_mul_d(bhi, blo, q1)
    shi, slo = dd_add(ahi, alo, -rhi, -rlo)
    q2 = shi / bhi
    rhi, rlo = dd_mul_d(bhi, blo, q2)
    shi, slo = dd_add(shi, slo, -rhi, -rlo)
    q3 = shi / bhi
    q1, q2 = quick_two_sum(q1, q2)
    return dd_add(q1, q2, q3, 0.0)
