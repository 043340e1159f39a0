"""Compiled fraction-free sparse rank on int64 rows; raises OverflowError past 2**62."""
from cpython.array cimport array, clone, resize

cdef extern from *:
    bint __builtin_smulll_overflow(long long a, long long b, long long *res)
    bint __builtin_ssubll_overflow(long long a, long long b, long long *res)

cdef long long LIM = 1LL << 62
cdef array _tmpl = array('q')


cdef inline long long _gcd(long long a, long long b):
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef inline long long _lin(long long p, long long x, long long a, long long y) except? -1:
    cdef long long s, t, out
    if __builtin_smulll_overflow(p, x, &s) or __builtin_smulll_overflow(a, y, &t):
        raise OverflowError
    if __builtin_ssubll_overflow(s, t, &out) or out > LIM or out < -LIM:
        raise OverflowError
    return out


cdef tuple _normalize(array cols, array vals, Py_ssize_t k):
    cdef long long[:] vv = vals
    cdef long long g = 0
    cdef Py_ssize_t i
    for i in range(k):
        g = _gcd(g, vv[i])
        if g == 1:
            break
    if k and vv[0] < 0:
        g = -g
    if g != 1 and g != 0:
        for i in range(k):
            vv[i] = vv[i] // g
    resize(cols, k)
    resize(vals, k)
    return cols, vals


cdef tuple _combine(long long[:] c1, long long[:] v1, long long p,
                    long long[:] c2, long long[:] v2, long long a):
    # p*row1 - a*row2; both rows share the leading column, which cancels
    cdef Py_ssize_t n1 = c1.shape[0], n2 = c2.shape[0], i = 1, j = 1, k = 0
    cdef array oc = clone(_tmpl, n1 + n2, False)
    cdef array ov = clone(_tmpl, n1 + n2, False)
    cdef long long[:] occ = oc
    cdef long long[:] ovv = ov
    cdef long long x, col
    while i < n1 or j < n2:
        if j >= n2 or (i < n1 and c1[i] < c2[j]):
            x = _lin(p, v1[i], 0, 0)
            col = c1[i]
            i += 1
        elif i >= n1 or c2[j] < c1[i]:
            x = _lin(0, 0, a, v2[j])
            col = c2[j]
            j += 1
        else:
            x = _lin(p, v1[i], a, v2[j])
            col = c1[i]
            i += 1
            j += 1
        if x != 0:
            occ[k] = col
            ovv[k] = x
            k += 1
    return _normalize(oc, ov, k)


def rank_int_rows(rows):
    cdef dict pivots = {}
    cdef Py_ssize_t r = 0, k
    cdef long long a, p, g, lead
    cdef array cols, vals
    cdef long long[:] cc
    cdef long long[:] vv
    for src in rows:
        items = sorted((c, v) for c, v in src.items() if v)
        k = len(items)
        cols = clone(_tmpl, k, False)
        vals = clone(_tmpl, k, False)
        cc = cols
        vv = vals
        for idx, (c, v) in enumerate(items):
            if v > LIM or v < -LIM:
                raise OverflowError
            cc[idx] = c
            vv[idx] = v
        while len(cols):
            cc = cols
            vv = vals
            lead = cc[0]
            piv = pivots.get(lead)
            if piv is None:
                pivots[lead] = _normalize(cols, vals, len(cols))
                r += 1
                break
            pc, pv = piv
            a = vv[0]
            p = pv[0]
            g = _gcd(a, p)
            cols, vals = _combine(cc, vv, p // g, pc, pv, a // g)
    return r
