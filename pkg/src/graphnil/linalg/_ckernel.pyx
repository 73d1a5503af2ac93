# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``_pykernel``: same algorithm, typed loops."""
from math import gcd


cdef dict _content_reduce(dict row):
    cdef object g = 0
    cdef object v
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        for c in row:
            row[c] //= g
    return row


cdef dict _combine(dict row, object f, dict piv, object p):
    cdef dict out = {}
    cdef object c, v, w
    for c, v in row.items():
        out[c] = p * v
    for c, v in piv.items():
        w = out.get(c, 0) - f * v
        if w:
            out[c] = w
        else:
            out.pop(c, None)
    return _content_reduce(out)


def rref_int(rows, Py_ssize_t ncols):
    cdef list active = [_content_reduce(dict(r)) for r in rows if r]
    cdef list pivots = []
    cdef list reduced = []
    cdef list nxt
    cdef Py_ssize_t col, i, j, k, best, best_len, ln, n
    cdef dict r, piv
    cdef object p, f, g
    for col in range(ncols):
        n = len(active)
        if n == 0:
            break
        best = -1
        best_len = 0
        for i in range(n):
            r = <dict>active[i]
            if col in r:
                ln = len(r)
                if best < 0 or ln < best_len:
                    best = i
                    best_len = ln
        if best < 0:
            continue
        piv = <dict>active.pop(best)
        p = piv[col]
        nxt = []
        for r in active:
            f = r.get(col)
            if f is None:
                nxt.append(r)
                continue
            g = gcd(p, f)
            r = _combine(r, f // g, piv, p // g)
            if r:
                nxt.append(r)
        active = nxt
        pivots.append(col)
        reduced.append(piv)
    for k in range(len(reduced) - 1, -1, -1):
        col = pivots[k]
        piv = <dict>reduced[k]
        p = piv[col]
        for j in range(k):
            r = <dict>reduced[j]
            f = r.get(col)
            if f is None:
                continue
            g = gcd(p, f)
            reduced[j] = _combine(r, f // g, piv, p // g)
    for k in range(len(reduced)):
        r = <dict>reduced[k]
        if r[pivots[k]] < 0:
            for c in r:
                r[c] = -r[c]
    return pivots, reduced
