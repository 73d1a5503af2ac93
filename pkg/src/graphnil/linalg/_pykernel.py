"""Pure-Python sparse fraction-free Gauss-Jordan elimination.

Rows are dicts mapping column index to a nonzero int.  The compiled twin in
``_ckernel.pyx`` implements the identical algorithm; keep the two in sync.
"""
from math import gcd


def _content_reduce(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        for c in row:
            row[c] //= g
    return row


def _combine(row, f, piv, p):
    # p*row - f*piv, with zero entries dropped
    out = {c: p * v for c, v in row.items()}
    for c, v in piv.items():
        w = out.get(c, 0) - f * v
        if w:
            out[c] = w
        else:
            out.pop(c, None)
    return _content_reduce(out)


def rref_int(rows, ncols):
    """Reduce integer rows to fraction-free reduced row echelon form.

    Returns ``(pivots, reduced)`` where ``reduced[k]`` has a positive entry at
    column ``pivots[k]`` and zeros at every other pivot column.  Pivot columns
    are strictly increasing.  Input rows are not modified.
    """
    active = [_content_reduce(dict(r)) for r in rows if r]
    pivots = []
    reduced = []
    for col in range(ncols):
        if not active:
            break
        best = -1
        best_len = 0
        for i in range(len(active)):
            r = active[i]
            if col in r:
                ln = len(r)
                if best < 0 or ln < best_len:
                    best = i
                    best_len = ln
        if best < 0:
            continue
        piv = active.pop(best)
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
    # back substitution
    for k in range(len(reduced) - 1, -1, -1):
        col = pivots[k]
        piv = reduced[k]
        p = piv[col]
        for j in range(k):
            r = reduced[j]
            f = r.get(col)
            if f is None:
                continue
            g = gcd(p, f)
            reduced[j] = _combine(r, f // g, piv, p // g)
    for k in range(len(reduced)):
        r = reduced[k]
        if r[pivots[k]] < 0:
            for c in r:
                r[c] = -r[c]
    return pivots, reduced
