# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the kernels in ``_kernels_py``.

Index arithmetic runs on C ints; coefficients stay Python objects so the
kernels remain exact and generic over the coefficient ring.
"""
from fractions import Fraction
from math import gcd


cpdef tuple merge_sign(tuple a, tuple b):
    cdef Py_ssize_t la = len(a), lb = len(b), i = 0, j
    cdef long inversions = 0
    cdef long x, y
    if la == 0:
        return 1, b
    if lb == 0:
        return 1, a
    out = []
    for j in range(lb):
        y = b[j]
        while i < la:
            x = a[i]
            if x < y:
                out.append(a[i])
                i += 1
            else:
                break
        if i < la and <long>a[i] == y:
            return 0, None
        inversions += la - i
        out.append(b[j])
    while i < la:
        out.append(a[i])
        i += 1
    return (-1 if inversions & 1 else 1), tuple(out)


cpdef tuple split_sign(tuple sub, tuple full):
    cdef Py_ssize_t ls = len(sub), lf = len(full), j = 0, t
    cdef long inversions = 0
    cdef long x
    if ls == 0:
        return 1, full
    rest = []
    for t in range(lf):
        x = full[t]
        if j < ls and <long>sub[j] == x:
            j += 1
        else:
            inversions += ls - j
            rest.append(full[t])
    if j != ls:
        return 0, None
    return (-1 if inversions & 1 else 1), tuple(rest)


def wedge_terms(dict ta, dict tb):
    cdef dict out = {}
    cdef int s
    for ka, ca in ta.items():
        for kb, cb in tb.items():
            s, key = merge_sign(ka, kb)
            if s == 0:
                continue
            c = ca * cb
            if s < 0:
                c = -c
            prev = out.get(key)
            out[key] = c if prev is None else prev + c
    return {k: v for k, v in out.items() if v}


def contract_terms(dict tu, dict tw):
    cdef dict out = {}
    cdef int s
    for ki, ci in tw.items():
        for kj, cj in tu.items():
            s, rest = split_sign(kj, ki)
            if s == 0:
                continue
            c = cj * ci
            if s < 0:
                c = -c
            prev = out.get(rest)
            out[rest] = c if prev is None else prev + c
    return {k: v for k, v in out.items() if v}


cdef object _content(list row):
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return 1
    return g


def rref_int(rows, Py_ssize_t ncols):
    cdef list m = [r for r in rows if any(r)]
    cdef list pivots = []
    cdef Py_ssize_t rank = 0, nrows = len(m), c, i, p
    cdef list prow, row, new
    for c in range(ncols):
        if rank == nrows:
            break
        p = -1
        best = None
        for i in range(rank, nrows):
            v = (<list>m[i])[c]
            if v:
                av = v if v > 0 else -v
                if best is None or av < best:
                    best = av
                    p = i
                    if av == 1:
                        break
        if p < 0:
            continue
        m[rank], m[p] = m[p], m[rank]
        prow = m[rank]
        a = prow[c]
        if a < 0:
            prow = [-x for x in prow]
            a = -a
            m[rank] = prow
        for i in range(nrows):
            if i == rank:
                continue
            row = m[i]
            b = row[c]
            if not b:
                continue
            g = gcd(a, b)
            fa = a // g
            fb = b // g
            new = [fa * x - fb * y for x, y in zip(row, prow)]
            g2 = _content(new)
            if g2 > 1:
                new = [x // g2 for x in new]
            m[i] = new
        pivots.append(c)
        rank += 1
    return m[:rank], pivots


def rref_fractions(rows, Py_ssize_t ncols):
    cdef list irows = []
    for r in rows:
        den = 1
        for x in r:
            d = x.denominator
            if d != 1:
                den = den * d // gcd(den, d)
        irows.append([int(x * den) for x in r])
    m, pivots = rref_int(irows, ncols)
    out = []
    for row, c in zip(m, pivots):
        p = row[c]
        out.append(tuple([Fraction(x, p) for x in row]))
    return out, pivots
