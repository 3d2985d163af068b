"""Pure-Python hot kernels.

These are the reference implementations; ``_kernels_c.pyx`` mirrors them
one-for-one and is preferred at import when it has been compiled.

All kernels are generic over the coefficient type: anything supporting
``+``, ``*``, unary ``-`` and truthiness (zero is falsy) works, so the same
code serves rational alternating tensors and polynomial-coefficient fields.
"""
from fractions import Fraction
from math import gcd


def merge_sign(a, b):
    """Sign and sorted union of two strictly increasing index tuples.

    Returns ``(0, None)`` when the tuples share an index.
    """
    la = len(a)
    if la == 0:
        return 1, b
    if len(b) == 0:
        return 1, a
    out = []
    i = 0
    inversions = 0
    for y in b:
        while i < la and a[i] < y:
            out.append(a[i])
            i += 1
        if i < la and a[i] == y:
            return 0, None
        # every remaining element of a is > y
        inversions += la - i
        out.append(y)
    out.extend(a[i:])
    return (-1 if inversions & 1 else 1), tuple(out)


def split_sign(sub, full):
    """Remove ``sub`` from ``full`` (both sorted).

    Returns ``(sign, rest)`` where ``sign`` is the parity of the shuffle
    taking ``sub + rest`` to ``full``; ``(0, None)`` if ``sub`` is not a
    subset of ``full``.
    """
    if not sub:
        return 1, full
    rest = []
    j = 0
    ls = len(sub)
    inversions = 0
    for x in full:
        if j < ls and sub[j] == x:
            j += 1
        else:
            # elements of sub already consumed that are... none exceed x;
            # the remaining ls - j elements of sub exceed x
            inversions += ls - j
            rest.append(x)
    if j != ls:
        return 0, None
    return (-1 if inversions & 1 else 1), tuple(rest)


def wedge_terms(ta, tb):
    out = {}
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


def contract_terms(tu, tw):
    """Interior product of the degree-q terms ``tu`` into degree-p terms ``tw``.

    Uses iota_{e_J} e^I = sign(J, I\\J) e^{I\\J}; the result has degree p - q.
    """
    out = {}
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


def _content(row):
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return 1
    return g


def rref_int(rows, ncols):
    """Fraction-free Gauss-Jordan elimination on integer rows (in place).

    Returns ``(rows, pivots)`` with zero rows dropped; rows are primitive
    integer vectors with a positive pivot, not yet normalised to 1.
    """
    m = [r for r in rows if any(r)]
    pivots = []
    rank = 0
    nrows = len(m)
    for c in range(ncols):
        if rank == nrows:
            break
        p = -1
        best = None
        for i in range(rank, nrows):
            v = m[i][c]
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


def rref_fractions(rows, ncols):
    """Reduced row-echelon form of rational rows.

    Returns ``(rows, pivots)``: a list of tuples of ``Fraction`` with pivot
    entries 1 and zero rows removed.
    """
    irows = []
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
        out.append(tuple(Fraction(x, p) for x in row))
    return out, pivots
