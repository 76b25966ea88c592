# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled hot kernels with the same API as ``_kernels_py``."""

from math import gcd

IMPLEMENTATION = "cython"


def diff_dict(dict terms, int shift, int order=1):
    cdef dict out = {}
    cdef object step = (<object>order) << shift
    cdef object k, c, f
    cdef long e, r
    for k, c in terms.items():
        e = (k >> shift) & 0xFF
        if e < order:
            continue
        f = e
        for r in range(1, order):
            f *= e - r
        out[k - step] = c * f
    return out


cdef dict _primitive(dict vec):
    cdef object g = 0
    cdef object c
    for c in vec.values():
        g = gcd(g, c)
        if g == 1:
            return vec
    if g > 1:
        return {k: c // g for k, c in vec.items()}
    return vec


def reduce_vector(dict rows, dict vec):
    cdef dict v = dict(vec)
    cdef list hits = [p for p in v if p in rows]
    cdef dict row
    cdef object p, c, a, g, k, rc, nv
    for p in hits:
        c = v.get(p)
        if not c:
            continue
        row = <dict>rows[p]
        a = row[p]
        g = gcd(a, c)
        a = a // g
        c = c // g
        if a != 1:
            for k in v:
                v[k] = v[k] * a
        for k, rc in row.items():
            nv = v.get(k, 0) - c * rc
            if nv:
                v[k] = nv
            else:
                v.pop(k, None)
    return _primitive(v) if v else v


def insert_row(dict rows, dict vec):
    cdef dict v = reduce_vector(rows, vec)
    cdef dict row, new
    cdef object p, a, q, c, g, aa, cc, k, rc, vc, nv
    if not v:
        return None
    p = max(v)
    if v[p] < 0:
        v = {k: -c for k, c in v.items()}
    a = v[p]
    for q, row in list(rows.items()):
        c = row.get(p)
        if not c:
            continue
        g = gcd(a, c)
        aa = a // g
        cc = c // g
        new = {k: rc * aa for k, rc in row.items()} if aa != 1 else dict(row)
        for k, vc in v.items():
            nv = new.get(k, 0) - cc * vc
            if nv:
                new[k] = nv
            else:
                new.pop(k, None)
        rows[q] = _primitive(new)
    rows[p] = v
    return p


def nullspace_tags(list vectors):
    cdef dict rows = {}
    cdef list relations = []
    cdef dict tagged
    cdef long idx
    for idx in range(len(vectors)):
        tagged = dict(vectors[idx])
        tagged[-1 - idx] = 1
        insert_row(rows, tagged)
    for p, row in rows.items():
        if p < 0:
            relations.append({-1 - k: c for k, c in row.items()})
    return relations
