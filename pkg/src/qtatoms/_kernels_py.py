"""Pure-Python hot kernels; the compiled ``_kernels`` module mirrors this API.

Vectors are sparse dicts ``key -> int`` with nonzero integer entries.  An
echelon basis is a dict ``pivot -> row`` where ``pivot`` is the largest key
of ``row``, the pivot entry is positive, every row is primitive, and no row
has a nonzero entry at another row's pivot (fully reduced).
"""

from __future__ import annotations

from math import gcd

IMPLEMENTATION = "python"


def diff_dict(terms: dict, shift: int, order: int = 1) -> dict:
    """Partial derivative of order ``order`` in the variable stored at bit ``shift``."""
    out = {}
    step = order << shift
    for k, c in terms.items():
        e = (k >> shift) & 0xFF
        if e < order:
            continue
        f = e
        for r in range(1, order):
            f *= e - r
        out[k - step] = c * f
    return out


def _primitive(vec: dict) -> dict:
    g = 0
    for c in vec.values():
        g = gcd(g, c)
        if g == 1:
            return vec
    if g > 1:
        return {k: c // g for k, c in vec.items()}
    return vec


def reduce_vector(rows: dict, vec: dict) -> dict:
    """Reduce ``vec`` against a fully reduced echelon basis; result is primitive."""
    v = dict(vec)
    hits = [p for p in v if p in rows]
    for p in hits:
        c = v.get(p)
        if not c:
            continue
        row = rows[p]
        a = row[p]
        g = gcd(a, c)
        a //= g
        c //= g
        if a != 1:
            for k in v:
                v[k] *= a
        for k, rc in row.items():
            nv = v.get(k, 0) - c * rc
            if nv:
                v[k] = nv
            else:
                v.pop(k, None)
    return _primitive(v) if v else v


def insert_row(rows: dict, vec: dict):
    """Insert ``vec`` into the echelon basis ``rows``; return the new pivot or None."""
    v = reduce_vector(rows, vec)
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


def nullspace_tags(vectors: list) -> list:
    """Integer relations among ``vectors``.

    Each vector may only use nonnegative keys.  Returns a basis of the
    relation space as dicts ``index -> coefficient`` with
    ``sum(coeff * vectors[index]) == 0``.
    """
    rows: dict = {}
    relations = []
    for idx, vec in enumerate(vectors):
        tagged = dict(vec)
        tagged[-1 - idx] = 1
        insert_row(rows, tagged)
    for p, row in rows.items():
        if p < 0:
            relations.append({-1 - k: c for k, c in row.items()})
    return relations
