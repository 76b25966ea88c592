"""Brute-force bigraded modules spanned by derivatives of lattice determinants.

Every subspace is stored as a :class:`BigradedBasis`: one fully reduced
integer echelon basis per bidegree ``(r, s)`` (``r`` the x-degree).
Characters are read off the echelon pivots, so a trace costs one dict
lookup per basis vector.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Mapping, Sequence

from .diagrams import Cell, DiagramError, LatticeDiagram, Partition, partitions, shadow
from .exactpoly import BITS, Echelon, MPoly, kernels, pack, permute_key, unpack
from .qtfield import ZERO, QTPoly, QTScalar, qt_monomial
from .symfunc import SymFun, char_value, z_lambda

__all__ = [
    "BigradedBasis",
    "FrobSeries",
    "InvarianceError",
    "lattice_determinant",
    "derivative_span",
    "hilbert",
    "frobenius",
    "frobenius_symfun",
    "polarizer",
    "module",
    "hole_module",
    "sum_spaces",
    "intersect",
    "perp_within",
    "flip_image",
    "image_under",
    "kernel_of",
    "m_s_t",
    "kernel_and_atom",
    "alternant_basis",
    "slide",
    "dumps_basis",
    "loads_basis",
]


class InvarianceError(ValueError):
    """A subspace expected to be S_n-stable is not."""


class BigradedBasis:
    """Echelonized bihomogeneous components of a subspace of ``Q[x; y]``."""

    def __init__(self, n: int, comps: Mapping[tuple[int, int], Echelon] | None = None):
        self.n = n
        self.comps: dict[tuple[int, int], Echelon] = {}
        for bd, e in (comps or {}).items():
            if len(e):
                self.comps[bd] = e

    def dims(self) -> dict[tuple[int, int], int]:
        return {bd: len(e) for bd, e in sorted(self.comps.items())}

    def dim(self) -> int:
        return sum(len(e) for e in self.comps.values())

    def component(self, bd: tuple[int, int]) -> Echelon:
        return self.comps.get(bd) or Echelon(self.n)

    def polys(self) -> list[MPoly]:
        return [p for bd in sorted(self.comps) for p in self.comps[bd].polys()]

    def contains_poly(self, p: MPoly) -> bool:
        for bd in p.bidegrees():
            if not self.component(bd).contains_poly(p.component(*bd)):
                return False
        return True

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BigradedBasis):
            return NotImplemented
        return self.n == other.n and {bd: e.rows for bd, e in self.comps.items()} == {
            bd: e.rows for bd, e in other.comps.items()
        }

    def __repr__(self) -> str:
        return f"BigradedBasis(n={self.n}, dims={self.dims()})"


def _bidegree_of_key(key: int, n: int) -> tuple[int, int]:
    e = unpack(key, 2 * n)
    return sum(e[:n]), sum(e[n:])


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def lattice_determinant(cells: Iterable[tuple[int, int]]) -> MPoly:
    """``det || x_i^{p_j} y_i^{q_j} || / prod(p_j! q_j!)`` with cells in lex order."""
    raw = [tuple(c) for c in cells]
    if len(set(raw)) != len(raw):
        raise ValueError("lattice determinant of a diagram with repeated cells")
    L = LatticeDiagram(raw)
    n = len(L)
    if n == 0:
        return MPoly.constant(0)
    den = 1
    for p, qq in L:
        den *= factorial(p) * factorial(qq)
    terms: dict[int, Fraction] = {}
    for perm in itertools.permutations(range(n)):
        key = 0
        for i in range(n):
            p, qq = L[perm[i]]
            key |= p << (BITS * i)
            key |= qq << (BITS * (n + i))
        terms[key] = terms.get(key, 0) + Fraction(_perm_sign(perm), den)
    return MPoly(n, terms)


def _span_from_top(n: int, top: Iterable[dict[int, int]]) -> BigradedBasis:
    comps: dict[tuple[int, int], Echelon] = {}
    for v in top:
        if not v:
            continue
        bd = _bidegree_of_key(next(iter(v)), n)
        comps.setdefault(bd, Echelon(n)).insert(v)
    if not comps:
        return BigradedBasis(n)
    shifts_x = [BITS * i for i in range(n)]
    shifts_y = [BITS * (n + i) for i in range(n)]
    done: set[tuple[int, int]] = set()
    while True:
        pending = [bd for bd in comps if bd not in done]
        if not pending:
            break
        bd = max(pending, key=lambda b: (b[0] + b[1], b))
        done.add(bd)
        r, s = bd
        rows = comps[bd].vectors()
        if r > 0:
            tgt = comps.setdefault((r - 1, s), Echelon(n))
            for v in rows:
                for sh in shifts_x:
                    d = kernels.diff_dict(v, sh, 1)
                    if d:
                        tgt.insert(d)
        if s > 0:
            tgt = comps.setdefault((r, s - 1), Echelon(n))
            for v in rows:
                for sh in shifts_y:
                    d = kernels.diff_dict(v, sh, 1)
                    if d:
                        tgt.insert(d)
    return BigradedBasis(n, comps)


def derivative_span(P: MPoly | Iterable[MPoly]) -> BigradedBasis:
    """Span of all partial derivatives (of all orders) of ``P`` or of a family."""
    polys = [P] if isinstance(P, MPoly) else list(P)
    if not polys:
        raise ValueError("derivative_span of nothing")
    n = polys[0].n
    tops = []
    for p in polys:
        for bd in sorted(p.bidegrees()):
            tops.append(p.component(*bd).to_int_vector())
    return _span_from_top(n, tops)


@lru_cache(maxsize=256)
def module(mu: tuple[int, ...]) -> BigradedBasis:
    """``M_mu``, cached by partition."""
    return derivative_span(lattice_determinant(Partition(mu).cells()))


@lru_cache(maxsize=1024)
def hole_module(mu: tuple[int, ...], cell: tuple[int, int]) -> BigradedBasis:
    """``M_{mu/ij}``: derivative span of the determinant of ``mu`` minus one cell."""
    mu = Partition(mu)
    if tuple(cell) not in mu:
        raise DiagramError(f"cell {cell} is not in {mu}")
    return derivative_span(lattice_determinant(c for c in mu.cells() if c != tuple(cell)))


def hilbert(B: BigradedBasis) -> QTPoly:
    """``sum t^r q^s dim H_{r,s}``."""
    return QTPoly({(s, r): d for (r, s), d in B.dims().items()})


class FrobSeries:
    """Per-bidegree Schur multiplicities of a bigraded S_n-module."""

    def __init__(self, n: int, components: Mapping[tuple[int, int], Mapping[Partition, int]]):
        self.n = n
        self.components = {bd: dict(c) for bd, c in components.items() if any(c.values())}

    def to_symfun(self) -> SymFun:
        out: dict[Partition, QTScalar] = {}
        for (r, s), comp in self.components.items():
            w = qt_monomial(s, r)
            for lam, m in comp.items():
                if m:
                    out[lam] = out.get(lam, ZERO) + w * m
        return SymFun(self.n, "s", out)

    def dims(self, f_lambda) -> dict[tuple[int, int], int]:
        return {bd: sum(m * f_lambda(lam) for lam, m in c.items()) for bd, c in self.components.items()}

    def __repr__(self) -> str:
        return f"FrobSeries(n={self.n}, {self.components})"


def _cycle_rep(rho: Partition) -> list[int]:
    """A 0-based permutation of cycle type ``rho``."""
    perm = []
    start = 0
    for r in rho:
        perm.extend(start + ((k + 1) % r) for k in range(r))
        start += r
    return perm


def _check_invariant(e: Echelon, n: int) -> None:
    if n < 2:
        return
    gens = [[1, 0] + list(range(2, n)), [(i + 1) % n for i in range(n)]]
    for sigma in gens:
        for v in e.rows.values():
            img = {permute_key(k, sigma, n): c for k, c in v.items()}
            if not e.contains(img):
                raise InvarianceError("subspace is not stable under the diagonal action")


def frobenius(B: BigradedBasis, check: bool = True) -> FrobSeries:
    """Schur multiplicities per bidegree from traces of cycle-type representatives."""
    n = B.n
    parts = partitions(n)
    reps = {rho: _cycle_rep(rho) for rho in parts}
    out: dict[tuple[int, int], dict[Partition, int]] = {}
    for bd, e in B.comps.items():
        if check:
            _check_invariant(e, n)
        chi = {}
        for rho in parts:
            sigma = reps[rho]
            tr = Fraction(0)
            for p, row in e.rows.items():
                c = row.get(permute_key(p, sigma, n))
                if c:
                    tr += Fraction(c, row[p])
            chi[rho] = tr
        mult = {}
        for lam in parts:
            m = sum(chi[rho] * char_value(lam, rho) / z_lambda(rho) for rho in parts)
            if m.denominator != 1 or m < 0:
                raise ArithmeticError(f"non-integral or negative multiplicity {m} for {lam}")
            if m:
                mult[lam] = int(m)
        out[bd] = mult
    return FrobSeries(n, out)


def frobenius_symfun(B: BigradedBasis) -> SymFun:
    return frobenius(B).to_symfun()


# subspace lattice


def sum_spaces(*spaces: BigradedBasis) -> BigradedBasis:
    n = spaces[0].n
    comps: dict[tuple[int, int], Echelon] = {}
    for sp in spaces:
        if sp.n != n:
            raise ValueError("size mismatch")
        for bd, e in sp.comps.items():
            tgt = comps.setdefault(bd, Echelon(n))
            for v in e.vectors():
                tgt.insert(v)
    return BigradedBasis(n, comps)


def _combine(vectors: list[dict[int, int]], coeffs: Mapping[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for i, c in coeffs.items():
        for k, v in vectors[i].items():
            nv = out.get(k, 0) + c * v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
    return out


def intersect(*spaces: BigradedBasis) -> BigradedBasis:
    acc = spaces[0]
    for other in spaces[1:]:
        if other.n != acc.n:
            raise ValueError("size mismatch")
        comps = {}
        for bd in set(acc.comps) & set(other.comps):
            a = acc.comps[bd].vectors()
            b = other.comps[bd].vectors()
            rels = kernels.nullspace_tags(a + b)
            e = Echelon(acc.n)
            for rel in rels:
                e.insert(_combine(a, {i: c for i, c in rel.items() if i < len(a)}))
            comps[bd] = e
        acc = BigradedBasis(acc.n, comps)
    return acc


def _apolar_int(u: Mapping[int, int], v: Mapping[int, int], n: int) -> int:
    if len(u) > len(v):
        u, v = v, u
    total = 0
    for k, c in u.items():
        c2 = v.get(k)
        if c2:
            w = 1
            for e in unpack(k, 2 * n):
                if e > 1:
                    w *= factorial(e)
            total += c * c2 * w
    return total


def perp_within(ambient: BigradedBasis, sub: BigradedBasis) -> BigradedBasis:
    """Orthogonal complement of ``sub`` inside ``ambient`` for the apolar product."""
    n = ambient.n
    comps = {}
    for bd, e in ambient.comps.items():
        amb = e.vectors()
        s = sub.comps.get(bd)
        if not s or not len(s):
            comps[bd] = e.copy()
            continue
        sv = s.vectors()
        gram = [{j: g for j, w in enumerate(sv) if (g := _apolar_int(a, w, n))} for a in amb]
        rels = kernels.nullspace_tags(gram)
        out = Echelon(n)
        for rel in rels:
            out.insert(_combine(amb, rel))
        comps[bd] = out
    return BigradedBasis(n, comps)


def image_under(B: BigradedBasis, op) -> BigradedBasis:
    """Span of ``op(v)`` over basis vectors; ``op`` maps int dicts to int dicts."""
    comps: dict[tuple[int, int], Echelon] = {}
    for e in B.comps.values():
        for v in e.vectors():
            w = op(v)
            if w:
                bd = _bidegree_of_key(next(iter(w)), B.n)
                comps.setdefault(bd, Echelon(B.n)).insert(w)
    return BigradedBasis(B.n, comps)


def kernel_of(B: BigradedBasis, op) -> BigradedBasis:
    """Kernel of a linear map restricted to ``B`` (computed per bidegree)."""
    comps = {}
    for bd, e in B.comps.items():
        vecs = e.vectors()
        imgs = [op(v) for v in vecs]
        rels = kernels.nullspace_tags(imgs)
        out = Echelon(B.n)
        for rel in rels:
            out.insert(_combine(vecs, rel))
        comps[bd] = out
    return BigradedBasis(B.n, comps)


def _polarizer(n: int, h: int, k: int):
    sx = [BITS * i for i in range(n)]
    sy = [BITS * (n + i) for i in range(n)]

    def op(v: dict[int, int]) -> dict[int, int]:
        out: dict[int, int] = {}
        for i in range(n):
            w = v
            if h:
                w = kernels.diff_dict(w, sx[i], h)
            if k and w:
                w = kernels.diff_dict(w, sy[i], k)
            for key, c in w.items():
                nv = out.get(key, 0) + c
                if nv:
                    out[key] = nv
                else:
                    out.pop(key, None)
        return out

    return op


def polarizer(n: int, h: int, k: int):
    """``D_{hk}`` as an int-dict operator."""
    if h < 0 or k < 0 or h + k < 1:
        raise ValueError("need h + k >= 1")
    return _polarizer(n, h, k)


def flip_image(delta: MPoly, sub: BigradedBasis) -> BigradedBasis:
    """``{P(d) delta : P in sub}``."""
    if sub.n != delta.n:
        raise ValueError("size mismatch")

    def op(v):
        return MPoly(delta.n, v).apply_operator(delta).to_int_vector()

    return image_under(sub, op)


def m_s_t(mu: Sequence[int], S: Sequence[Sequence[int]], T: Sequence[Sequence[int]]) -> BigradedBasis:
    """``M_S^T``: the part of the intersection over ``T`` orthogonal to the rest of ``S``."""
    if not T:
        raise ValueError("T must be nonempty")
    S = [Partition(a) for a in S]
    T = [Partition(a) for a in T]
    preds = set(Partition(p) for p in _preds(Partition(mu)))
    if not set(S) <= preds or not set(T) <= set(S):
        raise ValueError("need T within S within the predecessors of mu")
    N = intersect(*[module(tuple(a)) for a in T])
    rest = [b for b in S if b not in T]
    if not rest:
        return N
    P = intersect(sum_spaces(*[module(tuple(b)) for b in rest]), N)
    return perp_within(N, P)


def _preds(mu: Partition) -> list[Partition]:
    return [mu.remove(c) for c in mu.corners()]


def kernel_and_atom(mu: Sequence[int], c: tuple[int, int], axis: str = "x") -> tuple[BigradedBasis, SymFun]:
    """Kernel of ``D_x`` (or ``D_y``) on ``M_{mu/c}`` and the atom characteristic.

    The atom is ``Fch K_{ij} - Fch K_{i,j+1}`` for ``x`` and
    ``Fch K_{ij} - Fch K_{i+1,j}`` for ``y``; a kernel outside ``mu`` is zero.
    """
    mu = Partition(mu)
    if axis not in ("x", "y"):
        raise ValueError("axis must be 'x' or 'y'")
    i, j = c
    K = _kernel(mu, (i, j), axis)
    nxt = (i, j + 1) if axis == "x" else (i + 1, j)
    A = frobenius_symfun(K)
    if nxt in mu:
        A = A - frobenius_symfun(_kernel(mu, nxt, axis))
    return K, A


@lru_cache(maxsize=1024)
def _kernel(mu: Partition, c: tuple[int, int], axis: str) -> BigradedBasis:
    M = hole_module(tuple(mu), tuple(c))
    op = polarizer(M.n, 1, 0) if axis == "x" else polarizer(M.n, 0, 1)
    return kernel_of(M, op)


def alternant_basis(B: BigradedBasis) -> list[MPoly]:
    """Basis of the sign-isotypic part (alternants under the diagonal action)."""
    n = B.n
    if n < 2:
        return B.polys()
    perms = [(list(p), _perm_sign(p)) for p in itertools.permutations(range(n))]
    fr = frobenius(B, check=False)
    sign_rep = Partition([1] * n)
    out: list[MPoly] = []
    for bd, e in sorted(B.comps.items()):
        if not fr.components.get(bd, {}).get(sign_rep):
            continue
        ech = Echelon(n)
        for v in e.vectors():
            acc: dict[int, int] = {}
            for sigma, sg in perms:
                for k, c in v.items():
                    kk = permute_key(k, sigma, n)
                    nv = acc.get(kk, 0) + sg * c
                    if nv:
                        acc[kk] = nv
                    else:
                        acc.pop(kk, None)
            ech.insert(acc)
            if len(ech) == fr.components[bd][sign_rep]:
                break
        out.extend(ech.polys())
    return out


def slide(cells: Sequence[tuple[int, int]], idx: int, h: int, k: int) -> tuple[int, LatticeDiagram | None]:
    """Move cell ``idx`` (lex position) by ``(-h, -k)``; return ``(sign, diagram)``.

    The sign is that of the permutation sorting the moved list back into lex
    order; the diagram is None when the move leaves the quadrant or collides.
    """
    L = list(LatticeDiagram(cells))
    i, j = L[idx]
    new = (i - h, j - k)
    if new[0] < 0 or new[1] < 0 or new in L:
        return 0, None
    L[idx] = Cell(*new)
    order = sorted(range(len(L)), key=lambda a: L[a])
    return _perm_sign(order), LatticeDiagram(L)


# text serialization


def dumps_basis(B: BigradedBasis) -> str:
    lines = [f"# n {B.n}"]
    for bd in sorted(B.comps):
        lines.append(f"## bidegree {bd[0]} {bd[1]}")
        for p in B.comps[bd].polys():
            lines.append(str(p))
    return "\n".join(lines) + "\n"


def loads_basis(text: str) -> BigradedBasis:
    n = None
    comps: dict[tuple[int, int], Echelon] = {}
    cur = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("## bidegree"):
            _, _, r, s = line.split()
            cur = (int(r), int(s))
            comps[cur] = Echelon(n)
        elif line.startswith("# n"):
            n = int(line.split()[2])
        else:
            if n is None or cur is None:
                raise ValueError("malformed basis text")
            comps[cur].insert(MPoly.parse(line, n).to_int_vector())
    if n is None:
        raise ValueError("missing header")
    return BigradedBasis(n, comps)
