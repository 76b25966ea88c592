"""Partition and lattice-diagram combinatorics.

Cells use the French convention: ``(row, col)`` with row 0 at the bottom.
A cell ``(i, j)`` contributes the monomial ``x^i y^j`` to a lattice
determinant and carries the weight ``t^i q^j``.  Corners are always listed
from northwest to southeast, i.e. top row first.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from math import factorial, prod
from typing import Iterable, Iterator, NamedTuple, Sequence

from .qtfield import QTScalar, qt_monomial, qt_prod

__all__ = [
    "Cell",
    "Partition",
    "LatticeDiagram",
    "ShadowFrame",
    "DiagramError",
    "GistolCapError",
    "partitions",
    "predecessors",
    "pred_ij",
    "shadow",
    "corner_data",
    "arm_leg",
    "t_weight",
    "n_stat",
    "f_lambda",
    "d_ij_diagram",
    "gistol_canonical",
    "gistol_equivalent",
    "row_runs_matrix",
    "bh_assignment",
    "epsilon_words",
    "rectangles",
    "parse_cell",
    "format_cell",
    "parse_word",
    "format_word",
]


class DiagramError(ValueError):
    """Invalid partition, cell or diagram argument."""


class GistolCapError(RuntimeError):
    """Brute-force gistol canonicalization exceeded its size cap."""


class Cell(NamedTuple):
    row: int
    col: int

    def __str__(self) -> str:
        return f"({self.row},{self.col})"


class Partition(tuple):
    """A weakly decreasing tuple of positive integers; row ``k`` has ``self[k]`` cells."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise DiagramError(f"partition parts must be positive: {parts}")
        if any(parts[k] < parts[k + 1] for k in range(len(parts) - 1)):
            raise DiagramError(f"partition parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        body = text.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise DiagramError(f"expected a bracketed list like [3,2,1], got {text!r}")
        inner = body[1:-1].strip()
        if not inner:
            return cls(())
        try:
            return cls(int(p) for p in inner.split(","))
        except ValueError as exc:
            raise DiagramError(f"bad partition {text!r}") from exc

    def __str__(self) -> str:
        return "[" + ",".join(str(p) for p in self) + "]"

    def __repr__(self) -> str:
        return f"Partition({list(self)})"

    @property
    def size(self) -> int:
        return sum(self)

    def row(self, i: int) -> int:
        """Length of row ``i``; zero above the diagram."""
        return self[i] if 0 <= i < len(self) else 0

    def conjugate(self) -> "Partition":
        if not self:
            return Partition(())
        return Partition(sum(1 for p in self if p > j) for j in range(self[0]))

    def __contains__(self, cell) -> bool:
        if not (isinstance(cell, tuple) and len(cell) == 2):
            return False
        i, j = cell
        return 0 <= i < len(self) and 0 <= j < self[i]

    def cells(self) -> list[Cell]:
        return [Cell(i, j) for i, r in enumerate(self) for j in range(r)]

    def corners(self) -> list[Cell]:
        """Removable cells, northwest to southeast."""
        out = []
        for i in range(len(self) - 1, -1, -1):
            if self.row(i) > self.row(i + 1):
                out.append(Cell(i, self[i] - 1))
        return out

    def remove(self, cell: Cell) -> "Partition":
        i, j = cell
        if cell not in self.corners():
            raise DiagramError(f"{cell} is not a corner of {self}")
        parts = list(self)
        parts[i] -= 1
        return Partition(p for p in parts if p)

    def add(self, row: int) -> "Partition":
        parts = list(self) + [0]
        parts[row] += 1
        return Partition(p for p in parts if p)

    def successors(self) -> list["Partition"]:
        """Partitions obtained by adding one cell."""
        out = []
        for i in range(len(self) + 1):
            if i == 0 or self.row(i) < self.row(i - 1):
                out.append(self.add(i))
        return out

    def dominates(self, other: "Partition") -> bool:
        """Dominance order ``self >= other`` for partitions of the same size."""
        a = b = 0
        for k in range(max(len(self), len(other))):
            a += self.row(k)
            b += other.row(k)
            if a < b:
                return False
        return True

    def diagram(self) -> "LatticeDiagram":
        return LatticeDiagram(self.cells())


def parse_cell(text: str) -> Cell:
    m = re.fullmatch(r"\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*", text)
    if not m:
        raise DiagramError(f"expected a cell like (1,0), got {text!r}")
    return Cell(int(m.group(1)), int(m.group(2)))


def format_cell(c: tuple[int, int]) -> str:
    return f"({c[0]},{c[1]})"


def parse_word(text: str) -> tuple[int, ...]:
    if not re.fullmatch(r"[01]+", text.strip()):
        raise DiagramError(f"expected a 0/1 word, got {text!r}")
    return tuple(int(ch) for ch in text.strip())


def format_word(word: Sequence[int]) -> str:
    return "".join(str(b) for b in word)


class LatticeDiagram(tuple):
    """Distinct cells in increasing lexicographic order."""

    def __new__(cls, cells: Iterable[tuple[int, int]]):
        cs = [Cell(int(i), int(j)) for i, j in cells]
        if any(i < 0 or j < 0 for i, j in cs):
            raise DiagramError("cells must lie in the first quadrant")
        if len(set(cs)) != len(cs):
            raise DiagramError("lattice diagram has repeated cells")
        return super().__new__(cls, sorted(cs))

    def __repr__(self) -> str:
        return "LatticeDiagram([" + ", ".join(str(c) for c in self) + "])"

    def shifted(self, di: int, dj: int) -> "LatticeDiagram":
        return LatticeDiagram((i + di, j + dj) for i, j in self)

    def without(self, cell: tuple[int, int]) -> "LatticeDiagram":
        if tuple(cell) not in self:
            raise DiagramError(f"{cell} not in diagram")
        return LatticeDiagram(c for c in self if c != tuple(cell))

    def matrix(self) -> tuple[tuple[int, ...], ...]:
        """0/1 occupancy rows, listed top row first."""
        if not self:
            return ()
        h = max(c.row for c in self) + 1
        w = max(c.col for c in self) + 1
        occ = set(self)
        return tuple(tuple(int((i, j) in occ) for j in range(w)) for i in range(h - 1, -1, -1))


def partitions(n: int) -> list[Partition]:
    """All partitions of ``n`` in reverse lexicographic order, ``(n)`` first."""
    return list(_partitions(n))


@lru_cache(maxsize=None)
def _partitions(n: int) -> tuple[Partition, ...]:
    def gen(rest: int, cap: int) -> Iterator[tuple[int, ...]]:
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in gen(rest - first, first):
                yield (first,) + tail

    return tuple(Partition(p) for p in gen(n, n))


def predecessors(mu: Partition) -> list[Partition]:
    """Partitions obtained by removing one corner, corners taken northwest to southeast."""
    mu = Partition(mu)
    if not mu:
        raise DiagramError("the empty partition has no predecessors")
    return [mu.remove(c) for c in mu.corners()]


def arm_leg(mu: Partition, c: tuple[int, int]) -> tuple[int, int, int, int]:
    """Return ``(arm, leg, coarm, coleg)`` of cell ``c``."""
    mu = Partition(mu)
    if tuple(c) not in mu:
        raise DiagramError(f"cell {c} is not in {mu}")
    i, j = c
    leg = sum(1 for r in mu[i + 1:] if r > j)
    return mu[i] - j - 1, leg, j, i


def hook(mu: Partition, c: tuple[int, int]) -> int:
    a, l, _, _ = arm_leg(mu, c)
    return a + l + 1


def t_weight(cells: Iterable[tuple[int, int]]) -> QTScalar:
    """Product of the weights ``t^row q^col`` over the cells."""
    qe = te = 0
    for i, j in cells:
        te += i
        qe += j
    return qt_monomial(qe, te)


def n_stat(mu: Partition) -> int:
    return sum(i * r for i, r in enumerate(mu))


def f_lambda(lam: Partition) -> int:
    """Number of standard tableaux of shape ``lam`` (hook length formula)."""
    lam = Partition(lam)
    hooks = prod(hook(lam, c) for c in lam.cells())
    return factorial(lam.size) // hooks


@dataclass(frozen=True)
class ShadowFrame:
    """Corner data of the shadow of a cell, in the shadow's own coordinates.

    ``x[s-1]`` is the weight of the ``s``-th outer corner of ``tau`` and ``u[s]``
    the weight of the ``s``-th inner corner, ``u[0]`` and ``u[m]`` being the
    two external ones.  ``origin_weight`` is ``t^i q^j`` and converts any of
    these monomials into the coordinates of ``mu``.
    """

    mu: Partition
    origin: Cell
    tau: Partition
    cells: tuple[Cell, ...]
    corners: tuple[Cell, ...]
    pred: tuple[Partition, ...]
    m: int
    x: tuple[QTScalar, ...]
    u: tuple[QTScalar, ...]
    x0: QTScalar
    widths: tuple[int, ...]
    drops: tuple[int, ...]
    coarms: tuple[int, ...]
    colegs: tuple[int, ...]
    origin_weight: QTScalar

    @property
    def size(self) -> int:
        return len(self.cells)

    def x_mu(self) -> tuple[QTScalar, ...]:
        return tuple(v * self.origin_weight for v in self.x)

    def u_mu(self) -> tuple[QTScalar, ...]:
        return tuple(v * self.origin_weight for v in self.u)


def shadow(mu: Partition, c: tuple[int, int]) -> ShadowFrame:
    """Shadow of ``c`` in ``mu``: all cells weakly north and east of ``c``."""
    mu = Partition(mu)
    if tuple(c) not in mu:
        raise DiagramError(f"cell {c} is not in {mu}")
    i, j = c
    tau = Partition(r - j for r in mu[i:] if r > j)
    cells = tuple(Cell(i + a, j + b) for a, b in tau.cells())
    tcorners = tau.corners()
    m = len(tcorners)
    colegs = tuple(cc.row for cc in tcorners)
    coarms = tuple(cc.col for cc in tcorners)
    x = tuple(qt_monomial(a, l) for l, a in zip(colegs, coarms))
    u = [qt_monomial(-1, colegs[0])]
    for s in range(m - 1):
        u.append(qt_monomial(coarms[s], colegs[s + 1]))
    u.append(qt_monomial(coarms[-1], -1))
    widths = tuple(coarms[s] - (coarms[s - 1] if s else -1) for s in range(m))
    drops = tuple(colegs[s] - (colegs[s + 1] if s + 1 < m else -1) for s in range(m))
    corners = tuple(Cell(i + cc.row, j + cc.col) for cc in tcorners)
    frame = ShadowFrame(
        mu=mu,
        origin=Cell(i, j),
        tau=tau,
        cells=cells,
        corners=corners,
        pred=tuple(mu.remove(cc) for cc in corners),
        m=m,
        x=x,
        u=tuple(u),
        x0=qt_monomial(-1, -1),
        widths=widths,
        drops=drops,
        coarms=coarms,
        colegs=colegs,
        origin_weight=qt_monomial(j, i),
    )
    if frame.x0 * qt_prod(frame.x) != qt_prod(frame.u):
        raise AssertionError(f"corner weight product invariant failed for {mu} at {c}")
    return frame


def corner_data(mu: Partition) -> ShadowFrame:
    return shadow(mu, (0, 0))


def pred_ij(mu: Partition, c: tuple[int, int]) -> list[Partition]:
    """Predecessors of ``mu`` whose removed corner lies in the shadow of ``c``."""
    return list(shadow(mu, c).pred)


def epsilon_words(m: int) -> list[tuple[int, ...]]:
    """All nonzero 0/1 words of length ``m`` in lexicographic order."""
    return [w for w in itertools.product((0, 1), repeat=m) if any(w)]


def d_ij_diagram(
    mu: Partition, c: tuple[int, int], eps: Sequence[int], dual: bool = False
) -> LatticeDiagram:
    """Keep the rectangles of the shadow selected by ``eps`` and compact them at ``c``.

    The default slices the shadow into vertical rectangles of widths
    ``w_1..w_m`` and slides them left; ``dual=True`` slices into horizontal
    rectangles of heights ``v_1..v_m`` and slides them down.
    """
    fr = shadow(mu, c)
    eps = tuple(eps)
    if len(eps) != fr.m or any(b not in (0, 1) for b in eps):
        raise DiagramError(f"word {eps} does not index the {fr.m} corners of the shadow")
    i0, j0 = fr.origin
    cells = []
    offset = 0
    if not dual:
        for s in range(fr.m):
            if not eps[s]:
                continue
            for dj in range(fr.widths[s]):
                for di in range(fr.colegs[s] + 1):
                    cells.append((i0 + di, j0 + offset + dj))
            offset += fr.widths[s]
    else:
        # horizontal slabs are stacked bottom-up, southeast corner first
        for s in range(fr.m - 1, -1, -1):
            if not eps[s]:
                continue
            for di in range(fr.drops[s]):
                for dj in range(fr.coarms[s] + 1):
                    cells.append((i0 + offset + di, j0 + dj))
            offset += fr.drops[s]
    return LatticeDiagram(cells)


GISTOL_CAP = 8


def row_runs_matrix(text: str) -> tuple[tuple[int, ...], ...]:
    """Occupancy matrix (top row first) from row-run notation such as ``"1|0,2,1"``.

    Rows are separated by ``|`` from top to bottom; each row lists alternating
    run lengths starting with a filled run, so ``0,2,1`` is two empty cells
    followed by one filled cell.
    """
    rows = []
    for chunk in text.strip().strip("{}()").split("|"):
        runs = [int(v) for v in chunk.split(",") if v.strip()]
        row: list[int] = []
        fill = 1
        for r in runs:
            row.extend([fill] * r)
            fill ^= 1
        rows.append(row)
    w = max((len(r) for r in rows), default=0)
    return tuple(tuple(r + [0] * (w - len(r))) for r in rows)


def _strip(mat: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    rows = [tuple(r) for r in mat if any(r)]
    if not rows:
        return []
    w = max(len(r) for r in rows)
    rows = [r + (0,) * (w - len(r)) for r in rows]
    keep = [j for j in range(w) if any(r[j] for r in rows)]
    return [tuple(r[j] for j in keep) for r in rows]


def gistol_canonical(mat: Sequence[Sequence[int]], cap: int = GISTOL_CAP) -> tuple[tuple[int, ...], ...]:
    """Lexicographically least form of a 0/1 matrix under row and column permutations.

    Empty rows and columns are dropped first since they can always be moved
    out of the way.  For each column permutation the best row order is the
    sorted one, so the search runs over column permutations only.
    """
    rows = _strip(mat)
    if not rows:
        return ()
    h, w = len(rows), len(rows[0])
    if h > cap or w > cap:
        raise GistolCapError(f"{h}x{w} diagram exceeds the {cap}x{cap} canonicalization cap")
    best = None
    for perm in itertools.permutations(range(w)):
        cand = tuple(sorted(tuple(r[p] for p in perm) for r in rows))
        if best is None or cand < best:
            best = cand
    return best


def gistol_equivalent(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> bool:
    return gistol_canonical(a) == gistol_canonical(b)


def bh_assignment(mu: Partition, mode: str = "direct") -> dict[Cell, frozenset[tuple[int, ...]]]:
    """Map each cell of ``mu`` to its set of nonzero corner words.

    ``direct`` places ``eps`` at ``(i, j)`` when ``j < eps_1 w_1 + ... + eps_r w_r``
    with ``r`` the number of corners in rows ``>= i``.  ``recursive`` builds the
    same sets row by row from the top.
    """
    mu = Partition(mu)
    if not mu:
        raise DiagramError("bh_assignment needs a nonempty partition")
    fr = corner_data(mu)
    m = fr.m
    words = epsilon_words(m)
    corner_rows = [cc.row for cc in fr.corners]

    def r_of(i: int) -> int:
        return sum(1 for cr in corner_rows if cr >= i)

    if mode == "direct":
        out = {}
        for c in mu.cells():
            r = r_of(c.row)
            out[c] = frozenset(
                e for e in words if c.col < sum(e[s] * fr.widths[s] for s in range(r))
            )
        return out
    if mode != "recursive":
        raise ValueError(f"unknown mode {mode!r}")

    full = frozenset(words)
    above: dict[int, frozenset] = {}
    above_len = 0

    def lookup(row_sets: dict[int, frozenset], length: int, j: int) -> frozenset:
        if j < 0:
            return full
        if j >= length:
            return frozenset()
        return row_sets[j]

    out = {}
    for i in range(len(mu) - 1, -1, -1):
        row_sets = {}
        if i in corner_rows:
            r = corner_rows.index(i)
            w = mu[i] - mu.row(i + 1)
            marked = frozenset(e for e in words if e[r])
            for j in range(mu[i]):
                row_sets[j] = lookup(above, above_len, j) | (lookup(above, above_len, j - w) & marked)
        else:
            for j in range(mu[i]):
                row_sets[j] = lookup(above, above_len, j)
        for j, v in row_sets.items():
            out[Cell(i, j)] = v
        above, above_len = row_sets, mu[i]
    return out


def rectangles(mu: Partition) -> dict[tuple[int, int], list[Cell]]:
    """Cells of ``mu`` grouped into the rectangles ``R_{i,j}``, ``1 <= i <= j <= m``.

    ``R_{i,j}`` holds the cells whose coarm lies in ``(a'_{i-1}, a'_i]`` and whose
    coleg lies in ``(l'_{j+1}, l'_j]`` with ``a'_0 = l'_{m+1} = -1``.  The cells of one
    rectangle see the same corners of ``mu`` in their shadows.
    """
    fr = corner_data(mu)
    a = (-1,) + fr.coarms
    l = fr.colegs + (-1,)
    out: dict[tuple[int, int], list[Cell]] = {}
    for c in Partition(mu).cells():
        ii = next(k for k in range(1, fr.m + 1) if a[k - 1] < c.col <= a[k])
        jj = next(k for k in range(1, fr.m + 1) if l[k] < c.row <= l[k - 1])
        out.setdefault((ii, jj), []).append(c)
    return out
