"""Symmetric functions of a fixed degree with coefficients in Q(q, t).

A :class:`SymFun` is a map ``partition -> QTScalar`` tagged by its basis:
``m``, ``e``, ``h``, ``p``, ``s`` or ``H`` (modified Macdonald ``H~``).
Classical transitions are exact rational matrices built once per degree
from the power-sum basis; Schur characters come from Murnaghan-Nakayama.
"""

from __future__ import annotations

import re
import threading
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Iterable, Mapping, Sequence

from .diagrams import Partition, partitions
from .qtfield import ONE, ZERO, QTScalar, as_scalar, parse_scalar, q, qt_monomial, t

__all__ = [
    "SymFun",
    "BASES",
    "HtildeCapError",
    "char_value",
    "z_lambda",
    "sf",
    "convert",
    "dp1",
    "omega",
    "down",
    "hall",
    "plethystic_scale",
    "htilde",
    "htilde_table",
    "kostka_tilde",
    "nabla",
    "e_alphabet",
    "T_of",
    "HTILDE_CAP",
]

BASES = ("m", "e", "h", "p", "s", "H")
HTILDE_CAP = 8


class HtildeCapError(RuntimeError):
    """Requested degree exceeds the configured H~ cap."""


def z_lambda(rho: Sequence[int]) -> int:
    out = 1
    counts: dict[int, int] = {}
    for r in rho:
        counts[r] = counts.get(r, 0) + 1
    for r, c in counts.items():
        out *= r ** c * factorial(c)
    return out


@lru_cache(maxsize=None)
def char_value(lam: Partition, rho: Partition) -> int:
    """Irreducible character ``chi^lam`` at cycle type ``rho`` (Murnaghan-Nakayama)."""
    if sum(lam) != sum(rho):
        raise ValueError("size mismatch")
    if not rho:
        return 1
    k = rho[0]
    rest = Partition(rho[1:])
    ell = len(lam)
    beta = [lam[i] + (ell - 1 - i) for i in range(ell)]
    occupied = set(beta)
    total = 0
    for b in beta:
        nb = b - k
        if nb < 0 or nb in occupied:
            continue
        sign = -1 if sum(1 for c in beta if nb < c < b) % 2 else 1
        newbeta = sorted((c if c != b else nb for c in beta), reverse=True)
        m = len(newbeta)
        parts = [newbeta[i] - (m - 1 - i) for i in range(m)]
        total += sign * char_value(Partition(p for p in parts if p > 0), rest)
    return total


def _pmul(a: Partition, b: Partition) -> Partition:
    return Partition(sorted(a + b, reverse=True))


def _solve_inverse(mat: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(mat)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


class _Tables:
    """Transition matrices to and from the power-sum basis for one degree."""

    def __init__(self, n: int):
        self.n = n
        self.parts = partitions(n)
        self.index = {p: i for i, p in enumerate(self.parts)}
        self.z = {p: z_lambda(p) for p in self.parts}
        P = self.parts
        to_p: dict[str, list[list[Fraction]]] = {}
        to_p["p"] = [[Fraction(int(a == b)) for b in P] for a in P]
        to_p["s"] = [[Fraction(char_value(lam, rho), self.z[rho]) for rho in P] for lam in P]
        to_p["h"] = [self._product_row(lam, _h_in_p) for lam in P]
        to_p["e"] = [self._product_row(lam, _e_in_p) for lam in P]
        # m is dual to h under the Hall product
        hz = [[to_p["h"][i][j] * self.z[P[j]] for j in range(len(P))] for i in range(len(P))]
        inv = _solve_inverse(hz)
        to_p["m"] = [[inv[j][i] for j in range(len(P))] for i in range(len(P))]
        self.to_p = to_p
        self.from_p: dict[str, list[list[Fraction]]] = {"p": to_p["p"]}
        self.from_p["s"] = [[Fraction(char_value(lam, rho)) for lam in P] for rho in P]
        for b in ("h", "e", "m"):
            self.from_p[b] = _solve_inverse(to_p[b])

    def _product_row(self, lam: Partition, single: Callable[[int], dict]) -> list[Fraction]:
        acc: dict[Partition, Fraction] = {Partition(()): Fraction(1)}
        for part in lam:
            nxt: dict[Partition, Fraction] = {}
            for a, ca in acc.items():
                for b, cb in single(part).items():
                    key = _pmul(a, b)
                    nxt[key] = nxt.get(key, 0) + ca * cb
            acc = nxt
        return [acc.get(rho, Fraction(0)) for rho in self.parts]


@lru_cache(maxsize=None)
def _h_in_p(k: int) -> dict:
    return {rho: Fraction(1, z_lambda(rho)) for rho in partitions(k)}


@lru_cache(maxsize=None)
def _e_in_p(k: int) -> dict:
    return {rho: Fraction((-1) ** (k - len(rho)), z_lambda(rho)) for rho in partitions(k)}


_TABLE_LOCK = threading.Lock()
_TABLES: dict[int, _Tables] = {}
_TB_LOADER: list[Callable[[int], "_Tables | None"]] = []
_TB_SAVER: list[Callable[[int, "_Tables"], None]] = []


def tables(n: int) -> _Tables:
    with _TABLE_LOCK:
        tb = _TABLES.get(n)
        if tb is None:
            for loader in _TB_LOADER:
                tb = loader(n)
                if tb is not None:
                    break
            else:
                tb = _Tables(n)
                for saver in _TB_SAVER:
                    saver(n, tb)
            _TABLES[n] = tb
        return tb


def _lin(coeffs: Mapping[Partition, QTScalar], mat: list[list[Fraction]], tb: _Tables) -> dict:
    """Apply a row-indexed transition: out[b] = sum_a coeffs[a] * mat[a][b]."""
    acc: dict[int, dict[Fraction, QTScalar]] = {}
    out: dict[Partition, QTScalar] = {}
    for a, c in coeffs.items():
        row = mat[tb.index[a]]
        for j, f in enumerate(row):
            if f:
                key = tb.parts[j]
                out[key] = out.get(key, ZERO) + c * as_scalar(f)
    return {k: v for k, v in out.items() if v}


class SymFun:
    """Homogeneous symmetric function of degree ``n`` in a named basis."""

    __slots__ = ("n", "basis", "coeffs")

    def __init__(self, n: int, basis: str, coeffs: Mapping[Sequence[int], object] | None = None):
        if basis not in BASES:
            raise ValueError(f"unknown basis {basis!r}")
        self.n = n
        self.basis = basis
        self.coeffs: dict[Partition, QTScalar] = {}
        for lam, c in (coeffs or {}).items():
            lam = Partition(lam)
            if lam.size != n:
                raise ValueError(f"{lam} is not a partition of {n}")
            c = as_scalar(c)
            if c:
                self.coeffs[lam] = self.coeffs.get(lam, ZERO) + c
        self.coeffs = {k: v for k, v in self.coeffs.items() if v}

    @classmethod
    def basis_element(cls, basis: str, lam: Sequence[int]) -> "SymFun":
        lam = Partition(lam)
        return cls(lam.size, basis, {lam: ONE})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, lam) -> QTScalar:
        return self.coeffs.get(Partition(lam), ZERO)

    def to(self, basis: str) -> "SymFun":
        return convert(self, basis)

    def _same(self, other: "SymFun") -> "SymFun":
        if not isinstance(other, SymFun):
            raise TypeError("expected SymFun")
        if other.n != self.n:
            raise ValueError(f"degree mismatch: {self.n} vs {other.n}")
        return other if other.basis == self.basis else convert(other, self.basis)

    def __add__(self, other: "SymFun") -> "SymFun":
        o = self._same(other)
        out = dict(self.coeffs)
        for k, v in o.coeffs.items():
            out[k] = out.get(k, ZERO) + v
        return SymFun(self.n, self.basis, out)

    def __neg__(self) -> "SymFun":
        return SymFun(self.n, self.basis, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "SymFun") -> "SymFun":
        return self + (-other)

    def scale(self, c) -> "SymFun":
        c = as_scalar(c)
        return SymFun(self.n, self.basis, {k: v * c for k, v in self.coeffs.items()})

    def __mul__(self, other) -> "SymFun":
        if isinstance(other, SymFun):
            return product(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __truediv__(self, c) -> "SymFun":
        return self.scale(as_scalar(c).inverse())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymFun):
            return NotImplemented
        if self.n != other.n:
            return self.is_zero() and other.is_zero()
        if self.basis == other.basis:
            return self.coeffs == other.coeffs
        return convert(self, "s").coeffs == convert(other, "s").coeffs

    def __hash__(self) -> int:
        return hash((self.n, tuple(sorted(convert(self, "s").coeffs.items()))))

    def map_coefficients(self, f: Callable[[QTScalar], object]) -> "SymFun":
        return SymFun(self.n, self.basis, {k: f(v) for k, v in self.coeffs.items()})

    def specialize(self, q0, t0) -> dict[Partition, Fraction]:
        """Coefficients evaluated at a rational point."""
        return {k: v.eval_at(q0, t0) for k, v in self.coeffs.items() if v.eval_at(q0, t0)}

    def __str__(self) -> str:
        return dumps(self)

    def __repr__(self) -> str:
        return f"SymFun({self.n}, {self.basis!r}, {{{', '.join(f'{list(k)}: {v}' for k, v in self.sorted_items())}}})"

    def sorted_items(self) -> list[tuple[Partition, QTScalar]]:
        idx = tables(self.n).index
        return sorted(self.coeffs.items(), key=lambda kv: idx[kv[0]])


def sf(basis: str, coeffs: Mapping[Sequence[int], object]) -> SymFun:
    """Build a SymFun, inferring the degree from its keys."""
    keys = [Partition(k) for k in coeffs]
    if not keys:
        raise ValueError("cannot infer degree of an empty map")
    return SymFun(keys[0].size, basis, coeffs)


def convert(f: SymFun, target: str) -> SymFun:
    if target not in BASES:
        raise ValueError(f"unknown basis {target!r}")
    if f.basis == target:
        return f
    if f.basis == "H":
        return convert(_htilde_to_s(f), target)
    if target == "H":
        return _s_to_htilde(convert(f, "s"))
    tb = tables(f.n)
    if f.basis == "p":
        mid = f.coeffs
    else:
        mid = _lin(f.coeffs, tb.to_p[f.basis], tb)
    if target == "p":
        return SymFun(f.n, "p", mid)
    return SymFun(f.n, target, _lin(mid, tb.from_p[target], tb))


def product(a: SymFun, b: SymFun) -> SymFun:
    """Product computed in the power-sum basis; returned in the basis of ``a``
    unless that is ``H``, in which case the Schur basis is used."""
    pa, pb = convert(a, "p"), convert(b, "p")
    out: dict[Partition, QTScalar] = {}
    for la, ca in pa.coeffs.items():
        for lb, cb in pb.coeffs.items():
            k = _pmul(la, lb)
            out[k] = out.get(k, ZERO) + ca * cb
    res = SymFun(a.n + b.n, "p", out)
    return convert(res, "s" if a.basis == "H" else a.basis)


def one() -> SymFun:
    return SymFun(0, "s", {(): ONE})


def hall(a: SymFun, b: SymFun) -> QTScalar:
    """Hall inner product (``<p_lam, p_mu> = z_lam delta``)."""
    if a.n != b.n:
        return ZERO
    pa, pb = convert(a, "p"), convert(b, "p")
    total = ZERO
    for k, v in pa.coeffs.items():
        w = pb.coeffs.get(k)
        if w:
            total = total + v * w * z_lambda(k)
    return total


def dp1(f: SymFun) -> SymFun:
    """Derivation with respect to ``p_1``; result in the Schur basis (or ``p``)."""
    if f.n < 1:
        raise ValueError("dp1 needs degree >= 1")
    if f.basis == "s":
        out: dict[Partition, QTScalar] = {}
        for lam, c in f.coeffs.items():
            for nu in lam_predecessors(lam):
                out[nu] = out.get(nu, ZERO) + c
        return SymFun(f.n - 1, "s", out)
    pf = convert(f, "p")
    out = {}
    for rho, c in pf.coeffs.items():
        m1 = sum(1 for r in rho if r == 1)
        if m1:
            nu = Partition(rho[: len(rho) - 1])
            out[nu] = out.get(nu, ZERO) + c * m1
    res = SymFun(f.n - 1, "p", out)
    return res if f.basis == "p" else convert(res, "s")


def lam_predecessors(lam: Partition) -> list[Partition]:
    return [lam.remove(c) for c in lam.corners()]


def omega(f: SymFun) -> SymFun:
    g = f if f.basis in ("s", "p") else convert(f, "s")
    if g.basis == "s":
        return SymFun(g.n, "s", {lam.conjugate(): c for lam, c in g.coeffs.items()})
    return SymFun(g.n, "p", {rho: c if (g.n - len(rho)) % 2 == 0 else -c for rho, c in g.coeffs.items()})


def down(f: SymFun) -> SymFun:
    """``omega`` composed with ``(q, t) -> (1/q, 1/t)``."""
    g = convert(f, "s") if f.basis not in ("s", "p") else f
    return omega(g).map_coefficients(lambda c: c.invert())


def plethystic_scale(f: SymFun, phi: Callable[[int], QTScalar]) -> SymFun:
    """Replace each ``p_k`` by ``phi(k) * p_k``; e.g. ``phi = lambda k: 1 - q**k`` gives ``f[X(1-q)]``."""
    pf = convert(f, "p")
    cache: dict[int, QTScalar] = {}

    def fac(rho: Partition) -> QTScalar:
        out = ONE
        for r in rho:
            if r not in cache:
                cache[r] = as_scalar(phi(r))
            out = out * cache[r]
        return out

    res = SymFun(f.n, "p", {rho: c * fac(rho) for rho, c in pf.coeffs.items()})
    return res if f.basis == "p" else convert(res, "s")


def e_alphabet(k: int, monos: Sequence[QTScalar]) -> QTScalar:
    """Elementary symmetric function ``e_k`` of a finite list of scalars."""
    if not 0 <= k <= len(monos):
        raise ValueError(f"e_{k} undefined on an alphabet of size {len(monos)}")
    e = [ONE] + [ZERO] * k
    for v in monos:
        for j in range(k, 0, -1):
            e[j] = e[j] + e[j - 1] * v
    return e[k]


def T_of(mu: Sequence[int]) -> QTScalar:
    """``T_mu``: product of ``t^row q^col`` over the cells of ``mu``."""
    mu = Partition(mu)
    return qt_monomial(sum(r * (r - 1) // 2 for r in mu), sum(i * r for i, r in enumerate(mu)))


# modified Macdonald polynomials


@lru_cache(maxsize=None)
def _pleth_schur(n: int) -> list[list[dict]]:
    """``a[nu][lam]`` = coefficient of ``s_lam`` in ``s_nu[X(1-z)]`` as a dict ``z-exponent -> int``."""
    tb = tables(n)
    P = tb.parts
    pz: dict[Partition, dict[int, int]] = {}
    for rho in P:
        poly = {0: 1}
        for r in rho:
            nxt: dict[int, int] = {}
            for e, c in poly.items():
                nxt[e] = nxt.get(e, 0) + c
                nxt[e + r] = nxt.get(e + r, 0) - c
            poly = nxt
        pz[rho] = poly
    out = []
    for nu in P:
        row = []
        for lam in P:
            acc: dict[int, Fraction] = {}
            for rho in P:
                w = Fraction(char_value(nu, rho) * char_value(lam, rho), tb.z[rho])
                if w:
                    for e, c in pz[rho].items():
                        acc[e] = acc.get(e, 0) + w * c
            coeffs = {}
            for e, c in acc.items():
                if c:
                    if c.denominator != 1:
                        raise AssertionError("non-integral plethysm coefficient")
                    coeffs[e] = int(c)
            row.append(coeffs)
        out.append(row)
    return out


def _zpoly(d: dict, var: QTScalar) -> QTScalar:
    total = ZERO
    for e, c in d.items():
        total = total + var ** e * c
    return total


def _solve_qt(rows: list[list[QTScalar]], rhs: list[QTScalar], nvars: int) -> list[QTScalar]:
    """Solve a consistent (possibly overdetermined) system over Q(q, t)."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    sol_cols = []
    r0 = 0
    for col in range(nvars):
        cands = [r for r in range(r0, len(aug)) if aug[r][col]]
        if not cands:
            continue
        piv = min(cands, key=lambda r: _cost(aug[r][col]))
        aug[r0], aug[piv] = aug[piv], aug[r0]
        inv = aug[r0][col].inverse()
        aug[r0] = [v * inv for v in aug[r0]]
        for r in range(len(aug)):
            if r != r0 and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b if b else a for a, b in zip(aug[r], aug[r0])]
        sol_cols.append(col)
        r0 += 1
    if len(sol_cols) != nvars:
        raise ArithmeticError("H~ characterization system is singular")
    for r in range(r0, len(aug)):
        if aug[r][-1]:
            raise ArithmeticError("H~ characterization system is inconsistent")
    out = [ZERO] * nvars
    for i, col in enumerate(sol_cols):
        out[col] = aug[i][-1]
    return out


def _cost(c: QTScalar) -> int:
    return len(c.n) + len(c.d)


def _htilde_solve(mu: Partition) -> dict[Partition, QTScalar]:
    n = mu.size
    tb = tables(n)
    P = tb.parts
    a = _pleth_schur(n)
    mup = mu.conjugate()
    rows: list[list[QTScalar]] = []
    rhs: list[QTScalar] = []
    for j, lam in enumerate(P):
        if not lam.dominates(mu):
            rows.append([_zpoly(a[i][j], q) for i in range(len(P))])
            rhs.append(ZERO)
        if not lam.dominates(mup):
            rows.append([_zpoly(a[i][j], t) for i in range(len(P))])
            rhs.append(ZERO)
    rows.append([ONE if nu == P[0] else ZERO for nu in P])
    rhs.append(ONE)
    sol = _solve_qt(rows, rhs, len(P))
    return {nu: c for nu, c in zip(P, sol) if c}


_HT_LOCK = threading.Lock()
_HT: dict[Partition, SymFun] = {}
_HT_LOADER: list[Callable[[int], dict | None]] = []
_HT_SAVER: list[Callable[[int, dict], None]] = []


def htilde(mu: Sequence[int], cap: int = HTILDE_CAP) -> SymFun:
    """``H~_mu`` in the Schur basis."""
    mu = Partition(mu)
    if mu.size > cap:
        raise HtildeCapError(f"|mu| = {mu.size} exceeds the H~ cap {cap}")
    with _HT_LOCK:
        got = _HT.get(mu)
    if got is not None:
        return got
    if mu.size == 0:
        res = one()
    else:
        table = None
        for loader in _HT_LOADER:
            table = loader(mu.size)
            if table:
                break
        if table and mu in table:
            res = table[mu]
        else:
            res = SymFun(mu.size, "s", _htilde_solve(mu))
    with _HT_LOCK:
        _HT.setdefault(mu, res)
    return _HT[mu]


def htilde_table(n: int, cap: int = HTILDE_CAP) -> dict[Partition, SymFun]:
    table = {mu: htilde(mu, cap) for mu in partitions(n)}
    for saver in _HT_SAVER:
        saver(n, table)
    return table


def kostka_tilde(lam: Sequence[int], mu: Sequence[int]) -> QTScalar:
    return htilde(mu)[lam]


def _htilde_to_s(f: SymFun) -> SymFun:
    out: dict[Partition, QTScalar] = {}
    for mu, c in f.coeffs.items():
        for lam, k in htilde(mu).coeffs.items():
            out[lam] = out.get(lam, ZERO) + c * k
    return SymFun(f.n, "s", out)


def _s_to_htilde(f: SymFun) -> SymFun:
    if f.n == 0:
        return SymFun(0, "H", dict(f.coeffs))
    P = tables(f.n).parts
    cols = [htilde(mu) for mu in P]
    rows = [[cols[j][lam] for j in range(len(P))] for lam in P]
    rhs = [f[lam] for lam in P]
    sol = _solve_qt(rows, rhs, len(P))
    return SymFun(f.n, "H", {mu: c for mu, c in zip(P, sol) if c})


def nabla(f: SymFun) -> SymFun:
    """``nabla H~_mu = T_mu H~_mu``; result in the ``H`` basis."""
    g = convert(f, "H")
    return SymFun(g.n, "H", {mu: c * T_of(mu) for mu, c in g.coeffs.items()})


# text format

_LINE = re.compile(r"\s*([mehpsH])\[([0-9,\s]*)\]\s*:\s*(.+?)\s*$")


def dumps(f: SymFun) -> str:
    lines = [f"# degree {f.n} basis {f.basis}"]
    for lam, c in f.sorted_items():
        text = str(c)
        if " " in text and not (text.startswith("(") and text.endswith(")") and "/" not in text):
            text = f"({text})"
        lines.append(f"{f.basis}[{','.join(str(p) for p in lam)}]: {text}")
    return "\n".join(lines)


def loads(text: str) -> SymFun:
    n = basis = None
    coeffs: dict[Partition, QTScalar] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        hm = re.fullmatch(r"#\s*degree\s+(\d+)\s+basis\s+([mehpsH])", line)
        if hm:
            n, basis = int(hm.group(1)), hm.group(2)
            continue
        lm = _LINE.fullmatch(line)
        if not lm:
            raise ValueError(f"bad symmetric function line {raw!r}")
        b = lm.group(1)
        if basis is None:
            basis = b
        elif b != basis:
            raise ValueError("mixed bases in one symmetric function")
        inner = lm.group(2).strip()
        lam = Partition(int(v) for v in inner.split(",")) if inner else Partition(())
        coeffs[lam] = coeffs.get(lam, ZERO) + parse_scalar(lm.group(3))
    if basis is None:
        raise ValueError("no basis given")
    if n is None:
        if not coeffs:
            raise ValueError("cannot infer degree")
        n = next(iter(coeffs)).size
    return SymFun(n, basis, coeffs)
