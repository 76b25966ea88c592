"""Sparse exact polynomials in ``x_1..x_n, y_1..y_n``.

Monomials are packed into a single integer with 8 bits per exponent:
``x_i`` occupies bits ``8(i-1)`` and ``y_i`` bits ``8(n+i-1)``.  Comparing
packed keys therefore compares exponent vectors lexicographically with
``x_1 < ... < x_n < y_1 < ... < y_n``; inside a bihomogeneous component
this is the fixed monomial order used for every echelon form.
"""

from __future__ import annotations

import os
import re
from fractions import Fraction
from math import factorial, gcd, lcm
from typing import Iterable, Mapping, Sequence

try:
    if os.environ.get("QTATOMS_PURE_PYTHON") == "1":
        raise ImportError("pure Python kernels requested")
    from . import _kernels as kernels
except ImportError:
    from . import _kernels_py as kernels

__all__ = [
    "MPoly",
    "Echelon",
    "kernels",
    "BITS",
    "pack",
    "unpack",
    "permute_key",
    "integer_scaled",
]

BITS = 8
MASK = (1 << BITS) - 1


def pack(exps: Sequence[int]) -> int:
    key = 0
    for v, e in enumerate(exps):
        if not 0 <= e <= MASK:
            raise ValueError(f"exponent {e} out of range")
        key |= e << (BITS * v)
    return key


def unpack(key: int, nvars: int) -> tuple[int, ...]:
    return tuple((key >> (BITS * v)) & MASK for v in range(nvars))


def key_bidegree(key: int, n: int) -> tuple[int, int]:
    e = unpack(key, 2 * n)
    return sum(e[:n]), sum(e[n:])


def permute_key(key: int, sigma: Sequence[int], n: int) -> int:
    """Image of a monomial under ``x_i -> x_{sigma(i)}``, ``y_i -> y_{sigma(i)}`` (0-based)."""
    out = 0
    for i in range(n):
        s = sigma[i]
        out |= ((key >> (BITS * i)) & MASK) << (BITS * s)
        out |= ((key >> (BITS * (n + i))) & MASK) << (BITS * (n + s))
    return out


def integer_scaled(terms: Mapping[int, Fraction]) -> dict[int, int]:
    """Primitive integer vector proportional to ``terms`` (positive scale)."""
    den = 1
    for c in terms.values():
        den = lcm(den, Fraction(c).denominator)
    ints = {k: int(Fraction(c) * den) for k, c in terms.items() if c}
    g = 0
    for c in ints.values():
        g = gcd(g, c)
    return {k: c // g for k, c in ints.items()} if g > 1 else ints


class MPoly:
    """Polynomial with exact rational coefficients in ``n`` pairs of variables."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[int, object] | None = None):
        if n < 0 or 2 * n * BITS > 4096:
            raise ValueError(f"unsupported variable count {n}")
        self.n = n
        self.terms: dict[int, Fraction] = {}
        if terms:
            for k, c in terms.items():
                c = Fraction(c)
                if c:
                    self.terms[k] = c

    # construction

    @classmethod
    def constant(cls, n: int, c=1) -> "MPoly":
        return cls(n, {0: c})

    @classmethod
    def monomial(cls, n: int, xexp: Sequence[int], yexp: Sequence[int], c=1) -> "MPoly":
        if len(xexp) != n or len(yexp) != n:
            raise ValueError("exponent vector length mismatch")
        return cls(n, {pack(list(xexp) + list(yexp)): c})

    @classmethod
    def var(cls, n: int, name: str) -> "MPoly":
        """``MPoly.var(3, "x2")``."""
        m = re.fullmatch(r"([xy])(\d+)", name)
        if not m:
            raise ValueError(f"bad variable name {name!r}")
        i = int(m.group(2))
        if not 1 <= i <= n:
            raise IndexError(f"variable {name} out of range for n={n}")
        v = (i - 1) + (n if m.group(1) == "y" else 0)
        return cls(n, {1 << (BITS * v): 1})

    # inspection

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def exponents(self, key: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        e = unpack(key, 2 * self.n)
        return e[: self.n], e[self.n:]

    def bidegrees(self) -> set[tuple[int, int]]:
        return {key_bidegree(k, self.n) for k in self.terms}

    def bidegree(self) -> tuple[int, int]:
        bd = self.bidegrees()
        if len(bd) != 1:
            raise ValueError("polynomial is not bihomogeneous")
        return next(iter(bd))

    def component(self, r: int, s: int) -> "MPoly":
        return MPoly(self.n, {k: c for k, c in self.terms.items() if key_bidegree(k, self.n) == (r, s)})

    # arithmetic

    def _check(self, other: "MPoly") -> None:
        if not isinstance(other, MPoly):
            raise TypeError("expected MPoly")
        if other.n != self.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "MPoly") -> "MPoly":
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return MPoly(self.n, out)

    def __neg__(self) -> "MPoly":
        return MPoly(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "MPoly") -> "MPoly":
        return self + (-other)

    def scale(self, c) -> "MPoly":
        c = Fraction(c)
        return MPoly(self.n, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other) -> "MPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        out: dict[int, Fraction] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                e1 = unpack(k1, 2 * self.n)
                e2 = unpack(k2, 2 * self.n)
                k = pack([a + b for a, b in zip(e1, e2)])
                out[k] = out.get(k, 0) + c1 * c2
        return MPoly(self.n, out)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.n, tuple(sorted(self.terms.items()))))

    # calculus

    def _shift(self, var: str, i: int) -> int:
        if not 1 <= i <= self.n:
            raise IndexError(f"variable index {i} out of range for n={self.n}")
        if var == "x":
            return BITS * (i - 1)
        if var == "y":
            return BITS * (self.n + i - 1)
        raise ValueError(f"variable must be 'x' or 'y', got {var!r}")

    def diff(self, var: str, i: int, order: int = 1) -> "MPoly":
        """Partial derivative ``d^order / d var_i^order``."""
        if order < 0:
            raise ValueError("order must be nonnegative")
        if order == 0:
            return self
        return MPoly(self.n, kernels.diff_dict(self.terms, self._shift(var, i), order))

    def diagonal_act(self, sigma: Sequence[int]) -> "MPoly":
        """Substitute ``x_i -> x_{sigma(i)}`` and ``y_i -> y_{sigma(i)}``; ``sigma`` is 1-based."""
        n = self.n
        if sorted(sigma) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {sigma}")
        s0 = [s - 1 for s in sigma]
        return MPoly(n, {permute_key(k, s0, n): c for k, c in self.terms.items()})

    def polarize(self, h: int, k: int) -> "MPoly":
        """``D_{hk} = sum_i d^h/dx_i^h d^k/dy_i^k``."""
        if h < 0 or k < 0 or h + k < 1:
            raise ValueError("polarize needs h, k >= 0 and h + k >= 1")
        out = MPoly(self.n)
        for i in range(1, self.n + 1):
            out = out + self.diff("x", i, h).diff("y", i, k)
        return out

    def apply_operator(self, other: "MPoly") -> "MPoly":
        """``self(d_x; d_y)`` applied to ``other``."""
        self._check(other)
        nv = 2 * self.n
        out: dict[int, Fraction] = {}
        for key, c in self.terms.items():
            e = unpack(key, nv)
            part = other.terms
            for v, ev in enumerate(e):
                if ev:
                    part = kernels.diff_dict(part, BITS * v, ev)
                    if not part:
                        break
            for k2, c2 in part.items():
                out[k2] = out.get(k2, 0) + c * c2
        return MPoly(self.n, out)

    def apolar(self, other: "MPoly") -> Fraction:
        """``<P, Q> = P(d)Q`` at the origin."""
        self._check(other)
        nv = 2 * self.n
        total = Fraction(0)
        small, big = (self, other) if len(self.terms) <= len(other.terms) else (other, self)
        for k, c in small.terms.items():
            c2 = big.terms.get(k)
            if c2:
                w = 1
                for e in unpack(k, nv):
                    w *= factorial(e)
                total += c * c2 * w
        return total

    def substitute_zero(self, i: int) -> "MPoly":
        """Set ``x_i = y_i = 0`` and drop the pair, renumbering later variables."""
        n = self.n
        out: dict[int, Fraction] = {}
        for k, c in self.terms.items():
            e = unpack(k, 2 * n)
            if e[i - 1] or e[n + i - 1]:
                continue
            xs = e[: i - 1] + e[i:n]
            ys = e[n: n + i - 1] + e[n + i:]
            nk = pack(list(xs) + list(ys))
            out[nk] = out.get(nk, 0) + c
        return MPoly(n - 1, out)

    def to_int_vector(self) -> dict[int, int]:
        return integer_scaled(self.terms)

    # text

    def sorted_terms(self) -> list[tuple[int, Fraction]]:
        """Terms in decreasing graded order (total degree first, then packed key)."""
        nv = 2 * self.n
        return sorted(self.terms.items(), key=lambda kc: (sum(unpack(kc[0], nv)), kc[0]), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        n = self.n
        parts = []
        for k, c in self.sorted_terms():
            e = unpack(k, 2 * n)
            factors = []
            for v, ev in enumerate(e):
                if not ev:
                    continue
                name = f"x{v + 1}" if v < n else f"y{v - n + 1}"
                factors.append(name if ev == 1 else f"{name}^{ev}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            parts.append(("-" if c < 0 else "+", body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"MPoly({self.n}, {self})"

    @classmethod
    def parse(cls, text: str, n: int) -> "MPoly":
        """Parse sums of terms like ``3*x1^2*y2 - 1/2*y1``."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty polynomial text")
        if s[0] not in "+-":
            s = "+" + s
        out: dict[int, Fraction] = {}
        pos = 0
        term_re = re.compile(r"([+-])((?:\d+(?:/\d+)?)?)((?:\*?[xy]\d+(?:\^\d+)?)*)")
        while pos < len(s):
            m = term_re.match(s, pos)
            if not m or m.end() == pos or (not m.group(2) and not m.group(3)):
                raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
            coeff = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            if m.group(1) == "-":
                coeff = -coeff
            exps = [0] * (2 * n)
            mono = m.group(3)
            if m.group(2) and mono and not mono.startswith("*"):
                raise ValueError(f"missing '*' in {m.group(0)!r}")
            for vm in re.finditer(r"([xy])(\d+)(?:\^(\d+))?", mono):
                i = int(vm.group(2))
                if not 1 <= i <= n:
                    raise IndexError(f"variable {vm.group(1)}{i} out of range for n={n}")
                v = (i - 1) + (n if vm.group(1) == "y" else 0)
                exps[v] += int(vm.group(3) or 1)
            k = pack(exps)
            out[k] = out.get(k, 0) + coeff
            pos = m.end()
        return cls(n, out)


class Echelon:
    """Fully reduced integer echelon basis of a subspace of polynomials."""

    __slots__ = ("n", "rows")

    def __init__(self, n: int, vectors: Iterable[Mapping[int, int]] = ()):
        self.n = n
        self.rows: dict[int, dict[int, int]] = {}
        for v in vectors:
            self.insert(v)

    def __len__(self) -> int:
        return len(self.rows)

    def insert(self, vec: Mapping[int, int]) -> bool:
        """Add a vector; True when it enlarged the span."""
        if not vec:
            return False
        return kernels.insert_row(self.rows, dict(vec)) is not None

    def insert_poly(self, p: MPoly) -> bool:
        return self.insert(p.to_int_vector())

    def contains(self, vec: Mapping[int, int]) -> bool:
        return not kernels.reduce_vector(self.rows, dict(vec))

    def contains_poly(self, p: MPoly) -> bool:
        return p.is_zero() or self.contains(p.to_int_vector())

    def coordinates(self, vec: Mapping[int, object]) -> dict[int, Fraction]:
        """Coordinates of a vector of the span, keyed by pivot."""
        return {p: Fraction(vec.get(p, 0)) / row[p] for p, row in self.rows.items() if vec.get(p, 0)}

    def vectors(self) -> list[dict[int, int]]:
        return [self.rows[p] for p in sorted(self.rows)]

    def polys(self) -> list[MPoly]:
        return [MPoly(self.n, self.rows[p]) for p in sorted(self.rows)]

    def copy(self) -> "Echelon":
        e = Echelon(self.n)
        e.rows = {p: dict(r) for p, r in self.rows.items()}
        return e
