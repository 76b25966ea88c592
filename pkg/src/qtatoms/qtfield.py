"""Exact bivariate rational functions in ``q`` and ``t``.

Every value is kept in a unique canonical form: numerator and denominator are
coprime integer polynomials and the leading coefficient of the denominator
(lex order, ``q > t``) is positive.  Equality is therefore structural.

Polynomial arithmetic and gcds are delegated to FLINT through python-flint.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Union

import flint

__all__ = [
    "QTPoly",
    "QTScalar",
    "PoleError",
    "q",
    "t",
    "ONE",
    "ZERO",
    "qt_monomial",
    "as_scalar",
    "parse_scalar",
]

_CTX = flint.fmpz_mpoly_ctx.get(("q", "t"), "lex")
_Q, _T = _CTX.gens()
_P1 = _CTX.from_dict({(0, 0): 1})
_P0 = _CTX.from_dict({})


class PoleError(ZeroDivisionError):
    """Raised when evaluating at a point where the reduced denominator vanishes."""


def _const(c: int):
    return _CTX.from_dict({(0, 0): c}) if c else _P0


def _mono(qe: int, te: int, c: int = 1):
    return _CTX.from_dict({(qe, te): c})


def _terms(p) -> dict[tuple[int, int], int]:
    return {(int(a), int(b)): int(v) for (a, b), v in p.to_dict().items()}


def _invert_poly(p):
    """Return (P, a, b) with p(1/q, 1/t) = P(q, t) / (q^a t^b)."""
    d = _terms(p)
    a = max(k[0] for k in d)
    b = max(k[1] for k in d)
    return _CTX.from_dict({(a - i, b - j): c for (i, j), c in d.items()}), a, b


class QTPoly:
    """Integer polynomial in q and t (nonnegative exponents)."""

    __slots__ = ("_p",)

    def __init__(self, value: Union[int, "QTPoly", Mapping[tuple[int, int], int], object] = 0):
        if isinstance(value, QTPoly):
            self._p = value._p
        elif isinstance(value, int):
            self._p = _const(value)
        elif isinstance(value, Mapping):
            self._p = _CTX.from_dict({k: v for k, v in value.items() if v})
        elif isinstance(value, flint.fmpz_mpoly):
            self._p = value
        else:
            raise TypeError(f"cannot build QTPoly from {type(value).__name__}")

    def terms(self) -> dict[tuple[int, int], int]:
        """Map (q-exponent, t-exponent) -> coefficient; zero terms omitted."""
        return _terms(self._p)

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def __add__(self, other: "QTPoly") -> "QTPoly":
        return QTPoly(self._p + QTPoly(other)._p)

    def __sub__(self, other: "QTPoly") -> "QTPoly":
        return QTPoly(self._p - QTPoly(other)._p)

    def __mul__(self, other: "QTPoly") -> "QTPoly":
        return QTPoly(self._p * QTPoly(other)._p)

    __radd__ = __add__
    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (QTPoly, int)):
            return self._p == QTPoly(other)._p
        if isinstance(other, QTScalar):
            return other == self.to_scalar()
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.terms().items())))

    def __call__(self, q0, t0):
        return self.to_scalar().eval_at(q0, t0)

    def to_scalar(self) -> "QTScalar":
        return QTScalar._raw(self._p, _P1)

    def __str__(self) -> str:
        return _poly_str(self._p)

    def __repr__(self) -> str:
        return f"QTPoly({self})"


class QTScalar:
    """Element of Q(q, t) in canonical reduced form."""

    __slots__ = ("n", "d")

    def __init__(self, num=0, den=1):
        n = _coerce_poly(num)
        d = _coerce_poly(den)
        if isinstance(num, QTScalar) or isinstance(den, QTScalar):
            a = as_scalar(num) / as_scalar(den)
            self.n, self.d = a.n, a.d
            return
        if d.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.n, self.d = _normalize(n, d)

    @classmethod
    def _raw(cls, n, d) -> "QTScalar":
        obj = object.__new__(cls)
        obj.n = n
        obj.d = d
        return obj

    @classmethod
    def from_fraction(cls, x: Union[int, Fraction]) -> "QTScalar":
        x = Fraction(x)
        if x.denominator == 1:
            return cls._raw(_const(x.numerator), _P1)
        return cls._raw(_const(x.numerator), _const(x.denominator))

    # structure

    @property
    def numerator(self) -> QTPoly:
        return QTPoly(self.n)

    @property
    def denominator(self) -> QTPoly:
        return QTPoly(self.d)

    def is_zero(self) -> bool:
        return self.n.is_zero()

    def is_polynomial(self) -> bool:
        return self.d.is_one()

    def is_integer(self) -> bool:
        return self.d.is_one() and self.n.is_constant()

    def __bool__(self) -> bool:
        return not self.n.is_zero()

    # arithmetic

    def __add__(self, other) -> "QTScalar":
        if not isinstance(other, QTScalar):
            other = as_scalar(other)
        a_n, a_d, b_n, b_d = self.n, self.d, other.n, other.d
        if a_n.is_zero():
            return other
        if b_n.is_zero():
            return self
        if a_d == b_d:
            if a_d.is_one():
                return QTScalar._raw(a_n + b_n, a_d)
            return QTScalar._raw(*_normalize(a_n + b_n, a_d))
        g = a_d.gcd(b_d)
        if g.is_one():
            return QTScalar._raw(*_normalize_coprime_sum(a_n * b_d + b_n * a_d, a_d * b_d, None))
        ad = a_d / g
        bd = b_d / g
        num = a_n * bd + b_n * ad
        return QTScalar._raw(*_normalize_coprime_sum(num, ad * b_d, g))

    __radd__ = __add__

    def __neg__(self) -> "QTScalar":
        return QTScalar._raw(-self.n, self.d)

    def __sub__(self, other) -> "QTScalar":
        if not isinstance(other, QTScalar):
            other = as_scalar(other)
        return self + (-other)

    def __rsub__(self, other) -> "QTScalar":
        return as_scalar(other) - self

    def __mul__(self, other) -> "QTScalar":
        if not isinstance(other, QTScalar):
            if isinstance(other, int):
                return self._mul_int(other)
            other = as_scalar(other)
        a_n, a_d, b_n, b_d = self.n, self.d, other.n, other.d
        if a_n.is_zero() or b_n.is_zero():
            return ZERO
        if a_d.is_one() and b_d.is_one():
            return QTScalar._raw(a_n * b_n, _P1)
        g1 = a_n.gcd(b_d)
        g2 = b_n.gcd(a_d)
        if not g1.is_one():
            a_n = a_n / g1
            b_d = b_d / g1
        if not g2.is_one():
            b_n = b_n / g2
            a_d = a_d / g2
        n = a_n * b_n
        d = a_d * b_d
        if d.leading_coefficient() < 0:
            n, d = -n, -d
        return QTScalar._raw(n, d)

    __rmul__ = __mul__

    def _mul_int(self, c: int) -> "QTScalar":
        if c == 0 or self.n.is_zero():
            return ZERO
        if self.d.is_one():
            return QTScalar._raw(self.n * c, _P1)
        return QTScalar._raw(*_normalize(self.n * c, self.d))

    def inverse(self) -> "QTScalar":
        if self.n.is_zero():
            raise ZeroDivisionError("inverse of zero")
        n, d = self.d, self.n
        if d.leading_coefficient() < 0:
            n, d = -n, -d
        return QTScalar._raw(n, d)

    def __truediv__(self, other) -> "QTScalar":
        if not isinstance(other, QTScalar):
            other = as_scalar(other)
        return self * other.inverse()

    def __rtruediv__(self, other) -> "QTScalar":
        return as_scalar(other) * self.inverse()

    def __pow__(self, k: int) -> "QTScalar":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return ONE
        n, d = self.n ** k, self.d ** k
        return QTScalar._raw(n, d)

    # comparison

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QTScalar):
            return self.n == other.n and self.d == other.d
        if isinstance(other, (int, Fraction, QTPoly)):
            o = as_scalar(other)
            return self.n == o.n and self.d == o.d
        return NotImplemented

    def __hash__(self) -> int:
        return hash((tuple(sorted(_terms(self.n).items())), tuple(sorted(_terms(self.d).items()))))

    # substitutions

    def invert(self) -> "QTScalar":
        """Apply (q, t) -> (1/q, 1/t)."""
        if self.n.is_zero():
            return ZERO
        pn, an, bn = _invert_poly(self.n)
        pd, ad, bd = _invert_poly(self.d)
        # n(1/q,1/t)/d(1/q,1/t) = pn q^ad t^bd / (pd q^an t^bn)
        ea, eb = ad - an, bd - bn
        num = pn * _mono(max(ea, 0), max(eb, 0))
        den = pd * _mono(max(-ea, 0), max(-eb, 0))
        return QTScalar._raw(*_normalize(num, den))

    def swap(self) -> "QTScalar":
        """Apply (q, t) -> (t, q)."""
        sw = lambda p: _CTX.from_dict({(b, a): c for (a, b), c in _terms(p).items()})
        return QTScalar._raw(*_normalize(sw(self.n), sw(self.d)))

    def substitute(self, rule: str) -> "QTScalar":
        if rule == "invert":
            return self.invert()
        if rule == "swap":
            return self.swap()
        raise ValueError(f"unknown substitution rule {rule!r}")

    def subs_t_inverse_q(self) -> "QTScalar":
        """Specialize t -> 1/q; the result depends on q only."""
        def sub(p):
            d = _terms(p)
            b = max(k[1] for k in d)
            out: dict[tuple[int, int], int] = {}
            for (i, j), c in d.items():
                key = (i + b - j, 0)
                out[key] = out.get(key, 0) + c
            return _CTX.from_dict({k: v for k, v in out.items() if v}), b

        if self.n.is_zero():
            return ZERO
        pn, bn = sub(self.n)
        pd, bd = sub(self.d)
        e = bd - bn
        num = pn * _mono(max(e, 0), 0)
        den = pd * _mono(max(-e, 0), 0)
        if den.is_zero():
            raise PoleError("denominator vanishes at t = 1/q")
        return QTScalar._raw(*_normalize(num, den))

    def eval_at(self, q0, t0) -> Fraction:
        """Exact value at a rational point; raises PoleError on a pole."""
        q0, t0 = Fraction(q0), Fraction(t0)
        den = _eval_poly(self.d, q0, t0)
        if den == 0:
            raise PoleError(f"pole at (q, t) = ({q0}, {t0})")
        return _eval_poly(self.n, q0, t0) / den

    def map_coefficients(self, f: Callable[[int], int]) -> "QTScalar":
        return QTScalar(_CTX.from_dict({k: f(int(v)) for k, v in _terms(self.n).items()}), self.d)

    # text

    def __str__(self) -> str:
        if self.d.is_one():
            return _poly_str(self.n)
        return f"{_wrap(self.n)}/{_wrap(self.d)}"

    def __repr__(self) -> str:
        return f"QTScalar({self})"


def _coerce_poly(x):
    if isinstance(x, flint.fmpz_mpoly):
        return x
    if isinstance(x, QTPoly):
        return x._p
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return _const(x)
    if isinstance(x, QTScalar):
        return None
    if isinstance(x, Fraction):
        return None
    raise TypeError(f"cannot coerce {type(x).__name__} to a q,t polynomial")


def _normalize(n, d):
    if n.is_zero():
        return _P0, _P1
    if not d.is_one():
        g = n.gcd(d)
        if not g.is_one():
            n = n / g
            d = d / g
    if d.leading_coefficient() < 0:
        n, d = -n, -d
    return n, d


def _normalize_coprime_sum(num, den, g):
    # gcd(num, den) divides g when the summands were reduced
    if num.is_zero():
        return _P0, _P1
    if g is not None and not g.is_one():
        h = num.gcd(g)
        if not h.is_one():
            num = num / h
            den = den / h
    if den.leading_coefficient() < 0:
        num, den = -num, -den
    return num, den


def _eval_poly(p, q0: Fraction, t0: Fraction) -> Fraction:
    total = Fraction(0)
    for (a, b), c in _terms(p).items():
        total += c * q0 ** a * t0 ** b
    return total


def _wrap(p) -> str:
    text = _poly_str(p)
    if len(p) == 1 and not text.startswith("-") and "*" not in text:
        return text
    return f"({text})"


def _poly_str(p) -> str:
    items = sorted(_terms(p).items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0]))
    if not items:
        return "0"
    out = []
    for (a, b), c in items:
        mono = []
        if a:
            mono.append("q" if a == 1 else f"q^{a}")
        if b:
            mono.append("t" if b == 1 else f"t^{b}")
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = "*".join(mono)
        else:
            body = f"{mag}*" + "*".join(mono)
        sign = "-" if c < 0 else "+"
        out.append((sign, body))
    first_sign, first_body = out[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


def as_scalar(x) -> QTScalar:
    """Coerce ints, Fractions, QTPoly or QTScalar to QTScalar."""
    if isinstance(x, QTScalar):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return QTScalar._raw(_const(x), _P1)
    if isinstance(x, Fraction):
        return QTScalar.from_fraction(x)
    if isinstance(x, QTPoly):
        return x.to_scalar()
    if isinstance(x, flint.fmpz_mpoly):
        return QTScalar._raw(x, _P1)
    raise TypeError(f"cannot coerce {type(x).__name__} to QTScalar")


def qt_monomial(q_exp: int = 0, t_exp: int = 0, coeff: int = 1) -> QTScalar:
    """The Laurent monomial coeff * q^q_exp * t^t_exp."""
    num = _mono(max(q_exp, 0), max(t_exp, 0), coeff)
    den = _mono(max(-q_exp, 0), max(-t_exp, 0))
    return QTScalar._raw(num, den)


def qt_sum(values: Iterable[QTScalar]) -> QTScalar:
    total = ZERO
    for v in values:
        total = total + v
    return total


def qt_prod(values: Iterable[QTScalar]) -> QTScalar:
    total = ONE
    for v in values:
        total = total * v
    return total


_ALLOWED_BINOPS = {ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow}


def parse_scalar(text: str) -> QTScalar:
    """Parse integer-coefficient expressions in q, t with + - * / ^ and parentheses."""
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse scalar expression {text!r}") from exc

    def ev(node) -> QTScalar:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.BinOp) and type(node.op) in _ALLOWED_BINOPS:
            left = ev(node.left)
            if isinstance(node.op, ast.Pow):
                exp = node.right
                sign = 1
                if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
                    sign, exp = -1, exp.operand
                if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int)):
                    raise ValueError("exponents must be integer literals")
                return left ** (sign * exp.value)
            right = ev(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            return left / right
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return as_scalar(node.value)
        if isinstance(node, ast.Name) and node.id in ("q", "t"):
            return q if node.id == "q" else t
        raise ValueError(f"unsupported syntax in scalar expression: {text!r}")

    return ev(tree)


ZERO = QTScalar._raw(_P0, _P1)
ONE = QTScalar._raw(_P1, _P1)
q = QTScalar._raw(_Q, _P1)
t = QTScalar._raw(_T, _P1)
