"""Exact arithmetic in real quadratic fields Q(sqrt(d)).

A QuadraticNumber stores a + b*sqrt(d) with Fraction coefficients and a
squarefree integer radicand d.  Rationals are the special case b == 0,
which is always canonicalized to d == 1.  All predicates (sign, floor,
comparisons) are decided exactly with integer arithmetic; floats never
enter any computation.  Numbers from two different fields can still be
ordered through adaptive-precision rational intervals, see compare().
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt


class MixedRadicand(ValueError):
    """Arithmetic tried to combine two distinct irrational radicands."""


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


_SQUAREFREE_CACHE: dict[int, tuple[int, int]] = {}


def _extract_square(d: int) -> tuple[int, int]:
    """Split d into (s, d') with d == s*s*d' and d' squarefree."""
    cached = _SQUAREFREE_CACHE.get(d)
    if cached is not None:
        return cached
    s, rest, p = 1, d, 2
    while p * p <= rest:
        while rest % (p * p) == 0:
            rest //= p * p
            s *= p
        p += 1 if p == 2 else 2
    _SQUAREFREE_CACHE[d] = (s, rest)
    return s, rest


@dataclass(frozen=True)
class QuadraticNumber:
    """a + b*sqrt(d), canonicalized so that d is squarefree and b == 0 forces d == 1."""

    a: Fraction
    b: Fraction = Fraction(0)
    d: int = 1

    def __post_init__(self):
        a = Fraction(self.a)
        b = Fraction(self.b)
        d = self.d
        if not isinstance(d, int):
            raise TypeError("radicand must be an int")
        if d < 1:
            raise ValueError("radicand must be a positive integer")
        if b == 0:
            d = 1
        elif d == 1:
            a, b = a + b, Fraction(0)
        else:
            s, rest = _extract_square(d)
            if s != 1:
                b, d = b * s, rest
            if d == 1:
                a, b = a + b, Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    # -- predicates ------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    @property
    def is_integer(self) -> bool:
        return self.b == 0 and self.a.denominator == 1

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    # -- field data ------------------------------------------------------

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        """Product with the conjugate: a*a - b*b*d."""
        return self.a * self.a - self.b * self.b * self.d

    def trace(self) -> Fraction:
        return 2 * self.a

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other) -> "QuadraticNumber | None":
        if isinstance(other, QuadraticNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber(Fraction(other))
        return None

    def _join(self, other: "QuadraticNumber") -> int:
        """Common radicand for a binary operation, or raise MixedRadicand."""
        if self.d == other.d:
            return self.d
        if self.b == 0:
            return other.d
        if other.b == 0:
            return self.d
        raise MixedRadicand(f"cannot mix sqrt({self.d}) with sqrt({other.d})")

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._join(o)
        return QuadraticNumber(self.a + o.a, self.b + o.b, d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._join(o)
        return QuadraticNumber(self.a - o.a, self.b - o.b, d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._join(o)
        return QuadraticNumber(
            self.a * o.a + self.b * o.b * d,
            self.a * o.b + self.b * o.a,
            d,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._join(o)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero quadratic number")
        # multiply by the conjugate over the norm
        inv_a, inv_b = o.a / n, -o.b / n
        return QuadraticNumber(
            self.a * inv_a + self.b * inv_b * d,
            self.a * inv_b + self.b * inv_a,
            d,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    # -- exact order -----------------------------------------------------

    def sign(self) -> int:
        """Exact sign, decided by comparing a*a against b*b*d when needed."""
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: |a| vs |b|*sqrt(d); equality would force sqrt(d) rational
        lhs, rhs = a * a, b * b * self.d
        if a > 0:
            return 1 if lhs > rhs else -1
        return -1 if lhs > rhs else 1

    def floor(self) -> int:
        """Exact floor via integer square root bounds."""
        if self.b == 0:
            return math.floor(self.a)
        den = math.lcm(self.a.denominator, self.b.denominator)
        big_a = int(self.a * den)
        big_b = int(self.b * den)
        rad = big_b * big_b * self.d
        if big_b > 0:
            m = isqrt(rad)
        else:
            m = -(isqrt(rad) + 1)  # sqrt irrational, so floor of the negative part
        n = (big_a + m) // den
        while (self - (n + 1)).sign() >= 0:
            n += 1
        while (self - n).sign() < 0:
            n -= 1
        return n

    def _cmp_key(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign()

    def __lt__(self, other):
        s = self._cmp_key(other)
        return NotImplemented if s is NotImplemented else s < 0

    def __le__(self, other):
        s = self._cmp_key(other)
        return NotImplemented if s is NotImplemented else s <= 0

    def __gt__(self, other):
        s = self._cmp_key(other)
        return NotImplemented if s is NotImplemented else s > 0

    def __ge__(self, other):
        s = self._cmp_key(other)
        return NotImplemented if s is NotImplemented else s >= 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b and (self.b == 0 or self.d == o.d)

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        # display/test convenience only; the library never computes with floats
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    # -- printing --------------------------------------------------------

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        den = math.lcm(self.a.denominator, self.b.denominator)
        p = int(self.a * den)
        q = int(self.b * den)
        root = f"sqrt({self.d})" if abs(q) == 1 else f"{abs(q)}*sqrt({self.d})"
        if p == 0:
            body = root if q > 0 else "-" + root
        else:
            body = f"{p} + {root}" if q > 0 else f"{p} - {root}"
        if den == 1:
            return body
        return f"({body})/{den}"

    def __repr__(self) -> str:
        return f"QuadraticNumber({self.a!r}, {self.b!r}, {self.d})"


def rational(x) -> QuadraticNumber:
    return QuadraticNumber(Fraction(x))


def sqrt(d: int) -> QuadraticNumber:
    """sqrt(d) for a positive integer d (square factors are extracted)."""
    if d < 1:
        raise ValueError("radicand must be a positive integer")
    return QuadraticNumber(Fraction(0), Fraction(1), d)


def delta(d: int) -> QuadraticNumber:
    """Standard generator of the quadratic integers in Q(sqrt(d)).

    sqrt(d) when d = 2, 3 mod 4, and (1 + sqrt(d))/2 when d = 1 mod 4.
    Requires d squarefree and > 1.
    """
    if d < 2:
        raise ValueError("need a squarefree integer d > 1")
    _, rest = _extract_square(d)
    if rest != d:
        raise ValueError(f"{d} is not squarefree")
    if d % 4 == 1:
        return QuadraticNumber(Fraction(1, 2), Fraction(1, 2), d)
    return sqrt(d)


# -- certified intervals -------------------------------------------------

MAX_BITS = 4096


@dataclass(frozen=True)
class CertifiedInterval:
    """Closed rational interval [lo, hi] guaranteed to contain an exact value."""

    lo: Fraction
    hi: Fraction
    bits: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty interval")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __add__(self, other):
        o = _as_interval(other, self.bits)
        return CertifiedInterval(self.lo + o.lo, self.hi + o.hi, min(self.bits, o.bits))

    __radd__ = __add__

    def __sub__(self, other):
        o = _as_interval(other, self.bits)
        return CertifiedInterval(self.lo - o.hi, self.hi - o.lo, min(self.bits, o.bits))

    def __rsub__(self, other):
        return _as_interval(other, self.bits) - self

    def __neg__(self):
        return CertifiedInterval(-self.hi, -self.lo, self.bits)

    def __mul__(self, other):
        o = _as_interval(other, self.bits)
        corners = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return CertifiedInterval(min(corners), max(corners), min(self.bits, o.bits))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_interval(other, self.bits)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval denominator straddles zero")
        corners = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return CertifiedInterval(min(corners), max(corners), min(self.bits, o.bits))


def _as_interval(x, bits: int) -> CertifiedInterval:
    if isinstance(x, CertifiedInterval):
        return x
    if isinstance(x, QuadraticNumber):
        return interval(x, bits)
    f = Fraction(x)
    return CertifiedInterval(f, f, bits)


def sqrt_interval(d: int, bits: int) -> CertifiedInterval:
    """Nested rational bounds on sqrt(d) with width 2**-bits."""
    s = isqrt(d << (2 * bits))
    scale = 1 << bits
    return CertifiedInterval(Fraction(s, scale), Fraction(s + 1, scale), bits)


def interval(x: QuadraticNumber, bits: int) -> CertifiedInterval:
    """Enclosure of x; refining bits only ever shrinks it (nesting invariant)."""
    if x.b == 0:
        return CertifiedInterval(x.a, x.a, bits)
    root = sqrt_interval(x.d, bits)
    scaled = root * x.b
    return CertifiedInterval(x.a + scaled.lo, x.a + scaled.hi, bits)


def compare(x, y, max_bits: int = MAX_BITS) -> int:
    """Exact three-way comparison that also works across two different fields.

    Same-field pairs are decided symbolically.  Otherwise both values are
    irrational with distinct squarefree radicands, hence never equal, and
    interval refinement starting at 64 bits must separate them.  Hitting
    max_bits means a symbolic-equality case was missed, which is a bug, so
    it raises rather than returning an unsound answer.
    """
    if not isinstance(x, QuadraticNumber):
        x = QuadraticNumber(Fraction(x))
    if not isinstance(y, QuadraticNumber):
        y = QuadraticNumber(Fraction(y))
    if x.d == y.d or x.b == 0 or y.b == 0:
        return (x - y).sign()
    bits = 64
    while bits <= max_bits:
        ix, iy = interval(x, bits), interval(y, bits)
        if ix.hi < iy.lo:
            return -1
        if iy.hi < ix.lo:
            return 1
        bits *= 2
    raise RuntimeError(
        "interval refinement exhausted at %d bits; missed symbolic equality" % max_bits
    )


# -- text form -----------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<delta>delta_(?P<dd>\d+))|(?P<name>sqrt)|(?P<num>\d+(?:\.\d+)?)"
    r"|(?P<op>[-+*/()]))"
)


def _tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.group("delta"):
            out.append(("delta", int(m.group("dd")), m.start()))
        elif m.group("name"):
            out.append(("sqrt", None, m.start()))
        elif m.group("num"):
            out.append(("num", Fraction(m.group("num")), m.start()))
        else:
            out.append((m.group("op"), None, m.start()))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, kind: str):
        tok = self.take()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}", tok[2])
        return tok

    def expr(self) -> QuadraticNumber:
        value = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> QuadraticNumber:
        value = self.factor()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.take()
            rhs = self.factor()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise ParseError("division by zero", pos)
                value = value / rhs
        return value

    def factor(self) -> QuadraticNumber:
        kind, val, pos = self.peek()
        if kind == "-":
            self.take()
            return -self.factor()
        if kind == "+":
            self.take()
            return self.factor()
        if kind == "num":
            self.take()
            return QuadraticNumber(val)
        if kind == "delta":
            self.take()
            return delta(val)
        if kind == "sqrt":
            self.take()
            self.expect("(")
            inner = self.expr()
            self.expect(")")
            if not inner.is_integer or inner.a < 1:
                raise ParseError("sqrt expects a positive integer", pos)
            return sqrt(int(inner.a))
        if kind == "(":
            self.take()
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError("expected a number", pos)


def parse_number(text: str) -> QuadraticNumber:
    """Parse 'a', 'a/b', 'sqrt(d)', '(p + q*sqrt(d))/r', 'delta_d' and sums thereof."""
    parser = _Parser(text)
    value = parser.expr()
    kind, _, pos = parser.peek()
    if kind is not None:
        raise ParseError("trailing input", pos)
    return value


def decimal_str(x: QuadraticNumber | Fraction | int, digits: int) -> str:
    """Correctly rounded fixed-point rendering (ties away from the floor)."""
    if digits < 0:
        raise ValueError("digits must be >= 0")
    if not isinstance(x, QuadraticNumber):
        x = QuadraticNumber(Fraction(x))
    scale = 10**digits
    n = (x * scale + Fraction(1, 2)).floor()
    sign = "-" if n < 0 else ""
    body = str(abs(n)).rjust(digits + 1, "0")
    if digits == 0:
        return sign + body
    return f"{sign}{body[:-digits]}.{body[-digits:]}"
