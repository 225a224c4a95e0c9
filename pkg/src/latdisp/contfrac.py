"""Continued fractions with exact period detection and two-sided sequences.

The central type is CFSequence, a doubly infinite (or terminating)
coefficient sequence (a_i) stored as four parts: a right preperiod and
period for indices i >= offset, and a left preperiod and period for
indices i < offset, the left parts listed outward (a_{offset-1},
a_{offset-2}, ...).  The offset records where index 0 sits, so shifting
the origin is a relabeling rather than a rebuild.

Expansions of quadratic irrationals detect their period by exact
recurrence of the complete quotient; nothing here ever rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .qfield import QuadraticNumber, rational, delta


class NonPeriodicTail(ValueError):
    """A tail value was requested where the sequence terminates."""


def _primitive(period: tuple[int, ...]) -> tuple[int, ...]:
    n = len(period)
    for m in range(1, n + 1):
        if n % m == 0 and period == period[:m] * (n // m):
            return period[:m]
    return period


def _rotate(period: tuple[int, ...], r: int) -> tuple[int, ...]:
    if not period:
        return period
    r %= len(period)
    return period[r:] + period[:r]


@dataclass(frozen=True)
class CFSequence:
    """Coefficient sequence (a_i), periodic or terminating on each side."""

    right_pre: tuple[int, ...] = ()
    right_per: tuple[int, ...] = ()
    left_pre: tuple[int, ...] = ()
    left_per: tuple[int, ...] = ()
    offset: int = 0  # true index of the first right_pre coefficient

    def __post_init__(self):
        for name in ("right_pre", "right_per", "left_pre", "left_per"):
            part = tuple(int(c) for c in getattr(self, name))
            object.__setattr__(self, name, part)
        object.__setattr__(self, "right_per", _primitive(self.right_per))
        object.__setattr__(self, "left_per", _primitive(self.left_per))
        has_left = bool(self.left_pre or self.left_per)
        for name in ("right_per", "left_pre", "left_per"):
            if any(c < 1 for c in getattr(self, name)):
                raise ValueError(f"{name} coefficients must be >= 1")
        for pos, c in enumerate(self.right_pre):
            # the leading coefficient of a one-sided expansion is a floor
            # and may be any integer; every other coefficient must be >= 1
            if c < 1 and (pos > 0 or has_left):
                raise ValueError("coefficients must be >= 1")

    # -- coefficient access ------------------------------------------------

    def a(self, i: int) -> int:
        p = i - self.offset
        if p >= 0:
            if p < len(self.right_pre):
                return self.right_pre[p]
            if self.right_per:
                return self.right_per[(p - len(self.right_pre)) % len(self.right_per)]
            raise IndexError(f"index {i} beyond right end")
        k = -1 - p
        if k < len(self.left_pre):
            return self.left_pre[k]
        if self.left_per:
            return self.left_per[(k - len(self.left_pre)) % len(self.left_per)]
        raise IndexError(f"index {i} beyond left end")

    def A(self, i: int) -> int:
        """Partial coefficient sums: A_0 = 0, A_i = sum(a_0..a_{i-1}), negative mirror."""
        if i >= 0:
            return sum(self.a(k) for k in range(i))
        return -sum(self.a(k) for k in range(i, 0))

    def index_range(self) -> tuple[int | None, int | None]:
        lo = None if self.left_per else self.offset - len(self.left_pre)
        hi = None if self.right_per else self.offset + len(self.right_pre) - 1
        return lo, hi

    def max_coefficient(self) -> int:
        parts = self.right_pre + self.right_per + self.left_pre + self.left_per
        if not parts:
            raise ValueError("empty sequence")
        return max(parts)

    @property
    def kind(self) -> str:
        if self.right_per and self.left_per:
            return "two_sided"
        if not self.right_per and not self.left_per:
            return "finite"
        if not self.left_pre and not self.left_per:
            return "one_sided_right"
        return "mixed"

    # -- canonical form ------------------------------------------------------

    def rebased(self) -> "CFSequence":
        """Equivalent sequence with offset 0 (parts re-anchored, periods rotated)."""
        if self.offset == 0:
            return self
        m_r, m_l = len(self.right_per), len(self.left_per)
        # right side: periodic regime starts at true index rs
        if self.right_per:
            rs = self.offset + len(self.right_pre)
            r1 = max(0, rs)
            new_rpre = tuple(self.a(i) for i in range(0, r1))
            new_rper = _rotate(self.right_per, (r1 - rs) % m_r)
        else:
            hi = self.offset + len(self.right_pre)  # one past the right end
            new_rpre = tuple(self.a(i) for i in range(0, max(0, hi)))
            new_rper = ()
        # left side, outward positions k = -1 - i
        if self.left_per:
            kp = len(self.left_pre) - self.offset  # first periodic outward position
            k1 = max(0, kp)
            new_lpre = tuple(self.a(-1 - k) for k in range(0, k1))
            new_lper = _rotate(self.left_per, (k1 - kp) % m_l)
        else:
            kmax = len(self.left_pre) - self.offset  # one past the left end
            new_lpre = tuple(self.a(-1 - k) for k in range(0, max(0, kmax)))
            new_lper = ()
        return CFSequence(new_rpre, new_rper, new_lpre, new_lper, 0)

    def canonical(self) -> "CFSequence":
        """Offset 0, primitive periods, minimal preperiods."""
        seq = self.rebased()
        rpre, rper = list(seq.right_pre), seq.right_per
        while rpre and rper and rpre[-1] == rper[-1]:
            rper = (rper[-1],) + rper[:-1]
            rpre.pop()
        lpre, lper = list(seq.left_pre), seq.left_per
        while lpre and lper and lpre[-1] == lper[-1]:
            lper = (lper[-1],) + lper[:-1]
            lpre.pop()
        return CFSequence(tuple(rpre), rper, tuple(lpre), lper, 0)

    def __eq__(self, other):
        if not isinstance(other, CFSequence):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return (
            a.right_pre == b.right_pre
            and a.right_per == b.right_per
            and a.left_pre == b.left_pre
            and a.left_per == b.left_per
        )

    def __hash__(self):
        c = self.canonical()
        return hash((c.right_pre, c.right_per, c.left_pre, c.left_per))

    def __str__(self) -> str:
        return format_cf(self)


# -- construction ----------------------------------------------------------


def normalize_finite(coeffs: list[int]) -> tuple[int, ...]:
    """Rewrite a finite expansion so that it ends in 1: [..., c] -> [..., c-1, 1]."""
    out = list(coeffs)
    if out and out[-1] != 1:
        out[-1] -= 1
        out.append(1)
    return tuple(out)


def two_sided_periodic(period) -> CFSequence:
    """The bi-infinite sequence a_i = period[i mod m] for all integers i."""
    per = tuple(int(c) for c in period)
    if not per:
        raise ValueError("period must be nonempty")
    return CFSequence(right_per=per, left_per=tuple(reversed(per)))


def cf_expand(x) -> CFSequence:
    """Expansion of a rational (> 0, finite, ending in 1) or quadratic irrational."""
    if not isinstance(x, QuadraticNumber):
        x = rational(Fraction(x))
    if x.is_rational:
        if x.a <= 0:
            raise ValueError("finite expansions are defined for positive rationals")
        num, den = x.a.numerator, x.a.denominator
        coeffs = []
        while den:
            q, rem = divmod(num, den)
            coeffs.append(q)
            num, den = den, rem
        return CFSequence(right_pre=normalize_finite(coeffs))
    coeffs = []
    seen: dict[QuadraticNumber, int] = {}
    quotient = x
    while quotient not in seen:
        seen[quotient] = len(coeffs)
        digit = quotient.floor()
        coeffs.append(digit)
        quotient = 1 / (quotient - digit)
    start = seen[quotient]
    return CFSequence(right_pre=tuple(coeffs[:start]), right_per=tuple(coeffs[start:]))


def purely_periodic_generator(d: int, n: int) -> QuadraticNumber:
    """The purely periodic generator floor(-conj(g)) + g of the ring Z[g], g = n*delta(d)."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    g = n * delta(d)
    return (-g.conjugate()).floor() + g


def two_sided_from_tails(fwd: QuadraticNumber, bwd: QuadraticNumber) -> CFSequence:
    """Two-sided sequence whose tails at index 0 are (fwd, bwd).

    fwd > 1 supplies a_0, a_1, ...; the expansion of -1/bwd (with
    -1 < bwd < 0) supplies a_-1, a_-2, ... outward.
    """
    if not fwd > 1:
        raise ValueError("forward value must exceed 1")
    if not (-1 < bwd < 0):
        raise ValueError("backward value must lie in (-1, 0)")
    right = cf_expand(fwd)
    left = cf_expand(-1 / bwd)
    return CFSequence(
        right_pre=right.right_pre,
        right_per=right.right_per,
        left_pre=left.right_pre,
        left_per=left.right_per,
    )


# -- convergents -------------------------------------------------------------


@dataclass(frozen=True)
class ConvergentPair:
    index: int
    num: int  # p_i
    den: int  # q_i


def convergent(seq: CFSequence, i: int) -> ConvergentPair:
    """(p_i, q_i) with p_{-1}=0, p_0=1, q_{-1}=1, q_0=0, iterated from the center."""
    p_prev, p_cur = 0, 1  # p_{-1}, p_0
    q_prev, q_cur = 1, 0
    if i >= 0:
        for k in range(i):
            a = seq.a(k)
            p_prev, p_cur = p_cur, a * p_cur + p_prev
            q_prev, q_cur = q_cur, a * q_cur + q_prev
        return ConvergentPair(i, p_cur, q_cur)
    # downward: maintain (p_k, p_{k+1}) and apply p_{k-1} = -a_k p_k + p_{k+1}
    p_lo, p_hi = 0, 1  # p_{-1}, p_0
    q_lo, q_hi = 1, 0
    k = -1
    while k > i:
        a = seq.a(k)
        p_lo, p_hi = -a * p_lo + p_hi, p_lo
        q_lo, q_hi = -a * q_lo + q_hi, q_lo
        k -= 1
    return ConvergentPair(i, p_lo, q_lo)


def convergents_range(seq: CFSequence, lo: int, hi: int) -> dict[int, tuple[int, int]]:
    """All (p_i, q_i) for lo <= i <= hi, computed in one pass each direction."""
    out: dict[int, tuple[int, int]] = {}
    p_prev, p_cur, q_prev, q_cur = 0, 1, 1, 0
    if 0 >= lo and 0 <= hi:
        out[0] = (1, 0)
    if -1 >= lo and -1 <= hi:
        out[-1] = (0, 1)
    k = 0
    while k + 1 <= hi:
        a = seq.a(k)
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        k += 1
        if k >= lo:
            out[k] = (p_cur, q_cur)
    p_lo, p_hi, q_lo, q_hi = 0, 1, 1, 0
    k = -1
    while k - 1 >= lo:
        a = seq.a(k)
        p_lo, p_hi = -a * p_lo + p_hi, p_lo
        q_lo, q_hi = -a * q_lo + q_hi, q_lo
        k -= 1
        if k <= hi:
            out[k] = (p_lo, q_lo)
    return out


# -- tail values --------------------------------------------------------------


def _moebius_fixed_point(period: tuple[int, ...]) -> QuadraticNumber:
    """Value of the purely periodic continued fraction with the given cycle."""
    a, b, c, d = 1, 0, 0, 1
    for coeff in period:
        a, b, c, d = a * coeff + b, a, c * coeff + d, c
    # x = (a x + b) / (c x + d), take the root greater than 1
    disc = (a - d) * (a - d) + 4 * b * c
    value = QuadraticNumber(Fraction(a - d, 2 * c), Fraction(1, 2 * c), disc)
    assert value > 1
    return value


def _fold_prefix(prefix, value: QuadraticNumber) -> QuadraticNumber:
    for c in reversed(prefix):
        value = c + 1 / value
    return value


def periodic_value(period) -> QuadraticNumber:
    """Value of the purely periodic continued fraction with the given cycle."""
    cycle = tuple(int(c) for c in period)
    if not cycle or any(c < 1 for c in cycle):
        raise ValueError("period must be a nonempty tuple of coefficients >= 1")
    return _moebius_fixed_point(_primitive(cycle))


def cf_value(seq: CFSequence) -> QuadraticNumber:
    """Value of a finite or rightward expansion, read from its anchor index."""
    if seq.kind not in ("finite", "one_sided_right"):
        raise ValueError("value is only defined for sequences without a left part")
    if seq.right_per:
        return _fold_prefix(seq.right_pre, _moebius_fixed_point(seq.right_per))
    coeffs = seq.right_pre
    if not coeffs:
        raise ValueError("empty sequence has no value")
    value = rational(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        value = c + 1 / value
    return value


def tail_values(seq: CFSequence, i: int) -> tuple[QuadraticNumber, QuadraticNumber]:
    """Exact values (fwd, bwd): fwd = [a_i, a_{i+1}, ...] and -bwd = [0, a_{i-1}, ...]."""
    if not seq.right_per:
        raise NonPeriodicTail("sequence terminates rightward")
    if not seq.left_per:
        raise NonPeriodicTail("sequence terminates leftward")
    m_r = len(seq.right_per)
    rs = seq.offset + len(seq.right_pre)
    if i >= rs:
        fwd = _moebius_fixed_point(_rotate(seq.right_per, (i - rs) % m_r))
    else:
        prefix = [seq.a(j) for j in range(i, rs)]
        fwd = _fold_prefix(prefix, _moebius_fixed_point(seq.right_per))
    m_l = len(seq.left_per)
    js = seq.offset - 1 - len(seq.left_pre)  # largest index already in the left cycle
    if i - 1 <= js:
        k = seq.offset - 1 - (i - 1)  # outward position of index i-1
        back = _moebius_fixed_point(_rotate(seq.left_per, (k - len(seq.left_pre)) % m_l))
    else:
        prefix = [seq.a(j) for j in range(i - 1, js, -1)]
        back = _fold_prefix(prefix, _moebius_fixed_point(seq.left_per))
    return fwd, -1 / back


# -- re-indexing ---------------------------------------------------------------


def shift_reverse(seq: CFSequence, shift: int = 0, reverse: bool = False) -> CFSequence:
    """Relabel indices: reverse mirrors a_i -> a_{-1-i} first, then a_i -> a_{i+shift}."""
    out = seq
    if reverse:
        out = CFSequence(
            right_pre=out.left_pre,
            right_per=out.left_per,
            left_pre=out.right_pre,
            left_per=out.right_per,
            offset=-out.offset,
        )
    if shift:
        out = CFSequence(
            right_pre=out.right_pre,
            right_per=out.right_per,
            left_pre=out.left_pre,
            left_per=out.left_per,
            offset=out.offset - shift,
        )
    return out


# -- literals -------------------------------------------------------------------


def _parse_side(text: str, what: str) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Parse 'c,c,...,(p,p,...)' into (preperiod, period); either part may be absent."""
    text = text.strip()
    if not text:
        return (), ()
    per: tuple[int, ...] = ()
    if "(" in text:
        head, _, rest = text.partition("(")
        body, close, trail = rest.partition(")")
        if not close or trail.strip():
            raise ValueError(f"malformed period in {what}: {text!r}")
        per = tuple(int(c) for c in body.split(","))
        text = head.strip().rstrip(",")
    pre = tuple(int(c) for c in text.split(",")) if text else ()
    return pre, per


def parse_cf(text: str) -> CFSequence:
    """Parse sequence literals.

    One-sided: "[2;1,1,(2,1,1,1)]" (first coefficient before the
    semicolon, optional trailing parenthesized period).  Two-sided:
    "left|right" where the left side lists a_-1, a_-2, ... outward, e.g.
    "(1,2)|(2,1,1,2)".
    """
    text = text.strip()
    if "|" in text:
        left_text, _, right_text = text.partition("|")
        lpre, lper = _parse_side(left_text, "left side")
        rpre, rper = _parse_side(right_text, "right side")
        return CFSequence(rpre, rper, lpre, lper)
    if text.startswith("[") and text.endswith("]"):
        body = text[1:-1]
        if ";" in body:
            head, _, rest = body.partition(";")
            pre, per = _parse_side(rest, "sequence")
            return CFSequence((int(head),) + pre, per)
        pre, per = _parse_side(body, "sequence")
        return CFSequence(pre, per)
    raise ValueError(f"unrecognized sequence literal: {text!r}")


def format_cf(seq: CFSequence) -> str:
    seq = seq.rebased()

    def side(pre, per):
        items = [str(c) for c in pre]
        if per:
            items.append("(" + ",".join(str(c) for c in per) + ")")
        return ",".join(items)

    if seq.left_pre or seq.left_per:
        return side(seq.left_pre, seq.left_per) + "|" + side(seq.right_pre, seq.right_per)
    if not seq.right_pre:
        return "[" + side((), seq.right_per) + "]"
    head, rest = seq.right_pre[0], seq.right_pre[1:]
    tail = side(rest, seq.right_per)
    return f"[{head};{tail}]" if tail else f"[{head}]"
