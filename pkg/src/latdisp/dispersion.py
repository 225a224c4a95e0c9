"""Normalized dispersion of plane lattices described by coefficient sequences.

Every maximal empty box of such a lattice has normalized volume

    (1 - j + fwd) * (1 + j - bwd) / (fwd - bwd)

where fwd > 1 and -1 < bwd < 0 are the forward and backward tail values at
some chain position and j is an integer offset with 0 <= j < floor(fwd).
The supremum of these volumes over all positions is the normalized
dispersion.  For eventually periodic two-sided sequences the supremum is
computed exactly: away from the preperiods the tail values converge
monotonically along fixed residue classes of positions, so each class is
covered by one exactly evaluated box plus one exactly evaluated limit.

The module also provides the closed form for lattices coming from orders in
real quadratic fields, two-sided bounds in terms of the largest coefficient,
the family of record lattices ordered by dispersion, and scan utilities for
coefficient statistics of purely periodic quadratic integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Optional, Union

from .contfrac import (
    CFSequence,
    cf_expand,
    convergent,
    periodic_value,
    purely_periodic_generator,
    tail_values,
    two_sided_periodic,
)
from .qfield import (
    MAX_BITS,
    CertifiedInterval,
    QuadraticNumber,
    compare,
    decimal_str,
    interval,
    rational,
    sqrt,
)


class NotPurelyPeriodic(ValueError):
    """The expansion of the given number has a nonempty preperiod."""


class NotQuadraticInteger(ValueError):
    """The given number is not an algebraic integer of degree two."""


# ---------------------------------------------------------------------------
# box values


def _square_split(n: int) -> tuple[int, int]:
    """n = s*s*m with m squarefree."""
    s, rest, p = 1, n, 2
    while p * p <= rest:
        while rest % (p * p) == 0:
            rest //= p * p
            s *= p
        p += 1 if p == 2 else 2
    return s, rest


@dataclass(frozen=True)
class MixedValue:
    """Box volume whose two tail values live in different quadratic fields.

    The value (1 - j + fwd)(1 + j - bwd)/(fwd - bwd) is kept in factored
    form because the quotient has no single-radicand representation.  It is
    evaluated through certified intervals on demand; equality and ordering
    against other box values are decided exactly by value_cmp.
    """

    j: int
    fwd: QuadraticNumber
    bwd: QuadraticNumber

    def x_factor(self) -> QuadraticNumber:
        return (1 - self.j) + self.fwd

    def y_factor(self) -> QuadraticNumber:
        return (1 + self.j) - self.bwd

    def interval(self, bits: int = 64) -> CertifiedInterval:
        num = interval(self.x_factor(), bits) * interval(self.y_factor(), bits)
        den = interval(self.fwd, bits) - interval(self.bwd, bits)
        return num / den

    def decimal(self, digits: int = 5) -> str:
        """Decimal string rounded half away from zero, certified exact."""
        scale = 10**digits
        bits = 64
        while bits <= MAX_BITS:
            box = self.interval(bits)
            lo = (box.lo * scale + Fraction(1, 2)).__floor__()
            hi = (box.hi * scale + Fraction(1, 2)).__floor__()
            if lo == hi:
                sign = "-" if lo < 0 else ""
                n = abs(lo)
                return f"{sign}{n // scale}.{n % scale:0{digits}d}"
            bits *= 2
        raise RuntimeError("interval refinement failed to settle a digit")

    def __str__(self) -> str:
        return (
            f"(({self.x_factor()}) * ({self.y_factor()}))"
            f" / (({self.fwd}) - ({self.bwd}))"
        )


Value = Union[QuadraticNumber, MixedValue]


def box_value(a: int, j: int, fwd: QuadraticNumber, bwd: QuadraticNumber) -> Value:
    """Normalized volume of the maximal empty box with offset j at a position
    whose forward tail is fwd (leading coefficient a) and backward tail bwd."""
    if a < 1:
        raise ValueError("leading coefficient must be >= 1")
    if not 0 <= j < a:
        raise ValueError(f"offset must satisfy 0 <= j < {a}")
    if fwd.floor() != a or fwd == rational(a):
        raise ValueError("forward tail must lie strictly between a and a + 1")
    if bwd.sign() >= 0 or (bwd + 1).sign() <= 0:
        raise ValueError("backward tail must lie strictly between -1 and 0")
    if fwd.d == bwd.d or fwd.is_rational or bwd.is_rational:
        return ((1 - j) + fwd) * ((1 + j) - bwd) / (fwd - bwd)
    return MixedValue(j, fwd, bwd)


def maximizing_offsets(a: int) -> tuple[int, ...]:
    """Offsets that can maximize the box volume at a position with leading
    coefficient a: the floor and ceiling of a/2, clipped to [0, a)."""
    if a < 1:
        raise ValueError("leading coefficient must be >= 1")
    lo, hi = a // 2, (a + 1) // 2
    if hi != lo and hi < a:
        return (lo, hi)
    return (lo,)


# ---------------------------------------------------------------------------
# exact comparison of box values


def _coords_of(value: QuadraticNumber, da: int, db: int) -> Optional[tuple]:
    """Coordinates of value over the formal basis (1, ra, rb, ra*rb) where
    ra*ra == da and rb*rb == db, or None when value lives elsewhere."""
    zero = Fraction(0)
    if value.is_rational:
        return (value.a, zero, zero, zero)
    if value.d == da:
        return (value.a, value.b, zero, zero)
    if value.d == db:
        return (value.a, zero, value.b, zero)
    s, core = _square_split(da * db)
    if value.d == core:
        return (value.a, zero, zero, value.b / s)
    return None


def _mul_coords(u: tuple, v: tuple, da: int, db: int) -> tuple:
    u0, u1, u2, u3 = u
    v0, v1, v2, v3 = v
    return (
        u0 * v0 + u1 * v1 * da + u2 * v2 * db + u3 * v3 * da * db,
        u0 * v1 + u1 * v0 + (u2 * v3 + u3 * v2) * db,
        u0 * v2 + u2 * v0 + (u1 * v3 + u3 * v1) * da,
        u0 * v3 + u3 * v0 + u1 * v2 + u2 * v1,
    )


def _mixed_parts(v: MixedValue) -> tuple[tuple, tuple, int, int]:
    """Numerator and denominator coordinates of v over its field pair."""
    x, y = v.x_factor(), v.y_factor()
    zero = Fraction(0)
    num = (x.a * y.a, x.b * y.a, x.a * y.b, x.b * y.b)
    den = (v.fwd.a - v.bwd.a, v.fwd.b, -v.bwd.b, zero)
    return num, den, v.fwd.d, v.bwd.d


def _swap_coords(c: tuple) -> tuple:
    return (c[0], c[2], c[1], c[3])


def _known_equal(u: Value, v: Value) -> bool:
    """Exact equality where the field structure makes it decidable."""
    if isinstance(u, QuadraticNumber) and isinstance(v, QuadraticNumber):
        return u == v
    if isinstance(u, QuadraticNumber):
        u, v = v, u
    unum, uden, da, db = _mixed_parts(u)
    if isinstance(v, QuadraticNumber):
        cv = _coords_of(v, da, db)
        if cv is None:
            # v generates a third field; the quotient never lands there
            return False
        diff = tuple(
            x - y for x, y in zip(unum, _mul_coords(cv, uden, da, db))
        )
        return all(c == 0 for c in diff)
    vnum, vden, ea, eb = _mixed_parts(v)
    if (ea, eb) == (db, da):
        vnum, vden, ea, eb = _swap_coords(vnum), _swap_coords(vden), eb, ea
    if (ea, eb) != (da, db):
        return False
    lhs = _mul_coords(unum, vden, da, db)
    rhs = _mul_coords(vnum, uden, da, db)
    return all(x == y for x, y in zip(lhs, rhs))


def _value_interval(v: Value, bits: int) -> CertifiedInterval:
    if isinstance(v, QuadraticNumber):
        return interval(v, bits)
    return v.interval(bits)


def value_cmp(u: Value, v: Value) -> int:
    """Exact three-way comparison of box values, possibly in mixed fields."""
    if isinstance(u, QuadraticNumber) and isinstance(v, QuadraticNumber):
        return compare(u, v)
    if _known_equal(u, v):
        return 0
    bits = 64
    while bits <= MAX_BITS:
        iu = _value_interval(u, bits)
        iv = _value_interval(v, bits)
        if iu.lo > iv.hi:
            return 1
        if iu.hi < iv.lo:
            return -1
        bits *= 2
    raise RuntimeError("could not separate two box values")


def value_decimal(v: Value, digits: int = 5) -> str:
    if isinstance(v, QuadraticNumber):
        return decimal_str(v, digits)
    return v.decimal(digits)


# ---------------------------------------------------------------------------
# dispersion of a coefficient sequence


@dataclass(frozen=True)
class DispersionResult:
    """Outcome of a dispersion computation.

    value is the exact normalized dispersion.  When attained is True the
    witness (position, offset) names a box realizing it; otherwise the
    witness names the first position of the residue class whose limit
    realizes the supremum.  is_infinite is reserved for conventions where a
    sequence may have unbounded coefficients; sequences representable as
    CFSequence always have a finite period, hence a finite value.
    """

    value: Optional[Value]
    attained: bool
    witness: Optional[tuple[int, int]]
    is_infinite: bool = False


MINIMUM_DISPERSION = 1 + rational(2) / sqrt(5)
"""Normalized dispersion of the lattice with the all-ones sequence, the
smallest value any plane lattice attains."""


def _candidate_rank(cand: tuple) -> tuple:
    value, i, j, attained = cand
    return (0 if attained else 1, abs(i), i, j)


def disp_sequence(seq: CFSequence) -> DispersionResult:
    """Exact normalized dispersion of a two-sided coefficient sequence."""
    if seq.kind != "two_sided":
        raise ValueError("dispersion needs a sequence that is periodic on both sides")
    m_r, m_l = len(seq.right_per), len(seq.left_per)
    pr, pl = len(seq.right_pre), len(seq.left_pre)
    anchor = seq.offset
    right_start = anchor + pr  # forward tails are phase-exact from here on
    left_start = anchor - pl - 1  # positions at or below are fully in the left cycle

    cands: list[tuple] = []

    whole_periodic = (
        pr == 0 and pl == 0 and tuple(reversed(seq.right_per)) == seq.left_per
    )
    if whole_periodic:
        window = range(anchor, anchor + m_r)
    else:
        window = range(left_start - 2 * m_l + 1, right_start + 2 * m_r)
    for i in window:
        fwd, bwd = tail_values(seq, i)
        a = seq.a(i)
        for j in maximizing_offsets(a):
            cands.append((box_value(a, j, fwd, bwd), i, j, True))

    if not whole_periodic:
        # Beyond the window the backward tails at positions right_start + c,
        # c fixed mod 2 * m_r, converge monotonically to the tail of the
        # two-sided periodic reference, so the class supremum is either the
        # first (already evaluated) box or this limit.
        for c in range(2 * m_r):
            rot = tuple(seq.right_per[(c + t) % m_r] for t in range(m_r))
            ref = two_sided_periodic(rot)
            fwd, bwd = tail_values(ref, 0)
            for j in maximizing_offsets(rot[0]):
                cands.append((box_value(rot[0], j, fwd, bwd), right_start + c, j, False))
        # Mirror argument on the left: the forward tails converge along
        # classes of positions left_start - c, c fixed mod 2 * m_l.
        for c in range(2 * m_l):
            i0 = left_start - c
            phase = (anchor - 1 - i0 - pl) % m_l
            cyc = tuple(seq.left_per[(phase - t) % m_l] for t in range(m_l))
            fwd_limit = periodic_value(cyc)
            bwd_exact = tail_values(seq, i0)[1]
            for j in maximizing_offsets(cyc[0]):
                cands.append((box_value(cyc[0], j, fwd_limit, bwd_exact), i0, j, False))

    best = cands[0]
    for cand in cands[1:]:
        c = value_cmp(cand[0], best[0])
        if c > 0 or (c == 0 and _candidate_rank(cand) < _candidate_rank(best)):
            best = cand
    value, i, j, attained = best
    assert value_cmp(value, MINIMUM_DISPERSION) >= 0
    return DispersionResult(value=value, attained=attained, witness=(i, j))


# ---------------------------------------------------------------------------
# closed form for quadratic orders


def _require_squarefree(d: int) -> None:
    s, core = _square_split(d)
    if s != 1 or core != d:
        raise ValueError(f"{d} is not squarefree")


@dataclass(frozen=True)
class SubringSpec:
    """Index-n subring of the ring of integers of a real quadratic field."""

    d: int
    n: int = 1

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("field radicand must be at least 2")
        _require_squarefree(self.d)
        if self.n < 1:
            raise ValueError("subring index must be at least 1")

    @property
    def discriminant(self) -> int:
        base = self.d if self.d % 4 == 1 else 4 * self.d
        return self.n * self.n * base

    @property
    def determinant(self) -> QuadraticNumber:
        return sqrt(self.discriminant)


@dataclass(frozen=True)
class QuadraticLatticeDispersion:
    spec: SubringSpec
    generator: QuadraticNumber
    period: tuple[int, ...]
    dispersion: QuadraticNumber  # largest empty-box volume, unnormalized
    normalized: QuadraticNumber  # the same divided by the lattice determinant
    result: DispersionResult


def _order_normalized_dispersion(disc: int) -> QuadraticNumber:
    """Normalized dispersion of the order with the given discriminant."""
    r = disc % 2
    return 1 + rational(Fraction(disc + 4 - r, 4)) / sqrt(disc)


def disp_quadratic(spec: SubringSpec, verify: bool = True) -> QuadraticLatticeDispersion:
    """Closed-form dispersion of the lattice of a real quadratic subring."""
    disc = spec.discriminant
    det = spec.determinant
    r = disc % 2
    raw = rational(Fraction(disc + 4 - r, 4)) + det
    normalized = raw / det
    gen = purely_periodic_generator(spec.d, spec.n)
    expansion = cf_expand(gen)
    if expansion.right_pre:
        raise RuntimeError("subring generator must expand purely periodically")
    period = expansion.right_per
    if verify:
        result = disp_sequence(two_sided_periodic(period))
        if compare(result.value, normalized) != 0:
            raise RuntimeError("closed form disagrees with the sequence evaluation")
    else:
        result = DispersionResult(value=normalized, attained=True, witness=None)
    return QuadraticLatticeDispersion(spec, gen, period, raw, normalized, result)


# ---------------------------------------------------------------------------
# bounds in terms of the largest coefficient


def coefficient_bounds(a: int) -> tuple[Fraction, Fraction]:
    """Rational bounds L < dispersion < U for sequences whose largest
    coefficient equals a; U - L is always below one half."""
    if a < 2:
        raise ValueError("bounds require a largest coefficient of at least 2")
    r = a % 2

    def level(x: int) -> Fraction:
        return Fraction(x, 4) + 1 + Fraction(1, x) - Fraction(r, 4 * x)

    return level(a), level(a + 2)


def tight_bounds(a: int, verify: bool = True) -> tuple[QuadraticNumber, QuadraticNumber]:
    """Best possible bounds: the dispersions of the constant sequence (a)
    and of the alternating sequence (a, 1)."""
    if a < 1:
        raise ValueError("largest coefficient must be at least 1")
    low = _order_normalized_dispersion(a * a + 4)
    high = _order_normalized_dispersion(a * a + 4 * a)
    if verify:
        seq_low = disp_sequence(two_sided_periodic((a,))).value
        seq_high = disp_sequence(two_sided_periodic((a, 1))).value
        if compare(seq_low, low) != 0 or compare(seq_high, high) != 0:
            raise RuntimeError("closed form disagrees with the sequence evaluation")
    return low, high


# ---------------------------------------------------------------------------
# record lattices by dispersion


def _fib(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def best_lattice(rank: int, verify: bool = True) -> tuple[CFSequence, QuadraticNumber]:
    """The rank-th smallest normalized dispersion among plane lattices and a
    sequence attaining it: the all-ones sequence first, then the periodic
    patterns (2, 1, ..., 1, 2) with an even run of ones in between."""
    if rank < 1:
        raise ValueError("rank starts at 1")
    n = rank - 2
    if rank == 1:
        period: tuple[int, ...] = (1,)
    else:
        period = (2,) + (1,) * (2 * n) + (2,)
    seq = two_sided_periodic(period)
    disp = 1 + rational(2 * _fib(2 * n + 4)) / sqrt(9 * _fib(2 * n + 3) ** 2 - 4)
    if verify and compare(disp_sequence(seq).value, disp) != 0:
        raise RuntimeError("closed form disagrees with the sequence evaluation")
    return seq, disp


# ---------------------------------------------------------------------------
# coefficient checks and scans for purely periodic quadratic integers


@dataclass(frozen=True)
class NormRow:
    index: int
    coefficient: int
    norm: int
    lower: QuadraticNumber
    upper: QuadraticNumber
    ok: bool


@dataclass(frozen=True)
class CoefficientBoundReport:
    value: QuadraticNumber
    period: tuple[int, ...]
    leading: int
    interior_max: Optional[int]
    interior_bound: int
    interior_ok: bool
    norm_rows: tuple[NormRow, ...]
    norms_ok: bool

    @property
    def passes(self) -> bool:
        return self.interior_ok and self.norms_ok


def coefficient_bound_check(x: QuadraticNumber) -> CoefficientBoundReport:
    """Check that the interior expansion coefficients of a purely periodic
    quadratic integer stay at or below half its conjugate span, and that the
    residue norms along the convergents sit in their sandwich bounds."""
    if x.is_rational:
        raise NotPurelyPeriodic("rational numbers have terminating expansions")
    if x.trace().denominator != 1 or x.norm().denominator != 1:
        raise NotQuadraticInteger(f"{x} has non-integral trace or norm")
    expansion = cf_expand(x)
    if expansion.right_pre:
        raise NotPurelyPeriodic(f"{x} has preperiod {expansion.right_pre}")
    period = expansion.right_per
    length = len(period)
    span = x - x.conjugate()
    bound = (span / 2).floor()
    interior = period[1:]
    interior_max = max(interior) if interior else None
    interior_ok = interior_max is None or interior_max <= bound
    rows = []
    for i in range(length + 1):
        pair = convergent(expansion, i)
        residue = pair.num - rational(pair.den) * x
        norm = residue.norm()
        assert norm.denominator == 1
        a_i = expansion.a(i)
        lower = span / (a_i + 2)
        upper = span / a_i
        ok = (abs(norm) - lower).sign() >= 0 and (upper - abs(norm)).sign() >= 0
        rows.append(NormRow(i, a_i, abs(int(norm)), lower, upper, ok))
    return CoefficientBoundReport(
        value=x,
        period=period,
        leading=period[0],
        interior_max=interior_max,
        interior_bound=bound,
        interior_ok=interior_ok,
        norm_rows=tuple(rows),
        norms_ok=all(row.ok for row in rows),
    )


@dataclass(frozen=True)
class ScanRow:
    trace: int
    norm: int
    value: QuadraticNumber
    period: tuple[int, ...]
    distinct: tuple[int, ...]
    max_ratio: Fraction
    ok: bool


def coefficient_statistics_scan(
    trace_max: int, norm_min: int = 1, norm_max: Optional[int] = None
) -> tuple[ScanRow, ...]:
    """Scan purely periodic quadratic integers by trace and absolute norm and
    test that the n-th largest distinct coefficient never exceeds the leading
    coefficient divided by n."""
    if trace_max < 1:
        raise ValueError("trace bound must be at least 1")
    if norm_min < 1:
        raise ValueError("norms of purely periodic integers are at most -1")
    rows = []
    for t in range(1, trace_max + 1):
        top = min(t, norm_max if norm_max is not None else t)
        for m in range(norm_min, top + 1):
            disc = t * t + 4 * m
            if isqrt(disc) ** 2 == disc:
                continue
            x = QuadraticNumber(Fraction(t, 2), Fraction(1, 2), disc)
            expansion = cf_expand(x)
            assert not expansion.right_pre
            period = expansion.right_per
            distinct = tuple(sorted(set(period), reverse=True))
            leading = period[0]
            max_ratio = max(
                Fraction((pos + 1) * w, leading) for pos, w in enumerate(distinct)
            )
            rows.append(
                ScanRow(t, -m, x, period, distinct, max_ratio, max_ratio <= 1)
            )
    return tuple(rows)


# ---------------------------------------------------------------------------
# bounds table


DEFAULT_TABLE_ROWS = (2, 3, 4, 5, 6, 7, 8, 9, 10, 25, 50, 75, 100, 150, 200, 500, 1000)


@dataclass(frozen=True)
class BoundsRow:
    coefficient: int
    lower: Fraction
    constant_sequence: QuadraticNumber
    alternating_sequence: QuadraticNumber
    upper: Fraction


def bounds_table(values=DEFAULT_TABLE_ROWS, verify: bool = True) -> tuple[BoundsRow, ...]:
    """Bounds on the dispersion by largest coefficient, one row per value:
    the rational bounds and the two attaining sequence dispersions."""
    rows = []
    for a in values:
        lower, upper = coefficient_bounds(a)
        low, high = tight_bounds(a, verify=verify)
        rows.append(BoundsRow(a, lower, low, high, upper))
    return tuple(rows)
