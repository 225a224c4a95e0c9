"""Periodic dispersion of rank-1 rational lattices on the unit torus.

The point set studied here is {({k*p/n}, k/n) : 0 <= k < n} for coprime
0 < p < n.  Its periodic dispersion (largest empty open box, where both
factors may wrap around) equals the largest normalized box volume of the
planar lattice spanned by (1, 1) and (-n/p, 0), divided by n.  Wrapped
strips of size 2/n are always empty, so the normalized value is at least 2,
with equality exactly at the Fibonacci configurations.
"""

import os
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from multiprocessing import Pool
from typing import Optional

from .boxwalk import (
    LatticeNormalForm,
    MaxEmptyBox,
    TerminatedWalk,
    starting_box,
    step,
)
from .contfrac import CFSequence, cf_expand
from .qfield import rational


class NotCoprime(ValueError):
    """The slope numerator and denominator share a factor."""


@dataclass(frozen=True)
class RankOneLattice:
    """The n-point set ({k*p/n}, k/n) on the unit torus, gcd(p, n) = 1."""

    p: int
    n: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not isinstance(self.n, int):
            raise TypeError("p and n must be integers")
        if not 0 < self.p < self.n:
            raise ValueError("need 0 < p < n")
        if gcd(self.p, self.n) != 1:
            raise NotCoprime(f"gcd({self.p}, {self.n}) != 1")

    def points(self):
        """All n lattice points as exact fractions in [0, 1)^2."""
        return tuple(
            (Fraction(k * self.p % self.n, self.n), Fraction(k, self.n))
            for k in range(self.n)
        )

    def sequence(self) -> CFSequence:
        """Finite expansion of p/n, normalized to end in 1."""
        return cf_expand(Fraction(self.p, self.n))

    def coefficients(self):
        """Plain expansion of p/n (last coefficient >= 2), leading 0 dropped."""
        return _plain_cf(self.p, self.n)[1:]

    def reflected(self) -> "RankOneLattice":
        """Mirror image x -> 1 - x, the lattice with slope (n - p)/n."""
        return RankOneLattice(self.n - self.p, self.n)


@dataclass(frozen=True)
class PeriodicDispersionResult:
    """Exact periodic dispersion together with a witness.

    `value` is the box area in torus units and `normalized` is n times that,
    the scale on which the universal lower bound is exactly 2.  The witness
    is a maximal empty box of the associated planar lattice whose normalized
    volume equals `normalized`; it is None when only the wrapped strips of
    size 2/n attain the supremum.
    """

    lattice: RankOneLattice
    value: Fraction
    normalized: Fraction
    witness: Optional[MaxEmptyBox]


def _plain_cf(num: int, den: int):
    """Plain continued fraction of num/den > 0, last coefficient >= 2.

    The single-coefficient expansion of an integer is returned as is.
    """
    coeffs = []
    a, b = num, den
    while b:
        coeffs.append(a // b)
        a, b = b, a - (a // b) * b
    if len(coeffs) > 1 and coeffs[-1] == 1:
        coeffs.pop()
        coeffs[-1] += 1
    return tuple(coeffs)


def _fold_tail(coeffs) -> Fraction:
    """Value of [c_0; c_1, ..., c_k] for a nonempty integer tuple."""
    value = Fraction(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        value = c + 1 / value
    return value


def _as_fraction(x) -> Fraction:
    if not x.is_rational:
        raise ValueError("expected a rational chain quantity")
    return x.a


def _chain_boxes(fwd: Fraction, bwd: Fraction):
    """All boxes of the finite chain anchored at (fwd, bwd), both directions."""
    lattice = LatticeNormalForm(rational(fwd), rational(bwd), torus=True)
    base = starting_box(lattice)
    boxes = [base]
    for direction in ("up", "down"):
        box = base
        while True:
            try:
                box = step(box, direction)
            except TerminatedWalk:
                break
            boxes.append(box)
    return lattice, boxes


def _diagonal_maximum(n: int):
    """Largest box of the diagonal configuration p in {1, n-1}.

    Every maximal box spans w consecutive columns and n + 2 - w rows of the
    n x n grid, so the best grid area is max over w of w*(n + 2 - w).  The
    planar witness is pinned by the points (1 - w, n + 1 - w) and (1, 1).
    """
    w = (n + 2) // 2
    grid_area = w * (n + 2 - w)
    witness = MaxEmptyBox(0, 1 - w, n + 1 - w, 1, 1)
    return grid_area, witness


def periodic_dispersion(lattice: RankOneLattice, verify: bool = False) -> PeriodicDispersionResult:
    """Exact periodic dispersion of a rank-1 lattice.

    The planar lattice spanned by (1, 1) and (-n/p, 0) has a finite chain of
    maximal empty boxes; the supremum over periodic boxes is the largest
    normalized chain volume, and never less than 2 because of the wrapped
    strips.  With verify=True the result is recomputed by the brute-force
    periodic oracle and a mismatch raises RuntimeError.
    """
    p, n = lattice.p, lattice.n
    if p in (1, n - 1):
        grid_area, witness = _diagonal_maximum(n)
        normalized = Fraction(grid_area, n)
    else:
        coeffs = _plain_cf(n, p)
        anchor = 1 if coeffs[0] >= 2 else 2
        fwd = _fold_tail(coeffs[anchor:])
        bwd = -1 / _fold_tail(tuple(reversed(coeffs[:anchor])))
        planar, boxes = _chain_boxes(fwd, bwd)
        det = planar.det
        normalized = Fraction(2)
        witness = None
        for box in boxes:
            volume = _as_fraction(box.normalized_volume(det))
            if volume >= normalized:
                normalized = volume
                witness = box
    result = PeriodicDispersionResult(lattice, normalized / n, normalized, witness)
    if verify:
        from .oracle import brute_periodic_dispersion

        brute = brute_periodic_dispersion(lattice, cap=n)
        if brute != result.value:
            raise RuntimeError(
                f"chain value {result.value} disagrees with oracle {brute} on {lattice}"
            )
    return result


def _fibonacci(k: int) -> int:
    a, b = 0, 1
    for _ in range(k):
        a, b = b, a + b
    return a


def fibonacci_lattice(m: int):
    """The lattice (F_{m-2}, F_m) and its normalized box volume profile.

    The chain of the Fibonacci lattice has m - 2 boxes whose normalized
    volumes are F_{m-k} * F_{k+3} / F_m for 0 <= k <= m - 3.  The profile is
    symmetric and its maximum is exactly 2, attained at both ends, which
    makes these the only configurations with periodic dispersion 2/n.
    """
    if m < 3:
        raise ValueError("need m >= 3")
    f_m = _fibonacci(m)
    lattice = RankOneLattice(_fibonacci(m - 2), f_m)
    profile = tuple(
        Fraction(_fibonacci(m - k) * _fibonacci(k + 3), f_m) for k in range(m - 2)
    )
    return lattice, profile


@dataclass(frozen=True)
class ZarembaRow:
    """Best slope for one denominator: m(n) = min over p of the largest coefficient."""

    n: int
    witness: int
    reversal: int
    max_coefficient: int
    normalized: Fraction
    flagged: bool


@dataclass(frozen=True)
class ZarembaScan:
    """Scan of m(n) over a range of denominators against a coefficient bound.

    `dispersion_bound` is C(A) = A/4 + 3/2 + 1/(A+2): any slope whose
    coefficients stay below the bound A has normalized periodic dispersion
    less than C(A).  Conversely coefficients are always smaller than four
    times the dispersion, recorded as `coefficient_bound` = 4*C(A).
    """

    bound: int
    dispersion_bound: Fraction
    coefficient_bound: Fraction
    rows: tuple
    flagged: tuple

    @property
    def all_clear(self) -> bool:
        return not self.flagged


def dispersion_constant(bound: int) -> Fraction:
    """C(A) = A/4 + 3/2 + 1/(A+2), the dispersion cost of coefficients < A."""
    if bound < 1:
        raise ValueError("need bound >= 1")
    return Fraction(bound, 4) + Fraction(3, 2) + Fraction(1, bound + 2)


def _reversal_witness(p: int, n: int) -> int:
    """Slope whose expansion is the reverse of that of p/n (same coefficients)."""
    value = 1 / _fold_tail(tuple(reversed(_plain_cf(p, n)[1:])))
    assert value.denominator == n
    return value.numerator


def _zaremba_row(n: int):
    best_p, best_m = None, None
    for p in range(1, n):
        if gcd(p, n) != 1:
            continue
        largest = max(_plain_cf(p, n)[1:])
        if best_m is None or largest < best_m:
            best_p, best_m = p, largest
    normalized = periodic_dispersion(RankOneLattice(best_p, n)).normalized
    return n, best_p, _reversal_witness(best_p, n), best_m, normalized


def zaremba_scan(n_values, bound: int = 5) -> ZarembaScan:
    """Minimal largest coefficient m(n) for each n, flagged against a bound.

    For every denominator the scan finds a slope minimizing the largest
    expansion coefficient, reports the mirror slope with the reversed
    expansion, and the exact normalized periodic dispersion of the witness.
    Denominators with m(n) >= bound are flagged.  Set LATDISP_THREADS to
    distribute independent denominators over worker processes.
    """
    ns = sorted(set(int(n) for n in n_values))
    if ns and ns[0] < 2:
        raise ValueError("scan needs denominators n >= 2")
    threads = int(os.environ.get("LATDISP_THREADS", "1"))
    if threads > 1 and len(ns) > 8 * threads:
        with Pool(threads) as pool:
            raw = pool.map(_zaremba_row, ns, chunksize=max(1, len(ns) // (4 * threads)))
    else:
        raw = [_zaremba_row(n) for n in ns]
    rows = tuple(
        ZarembaRow(n, p, rev, m, normalized, m >= bound)
        for n, p, rev, m, normalized in raw
    )
    return ZarembaScan(
        bound,
        dispersion_constant(bound),
        4 * dispersion_constant(bound),
        rows,
        tuple(row.n for row in rows if row.flagged),
    )
