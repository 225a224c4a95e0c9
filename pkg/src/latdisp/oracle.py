"""Brute-force dispersion oracles.

Everything here is deliberately naive: exhaustive candidate enumeration in
exact arithmetic, with explicit size caps.  The point is to cross-check the
closed forms and chain walks of the other modules on small instances, so no
attempt is made to be clever; when the requested instance is too large for
certainty the oracle refuses instead of guessing.
"""

import csv
import heapq
import math
from bisect import insort
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

from .qfield import QuadraticNumber, parse_number, rational
from .torus import RankOneLattice


class CapExceeded(ValueError):
    """The instance is larger than the oracle's size cap."""


class WindowTooSmall(ValueError):
    """The lattice window cannot certify the requested boxes."""


UNIT_SQUARE = (0, 1, 0, 1)


def _coerce(x) -> QuadraticNumber:
    return x if isinstance(x, QuadraticNumber) else rational(x)


@dataclass(frozen=True)
class PointSet:
    """Finite set of exact points inside a rectangular region.

    The region is (x_lo, x_hi, y_lo, y_hi) and defaults to the unit square.
    Points must be pairwise distinct and inside the closed region.
    """

    points: tuple
    region: tuple = UNIT_SQUARE

    def __post_init__(self):
        region = tuple(_coerce(c) for c in self.region)
        if len(region) != 4 or not (region[0] < region[1] and region[2] < region[3]):
            raise ValueError("region must be (x_lo, x_hi, y_lo, y_hi) with positive extent")
        points = tuple((_coerce(x), _coerce(y)) for x, y in self.points)
        if len(set(points)) != len(points):
            raise ValueError("points must be pairwise distinct")
        for x, y in points:
            if not (region[0] <= x <= region[1] and region[2] <= y <= region[3]):
                raise ValueError(f"point ({x}, {y}) lies outside the region")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "region", region)

    def with_point(self, x, y) -> "PointSet":
        return PointSet(self.points + ((x, y),), self.region)

    def scaled(self, sx, sy) -> "PointSet":
        """Scale points and region together by positive rational factors."""
        sx, sy = _coerce(sx), _coerce(sy)
        x_lo, x_hi, y_lo, y_hi = self.region
        return PointSet(
            tuple((x * sx, y * sy) for x, y in self.points),
            (x_lo * sx, x_hi * sx, y_lo * sy, y_hi * sy),
        )


class _GapTracker:
    """Largest gap between consecutive values under insertion only."""

    def __init__(self, lo, hi):
        self.values = [lo, hi]
        self.active = {(lo, hi): 1}
        self.heap = [(-(hi - lo), lo, hi)]

    def insert(self, y):
        pos = len(self.values) - 1
        while self.values[pos - 1] > y:
            pos -= 1
        prev, nxt = self.values[pos - 1], self.values[pos]
        self.values.insert(pos, y)
        old = (prev, nxt)
        self.active[old] -= 1
        if not self.active[old]:
            del self.active[old]
        for pair in ((prev, y), (y, nxt)):
            self.active[pair] = self.active.get(pair, 0) + 1
            heapq.heappush(self.heap, (-(pair[1] - pair[0]), pair[0], pair[1]))

    def largest(self):
        while True:
            neg, lo, hi = self.heap[0]
            if self.active.get((lo, hi)):
                return -neg, lo, hi
            heapq.heappop(self.heap)


def brute_dispersion(points, region=None, cap: int = 500):
    """Largest empty open box over a point set, with a witness box.

    Returns (area, (left, right, bottom, top)).  Candidate box sides lie on
    point coordinates or region boundaries, which is exhaustive because any
    empty box can be grown until each side is blocked.  Runtime grows with
    the cube of the point count; the cap guards against oversized inputs.
    """
    ps = points if isinstance(points, PointSet) else PointSet(tuple(points))
    if region is not None:
        ps = PointSet(ps.points, region)
    if len(ps.points) > cap:
        raise CapExceeded(f"{len(ps.points)} points exceed the cap of {cap}")
    x_lo, x_hi, y_lo, y_hi = ps.region
    edges = sorted({x for x, _ in ps.points} | {x_lo, x_hi})
    by_x = {}
    for x, y in ps.points:
        by_x.setdefault(x, []).append(y)
    best = None
    for i, left in enumerate(edges[:-1]):
        tracker = _GapTracker(y_lo, y_hi)
        for j in range(i + 1, len(edges)):
            right = edges[j]
            if j > i + 1:
                for y in by_x.get(edges[j - 1], ()):
                    tracker.insert(y)
            gap, gap_lo, gap_hi = tracker.largest()
            area = (right - left) * gap
            if best is None or area > best[0]:
                best = (area, (left, right, gap_lo, gap_hi))
    return best


@dataclass(frozen=True)
class OracleBox:
    """Open box (left_x, right_x) x (0, top_y) found by exhaustive search."""

    left_x: QuadraticNumber
    right_x: QuadraticNumber
    top_y: QuadraticNumber

    @property
    def width(self) -> QuadraticNumber:
        return self.right_x - self.left_x

    @property
    def height(self) -> QuadraticNumber:
        return self.top_y

    def volume(self) -> QuadraticNumber:
        return self.width * self.height


def _sgn2(a: int, b: int, d: int) -> int:
    """Sign of a + b*sqrt(d) for integers a, b and a positive integer d."""
    if b == 0 or a == 0:
        t = a or b
    elif (a > 0) == (b > 0):
        t = a
    else:
        t = a * a - b * b * d
        if a < 0:
            t = -t
    return (t > 0) - (t < 0)


def _sort_by_value(entries, d: int):
    """Sort integer tuples by the value entry[0] + entry[1]*sqrt(d).

    A float presort is already in exact order wherever adjacent keys differ
    by more than the rounding error, which is at most a few ulp of the term
    magnitude; runs of nearly equal keys are re-sorted exactly.  A final
    pass certifies every adjacent pair, exactly where the floats are close,
    by float gap elsewhere, and falls back to a fully exact sort if the
    certificate ever fails.
    """
    entries = list(entries)
    if len(entries) < 2:
        return entries
    root = math.sqrt(d)
    mag = max(max(abs(e[0]), abs(e[1]) * root) for e in entries)
    tol = 1e-12 * max(1.0, mag)
    exact_cmp = cmp_to_key(lambda u, v: _sgn2(u[0] - v[0], u[1] - v[1], d))
    decorated = sorted((e[0] + e[1] * root, k, e) for k, e in enumerate(entries))
    i = 0
    while i + 1 < len(decorated):
        if decorated[i + 1][0] - decorated[i][0] > tol:
            i += 1
            continue
        j = i + 1
        while j + 1 < len(decorated) and decorated[j + 1][0] - decorated[j][0] <= tol:
            j += 1
        fixed = sorted((entry for _, _, entry in decorated[i : j + 1]), key=exact_cmp)
        decorated[i : j + 1] = [
            (decorated[i + k][0], decorated[i + k][1], entry)
            for k, entry in enumerate(fixed)
        ]
        i = j + 1
    for k in range(len(decorated) - 1):
        if decorated[k + 1][0] - decorated[k][0] > tol:
            continue
        u, v = decorated[k][2], decorated[k + 1][2]
        if _sgn2(u[0] - v[0], u[1] - v[1], d) > 0:
            return sorted(entries, key=exact_cmp)
    return [entry for _, _, entry in decorated]


def brute_boxes_origin(fwd, bwd, window: int, height_cap, x_extent=None):
    """All maximal empty boxes on the x-axis of the lattice (1,1), (-fwd,-bwd).

    Boxes have the form (left, right) x (0, top) with left < 0 < right and
    both sides within x_extent (default fwd + 2), top below height_cap.
    Candidates come from the lattice points p*(1,1) + q*(-fwd,-bwd) with
    |p|, |q| <= window; a side is blocked by a point at height in [0, top)
    and the top by the lowest interior point.  WindowTooSmall means the
    window cannot certify emptiness, or a defining point sits on its edge.
    Boxes are returned ordered by height.  Work is proportional to the
    number of lattice points inside the extent-and-cap region, not to the
    window, so large windows are affordable when the region is thin.

    Internally the coordinates are scaled to integer pairs (a, b) standing
    for (a + b*sqrt(d)) / scale and points are screened with floats; every
    decision within a float band of a boundary falls back to an exact
    integer sign test, so the screening never changes the result.
    """
    if window < 5:
        raise WindowTooSmall("need a window of at least 5")
    fwd, bwd = _coerce(fwd), _coerce(bwd)
    cap = _coerce(height_cap)
    det = fwd - bwd
    if not (fwd > 0 and det > 0 and cap > 0):
        raise ValueError("need fwd > 0, fwd > bwd and a positive height cap")
    extent = _coerce(x_extent) if x_extent is not None else fwd + 2
    q_reach = (cap + extent) / det
    p_reach = extent + q_reach * fwd
    if rational(window) < q_reach or rational(window) < p_reach:
        raise WindowTooSmall(
            f"window {window} cannot certify emptiness up to height {cap}"
        )
    q_span = min(window, q_reach.floor() + 1)

    radicands = {value.d for value in (fwd, bwd, extent, cap) if value.d != 1}
    if len(radicands) > 1:
        raise ValueError("fwd, bwd, x_extent and height_cap must share a radicand")
    d = radicands.pop() if radicands else 1
    parts = (fwd.a, fwd.b, bwd.a, bwd.b, extent.a, extent.b, cap.a, cap.b)
    scale = 1
    for part in parts:
        scale = scale * part.denominator // math.gcd(scale, part.denominator)
    fa, fb, ba, bb, ea, eb, ca, cb = (int(part * scale) for part in parts)
    root = math.sqrt(d)
    f_fwd, f_bwd, f_ext, f_cap = (float(v) for v in (fwd, bwd, extent, cap))
    s_ext, s_cap = ea + eb * root, ca + cb * root
    mag = (abs(fa) + abs(fb) * root + abs(ba) + abs(bb) * root) * (q_span + 1) + (
        abs(f_fwd) * q_span + f_ext + f_cap + 3
    ) * scale
    band = 1e-12 * mag + 1e-9

    side_left, side_right = {}, {}
    inner_left, inner_right = [], []
    for q in range(-q_span, q_span + 1):
        lo = max(math.floor(max(q * f_fwd - f_ext, q * f_bwd)) - 2, -window)
        hi = min(math.ceil(min(q * f_fwd + f_ext, q * f_bwd + f_cap)) + 2, window)
        qfa, qba = q * fa, q * ba
        xb, yb = -q * fb, -q * bb
        xb_f, yb_f = xb * root, yb * root
        dq = qfa - qba
        q_edge = q <= -window or q >= window
        for p in range(lo, hi + 1):
            xa = p * scale - qfa
            x_f = xa + xb_f
            if x_f <= band - s_ext or x_f >= s_ext - band:
                if x_f <= -s_ext - band or x_f >= s_ext + band:
                    continue
                if _sgn2(xa + ea, xb + eb, d) <= 0 or _sgn2(xa - ea, xb - eb, d) >= 0:
                    continue
            ya = xa + dq
            y_f = ya + yb_f
            if y_f < band:
                if y_f < -band:
                    continue
                sy = _sgn2(ya, yb, d)
                if sy < 0:
                    continue
            else:
                sy = 1
            if y_f > s_cap - band:
                if y_f > s_cap + band or _sgn2(ya - ca, yb - cb, d) >= 0:
                    continue
            if -band < x_f < band:
                sx = _sgn2(xa, xb, d)
            else:
                sx = 1 if x_f > 0 else -1
            edge = q_edge or p <= -window or p >= window
            if sx:
                bucket = side_left if sx < 0 else side_right
                held = bucket.get((xa, xb))
                if held is None:
                    bucket[(xa, xb)] = (ya, yb, edge)
                else:
                    c = _sgn2(ya - held[0], yb - held[1], d)
                    if c < 0 or (c == 0 and held[2] and not edge):
                        bucket[(xa, xb)] = (ya, yb, edge)
            if sy > 0:
                if sx <= 0:
                    inner_left.append((xa, xb, ya, yb, edge))
                else:
                    inner_right.append((xa, xb, ya, yb, edge))
    inner_left = _sort_by_value(inner_left, d)[::-1]
    inner_right = _sort_by_value(inner_right, d)
    lefts = _sort_by_value([k + v for k, v in side_left.items()], d)[::-1]
    rights = _sort_by_value([k + v for k, v in side_right.items()], d)

    def running_min(candidates, inner, outward):
        """Per candidate edge, the lowest point strictly between it and 0."""
        out, pos, low = [], 0, None
        for cand in candidates:
            while pos < len(inner) and (
                _sgn2(inner[pos][0] - cand[0], inner[pos][1] - cand[1], d) == outward
            ):
                entry = inner[pos]
                if low is None:
                    low = (entry[2], entry[3], entry[4])
                else:
                    c = _sgn2(entry[2] - low[0], entry[3] - low[1], d)
                    if c < 0 or (c == 0 and low[2] and not entry[4]):
                        low = (entry[2], entry[3], entry[4])
                pos += 1
            out.append(low)
        return out

    left_min = running_min(lefts, inner_left, 1)
    right_min = running_min(rights, inner_right, -1)
    open_rights = [
        (cand, low)
        for cand, low in zip(rights, right_min)
        if low is None or _sgn2(cand[2] - low[0], cand[3] - low[1], d) < 0
    ]

    def materialize(a, b):
        return QuadraticNumber(Fraction(a, scale), Fraction(b, scale), d)

    boxes = []
    for cand, low_l in zip(lefts, left_min):
        if low_l is not None and _sgn2(cand[2] - low_l[0], cand[3] - low_l[1], d) >= 0:
            continue
        for rcand, low_r in open_rights:
            if low_l is None:
                top = low_r
            elif low_r is None:
                top = low_l
            else:
                c = _sgn2(low_r[0] - low_l[0], low_r[1] - low_l[1], d)
                top = low_r if c < 0 or (c == 0 and not low_r[2]) else low_l
            if top is None:
                continue
            if _sgn2(cand[2] - top[0], cand[3] - top[1], d) >= 0:
                break
            if _sgn2(rcand[2] - top[0], rcand[3] - top[1], d) >= 0:
                continue
            if top[2] or cand[4] or rcand[4]:
                raise WindowTooSmall(
                    f"a defining point of box ({materialize(cand[0], cand[1])}, "
                    f"{materialize(rcand[0], rcand[1])}) x "
                    f"(0, {materialize(top[0], top[1])}) "
                    f"sits on the edge of window {window}"
                )
            boxes.append((top[0], top[1], cand[0], cand[1], rcand[0], rcand[1]))
    return tuple(
        OracleBox(materialize(la, lb), materialize(ra, rb), materialize(ta, tb))
        for ta, tb, la, lb, ra, rb in _sort_by_value(boxes, d)
    )


def brute_periodic_dispersion(lattice: RankOneLattice, cap: int = 200) -> Fraction:
    """Exact periodic dispersion of a rank-1 lattice by grid enumeration.

    Works on the n x n integer grid holding one point per column.  For every
    wrapped open column interval the box height is the largest wrapped gap
    between the blocked row labels, so a sweep that widens the interval one
    column at a time while tracking gaps visits every candidate box.
    """
    p, n = lattice.p, lattice.n
    if n > cap:
        raise CapExceeded(f"n = {n} exceeds the cap of {cap}")
    row = [0] * n
    for k in range(n):
        row[k * p % n] = k
    best = n
    for a in range(n):
        values = []
        active = {}
        heap = []

        def add_gap(lo, hi):
            length = (hi - lo) % n or n
            active[(lo, hi)] = True
            heapq.heappush(heap, (-length, lo, hi))

        for width in range(2, n + 1):
            y = row[(a + width - 1) % n]
            if not values:
                insort(values, y)
                add_gap(y, y)
            else:
                pos = 0
                while pos < len(values) and values[pos] < y:
                    pos += 1
                prev = values[pos - 1] if pos else values[-1]
                nxt = values[pos] if pos < len(values) else values[0]
                insort(values, y)
                del active[(prev, nxt)]
                add_gap(prev, y)
                add_gap(y, nxt)
            while not active.get((heap[0][1], heap[0][2])):
                heapq.heappop(heap)
            best = max(best, width * -heap[0][0])
    return Fraction(best, n * n)


def read_point_set(path, region=None) -> PointSet:
    """Point set from a CSV file of exact textual coordinates.

    Decimal entries are taken as exact rationals.  A single header row is
    tolerated.  The region defaults to the unit square.
    """
    rows = []
    with open(path, newline="") as handle:
        for record in csv.reader(handle):
            if record:
                rows.append(record)
    if rows and not _parses(rows[0][0]):
        rows = rows[1:]
    points = tuple((parse_number(x), parse_number(y)) for x, y, *_ in rows)
    return PointSet(points, region if region is not None else UNIT_SQUARE)


def write_point_set(points: PointSet, path) -> None:
    """Write points as CSV with exact textual coordinates."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        for x, y in points.points:
            writer.writerow([str(x), str(y)])


def _parses(text: str) -> bool:
    try:
        parse_number(text)
        return True
    except Exception:
        return False
