"""Maximal empty boxes of a planar lattice, enumerated by a two-sided walk.

A lattice in normal form is generated by the vectors (1, 1) and
(-fwd, -bwd) where fwd > 1 and -1 < bwd < 0 (torus mode relaxes both
bounds to closed ones).  The open boxes that touch the origin from
above and contain no lattice point form a chain indexed by the
integers.  Each box is pinned by a lattice point on its left edge and
one on its right edge, and moving along the chain is a two-term
recurrence on that pair of points.

Every recurrence here acts on x- and y-coordinates separately, so a
lattice whose two defining values live in different quadratic fields
walks fine; only explicit area computations multiply the axes together
and may raise MixedRadicand.
"""

from __future__ import annotations

from dataclasses import dataclass

from .qfield import MixedRadicand, QuadraticNumber, compare, rational
from .contfrac import CFSequence, convergent, two_sided_from_tails

_STEP_CAP = 10**6


class SingularBasis(ValueError):
    """The two given vectors do not span the plane."""


class NotIrrational(ValueError):
    """Two lattice points share a coordinate line."""


class TerminatedWalk(Exception):
    """A torus-mode walk reached a degenerate box and cannot continue."""


def _coerce(x) -> QuadraticNumber:
    return x if isinstance(x, QuadraticNumber) else rational(x)


@dataclass(frozen=True)
class LatticeNormalForm:
    """Lattice generated by (1, 1) and (-fwd, -bwd)."""

    fwd: QuadraticNumber
    bwd: QuadraticNumber
    torus: bool = False

    def __post_init__(self):
        object.__setattr__(self, "fwd", _coerce(self.fwd))
        object.__setattr__(self, "bwd", _coerce(self.bwd))
        if self.torus:
            if not (self.fwd >= 1 and -1 <= self.bwd <= 0):
                raise ValueError("torus normal form needs fwd >= 1 and -1 <= bwd <= 0")
        else:
            if self.fwd.is_rational or self.bwd.is_rational:
                raise NotIrrational("normal form values must both be irrational")
            if not (self.fwd > 1 and -1 < self.bwd < 0):
                raise ValueError("normal form needs fwd > 1 and -1 < bwd < 0")

    @property
    def det(self) -> QuadraticNumber:
        return self.fwd - self.bwd

    def basis(self):
        return ((rational(1), rational(1)), (-self.fwd, -self.bwd))

    def point(self, p: int, q: int):
        """The lattice point p*(1,1) + q*(-fwd,-bwd)."""
        return (p - q * self.fwd, p - q * self.bwd)

    def sequence(self) -> CFSequence:
        """Two-sided coefficient sequence whose tails at 0 are (fwd, bwd)."""
        if self.torus:
            raise ValueError("torus lattices expand to finite sequences; use the torus module")
        return two_sided_from_tails(self.fwd, self.bwd)


@dataclass(frozen=True)
class MaxEmptyBox:
    """Open box (left_x, right_x) x (0, left_y + right_y), pinned by two lattice points."""

    n: int
    left_x: QuadraticNumber
    left_y: QuadraticNumber
    right_x: QuadraticNumber
    right_y: QuadraticNumber

    def __post_init__(self):
        for name in ("left_x", "left_y", "right_x", "right_y"):
            object.__setattr__(self, name, _coerce(getattr(self, name)))

    @property
    def left(self):
        return (self.left_x, self.left_y)

    @property
    def right(self):
        return (self.right_x, self.right_y)

    @property
    def top(self):
        return (self.left_x + self.right_x, self.left_y + self.right_y)

    @property
    def height(self) -> QuadraticNumber:
        return self.left_y + self.right_y

    @property
    def width(self) -> QuadraticNumber:
        return self.right_x - self.left_x

    def volume(self) -> QuadraticNumber:
        return self.width * self.height

    def normalized_volume(self, det: QuadraticNumber) -> QuadraticNumber:
        return self.volume() / det


def starting_box(lattice: LatticeNormalForm) -> MaxEmptyBox:
    """The index-0 box (-fwd, 1) x (0, 1 - bwd)."""
    if not lattice.fwd >= 1:
        raise ValueError("walk needs fwd >= 1")
    if not (-1 <= lattice.bwd < 0):
        raise ValueError("walk needs -1 <= bwd < 0; recenter a torus lattice first")
    return MaxEmptyBox(0, -lattice.fwd, -lattice.bwd, rational(1), rational(1))


def step(box: MaxEmptyBox, direction: str) -> MaxEmptyBox:
    """One step along the box chain; inverse pairs of moves cancel exactly."""
    if direction == "up":
        s = (box.left_x + box.right_x).sign()
        if s == 0:
            raise TerminatedWalk(f"box {box.n}: left and right abscissas cancel")
        if s > 0:
            return MaxEmptyBox(box.n + 1, box.left_x, box.left_y, *box.top)
        return MaxEmptyBox(box.n + 1, *box.top, box.right_x, box.right_y)
    if direction == "down":
        t = (box.left_y - box.right_y).sign()
        if t == 0:
            raise TerminatedWalk(f"box {box.n}: left and right ordinates coincide")
        if t > 0:
            return MaxEmptyBox(
                box.n - 1,
                box.left_x - box.right_x,
                box.left_y - box.right_y,
                box.right_x,
                box.right_y,
            )
        return MaxEmptyBox(
            box.n - 1,
            box.left_x,
            box.left_y,
            box.right_x - box.left_x,
            box.right_y - box.left_y,
        )
    raise ValueError(f"direction must be 'up' or 'down', not {direction!r}")


def closed_form_box(seq: CFSequence, fwd, bwd, n: int) -> MaxEmptyBox:
    """Box n from convergent residues: n = A_i + j with 0 <= j < a_i puts the
    residue p_i - q_i*fwd on one side (left for odd i, right for even) and the
    mixture j*(p_i - q_i*fwd) + p_{i-1} - q_{i-1}*fwd on the other."""
    fwd, bwd = _coerce(fwd), _coerce(bwd)
    if n >= 0:
        i, base = 0, 0
        while base + seq.a(i) <= n:
            base += seq.a(i)
            i += 1
    else:
        i, base = -1, -seq.a(-1)
        while n < base:
            i -= 1
            base -= seq.a(i)
    j = n - base
    cur, prev = convergent(seq, i), convergent(seq, i - 1)
    res_x = cur.num - cur.den * fwd
    res_y = cur.num - cur.den * bwd
    mix_x = j * res_x + (prev.num - prev.den * fwd)
    mix_y = j * res_y + (prev.num - prev.den * bwd)
    if i % 2:
        return MaxEmptyBox(n, res_x, res_y, mix_x, mix_y)
    return MaxEmptyBox(n, mix_x, mix_y, res_x, res_y)


def enumerate_boxes(
    lattice: LatticeNormalForm, n_min: int, n_max: int, verify: bool = True
) -> list[MaxEmptyBox]:
    """Boxes n_min..n_max by walking from the starting box in both directions.

    With verify on (and off the torus), every walked box is recomputed from
    the closed form and compared coordinate by coordinate.
    """
    if not n_min <= 0 <= n_max:
        raise ValueError("index range must contain 0")
    b0 = starting_box(lattice)
    ups = []
    box = b0
    for _ in range(n_max):
        box = step(box, "up")
        ups.append(box)
    downs = []
    box = b0
    for _ in range(-n_min):
        box = step(box, "down")
        downs.append(box)
    boxes = list(reversed(downs)) + [b0] + ups
    if verify and not lattice.torus:
        seq = lattice.sequence()
        for b in boxes:
            ref = closed_form_box(seq, lattice.fwd, lattice.bwd, b.n)
            if (b.left_x, b.left_y, b.right_x, b.right_y) != (
                ref.left_x,
                ref.left_y,
                ref.right_x,
                ref.right_y,
            ):
                raise RuntimeError(f"walked box {b.n} disagrees with its closed form")
    return boxes


def volume_decomposition(box: MaxEmptyBox, lattice: LatticeNormalForm):
    """Split vol = |left_x*left_y| + |right_x*right_y| + det; the first two
    terms are absolute norms when the lattice comes from a quadratic ring."""
    norm_part = abs(box.left_x * box.left_y) + abs(box.right_x * box.right_y)
    constant_part = lattice.det
    return norm_part, constant_part


def generator_from_box(left, right):
    """Basis matrix [[right_x, left_x], [right_y, left_y]] from a box's two
    pinned points, plus the top corner they share."""
    lx, ly = (_coerce(c) for c in left)
    rx, ry = (_coerce(c) for c in right)
    if _is_singular((rx, ry), (lx, ly)):
        raise SingularBasis("box points are collinear with the origin")
    if not (lx.sign() < 0 < rx.sign() and ly.sign() > 0 and ry.sign() > 0):
        raise ValueError("need left_x < 0 < right_x and positive ordinates")
    matrix = ((rx, lx), (ry, ly))
    top = (lx + rx, ly + ry)
    return matrix, top


def as_matrix(lattice: LatticeNormalForm):
    """Normal form as the matrix [[1, -fwd], [1, -bwd]] (basis in the columns)."""
    return ((rational(1), -lattice.fwd), (rational(1), -lattice.bwd))


def _is_singular(u, v) -> bool:
    """Exact determinant-is-zero test that never multiplies across the axes."""
    if (u[0].is_zero() and u[1].is_zero()) or (v[0].is_zero() and v[1].is_zero()):
        return True
    if u[0].is_zero() or v[0].is_zero():
        # det reduces to a single product of nonzero factors unless both
        # abscissas vanish
        return u[0].is_zero() and v[0].is_zero()
    if u[1].is_zero() or v[1].is_zero():
        return u[1].is_zero() and v[1].is_zero()
    return compare(u[0] / v[0], u[1] / v[1]) == 0


def _dependent(x: QuadraticNumber, y: QuadraticNumber) -> bool:
    """Whether integers (p, q) != (0, 0) with p*x + q*y = 0 exist."""
    if y.is_zero():
        return True
    try:
        return (x / y).is_rational
    except MixedRadicand:
        # distinct squarefree radicands: the ratio is never rational
        return False


def normal_form(matrix, irrational: bool = True) -> LatticeNormalForm:
    """Reduce a basis (given as matrix columns) to the normal form lattice.

    The reduction orients both vectors upward, makes their abscissa signs
    opposite by exact integer subtractions, then walks the box recurrences
    until the centered state (left_x + right_x < 0 < right_y - left_y) and
    rescales the axes by the right point.  Every operation preserves the
    normalized dispersion.
    """
    try:
        (m11, m12), (m21, m22) = matrix
    except (TypeError, ValueError):
        raise ValueError("expected a 2x2 matrix") from None
    u = (_coerce(m11), _coerce(m21))
    v = (_coerce(m12), _coerce(m22))
    if _is_singular(u, v):
        raise SingularBasis("matrix determinant is zero")
    if irrational and (_dependent(u[0], v[0]) or _dependent(u[1], v[1])):
        raise NotIrrational("a lattice point lies on a coordinate line")

    def neg(w):
        return (-w[0], -w[1])

    oriented = []
    for w in (u, v):
        sy = w[1].sign()
        if sy < 0:
            w = neg(w)
        elif sy == 0:
            if irrational:
                raise NotIrrational("basis vector on the x-axis")
            if w[0].sign() > 0:
                w = neg(w)
        oriented.append(w)
    u, v = oriented

    steps = 0
    su, sv = u[0].sign(), v[0].sign()
    if su == 0 or sv == 0:
        if irrational:
            raise NotIrrational("basis vector on the y-axis")
        raise ValueError("torus basis touches the y-axis; recenter it first")
    if su == sv:
        if su < 0:
            u, v = (-u[0], u[1]), (-v[0], v[1])  # mirror; dispersion unchanged
        while True:
            steps += 1
            if steps > _STEP_CAP:
                raise RuntimeError("basis reduction exceeded the step cap")
            dx = (u[0] - v[0]).sign()
            dy = (u[1] - v[1]).sign()
            if dx == 0 or dy == 0:
                if irrational:
                    raise NotIrrational("two lattice points share a coordinate")
                raise ValueError("torus basis reduction hit a coordinate line; recenter it first")
            if dx > 0 and dy > 0:
                u = _reduce_by(u, v)
            elif dx < 0 and dy < 0:
                v = _reduce_by(v, u)
            else:
                break
        if (u[0] - v[0]).sign() > 0:
            big, small = u, v
        else:
            big, small = v, u
        left = (small[0] - big[0], small[1] - big[1])
        right = big
    else:
        left, right = (u, v) if su < 0 else (v, u)
    if right[1].sign() == 0:
        left, right = (-right[0], right[1]), (-left[0], left[1])

    while (left[0] + right[0]).sign() > 0:
        steps += 1
        if steps > _STEP_CAP:
            raise RuntimeError("centering walk exceeded the step cap")
        right = (left[0] + right[0], left[1] + right[1])
    while (left[1] - right[1]).sign() > 0:
        steps += 1
        if steps > _STEP_CAP:
            raise RuntimeError("centering walk exceeded the step cap")
        left = (left[0] - right[0], left[1] - right[1])
    fwd = -(left[0] / right[0])
    bwd = -(left[1] / right[1])
    return LatticeNormalForm(fwd, bwd, torus=not irrational)


def _reduce_by(big, small):
    """big minus the largest multiple of small that keeps both coordinates positive."""
    k = (big[0] / small[0]).floor()
    if not small[1].is_zero():
        k = min(k, (big[1] / small[1]).floor())
    k = max(k, 1)
    out = (big[0] - k * small[0], big[1] - k * small[1])
    # overshooting to zero is a shared coordinate; let the caller's sign
    # tests see it rather than masking it here
    return out
