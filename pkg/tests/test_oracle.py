"""Brute-force oracles against closed forms, walks, and each other."""

import random
from fractions import Fraction
from math import gcd

import pytest

from latdisp.qfield import QuadraticNumber, rational, sqrt
from latdisp.boxwalk import LatticeNormalForm, enumerate_boxes
from latdisp.contfrac import purely_periodic_generator
from latdisp.torus import RankOneLattice, fibonacci_lattice, periodic_dispersion
from latdisp.oracle import (
    CapExceeded,
    PointSet,
    WindowTooSmall,
    brute_boxes_origin,
    brute_dispersion,
    brute_periodic_dispersion,
    read_point_set,
    write_point_set,
)

PHI = (1 + sqrt(5)) / 2


def naive_dispersion(points, region=(0, 1, 0, 1)):
    """Quintic-time reference: scan all candidate boxes, then all points."""
    x_lo, x_hi, y_lo, y_hi = (Fraction(c) for c in region)
    xs = sorted({Fraction(x) for x, _ in points} | {x_lo, x_hi})
    ys = sorted({Fraction(y) for _, y in points} | {y_lo, y_hi})
    best = Fraction(0)
    for i, left in enumerate(xs):
        for right in xs[i + 1 :]:
            for j, bottom in enumerate(ys):
                for top in ys[j + 1 :]:
                    if any(
                        left < x < right and bottom < y < top for x, y in points
                    ):
                        continue
                    best = max(best, (right - left) * (top - bottom))
    return best


def test_point_set_validation():
    with pytest.raises(ValueError):
        PointSet(((Fraction(1, 2), Fraction(1, 2)),) * 2)
    with pytest.raises(ValueError):
        PointSet(((2, 0),))
    with pytest.raises(ValueError):
        PointSet((), region=(0, 1, 1, 0))
    ps = PointSet(((Fraction(1, 2), Fraction(1, 3)),))
    assert ps.with_point(Fraction(1, 4), 0).points[1] == (rational(Fraction(1, 4)), rational(0))


def test_point_set_scaled():
    ps = PointSet(((Fraction(1, 2), Fraction(1, 4)),)).scaled(2, 4)
    assert ps.region == (rational(0), rational(2), rational(0), rational(4))
    assert ps.points == ((rational(1), rational(1)),)


def test_brute_dispersion_empty_and_single():
    area, box = brute_dispersion(())
    assert area == 1 and box == (0, 1, 0, 1)
    area, box = brute_dispersion(((Fraction(1, 2), Fraction(1, 2)),))
    assert area == Fraction(1, 2)
    area, box = brute_dispersion(((Fraction(1, 3), Fraction(1, 4)),))
    assert area == Fraction(3, 4)
    assert box == (0, 1, Fraction(1, 4), 1)


def test_brute_dispersion_two_points():
    pts = ((Fraction(1, 4), Fraction(1, 2)), (Fraction(3, 4), Fraction(1, 2)))
    area, _ = brute_dispersion(pts)
    assert area == Fraction(1, 2)


def test_brute_dispersion_witness_is_empty():
    rng = random.Random(4127)
    for _ in range(25):
        pts = tuple(
            {
                (Fraction(rng.randrange(1, 16), 16), Fraction(rng.randrange(1, 16), 16))
                for _ in range(rng.randrange(1, 9))
            }
        )
        area, (left, right, lo, hi) = brute_dispersion(pts)
        assert area == (right - left) * (hi - lo)
        for x, y in pts:
            assert not (left < x < right and lo < y < hi)


def test_brute_dispersion_matches_naive_reference():
    rng = random.Random(995)
    for _ in range(12):
        pts = tuple(
            {
                (Fraction(rng.randrange(0, 13), 12), Fraction(rng.randrange(0, 13), 12))
                for _ in range(rng.randrange(1, 7))
            }
        )
        area, _ = brute_dispersion(pts)
        assert area == naive_dispersion(pts)


def test_brute_dispersion_monotone_under_insertion():
    rng = random.Random(318)
    pts = PointSet(())
    last = Fraction(1)
    for _ in range(10):
        pts = pts.with_point(
            Fraction(rng.randrange(1, 40), 40), Fraction(rng.randrange(1, 40), 40)
        )
        area, _ = brute_dispersion(pts)
        assert area <= last
        last = area


def test_brute_dispersion_scales_exactly():
    pts = PointSet(((Fraction(1, 3), Fraction(2, 5)), (Fraction(3, 4), Fraction(1, 7))))
    area, _ = brute_dispersion(pts)
    scaled_area, _ = brute_dispersion(pts.scaled(3, Fraction(1, 2)))
    assert scaled_area == area * 3 * Fraction(1, 2)


def test_brute_dispersion_region_and_cap():
    area, box = brute_dispersion(((1, 1),), region=(0, 2, 0, 2))
    assert area == 2 and box in ((0, 1, 0, 2), (1, 2, 0, 2), (0, 2, 0, 1), (0, 2, 1, 2))
    with pytest.raises(CapExceeded):
        brute_dispersion(((Fraction(k, 10), Fraction(k, 10)) for k in range(1, 4)), cap=2)


def test_boxes_origin_golden_chain():
    bwd = PHI.conjugate()
    lat = LatticeNormalForm(PHI, bwd)
    chain = enumerate_boxes(lat, -1, 2)
    out = brute_boxes_origin(PHI, bwd, 40, rational(5))
    got = {(b.left_x, b.right_x, b.top_y) for b in out}
    want = {(b.left[0], b.right[0], b.height) for b in chain if b.height < rational(5)}
    assert got == want
    heights = [b.top_y for b in out]
    assert heights == sorted(heights, key=float)


def test_boxes_origin_deep_chain_budget():
    # every box of the first few chain periods, verified box for box
    for d, n in ((2, 1), (13, 2), (29, 1)):
        fwd = purely_periodic_generator(d, n)
        bwd = fwd.conjugate()
        lat = LatticeNormalForm(fwd, bwd)
        chain = enumerate_boxes(lat, -5, 13)
        cap = (chain[-2].height + chain[-1].height) / 2
        extent = fwd + 2
        q_reach = (cap + extent) / lat.det
        p_reach = extent + q_reach * fwd
        window = max(q_reach.floor(), p_reach.floor()) * 2 + 10
        out = brute_boxes_origin(fwd, bwd, window, cap)
        got = {(b.left_x, b.right_x, b.top_y) for b in out}
        want = {
            (b.left[0], b.right[0], b.height)
            for b in chain
            if b.height < cap and -extent < b.left[0] and b.right[0] < extent
        }
        assert got == want, (d, n)


def test_boxes_origin_narrow_extent_filters():
    bwd = PHI.conjugate()
    cap = rational(5)
    full = brute_boxes_origin(PHI, bwd, 40, cap)
    extent = rational(Fraction(6, 5))
    narrow = brute_boxes_origin(PHI, bwd, 40, cap, x_extent=extent)
    want = {
        (b.left_x, b.right_x, b.top_y)
        for b in full
        if -extent < b.left_x and b.right_x < extent
    }
    assert {(b.left_x, b.right_x, b.top_y) for b in narrow} == want


def test_boxes_origin_rational_lattice():
    # anchored chain of the slope 5/13: fwd = [1; 1, 2], bwd = -1/2
    fwd, bwd = Fraction(5, 3), Fraction(-1, 2)
    out = brute_boxes_origin(fwd, bwd, 200, Fraction(7))
    volumes = sorted(b.volume().a for b in out)
    det = Fraction(13, 6)
    assert max(volumes) / det == 2
    assert volumes == [Fraction(4), Fraction(4), Fraction(25, 6), Fraction(13, 3), Fraction(13, 3)]


def test_boxes_origin_window_guards():
    bwd = PHI.conjugate()
    with pytest.raises(WindowTooSmall):
        brute_boxes_origin(PHI, bwd, 2, rational(5))
    with pytest.raises(WindowTooSmall):
        brute_boxes_origin(PHI, bwd, 6, rational(50))
    with pytest.raises(ValueError):
        brute_boxes_origin(rational(-1), bwd, 40, rational(5))
    with pytest.raises(ValueError):
        brute_boxes_origin(PHI, bwd, 40, rational(0))
    with pytest.raises(ValueError):
        brute_boxes_origin(PHI, 1 - sqrt(2), 40, rational(5))


def test_periodic_oracle_matches_chain_everywhere():
    for n in range(2, 41):
        for p in range(1, n):
            if gcd(p, n) != 1:
                continue
            lat = RankOneLattice(p, n)
            assert brute_periodic_dispersion(lat) == periodic_dispersion(lat).value, (p, n)


def test_periodic_oracle_values():
    assert brute_periodic_dispersion(RankOneLattice(1, 4)) == Fraction(9, 16)
    for m in range(3, 12):
        lat, _ = fibonacci_lattice(m)
        assert brute_periodic_dispersion(lat) == Fraction(2, lat.n)


def test_periodic_oracle_cap():
    with pytest.raises(CapExceeded):
        brute_periodic_dispersion(RankOneLattice(1, 300))
    assert brute_periodic_dispersion(RankOneLattice(1, 300), cap=300) == Fraction(
        151 * 151, 300 * 300
    )


def test_point_set_csv_round_trip(tmp_path):
    path = tmp_path / "points.csv"
    pts = PointSet(
        (
            (Fraction(1, 3), Fraction(2, 7)),
            (sqrt(2) / 2, Fraction(1, 2)),
            (QuadraticNumber(Fraction(1, 4), Fraction(1, 8), 3), Fraction(9, 10)),
        )
    )
    write_point_set(pts, path)
    again = read_point_set(path)
    assert again.points == pts.points
    assert again.region == pts.region


def test_point_set_csv_header_tolerated(tmp_path):
    path = tmp_path / "points.csv"
    path.write_text("x,y\n0.25,0.75\n1/3,sqrt(2)/2\n")
    pts = read_point_set(path)
    assert pts.points == (
        (rational(Fraction(1, 4)), rational(Fraction(3, 4))),
        (rational(Fraction(1, 3)), sqrt(2) / 2),
    )
