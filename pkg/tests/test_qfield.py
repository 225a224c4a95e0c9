"""Exact quadratic-field arithmetic, certified comparison, parsing, printing."""

import random
from fractions import Fraction

import pytest

from latdisp.qfield import (
    CertifiedInterval,
    MixedRadicand,
    ParseError,
    QuadraticNumber,
    compare,
    decimal_str,
    delta,
    interval,
    parse_number,
    rational,
    sqrt,
    sqrt_interval,
)


def test_canonicalization():
    assert sqrt(8) == 2 * sqrt(2)
    assert QuadraticNumber(1, 1, 8) == QuadraticNumber(1, 2, 2)
    assert QuadraticNumber(3, 0, 7) == rational(3)
    assert QuadraticNumber(3, 0, 7).d == 1
    assert sqrt(9) == rational(3)
    assert sqrt(49 * 5).b == 7
    x = QuadraticNumber(Fraction(1, 3), Fraction(2, 5), 12)
    assert (x.b, x.d) == (Fraction(4, 5), 3)
    again = QuadraticNumber(x.a, x.b, x.d)
    assert (again.a, again.b, again.d) == (x.a, x.b, x.d)


def test_rejects_bad_radicand():
    with pytest.raises(ValueError):
        QuadraticNumber(1, 1, 0)
    with pytest.raises(ValueError):
        QuadraticNumber(1, 1, -2)


def test_field_arithmetic():
    x = 1 + sqrt(2)
    y = 3 - 2 * sqrt(2)
    assert x * y == -1 + sqrt(2)
    assert x + y == 4 - sqrt(2)
    assert x - x == rational(0)
    assert (x / x) == rational(1)
    assert 1 / (1 + sqrt(2)) == -1 + sqrt(2)
    assert (2 + sqrt(5)) / 2 == QuadraticNumber(1, Fraction(1, 2), 5)
    with pytest.raises(ZeroDivisionError):
        x / (x - x)


def test_mixed_radicands_rejected():
    with pytest.raises(MixedRadicand):
        sqrt(2) + sqrt(3)
    with pytest.raises(MixedRadicand):
        sqrt(2) * sqrt(3)
    # a rational operand is always compatible
    assert sqrt(2) * rational(2) == sqrt(8)


def test_conjugate_norm_trace_examples():
    x = 1 + sqrt(2)
    assert x.conjugate() == 1 - sqrt(2)
    assert x.norm() == Fraction(-1)
    assert x.trace() == Fraction(2)
    d5 = delta(5)
    assert d5.conjugate() == QuadraticNumber(Fraction(1, 2), Fraction(-1, 2), 5)
    assert d5.norm() == Fraction(-1)
    assert d5.trace() == Fraction(1)
    g = QuadraticNumber(Fraction(13, 2), Fraction(1, 2), 217)
    assert g.norm() == Fraction(-12)
    assert g.trace() == Fraction(13)


def test_norm_identities():
    rng = random.Random(217)
    for _ in range(40):
        d = rng.choice([2, 3, 5, 6, 7, 13])
        x = QuadraticNumber(Fraction(rng.randint(-9, 9), rng.randint(1, 5)),
                            Fraction(rng.randint(-9, 9), rng.randint(1, 5)), d)
        y = QuadraticNumber(Fraction(rng.randint(-9, 9), rng.randint(1, 5)),
                            Fraction(rng.randint(-9, 9), rng.randint(1, 5)), d)
        assert x * x.conjugate() == rational(x.norm())
        assert x + x.conjugate() == rational(x.trace())
        assert (x * y).norm() == x.norm() * y.norm()


def test_sign_examples():
    assert (1 - sqrt(2)).sign() == -1
    assert (sqrt(2) - sqrt(2)).sign() == 0
    assert (delta(5) - 1).sign() == 1
    assert QuadraticNumber(-10, 1, 101).sign() == 1
    assert QuadraticNumber(10, -1, 99).sign() == 1


def test_floor_examples():
    assert sqrt(217).floor() == 14
    assert delta(5).floor() == 1
    assert (-sqrt(2)).floor() == -2
    assert rational(Fraction(-3, 2)).floor() == -2
    assert rational(7).floor() == 7


def test_floor_bracket_property():
    rng = random.Random(31415)
    for _ in range(60):
        d = rng.choice([2, 3, 5, 6, 7, 217])
        x = QuadraticNumber(Fraction(rng.randint(-50, 50), rng.randint(1, 9)),
                            Fraction(rng.randint(-50, 50), rng.randint(1, 9)), d)
        n = x.floor()
        assert x - n >= 0
        assert x - n < 1


def test_ordering_same_field():
    assert 1 + sqrt(2) > 2
    assert sqrt(2) < Fraction(3, 2)
    xs = [sqrt(2), rational(1), 3 - sqrt(2), 1 + sqrt(2), rational(0)]
    assert sorted(xs) == [rational(0), rational(1), sqrt(2), 3 - sqrt(2), 1 + sqrt(2)]


def test_compare_cross_field_examples():
    lhs = (3 + 2 * sqrt(2)) / (2 * sqrt(2))
    rhs = (4 + sqrt(5)) / 3
    assert compare(lhs, rhs) == -1
    phi = delta(5)
    x = phi * phi * phi / sqrt(5)
    assert compare(x, x) == 0
    assert compare((41 + 4 * sqrt(3)) / 23, (4 + sqrt(5)) / 3) == 1


def test_compare_matches_sign_in_one_field():
    rng = random.Random(999)
    for _ in range(40):
        d = rng.choice([2, 3, 5, 7])
        x = QuadraticNumber(Fraction(rng.randint(-9, 9), rng.randint(1, 4)),
                            Fraction(rng.randint(-9, 9), rng.randint(1, 4)), d)
        y = QuadraticNumber(Fraction(rng.randint(-9, 9), rng.randint(1, 4)),
                            Fraction(rng.randint(-9, 9), rng.randint(1, 4)), d)
        assert compare(x, y) == (x - y).sign()


def test_compare_separates_close_cross_field_values():
    c = QuadraticNumber(0, Fraction(41421, 100000), 2)  # 0.585782...
    d = QuadraticNumber(0, Fraction(33831, 100000), 3)  # 0.585973...
    assert compare(c, d) == -1
    assert compare(d, c) == 1


def test_delta_constructor():
    assert delta(5) == QuadraticNumber(Fraction(1, 2), Fraction(1, 2), 5)
    assert delta(2) == sqrt(2)
    assert delta(3) == sqrt(3)
    assert delta(13).trace() == 1
    for bad in (1, 4, 12):
        with pytest.raises(ValueError):
            delta(bad)


def test_interval_contains_value():
    rng = random.Random(271828)
    for _ in range(30):
        d = rng.choice([2, 3, 5, 217])
        x = QuadraticNumber(Fraction(rng.randint(-9, 9), rng.randint(1, 4)),
                            Fraction(rng.randint(-9, 9), rng.randint(1, 4)), d)
        for bits in (16, 64, 256):
            box = interval(x, bits)
            assert box.lo <= x <= box.hi
        wide = interval(x, 16)
        tight = interval(x, 256)
        assert wide.lo <= tight.lo and tight.hi <= wide.hi


def test_interval_arithmetic_soundness():
    a = sqrt_interval(2, 64)
    b = sqrt_interval(3, 64)
    s = a + b
    # (sqrt2 + sqrt3)^2 = 5 + 2*sqrt(6); squaring the positive bounds is monotone
    assert rational(s.lo * s.lo) < 5 + 2 * sqrt(6) < rational(s.hi * s.hi)
    assert s.hi - s.lo < Fraction(1, 2**60)
    p = a * b
    assert p.lo * p.lo < 6 < p.hi * p.hi
    with pytest.raises(ZeroDivisionError):
        s / CertifiedInterval(Fraction(-1), Fraction(1), 8)


def test_parse_round_trip():
    texts = [
        "3",
        "-3",
        "22/7",
        "sqrt(2)",
        "2*sqrt(2)",
        "(1 + sqrt(5))/2",
        "(13 + sqrt(217))/2",
        "(-3 + 2*sqrt(7))/5",
        "delta_217",
        "1 + 2*delta_5",
    ]
    for text in texts:
        x = parse_number(text)
        assert parse_number(str(x)) == x


def test_parse_examples():
    assert parse_number("delta_5") == delta(5)
    assert parse_number("6 + delta_217") == QuadraticNumber(Fraction(13, 2), Fraction(1, 2), 217)
    assert parse_number("sqrt(8)") == 2 * sqrt(2)
    assert parse_number("2.5") == rational(Fraction(5, 2))
    assert parse_number("(3+2*sqrt(2))/(2*sqrt(2))") == QuadraticNumber(1, Fraction(3, 4), 2)


def test_parse_errors():
    for text in ["", "sqrt(-2)", "sqrt(2", "1 +", "1/0", "delta_12", "2 ** 3", "sqrt(2) + sqrt(3)"]:
        with pytest.raises((ParseError, MixedRadicand, ValueError)):
            parse_number(text)


def test_decimal_str():
    assert decimal_str((3 + 2 * sqrt(2)) / (2 * sqrt(2)), 5) == "2.06066"
    assert decimal_str((4 + sqrt(5)) / 3, 5) == "2.07869"
    assert decimal_str((41 + 4 * sqrt(3)) / 23, 5) == "2.08383"
    assert decimal_str(rational(Fraction(1, 4)), 1) == "0.3"
    assert decimal_str(rational(Fraction(-1, 4)), 1) == "-0.2"
    assert decimal_str(rational(2), 3) == "2.000"
    assert decimal_str(sqrt(2), 0) == "1"


def test_str_forms():
    assert str(rational(Fraction(22, 7))) == "22/7"
    assert str(sqrt(2)) == "sqrt(2)"
    assert str(-sqrt(2)) == "-sqrt(2)"
    assert str(1 + sqrt(2)) == "1 + sqrt(2)"
    assert str(1 - 2 * sqrt(2)) == "1 - 2*sqrt(2)"
    assert str(delta(5)) == "(1 + sqrt(5))/2"
    assert str((13 - sqrt(217)) / 2) == "(13 - sqrt(217))/2"
