from fractions import Fraction as F

import pytest

from setdyn.rational import IntervalUnion, RationalInterval, format_rational, to_fraction


def test_to_fraction_accepts_ints_strings_fractions():
    assert to_fraction(3) == 3
    assert to_fraction("2/5") == F(2, 5)
    assert to_fraction(" -7/14 ") == F(-1, 2)
    assert to_fraction(F(1, 3)) == F(1, 3)


@pytest.mark.parametrize("bad", [0.5, True, None])
def test_to_fraction_rejects_floats_and_junk(bad):
    with pytest.raises(TypeError):
        to_fraction(bad)


def test_to_fraction_rejects_malformed_string():
    with pytest.raises(ValueError):
        to_fraction("two fifths")


def test_format_rational():
    assert format_rational(F(4, 1)) == "4"
    assert format_rational(F(-3, 6)) == "-1/2"


def test_interval_basics():
    iv = RationalInterval("1/4", "3/4")
    assert iv.width == F(1, 2)
    assert F(1, 2) in iv and F(4, 5) not in iv
    assert not iv.degenerate
    assert RationalInterval.point(1).degenerate
    with pytest.raises(ValueError):
        RationalInterval(1, 0)


def test_interval_parse_and_json_roundtrip():
    iv = RationalInterval.parse("[2/5, 3/5]")
    assert iv == RationalInterval(F(2, 5), F(3, 5))
    assert RationalInterval.from_json(iv.to_json()) == iv


def test_meets_interior_is_open_on_the_other_side():
    a = RationalInterval(0, F(1, 4))
    assert not a.meets_interior(RationalInterval(F(1, 4), F(1, 2)))
    assert a.meets_interior(RationalInterval(F(1, 5), F(1, 2)))
    assert RationalInterval.point(F(1, 3)).meets_interior(RationalInterval(0, 1))


def test_union_merges_overlapping_and_touching_parts():
    u = IntervalUnion([
        RationalInterval(F(1, 2), 1),
        RationalInterval(0, F(1, 4)),
        RationalInterval(F(1, 4), F(1, 3)),
        RationalInterval(F(3, 4), F(7, 8)),
    ])
    assert u.parts == (RationalInterval(0, F(1, 3)), RationalInterval(F(1, 2), 1))
    for a, b in zip(u.parts, u.parts[1:]):
        assert a.hi < b.lo


def test_union_points_and_gaps():
    u = IntervalUnion.of_points(F(2, 3), 0)
    assert u.points() == [0, F(2, 3)]
    assert u.gaps(RationalInterval(0, 1)) == [(0, F(2, 3)), (F(2, 3), 1)]
    assert IntervalUnion([RationalInterval(0, 1)]).gaps(RationalInterval(0, 1)) == []
    assert IntervalUnion().gaps(RationalInterval(0, 1)) == [(0, 1)]


def test_union_half_open_intersection():
    u = IntervalUnion.of_points(F(1, 2))
    assert not u.intersects_half_open(F(1, 4), F(1, 2))
    assert u.intersects_half_open(F(1, 2), F(3, 4))
    assert u.intersects_half_open(F(1, 4), F(1, 2), closed=True)
