import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from setdyn import pwl
from setdyn.errors import DomainError
from setdyn.interval_dynamics import (
    POLICIES,
    classify_at_resolution,
    covers,
    grid_cells,
    grid_targets,
    image_orbit,
    iterate_image,
    periodic_density_check,
    sample_orbit,
)
from setdyn.oracle import grid_image_oracle, random_pwl_map
from setdyn.pwl import PWLMultimap
from setdyn.rational import RationalInterval as I
from support import direction_harness, pwl_maps, rationals_in

HALF = F(1, 2)
J0 = I(F(2, 5), F(3, 5))
TARGET = I(F(1, 10), F(9, 10))


# --- iterate_image / covers -------------------------------------------------


def test_iterate_image_tent():
    expected = [I(F(4, 5), 1), I(0, F(2, 5)), I(0, F(4, 5)), I(0, 1)]
    assert iterate_image(pwl.tent(), J0, 4) == expected
    # cross-check each step against the grid oracle
    prev = J0
    for got in expected:
        assert got == grid_image_oracle(pwl.tent(), prev, 10)
        prev = got


def test_iterate_image_trivial_maps():
    J = I(F(1, 3), F(1, 2))
    assert iterate_image(pwl.identity(), J, 3) == [J, J, J]
    assert iterate_image(pwl.full(), J, 2) == [I(0, 1), I(0, 1)]
    with pytest.raises(ValueError):
        iterate_image(pwl.tent(), J, 0)


def test_image_orbit_detects_cycle():
    orbit = image_orbit(pwl.tent(), J0, 10)
    assert orbit.cycle_start == 4 and orbit.cycle_length == 1
    assert orbit.cycle() == (I(0, 1),)
    assert len(orbit.images) == 10
    assert list(orbit.images) == iterate_image(pwl.tent(), J0, 10)


def test_covers_examples():
    c = covers(pwl.tent(), J0, TARGET, 16)
    assert (c.first, c.persistent) == (4, True)
    assert covers(pwl.identity(), J0, TARGET, 100) is None
    c = covers(pwl.full(), I(F(1, 4), F(1, 3)), I(F(1, 8), F(1, 2)), 5)
    assert (c.first, c.persistent) == (1, True)


def test_covers_within_horizon_but_not_persistent():
    # the horizon stops before the images repeat
    c = covers(pwl.tent(), J0, I(F(4, 5), F(9, 10)), 4)
    assert c.first == 4 and not c.persistent
    assert covers(pwl.tent(), J0, TARGET, 3) is None


def test_covers_rejects_bad_input():
    with pytest.raises(DomainError):
        covers(pwl.tent(), I(HALF, HALF), TARGET, 8)
    with pytest.raises(DomainError):
        covers(pwl.tent(), J0, I(0, HALF), 8)
    with pytest.raises(DomainError):
        covers(pwl.tent(), J0, I(HALF, 1), 8)
    with pytest.raises(ValueError):
        covers(pwl.tent(), J0, TARGET, 0)


def test_periodic_orbit_never_spreads():
    # {2/5, 4/5} is a 2-cycle of the tent; the images of a point stay points
    c = covers(pwl.tent(), I(F(2, 5), F(2, 5) + F(1, 10**6)), I(F(1, 3), F(2, 3)), 8)
    assert c is None


# --- grids and density -------------------------------------------------------


def test_grid_cells_and_targets():
    dom = I(0, 1)
    assert grid_cells(dom, 2) == [I(0, F(1, 4)), I(F(1, 4), HALF), I(HALF, F(3, 4)), I(F(3, 4), 1)]
    assert grid_targets(dom, 1) == [I(HALF, HALF)]
    assert grid_targets(dom, 2) == [I(F(1, 4), HALF), I(F(1, 4), F(3, 4)), I(HALF, F(3, 4))]
    assert len(grid_targets(dom, 3)) == 21
    with pytest.raises(ValueError):
        grid_cells(dom, 0)


def test_density_examples():
    tent = periodic_density_check(pwl.tent(), 4, 8)
    assert tent and tent.dense
    assert len(tent.witnesses) == 16 and max(tent.witnesses) <= 8
    assert periodic_density_check(pwl.identity(), 3, 1).witnesses == (1,) * 8
    mid = periodic_density_check(pwl.constant(HALF), 2, 8)
    assert not mid
    assert mid.witnesses == (None, None, 1, None)
    assert mid.to_json() == {"dense": False, "witnesses": [None, None, 1, None]}


def test_density_reports_smallest_period():
    # tent fixed points are 0 and 2/3; 2/5 and 4/5 first appear at period 2
    w = periodic_density_check(pwl.tent(), 2, 4).witnesses
    assert w == (1, 2, 1, 2)


# --- classification ---------------------------------------------------------


def test_classify_tent():
    rec = classify_at_resolution(pwl.tent(), 3, 32)
    assert rec.mixing_evidence and rec.transitivity_evidence and rec.mixing_certified
    assert not rec.potential_counterexample
    assert len(rec.cells) == 8 and len(rec.targets) == 21


def test_classify_identity_and_full():
    rec = classify_at_resolution(pwl.identity(), 2, 32)
    assert not rec.mixing_evidence and not rec.transitivity_evidence
    rec = classify_at_resolution(pwl.full(), 2, 4)
    assert rec.mixing_evidence and rec.transitivity_evidence
    assert {c.first for row in rec.covers for c in row} == {1}


def test_classify_flags_potential_counterexample():
    # F([0,1/2]) = [1/2,1] and F([1/2,1]) = [0,1/2]: every cell is visited, no image straddles 1/2
    m = PWLMultimap.from_points([(0, HALF), (HALF, HALF), (F(3, 4), 0), (1, 0)],
                                [(0, 1), (F(1, 4), 1), (HALF, HALF), (1, HALF)])
    assert iterate_image(m, I(0, HALF), 2) == [I(HALF, 1), I(0, HALF)]
    rec = classify_at_resolution(m, 2, 16)
    assert rec.transitivity_evidence
    assert not rec.mixing_evidence
    assert rec.potential_counterexample


def test_classification_json_shape():
    doc = classify_at_resolution(pwl.tent(), 2, 8).to_json()
    assert doc["first_cover"][0] == {"cell": 0, "target": 0, "M": 1, "persistent": True}
    assert len(doc["first_cover"]) == 4 * 3
    assert len(doc["first_hit"]) == 4 * 4
    assert doc["cells"][0] == ["0", "1/4"]


def test_classify_workers_deterministic():
    a = classify_at_resolution(pwl.tent(), 3, 16, workers=1)
    b = classify_at_resolution(pwl.tent(), 3, 16, workers=2)
    assert a == b and a.to_json() == b.to_json()


@settings(max_examples=30, deadline=None)
@given(pwl_maps(max_breakpoints=5, max_denominator=8))
def test_mixing_evidence_passes_to_coarser_grids(fmap):
    fine = classify_at_resolution(fmap, 3, 12)
    if fine.mixing_evidence:
        for r in (1, 2):
            assert classify_at_resolution(fmap, r, 12).mixing_evidence


def test_tent_transitivity_and_density_agree():
    for r in (2, 3, 4):
        assert classify_at_resolution(pwl.tent(), r, 32).transitivity_evidence
        assert periodic_density_check(pwl.tent(), r, 8)


# --- sample_orbit -----------------------------------------------------------


def test_sample_orbit_examples():
    for policy in POLICIES:
        assert sample_orbit(pwl.tent(), F(2, 5), 3, policy) == [F(2, 5), F(4, 5), F(2, 5), F(4, 5)]
    assert sample_orbit(pwl.full(), F(1, 3), 3, "lower") == [F(1, 3), 0, 0, 0]
    assert sample_orbit(pwl.full(), F(1, 3), 2, "upper") == [F(1, 3), 1, 1]
    assert sample_orbit(pwl.full(), F(1, 3), 2, "midpoint") == [F(1, 3), HALF, HALF]


def test_sample_orbit_rejects_bad_input():
    with pytest.raises(ValueError):
        sample_orbit(pwl.tent(), 0, 3, "greedy")
    with pytest.raises(DomainError):
        sample_orbit(pwl.tent(), 2, 3)


@settings(max_examples=60, deadline=None)
@given(pwl_maps(), rationals_in(), st.sampled_from(POLICIES), st.integers(0, 1000))
def test_sample_orbit_respects_fibers(fmap, x0, policy, seed):
    pts = sample_orbit(fmap, x0, 8, policy, seed)
    assert len(pts) == 9
    for x, y in zip(pts, pts[1:]):
        assert fmap.lower(x) <= y <= fmap.upper(x)
    assert pts == sample_orbit(fmap, x0, 8, policy, seed)


# --- return directions ------------------------------------------------------


def test_return_direction_harness_small_run():
    rng = random.Random(7)
    maps = [random_pwl_map(rng, 6, 16, 0.3) for _ in range(40)]
    tally = direction_harness(maps, 4)
    assert tally.maps == 40
    assert tally.certified > 0
    assert tally.violations == []


def test_return_direction_on_tent_gap():
    # tent has no fixed point strictly between 0 and 2/3; orbits from a small
    # interval near 0 move right before they can come back
    tally = direction_harness([pwl.tent()], 1)
    assert tally.certified == 1 and tally.violations == []
