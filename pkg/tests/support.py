"""Hypothesis strategies and the return-direction harness shared by several test modules."""

from dataclasses import dataclass, field
from fractions import Fraction

from hypothesis import strategies as st

from setdyn.errors import CapExceededError
from setdyn.finite import FiniteRelationSystem
from setdyn.interval_dynamics import POLICIES, sample_orbit
from setdyn.oracle import random_pwl_map
from setdyn.pwl import periodic_point_set
from setdyn.rational import IntervalUnion, RationalInterval


@st.composite
def finite_systems(draw, max_states=6):
    n = draw(st.integers(1, max_states))
    rows = draw(st.lists(st.integers(1, 2 ** n - 1), min_size=n, max_size=n))
    return FiniteRelationSystem.from_masks(rows)


@st.composite
def pwl_maps(draw, max_breakpoints=8, max_denominator=16):
    rng = draw(st.randoms(use_true_random=False))
    return random_pwl_map(rng, max_breakpoints, max_denominator)


@st.composite
def rationals_in(draw, lo=Fraction(0), hi=Fraction(1), max_denominator=32):
    q = draw(st.integers(1, max_denominator))
    k = draw(st.integers(0, q))
    return lo + (hi - lo) * Fraction(k, q)


@dataclass
class DirectionTally:
    maps: int = 0
    capped: int = 0
    no_gap: int = 0
    certified: int = 0
    with_two_returns: int = 0
    returns: int = 0
    violations: list = field(default_factory=list)


def periodic_free_subinterval(fmap, bound, cap=20_000):
    """A closed subinterval with no point of ``{x in F^m(x)}``, ``m <= bound``, or None."""
    periodic = IntervalUnion()
    for m in range(1, bound + 1):
        periodic = periodic.union(periodic_point_set(fmap, m, cap))
    gaps = periodic.gaps(fmap.domain)
    if not gaps:
        return None
    lo, hi = max(gaps, key=lambda g: g[1] - g[0])
    w = hi - lo
    return RationalInterval(lo + w / 8, hi - w / 8)


def return_signs(fmap, J, bound, starts=9, seeds=4):
    """Signs of ``x_m - x`` over sampled orbits from ``J`` that return to ``J`` within ``bound`` steps."""
    signs = []
    for k in range(starts):
        x0 = J.lo + J.width * Fraction(k, starts - 1)
        for policy in POLICIES:
            for seed in (range(seeds) if policy == "random" else (0,)):
                orbit = sample_orbit(fmap, x0, bound, policy, seed)
                for m in range(1, bound + 1):
                    if orbit[m] in J:
                        d = orbit[m] - x0
                        signs.append((d > 0) - (d < 0))
    return signs


def direction_harness(maps, bound):
    tally = DirectionTally()
    for fmap in maps:
        tally.maps += 1
        try:
            J = periodic_free_subinterval(fmap, bound)
        except CapExceededError:
            tally.capped += 1
            continue
        if J is None:
            tally.no_gap += 1
            continue
        tally.certified += 1
        signs = return_signs(fmap, J, bound)
        tally.returns += len(signs)
        if len(signs) >= 2:
            tally.with_two_returns += 1
        # a zero sign would be a periodic point inside J
        if 0 in signs or len(set(signs)) > 1:
            tally.violations.append((fmap, J, sorted(set(signs))))
    return tally
