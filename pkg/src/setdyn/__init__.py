"""Transitivity and mixing of set-valued dynamical systems.

Exact decision procedures on finite relation systems (:mod:`setdyn.finite`),
exact piecewise-linear multimaps on compact intervals (:mod:`setdyn.pwl`,
:mod:`setdyn.interval_dynamics`), and brute-force oracles
(:mod:`setdyn.oracle`) to check them against.
"""

from .errors import CapExceededError, DomainError, NotStronglyConnectedError, SetDynError
from .finite import (
    PROPERTIES,
    FiniteRelationSystem,
    HittingSet,
    Orbit,
    classify,
    dense_orbit,
    fixed_points,
    hitting_set,
    is_bitransitive,
    is_mixing,
    is_totally_transitive,
    is_transitive,
    is_weakly_mixing,
    orbits_from,
    period,
    periodic_points,
    power_relation,
    product_relation,
)
from .interval_dynamics import (
    Classification,
    Cover,
    classify_at_resolution,
    covers,
    iterate_image,
    periodic_density_check,
    sample_orbit,
)
from .pwl import PWLBoundary, PWLMultimap, compose, fixed_point_set, image, periodic_point_set
from .rational import IntervalUnion, RationalInterval

__version__ = "0.1.0"
