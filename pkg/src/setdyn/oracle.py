"""Brute-force reference implementations of the definitions.

Nothing here calls into the fast procedures of :mod:`setdyn.finite` or
:mod:`setdyn.pwl`.  The finite oracles walk breadth-first reachability layers
and the literal sequence of relation powers ``F, F^2, F^3, ...`` until it
repeats; no strongly connected components, no periods, no gcds.  The interval
oracle samples fibers on a rational grid with its own interpolation code.
"""

from __future__ import annotations

import bisect
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, lcm
from typing import Iterator, Optional

from .finite import FiniteRelationSystem
from .rational import RationalInterval

ENUMERATION_FILTERS = (None, "strongly-connected-only")


def _rows(sys: FiniteRelationSystem) -> list[int]:
    rows = []
    for succ in sys.successors:
        row = 0
        for t in succ:
            row |= 1 << t
        rows.append(row)
    return rows


def _step(rows: list[int], layer: int) -> int:
    out = 0
    for s in range(len(rows)):
        if (layer >> s) & 1:
            out |= rows[s]
    return out


def _transitive_rows(rows: list[int], bound: int) -> bool:
    n = len(rows)
    full = (1 << n) - 1
    for u in range(n):
        layer = rows[u]
        union = layer
        seen = {layer}
        for _ in range(2, bound + 1):
            if union == full:
                break
            layer = _step(rows, layer)
            if layer in seen:
                # the layer sequence is now cycling; nothing new can appear
                break
            seen.add(layer)
            union |= layer
        if union != full:
            return False
    return True


def oracle_transitive(sys: FiniteRelationSystem, bound: int) -> bool:
    """For every ordered pair ``(u, v)``, is some length in ``[1, bound]`` realized?

    ``bound`` must be at least ``(n-1)^2 + 1``.
    """
    n = sys.state_count
    if bound < (n - 1) ** 2 + 1:
        raise ValueError("bound %d is below (n-1)^2 + 1 = %d" % (bound, (n - 1) ** 2 + 1))
    return _transitive_rows(_rows(sys), bound)


@dataclass(frozen=True)
class PowerSequence:
    """The relations ``F^1, ..., F^(start+length-1)`` with ``F^(start+length) == F^start``."""

    powers: tuple[tuple[int, ...], ...]
    start: int
    length: int

    def power(self, n: int) -> tuple[int, ...]:
        if n < self.start:
            return self.powers[n - 1]
        return self.powers[self.start - 1 + (n - self.start) % self.length]


def power_sequence(sys: FiniteRelationSystem) -> PowerSequence:
    rows = _rows(sys)
    n = len(rows)
    current = tuple(rows)
    powers = []
    first_seen = {}
    k = 1
    while current not in first_seen:
        first_seen[current] = k
        powers.append(current)
        current = tuple(_step(rows, current[s]) for s in range(n))
        k += 1
    start = first_seen[current]
    return PowerSequence(tuple(powers), start, k - start)


def oracle_lengths(sys: FiniteRelationSystem, u: int, v: int, upto: int) -> list[int]:
    """All ``n <= upto`` with a length-``n`` path from ``u`` to ``v``, by layer expansion."""
    rows = _rows(sys)
    out = []
    layer = 1 << u
    for n in range(1, upto + 1):
        layer = _step(rows, layer)
        if (layer >> v) & 1:
            out.append(n)
    return out


def oracle_mixing(sys: FiniteRelationSystem) -> bool:
    """Every pair is joined at every large enough length.

    The powers of ``F`` are eventually periodic, so it suffices that every
    relation in the repeating block is all-to-all.
    """
    seq = power_sequence(sys)
    full = (1 << sys.state_count) - 1
    block = seq.powers[seq.start - 1:]
    return all(row == full for rel in block for row in rel)


def oracle_power_transitive(sys: FiniteRelationSystem, n: int, seq: Optional[PowerSequence] = None) -> bool:
    seq = seq or power_sequence(sys)
    rows = list(seq.power(n))
    return _transitive_rows(rows, (sys.state_count - 1) ** 2 + 1)


def oracle_bitransitive(sys: FiniteRelationSystem) -> bool:
    return oracle_power_transitive(sys, 2)


def oracle_totally_transitive(sys: FiniteRelationSystem) -> bool:
    """``F^n`` transitive for every ``n``.

    The powers of ``F^n`` are ``F^(kn)``; for ``n`` past the start of the
    repeating block these depend only on ``n`` modulo the block length, so
    ``n`` up to ``start + length - 1`` exhausts all cases.
    """
    seq = power_sequence(sys)
    return all(oracle_power_transitive(sys, n, seq) for n in range(1, seq.start + seq.length))


def oracle_weakly_mixing(sys: FiniteRelationSystem) -> bool:
    n = sys.state_count
    succ = sys.successors
    rows = []
    for s in range(n):
        for t in range(n):
            row = 0
            for s2 in succ[s]:
                for t2 in succ[t]:
                    row |= 1 << (s2 * n + t2)
            rows.append(row)
    return _transitive_rows(rows, (n * n - 1) ** 2 + 1)


def oracle_classify(sys: FiniteRelationSystem) -> dict[str, bool]:
    return {
        "transitive": oracle_transitive(sys, (sys.state_count - 1) ** 2 + 1),
        "bitransitive": oracle_bitransitive(sys),
        "totally_transitive": oracle_totally_transitive(sys),
        "weakly_mixing": oracle_weakly_mixing(sys),
        "mixing": oracle_mixing(sys),
    }


# --- enumeration ------------------------------------------------------------


@dataclass(frozen=True)
class EnumerationSpec:
    state_count: int
    filter: Optional[str] = None

    def __post_init__(self):
        if not 1 <= self.state_count <= 4:
            raise ValueError("exhaustive enumeration supports 1..4 states, got %r" % (self.state_count,))
        if self.filter not in ENUMERATION_FILTERS:
            raise ValueError("unknown filter %r" % (self.filter,))

    @property
    def total(self) -> int:
        """Number of systems before filtering: ``(2^n - 1)^n``."""
        return (2 ** self.state_count - 1) ** self.state_count


def system_at(state_count: int, index: int) -> FiniteRelationSystem:
    """The ``index``-th total relation in enumeration order (mixed radix ``2^n - 1``)."""
    radix = 2 ** state_count - 1
    masks = []
    for _ in range(state_count):
        index, digit = divmod(index, radix)
        masks.append(digit + 1)
    return FiniteRelationSystem.from_masks(masks[::-1])


def _reaches_everything(sys: FiniteRelationSystem) -> bool:
    rows = _rows(sys)
    full = (1 << sys.state_count) - 1
    for u in range(sys.state_count):
        seen = 1 << u
        frontier = seen
        while frontier:
            frontier = _step(rows, frontier) & ~seen
            seen |= frontier
        if seen != full:
            return False
    return True


def enumerate_systems(spec: EnumerationSpec, start: int = 0, stop: Optional[int] = None) -> Iterator[FiniteRelationSystem]:
    """Every total relation on ``spec.state_count`` states, each exactly once.

    ``start``/``stop`` select an index range so a sweep can be split between
    workers.
    """
    n = spec.state_count
    subsets = range(1, 2 ** n)
    stop = spec.total if stop is None else min(stop, spec.total)
    for masks in itertools.islice(itertools.product(subsets, repeat=n), start, stop):
        sys = FiniteRelationSystem.from_masks(masks)
        if spec.filter == "strongly-connected-only" and not _reaches_everything(sys):
            continue
        yield sys


def random_system(rng: random.Random, state_count: int, max_out_degree: Optional[int] = None) -> FiniteRelationSystem:
    """A random total relation; successor set sizes are uniform in ``[1, max_out_degree]``."""
    top = state_count if max_out_degree is None else min(max_out_degree, state_count)
    succ = []
    for _ in range(state_count):
        k = rng.randint(1, top)
        succ.append(tuple(sorted(rng.sample(range(state_count), k))))
    return FiniteRelationSystem(state_count, tuple(succ))


# --- interval maps ----------------------------------------------------------


def _interp(xs, ys, x: Fraction) -> Fraction:
    if not xs[0] <= x <= xs[-1]:
        raise ValueError("%s outside [%s, %s]" % (x, xs[0], xs[-1]))
    i = min(bisect.bisect_right(xs, x), len(xs) - 1)
    x0, x1 = xs[i - 1], xs[i]
    return ys[i - 1] + (ys[i] - ys[i - 1]) * (x - x0) / (x1 - x0)


def grid_image_oracle(fmap, J: RationalInterval, denominator: int, max_points: int = 512) -> RationalInterval:
    """Hull of the fibers ``[l(x), u(x)]`` over a rational sample of ``J``.

    The sample is the points ``k / denominator`` in ``J``, ``J``'s endpoints and
    every breakpoint of either boundary inside ``J``.  Because piecewise-linear
    extrema sit at breakpoints or endpoints, the hull is the exact image.
    When the grid has more than ``max_points`` points it is walked with an
    even stride; breakpoints and endpoints are always included, and every
    skipped grid point lies on a segment between sampled ones.
    """
    lo_xs, lo_ys = fmap.lower.xs, fmap.lower.ys
    up_xs, up_ys = fmap.upper.xs, fmap.upper.ys
    sample = {J.lo, J.hi}
    sample.update(x for x in lo_xs if J.lo <= x <= J.hi)
    sample.update(x for x in up_xs if J.lo <= x <= J.hi)
    first, last = ceil(J.lo * denominator), floor(J.hi * denominator)
    stride = max(1, -(-(last - first + 1) // max_points))
    for k in range(first, last + 1, stride):
        sample.add(Fraction(k, denominator))
    lows = [_interp(lo_xs, lo_ys, x) for x in sample]
    highs = [_interp(up_xs, up_ys, x) for x in sample]
    return RationalInterval(min(lows), max(highs))


def common_denominator(fmap, *intervals: RationalInterval) -> int:
    dens = [x.denominator for x in fmap.lower.xs + fmap.upper.xs]
    for iv in intervals:
        dens += [iv.lo.denominator, iv.hi.denominator]
    return lcm(*dens)


def _random_rational(rng: random.Random, max_denominator: int) -> Fraction:
    q = rng.randint(1, max_denominator)
    return Fraction(rng.randint(0, q), q)


def random_pwl_map(rng: random.Random, max_breakpoints: int = 16, max_denominator: int = 64,
                   singleton_probability: float = 0.25):
    """A random multimap on ``[0, 1]`` with breakpoints and values of bounded denominator.

    Both boundaries share one grid of at most ``max_breakpoints`` points; at
    each grid point two random values are drawn and sorted, which keeps
    ``lower <= upper`` everywhere.
    """
    from .pwl import PWLMultimap  # the oracle never calls pwl operations, only builds inputs

    inner = set()
    for _ in range(rng.randint(0, max_breakpoints - 2)):
        x = _random_rational(rng, max_denominator)
        if 0 < x < 1:
            inner.add(x)
    xs = [Fraction(0)] + sorted(inner) + [Fraction(1)]
    singleton = rng.random() < singleton_probability
    lower, upper = [], []
    for _ in xs:
        a = _random_rational(rng, max_denominator)
        b = a if singleton else _random_rational(rng, max_denominator)
        lower.append(min(a, b))
        upper.append(max(a, b))
    return PWLMultimap.from_points(list(zip(xs, lower)), list(zip(xs, upper)))
