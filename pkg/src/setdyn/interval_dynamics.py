"""Covering, density and classification for piecewise-linear multimaps.

On an interval, mixing is equivalent to the covering property: every
nondegenerate ``J`` eventually has ``[c, d]`` inside ``F^n(J)`` for all large
``n``, for every ``a < c < d < b``.  Nothing infinite can be checked in finite
time, so :func:`classify_at_resolution` reports *evidence* at a grid
resolution and an iteration horizon.  The only upgrade to proof happens when
the sequence of images provably cycles, since ``F^n(J)`` depends only on
``F^(n-1)(J)``.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DomainError
from .pwl import DEFAULT_BREAKPOINT_CAP, PWLMultimap, image, periodic_point_set
from .rational import RationalInterval, RationalLike, format_rational, to_fraction

POLICIES = ("lower", "upper", "midpoint", "random")


def iterate_image(fmap: PWLMultimap, J: RationalInterval, n: int) -> list[RationalInterval]:
    """``[F(J), F^2(J), ..., F^n(J)]``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = []
    current = J
    for _ in range(n):
        current = image(fmap, current)
        out.append(current)
    return out


@dataclass(frozen=True)
class ImageOrbit:
    """``images[k]`` is ``F^(k+1)(J)`` for ``k < horizon``.

    When ``cycle_start`` is set, ``F^n(J) == F^(n + cycle_length)(J)`` for every
    ``n >= cycle_start``, as established by an exact repeat within the horizon.
    """

    images: tuple[RationalInterval, ...]
    cycle_start: Optional[int]
    cycle_length: int

    def cycle(self) -> tuple[RationalInterval, ...]:
        if self.cycle_start is None:
            return ()
        return self.images[self.cycle_start - 1:self.cycle_start - 1 + self.cycle_length]


def image_orbit(fmap: PWLMultimap, J: RationalInterval, horizon: int) -> ImageOrbit:
    seen = {}
    images: list[RationalInterval] = []
    current = J
    cycle_start = None
    length = 0
    for n in range(1, horizon + 1):
        current = image(fmap, current)
        if current in seen:
            cycle_start = seen[current]
            length = n - cycle_start
            break
        seen[current] = n
        images.append(current)
    if cycle_start is not None:
        # fill the rest of the horizon from the cycle instead of iterating
        while len(images) < horizon:
            n = len(images) + 1
            images.append(images[cycle_start - 1 + (n - cycle_start) % length])
    return ImageOrbit(tuple(images), cycle_start, length)


@dataclass(frozen=True)
class Cover:
    """``target`` lies in ``F^n(J)`` for every ``first <= n <= horizon``.

    ``persistent`` means the same holds for every ``n >= first``: the image
    sequence has entered an exact cycle whose members all contain the target.
    """

    first: int
    persistent: bool

    def to_json(self) -> dict:
        return {"M": self.first, "persistent": self.persistent}


def _first_cover(orbit: ImageOrbit, target: RationalInterval) -> Optional[Cover]:
    first = None
    for n in range(len(orbit.images), 0, -1):
        if not orbit.images[n - 1].contains(target):
            break
        first = n
    if first is None:
        return None
    cyc = orbit.cycle()
    persistent = bool(cyc) and all(iv.contains(target) for iv in cyc)
    return Cover(first, persistent)


def covers(fmap: PWLMultimap, J: RationalInterval, target: RationalInterval, horizon: int) -> Optional[Cover]:
    """Smallest ``M <= horizon`` with ``target`` inside ``F^n(J)`` for all ``n`` in ``[M, horizon]``.

    ``J`` must be nondegenerate and ``target = [c, d]`` must satisfy
    ``a < c <= d < b``.  Returns None if no such ``M`` exists.
    """
    dom = fmap.domain
    if J.degenerate:
        raise DomainError("J = %r is degenerate" % (J,))
    if not dom.contains(J):
        raise DomainError("J = %r is not inside the domain %r" % (J, dom))
    if not (dom.lo < target.lo and target.hi < dom.hi):
        raise DomainError("target %r must lie strictly inside the domain %r" % (target, dom))
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    return _first_cover(image_orbit(fmap, J, horizon), target)


def grid_cells(domain: RationalInterval, resolution: int) -> list[RationalInterval]:
    """The ``2^resolution`` equal closed cells of ``domain``."""
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    k = 2 ** resolution
    h = domain.width / k
    return [RationalInterval(domain.lo + i * h, domain.lo + (i + 1) * h) for i in range(k)]


def grid_targets(domain: RationalInterval, resolution: int) -> list[RationalInterval]:
    """Targets ``[c, d]`` with ``c < d`` drawn from the interior grid points.

    At resolution 1 the midpoint is the only interior grid point and the
    single degenerate target ``[mid, mid]`` is used instead.
    """
    k = 2 ** resolution
    h = domain.width / k
    interior = [domain.lo + i * h for i in range(1, k)]
    if len(interior) == 1:
        return [RationalInterval.point(interior[0])]
    return [RationalInterval(c, d) for i, c in enumerate(interior) for d in interior[i + 1:]]


@dataclass(frozen=True)
class DensityCheck:
    """Per grid cell, the smallest ``m`` whose ``m``-periodic set meets the cell, or None."""

    dense: bool
    witnesses: tuple[Optional[int], ...]

    def __bool__(self) -> bool:
        return self.dense

    def to_json(self) -> dict:
        return {"dense": self.dense, "witnesses": list(self.witnesses)}


def periodic_density_check(fmap: PWLMultimap, resolution: int, period_bound: int,
                           cap: int = DEFAULT_BREAKPOINT_CAP) -> DensityCheck:
    """Does every grid cell contain a point of ``{x : x in F^m(x)}`` for some ``m <= period_bound``?

    Cells are the half-open ``[lo, hi)`` pieces of the ``2^resolution`` grid,
    the last one closed, so each point of the domain belongs to one cell.
    """
    if period_bound < 1:
        raise ValueError("period_bound must be >= 1")
    cells = grid_cells(fmap.domain, resolution)
    witnesses: list[Optional[int]] = [None] * len(cells)
    for m in range(1, period_bound + 1):
        pts = periodic_point_set(fmap, m, cap)
        for i, cell in enumerate(cells):
            if witnesses[i] is None and pts.intersects_half_open(cell.lo, cell.hi, closed=i == len(cells) - 1):
                witnesses[i] = m
        if all(w is not None for w in witnesses):
            break
    return DensityCheck(all(w is not None for w in witnesses), tuple(witnesses))


@dataclass(frozen=True)
class Classification:
    """Evidence for transitivity and mixing at one (resolution, horizon).

    ``covers[i][j]`` is the :class:`Cover` of ``targets[j]`` from ``cells[i]``
    (or None); ``hits[i][j]`` is the first ``n`` with ``F^n(cells[i])`` meeting
    the interior of ``cells[j]`` (or None).
    """

    resolution: int
    horizon: int
    cells: tuple[RationalInterval, ...]
    targets: tuple[RationalInterval, ...]
    covers: tuple[tuple[Optional[Cover], ...], ...]
    hits: tuple[tuple[Optional[int], ...], ...]

    @property
    def mixing_evidence(self) -> bool:
        return all(c is not None for row in self.covers for c in row)

    @property
    def mixing_certified(self) -> bool:
        """Every pair is covered for all ``n >= M``, not just up to the horizon."""
        return all(c is not None and c.persistent for row in self.covers for c in row)

    @property
    def transitivity_evidence(self) -> bool:
        return all(n is not None for row in self.hits for n in row)

    @property
    def potential_counterexample(self) -> bool:
        """Transitive-looking but not mixing-looking; a deeper horizon should settle it."""
        return self.transitivity_evidence and not self.mixing_evidence

    def to_json(self) -> dict:
        return {
            "resolution": self.resolution,
            "horizon": self.horizon,
            "mixing_evidence": self.mixing_evidence,
            "mixing_certified": self.mixing_certified,
            "transitivity_evidence": self.transitivity_evidence,
            "potential_counterexample": self.potential_counterexample,
            "cells": [c.to_json() for c in self.cells],
            "targets": [t.to_json() for t in self.targets],
            "first_cover": [
                {"cell": i, "target": j, "M": c.first if c else None, "persistent": bool(c and c.persistent)}
                for i, row in enumerate(self.covers)
                for j, c in enumerate(row)
            ],
            "first_hit": [
                {"cell": i, "to": j, "n": n}
                for i, row in enumerate(self.hits)
                for j, n in enumerate(row)
            ],
        }


def _sweep_cell(args):
    fmap, cell, cells, targets, horizon = args
    orbit = image_orbit(fmap, cell, horizon)
    cover_row = tuple(_first_cover(orbit, t) for t in targets)
    hit_row = []
    for other in cells:
        hit = None
        for n, iv in enumerate(orbit.images, 1):
            if iv.meets_interior(other):
                hit = n
                break
        hit_row.append(hit)
    return cover_row, tuple(hit_row)


def classify_at_resolution(fmap: PWLMultimap, resolution: int, horizon: int, workers: int = 1) -> Classification:
    """Run the covering test for every (grid cell, interior target) pair.

    ``mixing_evidence`` holds when every pair is covered from some ``M`` up to
    the horizon; ``transitivity_evidence`` when every cell's images meet every
    other cell's interior within the horizon.  Rows are computed per source
    cell, optionally in ``workers`` processes, and assembled in cell order.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    cells = grid_cells(fmap.domain, resolution)
    targets = grid_targets(fmap.domain, resolution)
    jobs = [(fmap, cell, cells, targets, horizon) for cell in cells]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_cell, jobs))
    else:
        rows = [_sweep_cell(job) for job in jobs]
    return Classification(
        resolution, horizon, tuple(cells), tuple(targets),
        tuple(r[0] for r in rows), tuple(r[1] for r in rows),
    )


def sample_orbit(fmap: PWLMultimap, x0: RationalLike, steps: int, policy: str = "lower",
                 seed: int = 0, denominator: int = 16) -> list[Fraction]:
    """One orbit prefix ``(x_0, ..., x_steps)`` with ``x_(i+1)`` chosen from ``F(x_i)``.

    ``policy`` picks the lower end, the upper end, the midpoint, or (``random``)
    ``l + k (u - l) / denominator`` for a seeded uniform ``k``.
    """
    if policy not in POLICIES:
        raise ValueError("unknown policy %r; choose from %s" % (policy, ", ".join(POLICIES)))
    x = to_fraction(x0)
    if x not in fmap.domain:
        raise DomainError("%s outside the domain %r" % (format_rational(x), fmap.domain))
    rng = random.Random(seed)
    points = [x]
    for _ in range(steps):
        lo, hi = fmap.lower(x), fmap.upper(x)
        if policy == "lower":
            x = lo
        elif policy == "upper":
            x = hi
        elif policy == "midpoint":
            x = (lo + hi) / 2
        else:
            x = lo + (hi - lo) * Fraction(rng.randint(0, denominator), denominator)
        points.append(x)
    return points
