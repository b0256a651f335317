"""Piecewise-linear set-valued maps on a compact interval, in exact arithmetic.

A :class:`PWLMultimap` sends ``x`` to the fiber ``[l(x), u(x)]`` where ``l <= u``
are continuous piecewise-linear functions with rational breakpoints.  Continuous
boundaries make the map upper semicontinuous with nonempty compact fibers, and
because every fiber is an interval, the image of an interval is again an
interval.  All operations below are exact.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import CapExceededError, DomainError
from .rational import IntervalUnion, RationalInterval, RationalLike, format_rational, to_fraction

DEFAULT_BREAKPOINT_CAP = 100_000


def _collinear(x0, y0, x1, y1, x2, y2) -> bool:
    return (y1 - y0) * (x2 - x1) == (y2 - y1) * (x1 - x0)


class PWLBoundary:
    """A continuous piecewise-linear function through ``(xs[i], ys[i])``.

    Interior breakpoints where the function does not bend are dropped, so two
    boundaries describing the same function compare equal.
    """

    __slots__ = ("xs", "ys")

    def __init__(self, xs: Sequence[RationalLike], ys: Sequence[RationalLike]):
        xs = [to_fraction(x) for x in xs]
        ys = [to_fraction(y) for y in ys]
        if len(xs) != len(ys):
            raise ValueError("got %d breakpoints but %d values" % (len(xs), len(ys)))
        if len(xs) < 2:
            raise ValueError("a boundary needs at least two breakpoints")
        for a, b in zip(xs, xs[1:]):
            if not a < b:
                raise ValueError("breakpoints must be strictly increasing (%s, %s)" % (a, b))
        kx, ky = [xs[0]], [ys[0]]
        for i in range(1, len(xs) - 1):
            if not _collinear(kx[-1], ky[-1], xs[i], ys[i], xs[i + 1], ys[i + 1]):
                kx.append(xs[i])
                ky.append(ys[i])
        kx.append(xs[-1])
        ky.append(ys[-1])
        self.xs: tuple[Fraction, ...] = tuple(kx)
        self.ys: tuple[Fraction, ...] = tuple(ky)

    @classmethod
    def constant(cls, a, b, c) -> PWLBoundary:
        return cls([a, b], [c, c])

    @property
    def domain(self) -> RationalInterval:
        return RationalInterval(self.xs[0], self.xs[-1])

    def __call__(self, x: Fraction) -> Fraction:
        xs = self.xs
        if not xs[0] <= x <= xs[-1]:
            raise DomainError("%s outside [%s, %s]" % (x, xs[0], xs[-1]))
        i = bisect_right(xs, x) - 1
        if i == len(xs) - 1:
            return self.ys[-1]
        x0, x1 = xs[i], xs[i + 1]
        y0, y1 = self.ys[i], self.ys[i + 1]
        if x == x0:
            return y0
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def extrema(self, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
        """``(min, max)`` over ``[lo, hi]``: endpoints plus interior breakpoints."""
        i, j = bisect_right(self.xs, lo), bisect_left(self.xs, hi)
        vals = [self(lo), self(hi)]
        vals.extend(self.ys[i:j])
        return min(vals), max(vals)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PWLBoundary):
            return NotImplemented
        return self.xs == other.xs and self.ys == other.ys

    def __hash__(self) -> int:
        return hash((self.xs, self.ys))

    def __len__(self) -> int:
        return len(self.xs)

    def __repr__(self) -> str:
        pts = ", ".join("(%s, %s)" % (format_rational(x), format_rational(y)) for x, y in zip(self.xs, self.ys))
        return "PWLBoundary(%s)" % pts

    def to_json(self) -> dict:
        return {"x": [format_rational(x) for x in self.xs], "y": [format_rational(y) for y in self.ys]}

    @classmethod
    def from_json(cls, data) -> PWLBoundary:
        if not isinstance(data, dict) or "x" not in data or "y" not in data:
            raise ValueError("boundary must be an object with 'x' and 'y' lists")
        return cls(data["x"], data["y"])


class PWLMultimap:
    """The set-valued map ``x -> [lower(x), upper(x)]`` on ``domain = [a, b]``.

    Both boundaries must span exactly ``[a, b]``, take values in ``[a, b]`` and
    satisfy ``lower <= upper``; it is enough to check this on the merged
    breakpoint grid since both are linear between grid points.
    """

    __slots__ = ("domain", "lower", "upper", "grid", "_lo_vals", "_up_vals")

    def __init__(self, domain: RationalInterval, lower: PWLBoundary, upper: PWLBoundary):
        if domain.degenerate:
            raise ValueError("domain must be a nondegenerate interval")
        for name, bd in (("lower", lower), ("upper", upper)):
            if bd.xs[0] != domain.lo or bd.xs[-1] != domain.hi:
                raise ValueError("%s boundary spans %r, not the domain %r" % (name, bd.domain, domain))
            for y in bd.ys:
                if y not in domain:
                    raise ValueError("%s boundary value %s leaves the domain %r" % (name, y, domain))
        grid = tuple(sorted(set(lower.xs) | set(upper.xs)))
        lo_vals = tuple(lower(x) for x in grid)
        up_vals = tuple(upper(x) for x in grid)
        for x, l, u in zip(grid, lo_vals, up_vals):
            if l > u:
                raise ValueError("lower %s exceeds upper %s at x = %s" % (l, u, x))
        self.domain = domain
        self.lower = lower
        self.upper = upper
        self.grid = grid
        self._lo_vals = lo_vals
        self._up_vals = up_vals

    @classmethod
    def singleton(cls, xs, ys) -> PWLMultimap:
        """A single-valued map ``x -> {f(x)}``; the domain is ``[xs[0], xs[-1]]``."""
        f = PWLBoundary(xs, ys)
        return cls(f.domain, f, f)

    @classmethod
    def from_points(cls, lower_xy, upper_xy) -> PWLMultimap:
        lower = PWLBoundary([p[0] for p in lower_xy], [p[1] for p in lower_xy])
        upper = PWLBoundary([p[0] for p in upper_xy], [p[1] for p in upper_xy])
        return cls(lower.domain, lower, upper)

    @property
    def is_singleton(self) -> bool:
        return self.lower == self.upper

    def fiber(self, x: RationalLike) -> RationalInterval:
        x = to_fraction(x)
        if x not in self.domain:
            raise DomainError("%s outside the domain %r" % (format_rational(x), self.domain))
        return RationalInterval(self.lower(x), self.upper(x))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PWLMultimap):
            return NotImplemented
        return (self.domain, self.lower, self.upper) == (other.domain, other.lower, other.upper)

    def __hash__(self) -> int:
        return hash((self.domain, self.lower, self.upper))

    def __repr__(self) -> str:
        if self.is_singleton:
            return "PWLMultimap(singleton %r)" % (self.lower,)
        return "PWLMultimap(lower=%r, upper=%r)" % (self.lower, self.upper)

    def to_json(self) -> dict:
        return {
            "kind": "pwl",
            "domain": self.domain.to_json(),
            "lower": self.lower.to_json(),
            "upper": self.upper.to_json(),
        }

    @classmethod
    def from_json(cls, data) -> PWLMultimap:
        if not isinstance(data, dict):
            raise ValueError("pwl map must be a JSON object")
        for key in ("domain", "lower", "upper"):
            if key not in data:
                raise ValueError("missing field %r" % key)
        return cls(RationalInterval.from_json(data["domain"]),
                   PWLBoundary.from_json(data["lower"]),
                   PWLBoundary.from_json(data["upper"]))


# --- standard examples ------------------------------------------------------


def tent() -> PWLMultimap:
    """``x -> {1 - |2x - 1|}`` on ``[0, 1]``."""
    return PWLMultimap.singleton([0, Fraction(1, 2), 1], [0, 1, 0])


def identity(a: RationalLike = 0, b: RationalLike = 1) -> PWLMultimap:
    return PWLMultimap.singleton([a, b], [a, b])


def constant(c: RationalLike, a: RationalLike = 0, b: RationalLike = 1) -> PWLMultimap:
    return PWLMultimap.singleton([a, b], [c, c])


def full(a: RationalLike = 0, b: RationalLike = 1) -> PWLMultimap:
    """Every fiber is the whole interval."""
    return PWLMultimap(RationalInterval(a, b), PWLBoundary.constant(a, b, a), PWLBoundary.constant(a, b, b))


# --- operations -------------------------------------------------------------


def image(fmap: PWLMultimap, J: RationalInterval) -> RationalInterval:
    """``F(J)`` for an interval ``J`` inside the domain.

    ``J`` is connected and the fibers are intervals varying continuously, so
    ``F(J) = [min_J lower, max_J upper]``.
    """
    if not fmap.domain.contains(J):
        raise DomainError("%r is not inside the domain %r" % (J, fmap.domain))
    lo, _ = fmap.lower.extrema(J.lo, J.hi)
    _, hi = fmap.upper.extrema(J.lo, J.hi)
    return RationalInterval(lo, hi)


def _solve(x0, x1, v0, v1, level) -> Fraction:
    """Where the segment from ``(x0, v0)`` to ``(x1, v1)`` takes the value ``level``."""
    return x0 + (level - v0) * (x1 - x0) / (v1 - v0)


def _crossing(x0, x1, a, b) -> Optional[Fraction]:
    """Interior crossing point of two linear functions given by their values at x0, x1."""
    d0 = a[0] - b[0]
    d1 = a[1] - b[1]
    if (d0 < 0 < d1) or (d1 < 0 < d0):
        return x0 + d0 * (x1 - x0) / (d0 - d1)
    return None


def compose(f: PWLMultimap, g: PWLMultimap, cap: int = DEFAULT_BREAKPOINT_CAP) -> PWLMultimap:
    """The multimap ``f o g``: ``x -> f([lg(x), ug(x)])``.

    The result is again piecewise linear.  Its breakpoints are among: ``g``'s
    breakpoints, the points where ``lg`` or ``ug`` meets one of ``f``'s
    breakpoints, and the points inside the resulting cells where two of the
    candidate linear pieces of the min (resp. max) cross.  Both boundaries are
    then evaluated exactly at all of them.
    """
    if f.domain != g.domain:
        raise DomainError("cannot compose maps on %r and %r" % (f.domain, g.domain))
    fgrid = f.grid
    points = set(g.grid)
    for i in range(len(g.grid) - 1):
        x0, x1 = g.grid[i], g.grid[i + 1]
        for v0, v1 in ((g._lo_vals[i], g._lo_vals[i + 1]), (g._up_vals[i], g._up_vals[i + 1])):
            if v0 == v1:
                continue
            lo, hi = min(v0, v1), max(v0, v1)
            for c in fgrid[bisect_right(fgrid, lo):bisect_left(fgrid, hi)]:
                points.add(_solve(x0, x1, v0, v1, c))
    cells = sorted(points)
    if len(cells) > cap:
        raise CapExceededError("composed breakpoints", len(cells), cap)

    lf, uf, lg, ug = f.lower, f.upper, g.lower, g.upper
    extra = []
    for x0, x1 in zip(cells, cells[1:]):
        a0, a1 = lg(x0), lg(x1)
        b0, b1 = ug(x0), ug(x1)
        # f-breakpoints strictly inside the fiber stay fixed across the open cell
        mid_lo, mid_hi = (a0 + a1) / 2, (b0 + b1) / 2
        inner = fgrid[bisect_right(fgrid, mid_lo):bisect_left(fgrid, mid_hi)]
        for bd, pick in ((lf, min), (uf, max)):
            terms = [(bd(a0), bd(a1)), (bd(b0), bd(b1))]
            if inner:
                c = pick(bd(y) for y in inner)
                terms.append((c, c))
            for i in range(len(terms)):
                for j in range(i + 1, len(terms)):
                    x = _crossing(x0, x1, terms[i], terms[j])
                    if x is not None:
                        extra.append(x)
    xs = sorted(set(cells).union(extra))
    if len(xs) > cap:
        raise CapExceededError("composed breakpoints", len(xs), cap)

    lo_ys, up_ys = [], []
    for x in xs:
        p, q = lg(x), ug(x)
        lo_ys.append(lf.extrema(p, q)[0])
        up_ys.append(uf.extrema(p, q)[1])
    return PWLMultimap(f.domain, PWLBoundary(xs, lo_ys), PWLBoundary(xs, up_ys))


def power(fmap: PWLMultimap, m: int, cap: int = DEFAULT_BREAKPOINT_CAP) -> PWLMultimap:
    """``F^m`` as ``F o F^(m-1)``."""
    if m < 1:
        raise ValueError("power must be >= 1, got %r" % (m,))
    result = fmap
    for _ in range(m - 1):
        result = compose(fmap, result, cap)
    return result


def _where_nonpositive(x0, x1, h0, h1) -> Optional[RationalInterval]:
    """``{x in [x0, x1] : h(x) <= 0}`` for ``h`` linear with ``h(x0)=h0``, ``h(x1)=h1``."""
    if h0 <= 0 and h1 <= 0:
        return RationalInterval(x0, x1)
    if h0 > 0 and h1 > 0:
        return None
    r = _solve(x0, x1, h0, h1, 0)
    return RationalInterval(x0, r) if h0 <= 0 else RationalInterval(r, x1)


def fixed_point_set(fmap: PWLMultimap) -> IntervalUnion:
    """``{x : lower(x) <= x <= upper(x)}``, i.e. the points with ``x in F(x)``."""
    grid, lv, uv = fmap.grid, fmap._lo_vals, fmap._up_vals
    parts = []
    for i in range(len(grid) - 1):
        x0, x1 = grid[i], grid[i + 1]
        below = _where_nonpositive(x0, x1, lv[i] - x0, lv[i + 1] - x1)
        above = _where_nonpositive(x0, x1, x0 - uv[i], x1 - uv[i + 1])
        if below is None or above is None:
            continue
        both = below.intersection(above)
        if both is not None:
            parts.append(both)
    return IntervalUnion(parts)


def periodic_point_set(fmap: PWLMultimap, m: int, cap: int = DEFAULT_BREAKPOINT_CAP) -> IntervalUnion:
    """``{x : x in F^m(x)}``.

    Every such ``x`` lies on a cyclic orbit of length ``m``, so it is a periodic
    point; its minimal period may be a proper divisor of ``m``.
    """
    return fixed_point_set(power(fmap, m, cap))
