"""Exact closed intervals with rational endpoints and finite unions of them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

RationalLike = Union[Fraction, int, str]


def to_fraction(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: they would silently smuggle binary rounding into
    computations that are meant to be exact.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            raise ValueError("not a rational: %r" % value) from None
    raise TypeError("expected int, Fraction or 'p/q' string, got %s" % type(value).__name__)


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


@dataclass(frozen=True, order=True)
class RationalInterval:
    """The closed interval ``[lo, hi]``; ``lo == hi`` is allowed."""

    lo: Fraction
    hi: Fraction

    def __init__(self, lo: RationalLike, hi: RationalLike):
        lo, hi = to_fraction(lo), to_fraction(hi)
        if lo > hi:
            raise ValueError("empty interval [%s, %s]" % (lo, hi))
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x: RationalLike) -> RationalInterval:
        return cls(x, x)

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        x = to_fraction(x)
        return self.lo <= x <= self.hi

    def contains(self, other: RationalInterval) -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersection(self, other: RationalInterval) -> Optional[RationalInterval]:
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return None
        return RationalInterval(lo, hi)

    def hull(self, other: RationalInterval) -> RationalInterval:
        return RationalInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def meets_interior(self, other: RationalInterval) -> bool:
        """True when ``self`` meets the open interval ``(other.lo, other.hi)``."""
        return self.lo < other.hi and self.hi > other.lo

    def to_json(self) -> list:
        return [format_rational(self.lo), format_rational(self.hi)]

    @classmethod
    def from_json(cls, data) -> RationalInterval:
        if not isinstance(data, (list, tuple)) or len(data) != 2:
            raise ValueError("interval must be a two-element list [lo, hi]")
        return cls(data[0], data[1])

    @classmethod
    def parse(cls, text: str) -> RationalInterval:
        """Parse ``"lo,hi"`` (optionally bracketed) as used on the command line."""
        body = text.strip().strip("[]")
        parts = body.split(",")
        if len(parts) != 2:
            raise ValueError("expected 'lo,hi', got %r" % text)
        return cls(parts[0], parts[1])

    def __repr__(self) -> str:
        return "[%s, %s]" % (format_rational(self.lo), format_rational(self.hi))


class IntervalUnion:
    """A normalized finite union of closed rational intervals.

    Parts are kept sorted and strictly separated (``prev.hi < next.lo``);
    overlapping or touching inputs are merged on construction.
    """

    __slots__ = ("parts",)

    def __init__(self, intervals: Iterable[RationalInterval] = ()):
        merged: list[RationalInterval] = []
        for iv in sorted(intervals):
            if merged and iv.lo <= merged[-1].hi:
                if iv.hi > merged[-1].hi:
                    merged[-1] = RationalInterval(merged[-1].lo, iv.hi)
            else:
                merged.append(iv)
        self.parts: tuple[RationalInterval, ...] = tuple(merged)

    @classmethod
    def of_points(cls, *points: RationalLike) -> IntervalUnion:
        return cls(RationalInterval.point(p) for p in points)

    def __bool__(self) -> bool:
        return bool(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntervalUnion):
            return NotImplemented
        return self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def __contains__(self, x) -> bool:
        x = to_fraction(x)
        return any(p.lo <= x <= p.hi for p in self.parts)

    def union(self, other: IntervalUnion) -> IntervalUnion:
        return IntervalUnion(self.parts + other.parts)

    def intersects(self, iv: RationalInterval) -> bool:
        return any(p.lo <= iv.hi and iv.lo <= p.hi for p in self.parts)

    def intersects_half_open(self, lo: Fraction, hi: Fraction, closed: bool = False) -> bool:
        """Does the union meet ``[lo, hi)`` (or ``[lo, hi]`` when ``closed``)?"""
        for p in self.parts:
            below_hi = p.lo <= hi if closed else p.lo < hi
            if below_hi and p.hi >= lo:
                return True
        return False

    def gaps(self, domain: RationalInterval) -> list[tuple[Fraction, Fraction]]:
        """The open intervals ``(lo, hi)`` of ``domain`` not covered by the union."""
        out = []
        cursor = domain.lo
        for p in self.parts:
            if p.lo > cursor:
                out.append((cursor, min(p.lo, domain.hi)))
            cursor = max(cursor, p.hi)
            if cursor >= domain.hi:
                break
        if cursor < domain.hi:
            out.append((cursor, domain.hi))
        return [g for g in out if g[0] < g[1]]

    def points(self) -> list[Fraction]:
        """Endpoints of a union made only of degenerate parts."""
        if any(not p.degenerate for p in self.parts):
            raise ValueError("union contains nondegenerate parts")
        return [p.lo for p in self.parts]

    def to_json(self) -> list:
        return [p.to_json() for p in self.parts]

    def __repr__(self) -> str:
        if not self.parts:
            return "IntervalUnion(∅)"
        return "IntervalUnion(%s)" % " ∪ ".join(repr(p) for p in self.parts)
