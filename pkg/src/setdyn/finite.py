"""Set-valued dynamics on a finite discrete space.

A set-valued map on ``{0, ..., n-1}`` is a total relation: every state has a
nonempty set of successors.  Every subset of a discrete space is open, so the
open-set quantifiers of transitivity and mixing reduce to quantifiers over
ordered pairs of states, and everything here is an exact graph computation.

Successor sets are also kept as integer bitmasks (bit ``t`` of ``mask[s]`` is
set when ``t`` is a successor of ``s``); most procedures work on those.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from .errors import CapExceededError, NotStronglyConnectedError

PROPERTIES = ("transitive", "bitransitive", "totally_transitive", "weakly_mixing", "mixing")
DEFAULT_ORBIT_CAP = 1_000_000


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _image(masks: Sequence[int], subset: int) -> int:
    out = 0
    while subset:
        low = subset & -subset
        out |= masks[low.bit_length() - 1]
        subset ^= low
    return out


@dataclass(frozen=True)
class FiniteRelationSystem:
    """A set-valued map ``F`` on the discrete space ``{0, ..., state_count-1}``.

    ``successors[s]`` is ``F(s)``, stored as a sorted tuple.  Construction
    rejects empty successor sets and out-of-range indices.
    """

    state_count: int
    successors: tuple[tuple[int, ...], ...]
    masks: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.state_count
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise ValueError("state_count must be a positive integer, got %r" % (n,))
        if len(self.successors) != n:
            raise ValueError("expected %d successor sets, got %d" % (n, len(self.successors)))
        rows = []
        for s, succ in enumerate(self.successors):
            row = tuple(sorted(set(succ)))
            if not row:
                raise ValueError("state %d has no successors" % s)
            for t in row:
                if isinstance(t, bool) or not isinstance(t, int) or not 0 <= t < n:
                    raise ValueError("successor %r of state %d is out of range [0, %d)" % (t, s, n))
            rows.append(row)
        object.__setattr__(self, "successors", tuple(rows))
        object.__setattr__(self, "masks", tuple(sum(1 << t for t in row) for row in rows))

    @classmethod
    def from_masks(cls, masks: Sequence[int]) -> FiniteRelationSystem:
        return cls(len(masks), tuple(tuple(_bits(m)) for m in masks))

    @classmethod
    def cycle(cls, n: int) -> FiniteRelationSystem:
        return cls(n, tuple(((s + 1) % n,) for s in range(n)))

    @classmethod
    def identity(cls, n: int) -> FiniteRelationSystem:
        return cls(n, tuple((s,) for s in range(n)))

    def __getitem__(self, s: int) -> tuple[int, ...]:
        return self.successors[s]

    def to_json(self) -> dict:
        return {"states": self.state_count, "successors": [list(r) for r in self.successors]}

    @classmethod
    def from_json(cls, data) -> FiniteRelationSystem:
        if not isinstance(data, dict):
            raise ValueError("finite system must be a JSON object")
        for key in ("states", "successors"):
            if key not in data:
                raise ValueError("missing field %r" % key)
        states, succ = data["states"], data["successors"]
        if not isinstance(succ, list) or not all(isinstance(r, list) for r in succ):
            raise ValueError("field 'successors' must be a list of lists")
        return cls(states, tuple(tuple(r) for r in succ))


@dataclass(frozen=True)
class Orbit:
    """A finite orbit prefix ``(x_0, ..., x_k)``.

    ``period`` is the smallest ``m`` in ``[1, k]`` with ``x_i == x_{i+m}`` for
    every represented ``i``, or None.  Such an ``m`` means the prefix is the
    start of a genuine periodic orbit of minimal period ``m``: the cycle
    ``x_0 -> ... -> x_m = x_0`` lies inside the prefix.
    """

    points: tuple[int, ...]
    period: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if not self.points:
            raise ValueError("an orbit has at least one point")
        if self.period is not None and self.period != prefix_period(self.points):
            raise ValueError("period %r is not the minimal period witnessed by %r" % (self.period, self.points))

    @classmethod
    def of(cls, points: Iterable[int]) -> Orbit:
        points = tuple(points)
        return cls(points, prefix_period(points))

    def __len__(self) -> int:
        return len(self.points)

    def has_period(self, m: int) -> bool:
        """Whether ``x_i == x_{i+m}`` for every ``i`` the prefix represents."""
        k = len(self.points) - 1
        if m < 1 or m > k:
            return False
        return all(self.points[i] == self.points[i + m] for i in range(k - m + 1))

    def is_orbit_of(self, sys: FiniteRelationSystem) -> bool:
        pts = self.points
        if not all(0 <= x < sys.state_count for x in pts):
            return False
        return all((sys.masks[a] >> b) & 1 for a, b in zip(pts, pts[1:]))

    def to_json(self) -> dict:
        return {"points": list(self.points), "period": self.period}

    @classmethod
    def from_json(cls, data) -> Orbit:
        return cls(tuple(data["points"]), data.get("period"))


def prefix_period(points: Sequence[int]) -> Optional[int]:
    k = len(points) - 1
    for m in range(1, k + 1):
        if all(points[i] == points[i + m] for i in range(k - m + 1)):
            return m
    return None


@dataclass(frozen=True)
class HittingSet:
    """The set of path lengths ``{n >= 1 : target reachable from source in n steps}``.

    Lengths up to ``transient_bound`` are listed explicitly.  Beyond it, ``n``
    belongs to the set exactly when ``n % tail_period`` is in
    ``tail_residues``; ``tail_period == 0`` means no lengths beyond the bound.
    """

    source: int
    target: int
    transient_lengths: tuple[int, ...]
    tail_period: int
    tail_residues: tuple[int, ...]
    transient_bound: int

    def __contains__(self, n: int) -> bool:
        if n < 1:
            return False
        if n <= self.transient_bound:
            return n in self.transient_lengths
        if self.tail_period == 0:
            return False
        return n % self.tail_period in self.tail_residues

    def lengths(self, upto: int) -> list[int]:
        return [n for n in range(1, upto + 1) if n in self]

    @property
    def eventually_all(self) -> bool:
        return self.tail_period == 1 and self.tail_residues == (0,)

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "transient_bound": self.transient_bound,
            "transient_lengths": list(self.transient_lengths),
            "tail_period": self.tail_period,
            "tail_residues": list(self.tail_residues),
        }


def wielandt_bound(n: int) -> int:
    return (n - 1) ** 2 + 1


# --- relation algebra -------------------------------------------------------


def _compose_masks(first: Sequence[int], second: Sequence[int]) -> tuple[int, ...]:
    """Relational composition: one step of ``first`` followed by one of ``second``."""
    return tuple(_image(second, row) for row in first)


def power_relation(sys: FiniteRelationSystem, n: int) -> FiniteRelationSystem:
    """The relation ``F^n``: ``t`` is a successor of ``s`` iff a length-``n`` path joins them."""
    if n < 1:
        raise ValueError("power must be >= 1, got %r" % (n,))
    result = None
    base = sys.masks
    while n:
        if n & 1:
            result = base if result is None else _compose_masks(result, base)
        n >>= 1
        if n:
            base = _compose_masks(base, base)
    return FiniteRelationSystem.from_masks(result)


def product_relation(a: FiniteRelationSystem, b: FiniteRelationSystem) -> FiniteRelationSystem:
    """``F x G`` on pairs; the pair ``(s, t)`` is state ``s * b.state_count + t``."""
    nb = b.state_count
    succ = tuple(
        tuple(s2 * nb + t2 for s2 in a[s] for t2 in b[t])
        for s in range(a.state_count)
        for t in range(nb)
    )
    return FiniteRelationSystem(a.state_count * nb, succ)


# --- strongly connected components and period -------------------------------


def strongly_connected_components(sys: FiniteRelationSystem) -> list[frozenset[int]]:
    """Tarjan's algorithm, iterative.

    Components come out in reverse topological order of the condensation:
    the first one is a sink, the last one a source.
    """
    n = sys.state_count
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components: list[frozenset[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            succ = sys.successors[v]
            if i < len(succ):
                work[-1] = (v, i + 1)
                w = succ[i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                components.append(frozenset(comp))
    return components


def is_strongly_connected(sys: FiniteRelationSystem) -> bool:
    return len(strongly_connected_components(sys)) == 1


def _component_period(sys: FiniteRelationSystem, comp: frozenset[int]) -> int:
    """gcd of cycle lengths inside ``comp``; 0 if it carries no cycle."""
    root = min(comp)
    level = {root: 0}
    queue = deque([root])
    g = 0
    while queue:
        v = queue.popleft()
        for w in sys.successors[v]:
            if w not in comp:
                continue
            if w in level:
                g = math.gcd(g, level[v] + 1 - level[w])
            else:
                level[w] = level[v] + 1
                queue.append(w)
    return g


def period(sys: FiniteRelationSystem) -> int:
    """The gcd of all cycle lengths of a strongly connected relation.

    Raises
    ------
    NotStronglyConnectedError
        If the relation has more than one strongly connected component.  The
        error carries a (source, sink) component pair with no path from the
        sink back to the source.
    """
    comps = strongly_connected_components(sys)
    if len(comps) > 1:
        raise NotStronglyConnectedError((comps[-1], comps[0]))
    return _component_period(sys, comps[0])


# --- the five notions -------------------------------------------------------


def is_transitive(sys: FiniteRelationSystem) -> bool:
    """Every ordered pair of states (including ``(s, s)``) is joined by a path of length >= 1."""
    if not is_strongly_connected(sys):
        return False
    if sys.state_count == 1:
        return bool(sys.masks[0] & 1)
    return True


def is_mixing(sys: FiniteRelationSystem) -> bool:
    """Strongly connected with period 1, i.e. the relation is primitive."""
    return is_transitive(sys) and period(sys) == 1


def is_bitransitive(sys: FiniteRelationSystem) -> bool:
    return is_transitive(power_relation(sys, 2))


def is_totally_transitive(sys: FiniteRelationSystem) -> bool:
    # A strongly connected relation of period p splits under F^n into
    # gcd(n, p) classes that cannot reach each other.
    return is_transitive(sys) and period(sys) == 1


def is_totally_transitive_bounded(sys: FiniteRelationSystem, bound: int) -> bool:
    """Check ``F^n`` transitive for every ``1 <= n <= bound`` directly."""
    power = sys
    for n in range(1, bound + 1):
        if n > 1:
            power = FiniteRelationSystem.from_masks(_compose_masks(power.masks, sys.masks))
        if not is_transitive(power):
            return False
    return True


def _product_reaches_all(masks: Sequence[int], n: int) -> bool:
    """Does ``(0, 0)`` reach every pair under ``R x R``, ``R`` given by ``masks``?

    ``reach[s]`` is the bitmask of ``t`` such that ``(s, t)`` has been reached;
    the product is never materialized.
    """
    full = (1 << n) - 1
    reach = [0] * n
    pending = [0] * n
    reach[0] = pending[0] = 1
    work = [0]
    while work:
        s = work.pop()
        delta = pending[s]
        if not delta:
            continue
        pending[s] = 0
        targets = _image(masks, delta)
        for s2 in _bits(masks[s]):
            new = targets & ~reach[s2]
            if new:
                reach[s2] |= new
                pending[s2] |= new
                work.append(s2)
    return all(r == full for r in reach)


def is_weakly_mixing(sys: FiniteRelationSystem) -> bool:
    """Transitivity of ``F x F``.

    Equivalent to ``is_transitive(product_relation(sys, sys))``, but the
    product is explored implicitly with bitmasks instead of being built.
    """
    # F x F projects onto F, so a non-transitive F has a non-transitive product.
    if not is_transitive(sys):
        return False
    n = sys.state_count
    fwd = sys.masks
    rev = [0] * n
    for s in range(n):
        for t in sys.successors[s]:
            rev[t] |= 1 << s
    return _product_reaches_all(fwd, n) and _product_reaches_all(rev, n)


def classify(sys: FiniteRelationSystem) -> dict[str, bool]:
    """Exact verdicts for all five notions, keyed by ``PROPERTIES``."""
    return {
        "transitive": is_transitive(sys),
        "bitransitive": is_bitransitive(sys),
        "totally_transitive": is_totally_transitive(sys),
        "weakly_mixing": is_weakly_mixing(sys),
        "mixing": is_mixing(sys),
    }


# --- orbits -----------------------------------------------------------------


def _shortest_path(sys: FiniteRelationSystem, start: int, goal_mask: int) -> list[int]:
    """Shortest path from ``start`` to the nearest state in ``goal_mask`` (which excludes ``start``)."""
    parent = {start: start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        if (goal_mask >> v) & 1:
            path = [v]
            while path[-1] != start:
                path.append(parent[path[-1]])
            return path[::-1]
        for w in sys.successors[v]:
            if w not in parent:
                parent[w] = v
                queue.append(w)
    return []


def dense_orbit(sys: FiniteRelationSystem, start: int = 0) -> Optional[Orbit]:
    """An orbit prefix visiting every state, or None if ``sys`` is not transitive.

    On a discrete space an orbit is dense exactly when it visits every point,
    and a finite prefix suffices because every state has a successor to
    continue from.  Built greedily from shortest paths to the nearest
    unvisited state.
    """
    if not is_transitive(sys):
        return None
    n = sys.state_count
    points = [start]
    unvisited = ((1 << n) - 1) & ~(1 << start)
    while unvisited:
        path = _shortest_path(sys, points[-1], unvisited)
        points.extend(path[1:])
        for x in path[1:]:
            unvisited &= ~(1 << x)
    return Orbit.of(points)


def count_orbit_prefixes(sys: FiniteRelationSystem, x: int, depth: int) -> int:
    counts = [0] * sys.state_count
    counts[x] = 1
    for _ in range(depth):
        nxt = [0] * sys.state_count
        for s, c in enumerate(counts):
            if c:
                for t in sys.successors[s]:
                    nxt[t] += c
        counts = nxt
    return sum(counts)


def orbits_from(sys: FiniteRelationSystem, x: int, depth: int, cap: int = DEFAULT_ORBIT_CAP) -> list[Orbit]:
    """All orbit prefixes ``(x_0 = x, ..., x_depth)``, in lexicographic order.

    This is the depth-``depth`` truncation of the complete orbit ``CO(x)``.
    Each prefix carries its period certificate when it has one.

    Raises ``CapExceededError`` when there are more than ``cap`` prefixes; the
    count is computed before anything is enumerated.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if not 0 <= x < sys.state_count:
        raise ValueError("state %r out of range" % (x,))
    total = count_orbit_prefixes(sys, x, depth)
    if total > cap:
        raise CapExceededError("orbit prefixes", total, cap)
    out = []
    prefix = [x]

    def extend():
        if len(prefix) == depth + 1:
            out.append(Orbit.of(prefix))
            return
        for t in sys.successors[prefix[-1]]:
            prefix.append(t)
            extend()
            prefix.pop()

    extend()
    return out


def fixed_points(sys: FiniteRelationSystem) -> frozenset[int]:
    return frozenset(s for s in range(sys.state_count) if (sys.masks[s] >> s) & 1)


def periodic_points(sys: FiniteRelationSystem) -> dict[int, int]:
    """Map each state lying on a cycle to the length of the shortest cycle through it.

    A state can sit on periodic orbits of several minimal periods; the
    smallest is reported.
    """
    out = {}
    for s in range(sys.state_count):
        dist = {s: 0}
        queue = deque([s])
        best = None
        while queue and best is None:
            v = queue.popleft()
            for w in sys.successors[v]:
                if w == s:
                    best = dist[v] + 1
                    break
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        if best is not None:
            out[s] = best
    return out


# --- hitting sets -----------------------------------------------------------


def _reachable(masks: Sequence[int], start_mask: int) -> int:
    seen = start_mask
    frontier = start_mask
    while frontier:
        frontier = _image(masks, frontier) & ~seen
        seen |= frontier
    return seen


def _tail(bits: Sequence[bool], start: int, window: int) -> tuple[int, tuple[int, ...]]:
    """Smallest period (a divisor of ``window``) of ``bits[start:start+window]``, read cyclically."""
    seg = bits[start:start + window]
    if not any(seg):
        return 0, ()
    for p in sorted(d for d in range(1, window + 1) if window % d == 0):
        if all(seg[i] == seg[(i + p) % window] for i in range(window)):
            # seg[i] corresponds to length start + i + 1
            residues = sorted({(start + i + 1) % p for i in range(p) if seg[i]})
            return p, tuple(residues)
    raise AssertionError("unreachable: the window itself is a period")


def hitting_sets_from(sys: FiniteRelationSystem, u: int) -> list[HittingSet]:
    """``hitting_set(sys, u, v)`` for every target ``v`` at once."""
    n = sys.state_count
    bound = wielandt_bound(n)
    masks = sys.masks
    comps = strongly_connected_components(sys)
    from_u = _reachable(masks, masks[u])
    rev = [0] * n
    for s in range(n):
        for t in sys.successors[s]:
            rev[t] |= 1 << s

    comp_periods = []
    for comp in comps:
        p = _component_period(sys, comp)
        if p:
            comp_mask = sum(1 << s for s in comp)
            comp_periods.append((comp_mask, p))

    # Lengths beyond the bound repeat with a period dividing the lcm of the
    # periods of the cyclic components lying on some u -> v path.
    windows = []
    for v in range(n):
        to_v = _reachable(rev, 1 << v) | (1 << v)
        on_path = [p for cm, p in comp_periods if cm & from_u and cm & to_v]
        windows.append(math.lcm(*on_path) if on_path else 0)

    horizon = bound + max(windows)
    layers = []
    layer = 1 << u
    for _ in range(horizon):
        layer = _image(masks, layer)
        layers.append(layer)

    out = []
    for v in range(n):
        bits = [bool((layer >> v) & 1) for layer in layers]
        transient = tuple(i + 1 for i in range(bound) if bits[i])
        if windows[v]:
            p, residues = _tail(bits, bound, windows[v])
        else:
            p, residues = 0, ()
        out.append(HittingSet(u, v, transient, p, residues, bound))
    return out


def hitting_set(sys: FiniteRelationSystem, u: int, v: int) -> HittingSet:
    """Exact ``N({u}, {v})``: the lengths of all paths from ``u`` to ``v``.

    The transient bound is Wielandt's ``(n-1)^2 + 1``, the largest index of
    convergence of an ``n``-state Boolean matrix; after it the length set is
    purely periodic.
    """
    for name, s in (("u", u), ("v", v)):
        if not 0 <= s < sys.state_count:
            raise ValueError("%s = %r out of range" % (name, s))
    return hitting_sets_from(sys, u)[v]
