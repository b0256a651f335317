"""Exhaustive agreement sweep between the fast procedures and the oracles."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from typing import Optional

from . import finite, oracle
from .finite import PROPERTIES, FiniteRelationSystem

# strongest first; each property implies the next
CHAIN = ("mixing", "weakly_mixing", "totally_transitive", "bitransitive", "transitive")


def chain_violation(verdicts: dict[str, bool]) -> Optional[tuple[str, str]]:
    """The first link ``stronger => weaker`` that fails, or None."""
    for stronger, weaker in zip(CHAIN, CHAIN[1:]):
        if verdicts[stronger] and not verdicts[weaker]:
            return stronger, weaker
    return None


def check_dense_orbit(sys: FiniteRelationSystem, transitive: bool) -> Optional[str]:
    orbit = finite.dense_orbit(sys)
    if transitive != (orbit is not None):
        return "dense orbit %s but transitive=%s" % ("present" if orbit else "absent", transitive)
    if orbit is not None:
        if not orbit.is_orbit_of(sys):
            return "dense orbit %r violates the successor relation" % (orbit.points,)
        if set(orbit.points) != set(range(sys.state_count)):
            return "dense orbit %r misses states" % (orbit.points,)
    return None


def _empty_summary() -> dict:
    return {
        "systems_checked": 0,
        "oracle_disagreements": 0,
        "chain_violations": 0,
        "dense_orbit_failures": 0,
        "property_counts": {p: 0 for p in PROPERTIES},
        "witnesses": {"transitive_not_bitransitive": None, "bitransitive_not_totally_transitive": None},
        "counterexample": None,
    }


def _sweep_range(args) -> dict:
    state_count, start, stop = args
    out = _empty_summary()
    spec = oracle.EnumerationSpec(state_count)
    witnesses = out["witnesses"]
    for sys in oracle.enumerate_systems(spec, start, stop):
        out["systems_checked"] += 1
        fast = finite.classify(sys)
        slow = oracle.oracle_classify(sys)
        for p in PROPERTIES:
            out["property_counts"][p] += fast[p]
        problem = None
        if fast != slow:
            out["oracle_disagreements"] += 1
            problem = "fast and oracle classifications differ"
        link = chain_violation(fast)
        if link:
            out["chain_violations"] += 1
            problem = problem or "%s holds but %s does not" % link
        dense_problem = check_dense_orbit(sys, fast["transitive"])
        if dense_problem:
            out["dense_orbit_failures"] += 1
            problem = problem or dense_problem
        if problem and out["counterexample"] is None:
            out["counterexample"] = {"system": sys.to_json(), "fast": fast, "oracle": slow, "reason": problem}
        if witnesses["transitive_not_bitransitive"] is None and fast["transitive"] and not fast["bitransitive"]:
            witnesses["transitive_not_bitransitive"] = sys.to_json()
        if (witnesses["bitransitive_not_totally_transitive"] is None
                and fast["bitransitive"] and not fast["totally_transitive"]):
            witnesses["bitransitive_not_totally_transitive"] = sys.to_json()
    return out


def _merge(parts: list[dict]) -> dict:
    out = _empty_summary()
    for part in parts:
        for key in ("systems_checked", "oracle_disagreements", "chain_violations", "dense_orbit_failures"):
            out[key] += part[key]
        for p in PROPERTIES:
            out["property_counts"][p] += part["property_counts"][p]
        for name, w in part["witnesses"].items():
            if out["witnesses"][name] is None:
                out["witnesses"][name] = w
        if out["counterexample"] is None:
            out["counterexample"] = part["counterexample"]
    return out


def sweep(state_count: int, workers: int = 1) -> dict:
    """Check every total relation on ``state_count`` states.

    Compares the five fast verdicts with the oracles, checks the implication
    chain and the dense-orbit equivalence, and records the first (in
    enumeration order) strictness witnesses and counterexample.  The result
    does not depend on ``workers``.
    """
    total = oracle.EnumerationSpec(state_count).total
    workers = max(1, min(workers, total))
    bounds = [total * i // workers for i in range(workers + 1)]
    jobs = [(state_count, bounds[i], bounds[i + 1]) for i in range(workers)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_sweep_range, jobs))
    else:
        parts = [_sweep_range(job) for job in jobs]
    summary = _merge(parts)
    summary["states"] = state_count
    summary["ok"] = not (summary["oracle_disagreements"] or summary["chain_violations"]
                         or summary["dense_orbit_failures"])
    return summary
