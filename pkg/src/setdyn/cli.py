"""Command-line front end: classify, orbit, cover, validate.

Every command reads and writes JSON.  Input documents carry a ``"kind"`` field,
``"finite"`` or ``"pwl"``.  Exit codes: 0 success, 1 validation mismatch,
2 input error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from typing import Optional, Sequence

from . import finite, interval_dynamics, pwl
from .errors import CapExceededError, SetDynError
from .finite import PROPERTIES, FiniteRelationSystem
from .pwl import PWLMultimap
from .rational import RationalInterval, format_rational, to_fraction
from .validate import sweep

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(Exception):
    pass


def _load(path: str):
    try:
        if path == "-":
            raw = sys.stdin.buffer.read()
        else:
            with open(path, "rb") as fh:
                raw = fh.read()
    except OSError as exc:
        raise InputError("cannot read %s: %s" % (path, exc.strerror)) from None
    digest = "sha256:" + hashlib.sha256(raw).hexdigest()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError("%s: line %d column %d: %s" % (path, exc.lineno, exc.colno, exc.msg)) from None
    except UnicodeDecodeError:
        raise InputError("%s: not UTF-8 text" % path) from None
    if not isinstance(doc, dict):
        raise InputError("%s: top level must be a JSON object" % path)
    kind = doc.get("kind")
    try:
        if kind == "finite":
            return digest, kind, FiniteRelationSystem.from_json(doc)
        if kind == "pwl":
            return digest, kind, PWLMultimap.from_json(doc)
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError("%s: %s document: %s" % (path, kind, exc)) from None
    raise InputError("%s: field 'kind' must be \"finite\" or \"pwl\", got %r" % (path, kind))


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True))
    sys.stdout.write("\n")


def _finite_report(system: FiniteRelationSystem) -> dict:
    verdicts = finite.classify(system)
    orbit = finite.dense_orbit(system)
    per = finite.period(system) if finite.is_strongly_connected(system) else None
    return {
        "verdicts": {p: {"mode": "exact", "value": verdicts[p]} for p in PROPERTIES},
        "certificates": {
            "dense_orbit": orbit.to_json() if orbit else None,
            "period": per,
            "hitting_sets": [hs.to_json() for hs in finite.hitting_sets_from(system, 0)],
        },
    }


def _pwl_report(fmap: PWLMultimap, resolution: int, horizon: int, workers: int) -> dict:
    record = interval_dynamics.classify_at_resolution(fmap, resolution, horizon, workers)

    def evidence(value):
        return {"mode": "evidence", "value": value, "resolution": resolution, "horizon": horizon}

    # On an interval, covering is mixing, and mixing implies the other four.
    verdicts = {p: evidence(record.mixing_evidence) for p in PROPERTIES}
    verdicts["transitive"] = evidence(record.transitivity_evidence)
    return {"verdicts": verdicts, "certificates": {"classification": record.to_json()}}


def cmd_classify(args) -> int:
    digest, kind, obj = _load(args.input)
    if kind == "finite":
        report = _finite_report(obj)
    else:
        report = _pwl_report(obj, args.resolution, args.horizon, args.workers)
    report["input_digest"] = digest
    report["kind"] = kind
    _emit(report)
    return EXIT_OK


def cmd_orbit(args) -> int:
    _, kind, obj = _load(args.input)
    if kind == "finite":
        if args.depth is None:
            raise InputError("finite input needs --depth")
        try:
            x = int(args.start)
        except ValueError:
            raise InputError("--from must be a state index for finite input") from None
        orbits = finite.orbits_from(obj, x, args.depth, args.cap)
        _emit([o.to_json() for o in orbits])
        return EXIT_OK
    if args.steps is None:
        raise InputError("pwl input needs --steps")
    policies = args.policy or list(interval_dynamics.POLICIES)
    out = []
    for policy in policies:
        pts = interval_dynamics.sample_orbit(obj, to_fraction(args.start), args.steps, policy, args.seed)
        out.append({"policy": policy, "points": [format_rational(p) for p in pts]})
    _emit(out)
    return EXIT_OK


def cmd_cover(args) -> int:
    _, kind, obj = _load(args.input)
    if kind != "pwl":
        raise InputError("cover needs a pwl document, got kind %r" % kind)
    result = interval_dynamics.covers(obj, args.J, args.target, args.horizon)
    trace = interval_dynamics.iterate_image(obj, args.J, args.horizon)
    _emit({
        "M": result.first if result else None,
        "persistent": bool(result and result.persistent),
        "trace": [iv.to_json() for iv in trace],
    })
    return EXIT_OK


def cmd_validate(args) -> int:
    if not 1 <= args.states <= 4:
        raise InputError("--states must be between 1 and 4")
    summary = sweep(args.states, args.workers)
    _emit(summary)
    return EXIT_OK if summary["ok"] else EXIT_MISMATCH


def _interval(text: str) -> RationalInterval:
    try:
        return RationalInterval.parse(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="setdyn", description="Transitivity and mixing of set-valued maps.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="five-way transitivity/mixing report")
    p.add_argument("input", help="JSON document ('-' for stdin)")
    p.add_argument("--resolution", type=int, default=4, help="grid is 2^resolution cells (pwl only)")
    p.add_argument("--horizon", type=int, default=64, help="iterations per covering test (pwl only)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("orbit", help="enumerate (finite) or sample (pwl) orbit prefixes")
    p.add_argument("input")
    p.add_argument("--from", dest="start", required=True, help="state index or rational starting point")
    p.add_argument("--depth", type=int, help="prefix length for finite input")
    p.add_argument("--cap", type=int, default=finite.DEFAULT_ORBIT_CAP)
    p.add_argument("--steps", type=int, help="orbit length for pwl input")
    p.add_argument("--policy", action="append", choices=interval_dynamics.POLICIES,
                   help="fiber selector; repeat for several (default: all)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("cover", help="first index from which a target stays covered")
    p.add_argument("input")
    p.add_argument("--J", type=_interval, required=True, help="source interval 'lo,hi'")
    p.add_argument("--target", type=_interval, required=True, help="target interval 'c,d'")
    p.add_argument("--horizon", type=int, default=64)
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("validate", help="exhaustive fast-vs-oracle sweep")
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapExceededError as exc:
        print("setdyn: %s" % exc, file=sys.stderr)
        return EXIT_CAP
    except (InputError, SetDynError, ValueError) as exc:
        print("setdyn: %s" % exc, file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
