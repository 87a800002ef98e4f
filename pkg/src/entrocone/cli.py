"""``entrocone`` command line.

Exit codes: 0 success, 1 verification failure, 2 internal invariant breach,
3 input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .errors import EntroconeError, InvariantViolation, ParseError

EXIT_OK, EXIT_FAIL, EXIT_BUG, EXIT_INPUT = 0, 1, 2, 3
EXPECTED_RAYS = {"smc": (41, 11), "abc": (35, 10)}


class CliFailure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# -- io helpers ---------------------------------------------------------------

def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as e:
        raise CliFailure(EXIT_INPUT, f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: {e}") from e


def _sha256(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _base(text: str):
    if text == "e":
        return math.e
    try:
        b = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("base must be an integer >= 2 or 'e'")
    if b < 2:
        raise argparse.ArgumentTypeError("base must be an integer >= 2 or 'e'")
    return b


def threads(args) -> int:
    """Requested worker count: flag, then ENTROCONE_THREADS, then cores."""
    if getattr(args, "threads", None):
        return args.threads
    env = os.environ.get("ENTROCONE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise CliFailure(EXIT_INPUT, f"ENTROCONE_THREADS={env!r} is not an integer")
    return os.cpu_count() or 1


def _timestamp() -> str:
    # honour SOURCE_DATE_EPOCH so manifests can be made reproducible too
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = int(epoch) if epoch else time.time()
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(t))


def write_manifest(out: str, args, inputs: Sequence[str] = (), seed=None) -> dict:
    manifest = {
        "command": args.command,
        "arguments": {k: v for k, v in sorted(vars(args).items())
                      if k not in ("func", "command") and v is not None},
        "seed": seed,
        "tool_version": __version__,
        "threads": threads(args),
        "input_hashes": {p: _sha256(p) for p in inputs},
        "timestamp": _timestamp(),
    }
    manifest["arguments"] = json.loads(json.dumps(manifest["arguments"], default=str))
    Path(f"{out}.manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")
    return manifest


def _emit(args, payload: str, inputs: Sequence[str] = (), seed=None) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(payload)
        write_manifest(args.out, args, inputs, seed)
    else:
        sys.stdout.write(payload)


def _load_vector(path: str):
    from .geometry.vectors import lambda4_vector
    data = _read_json(path)
    coords = data.get("coords") if isinstance(data, dict) else data
    if not isinstance(coords, list) or len(coords) != 15:
        raise ParseError(f"{path}: expected 15 coordinates ([1],[2],[3],[4],[12],...,[1234])")
    try:
        return lambda4_vector([Fraction(str(x)) for x in coords])
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"{path}: bad coordinate: {e}") from e


def load_diagram(path: str):
    """A diagram from any of the JSON forms: diagram, full diagram, group
    diagram or single space."""
    from .diagrams import Diagram, full_diagram_from_json, single_space
    from .groups import group_diagram_from_json, realize
    from .spaces import FiniteProbabilitySpace
    data = _read_json(path)
    if not isinstance(data, dict):
        raise ParseError(f"{path}: expected a JSON object")
    try:
        if "shape" in data:
            return Diagram.from_json(data)
        if "support" in data:
            return full_diagram_from_json(data)
        if "cyclic_orders" in data:
            return realize(group_diagram_from_json(data))
        if "atoms" in data:
            return single_space(FiniteProbabilitySpace.from_json(data))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise ParseError(f"{path}: malformed: {e!r}") from e
    raise ParseError(f"{path}: unrecognized format (keys {sorted(data)})")


def _load_space(path: str):
    from .spaces import FiniteProbabilitySpace
    data = _read_json(path)
    try:
        return FiniteProbabilitySpace.from_json(data)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise ParseError(f"{path}: malformed space: {e!r}") from e


def _s(x) -> str:
    return str(x) if isinstance(x, (Fraction, int)) else repr(float(x))


# -- subcommands --------------------------------------------------------------

def cmd_verify_chart(args) -> int:
    from .geometry.chart import expanded, ning_chart, printed_row_certificate, verify_chart
    rows = None
    if args.row:
        try:
            rows = [int(args.row.lstrip("a"))]
        except ValueError:
            raise CliFailure(EXIT_INPUT, f"--row expects a1..a15, got {args.row!r}")
        if not 1 <= rows[0] <= 15:
            raise CliFailure(EXIT_INPUT, "--row must be between a1 and a15")
    chart = ning_chart(verbatim=args.strict_paper)
    report = verify_chart(chart, rows)
    lines = report.lines()
    if args.strict_paper:
        cert = printed_row_certificate(3)
        if cert is not None:
            lines.append(f"printed a3 violates monotonicity: {expanded(cert[0])} = {cert[1]}")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if report.passed else EXIT_FAIL


def rays_report(cone: str) -> dict:
    from .geometry.cones import abc, extremal_rays, orbits, smc
    from .geometry.vectors import lambda4, spc, s4_act, symmetric_group
    spec = smc(lambda4()) if cone == "smc" else abc()
    rays = extremal_rays(spec)
    orbs = orbits(rays)
    spc_orbit = sorted({s4_act(g, spc()).values for g in symmetric_group(4)})
    have = {r.values for r in rays}
    return {
        "cone": cone,
        "count": len(rays),
        "orbit_count": len(orbs),
        "orbit_sizes": [len(o) for o in orbs],
        "contains_spc_orbit": all(v in have for v in spc_orbit),
        "rays": [[int(x) for x in r.values] for r in rays],
        "orbits": [[[int(x) for x in r.values] for r in o] for o in orbs],
    }


def cmd_rays(args) -> int:
    rep = rays_report(args.cone)
    _emit(args, json.dumps(rep, indent=1) + "\n")
    if (rep["count"], rep["orbit_count"]) != EXPECTED_RAYS[args.cone]:
        print(f"ray count mismatch: {rep['count']}/{rep['orbit_count']}, expected "
              f"{EXPECTED_RAYS[args.cone]}", file=sys.stderr)
        return EXIT_BUG
    return EXIT_OK


def cmd_check(args) -> int:
    from .geometry.chart import expanded
    from .geometry.cones import abc, in_cone, non_ingleton_cone, smc
    from .geometry.vectors import lambda4
    f = _load_vector(args.vector)
    spec = {"smc": lambda: smc(lambda4()), "abc": abc, "ning": non_ingleton_cone}[args.cone]()
    m = in_cone(f, spec)
    out = {"cone": args.cone, "member": m.member}
    if not m.member:
        out["witness"] = {"name": m.witness.name, "expanded": expanded(m.witness)}
        out["value"] = _s(m.value)
    _emit(args, json.dumps(out, indent=1) + "\n", [args.vector])
    return EXIT_OK if m.member else EXIT_FAIL


def cmd_ikd(args) -> int:
    from .coupling import aikd_upper, ikd_exact, ikd_greedy
    left, right = load_diagram(args.left), load_diagram(args.right)
    if args.power:
        est = aikd_upper(left, right, args.base, args.power)
        out = {"value": est.upper_bound, "coupling": None,
               "certificate": {"method": "greedy-power", "terms": list(est.terms),
                               "envelope": list(est.envelope)}}
    else:
        res = (ikd_greedy if args.greedy else ikd_exact)(left, right, args.base)
        out = res.to_json()
    _emit(args, json.dumps(out, indent=1) + "\n", [args.left, args.right])
    return EXIT_OK


def _parse_noises(specs: Sequence[str], lambdas: Sequence[str], terminals: Sequence[str]):
    from .spaces import FiniteProbabilitySpace, space_with_entropy
    noises = {}
    for flag, items in (("--noise", specs), ("--lambda", lambdas)):
        for s in items or ():
            key, sep, val = s.partition("=")
            if not sep or key not in terminals:
                raise CliFailure(EXIT_INPUT, f"{flag} expects TERMINAL=VALUE with TERMINAL in {list(terminals)}")
            if key in noises:
                raise CliFailure(EXIT_INPUT, f"terminal {key} given twice")
            if flag == "--noise":
                noises[key] = _load_space(val)
            else:
                try:
                    noises[key] = space_with_entropy(float(val))
                except ValueError as e:
                    raise CliFailure(EXIT_INPUT, f"--lambda {s}: {e}") from e
    return {t: noises.get(t, FiniteProbabilitySpace.point()) for t in terminals}


def cmd_expand(args) -> int:
    from .diagrams import entropy_vector, expand_terminal
    from .explorer import expansion_sweep
    from .geometry.vectors import lambda4
    from .indexing import terminal_objects
    d = load_diagram(args.diagram)
    terms = sorted(terminal_objects(d.shape))
    noises = _parse_noises(args.noise, args.lambda_, terms)
    inputs = [args.diagram] + [s.partition("=")[2] for s in args.noise or ()]
    if d.shape == lambda4():
        rep = expansion_sweep(d, [noises[t] for t in "1234"], args.base)
        out = {"before": [_s(x) for x in rep.before.values],
               "after": [_s(x) for x in rep.after.values],
               "delta": [_s(y - x) for x, y in zip(rep.before.values, rep.after.values)],
               **rep.to_json()}
    else:
        e = d
        for t in terms:
            if len(noises[t]) > 1:
                e = expand_terminal(e, t, noises[t])
        a, b = entropy_vector(d, args.base), entropy_vector(e, args.base)
        out = {"objects": list(d.shape.objects), "before": [_s(x) for x in a.values],
               "after": [_s(x) for x in b.values],
               "delta": [_s(y - x) for x, y in zip(a.values, b.values)]}
    _emit(args, json.dumps(out, indent=1) + "\n", inputs)
    return EXIT_OK


def run_explore(seed: int, samples: int, groups: bool, distributions: bool,
                search_budget: int, resolution: float, diagnostic: bool):
    from .explorer import (GridSpec, maximize_alpha15, phi_inner_bound, sample_distributions,
                           sample_group_points)
    grid = GridSpec(resolution, tuple(range(1, 15)) if diagnostic else tuple(range(5, 15)))
    points = []
    if distributions:
        points.extend(sample_distributions(seed, samples))
    if groups:
        points.extend(sample_group_points(seed, samples, include_table=True))
    if search_budget:
        points.append(maximize_alpha15(seed, search_budget).best)
    return phi_inner_bound(points, grid)


def cmd_explore(args) -> int:
    both = not (args.groups or args.distributions)
    table = run_explore(args.seed, args.samples, args.groups or both, args.distributions or both,
                        args.search_budget, args.resolution, args.diagnostic)
    if args.out:
        Path(args.out).write_text(table.to_csv())
        Path(f"{args.out}.witnesses.json").write_text(table.witnesses_json() + "\n")
        write_manifest(args.out, args, seed=args.seed)
    else:
        sys.stdout.write(table.to_csv())
    return EXIT_OK


def cmd_validate(args) -> int:
    from .indexing import from_json as shape_from_json
    data = _read_json(args.file)
    try:
        if isinstance(data, dict) and set(data) == {"objects", "arrows"}:
            shape = shape_from_json(data)
            kind, detail = "indexing", f"{len(shape)} objects, initial {shape.initial!r}"
        else:
            d = load_diagram(args.file)
            kind, detail = "diagram", f"{len(d.shape)} objects, {d.total_atoms()} atoms"
    except EntroconeError as e:
        print(f"invalid: {type(e).__name__}: {e}")
        return EXIT_FAIL
    print(f"valid {kind}: {detail}")
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--base", type=_base, default=2, help="log base: integer >= 2 or 'e'")
    common.add_argument("--threads", type=int, default=None,
                        help="worker count (default: ENTROCONE_THREADS or logical cores)")

    p = argparse.ArgumentParser(prog="entrocone", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify-table1", parents=[common], help="verify the base simplex chart")
    s.add_argument("--strict-paper", action="store_true", help="use every row exactly as tabulated")
    s.add_argument("--row", help="check a single row, e.g. a12")
    s.add_argument("--out")
    s.set_defaults(func=cmd_verify_chart)

    s = sub.add_parser("rays", parents=[common], help="extremal rays and S4-orbits of a cone")
    s.add_argument("--cone", choices=sorted(EXPECTED_RAYS), required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_rays)

    s = sub.add_parser("check", parents=[common], help="membership of a Lambda_4 vector")
    s.add_argument("vector", help="JSON list of 15 coordinates, or {\"coords\": [...]}")
    s.add_argument("--cone", choices=["smc", "abc", "ning"], default="smc")
    s.add_argument("--out")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("ikd", parents=[common], help="intrinsic entropy distance")
    s.add_argument("--left", required=True)
    s.add_argument("--right", required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true", help="enumerate transport vertices (default)")
    g.add_argument("--greedy", action="store_true", help="greedy coupling upper bound")
    s.add_argument("--power", type=int, help="report min_n ikd_greedy(X^n, Y^n)/n for n <= POWER")
    s.add_argument("--out")
    s.set_defaults(func=cmd_ikd)

    s = sub.add_parser("expand", parents=[common], help="expand terminals by independent noise")
    s.add_argument("--diagram", required=True)
    s.add_argument("--noise", action="append", metavar="TERMINAL=FILE",
                   help="noise space for a terminal; omitted terminals get a point")
    s.add_argument("--lambda", dest="lambda_", action="append", metavar="TERMINAL=BITS",
                   help="noise of the given entropy in bits (dyadic, within 1e-6)")
    s.add_argument("--out")
    s.set_defaults(func=cmd_expand)

    s = sub.add_parser("explore", parents=[common], help="sample points and build the Phi table")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--groups", action="store_true")
    s.add_argument("--distributions", action="store_true")
    s.add_argument("--search-budget", type=int, default=0)
    s.add_argument("--resolution", type=float, default=0.1)
    s.add_argument("--diagnostic", action="store_true", help="bucket on alpha1..alpha14")
    s.add_argument("--out")
    s.set_defaults(func=cmd_explore)

    s = sub.add_parser("validate", parents=[common], help="validate a diagram or indexing JSON file")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        threads(args)
        return args.func(args)
    except CliFailure as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except (InvariantViolation, AssertionError) as e:
        print(f"internal invariant breached: {e}", file=sys.stderr)
        return EXIT_BUG
    except EntroconeError as e:
        print(f"input error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
