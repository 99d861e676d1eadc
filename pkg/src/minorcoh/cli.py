"""Command line entry point: ``minorcoh <command> [options]``.

Every run prints one report; JSON has the shape
``{"config": {...}, "result": {...}, "duration_ms": int, "version": str}``.
Exit status: 0 success, 2 usage error, 3 computation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from typing import Dict, List, Optional, Sequence

from . import __version__
from .cech import W_STAR
from .cohomology import (
    DEFAULT_H6J_WEIGHTS,
    class_in_image,
    cohomology,
    colimit_rank,
    death_level,
    divisibility_trace,
    h6j_comparison,
    universal_coefficients_check,
)
from .polyring import Domain, is_prime, parse_domain
from .residue import INTEGRANDS, QuadratureSpec, homotopy_invariance_check, integrate
from .weights import Weight

EXIT_OK, EXIT_USAGE, EXIT_COMPUTE = 0, 2, 3
THREADS_ENV = "MINORCOH_THREADS"
COMMANDS = ("compute", "sweep", "class", "death", "colim", "ucheck", "h6j", "trace", "residue")

# options whose values may start with "-" (negative weights)
_VALUE_OPTIONS = ("--weight", "--weights")


class UsageError(ValueError):
    pass


def _parse_range(text: str) -> tuple:
    sep = ".." if ".." in text else ":"
    try:
        lo, hi = (int(x) for x in text.split(sep))
    except ValueError:
        raise UsageError(f"malformed range {text!r}; expected LO..HI") from None
    if lo < 1 or hi < lo:
        raise UsageError(f"invalid range {text!r}")
    return lo, hi


def _parse_weight(text: str) -> Weight:
    try:
        return Weight.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _domain(args) -> Domain:
    try:
        return parse_domain(args.coeff, args.p)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _prime(p) -> int:
    if p is None or not is_prime(int(p)):
        raise UsageError(f"{p} is not prime")
    return int(p)


def read_config(path: str) -> Dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}: expected 'key = value', got {raw.strip()!r}")
            k, v = (s.strip() for s in line.split("=", 1))
            out[k.replace("-", "_")] = v
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="file of 'key = value' defaults, overridden by flags")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--json", action="store_const", const="json", dest="format")
    common.add_argument("--threads", type=int, default=None, help=f"worker threads (default ${THREADS_ENV} or 1)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--no-timing", action="store_true", help="report duration_ms = 0 for byte-stable output")

    parser = argparse.ArgumentParser(prog="minorcoh", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def coeff(p, default="q"):
        p.add_argument("--coeff", default=default, help="z, q or fp")
        p.add_argument("--p", type=int, default=None, help="prime for --coeff fp")

    c = sub.add_parser("compute", parents=[common], help="cohomology of one truncated complex")
    c.add_argument("--weight", default=str(W_STAR))
    c.add_argument("--level", type=int, default=1)
    coeff(c)

    c = sub.add_parser("sweep", parents=[common], help="cohomology over a range of levels")
    c.add_argument("--weight", default=str(W_STAR))
    c.add_argument("--levels", default="1..6")
    coeff(c)

    c = sub.add_parser("class", parents=[common], help="is 1/(f1 f2 f3) a boundary at a level")
    c.add_argument("--level", type=int, default=1)
    coeff(c)

    c = sub.add_parser("death", parents=[common], help="death level of 1/(f1 f2 f3) mod p")
    c.add_argument("--p", type=int, action="append", dest="primes", default=None)
    c.add_argument("--primes", dest="prime_list", default=None, help="comma-separated primes")
    c.add_argument("--n-max", type=int, default=10)

    c = sub.add_parser("colim", parents=[common], help="ranks of H^j through the transition maps")
    c.add_argument("--weight", default=str(W_STAR))
    c.add_argument("--degree", type=int, default=3)
    c.add_argument("--levels", default="1..6")
    c.add_argument("--window", type=int, default=3)
    coeff(c)

    c = sub.add_parser("ucheck", parents=[common], help="universal coefficients at (w, n, p)")
    c.add_argument("--weight", default=str(W_STAR))
    c.add_argument("--level", type=int, default=1)
    c.add_argument("--p", type=int, default=2)

    c = sub.add_parser("h6j", parents=[common], help="H^6_J weight dims against H^3_I colimit estimates")
    c.add_argument("--weights", default=None, help="';'-separated weights")
    c.add_argument("--n-hi", type=int, default=5)

    c = sub.add_parser("trace", parents=[common], help="integral divisibility of 1/(f1 f2 f3) by level")
    c.add_argument("--levels", default="2..6")
    c.add_argument("--primes", dest="prime_list", default="2,3,5,7")

    c = sub.add_parser("residue", parents=[common], help="period of phi*omega over gamma_lambda")
    c.add_argument("--phi", default="inv_f123", choices=sorted(INTEGRANDS))
    c.add_argument("--lambda", dest="lam", default="0", help="one value or a comma list (homotopy check)")
    c.add_argument("--grid", type=int, default=16, help="nodes per dimension")
    c.add_argument("--method", choices=("quad", "mc"), default="quad")
    c.add_argument("--samples", type=int, default=1_000_000)
    c.add_argument("--rtol", type=float, default=1e-4)
    return parser


def _normalise_argv(argv: Sequence[str]) -> List[str]:
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_OPTIONS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    argv = _normalise_argv(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        cfg = read_config(args.config)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest: a for a in sub._actions}
        defaults = {}
        for k, v in cfg.items():
            if k not in known:
                raise UsageError(f"unknown config key {k!r} for {args.command}")
            action = known[k]
            if action.type is not None:
                v = action.type(v)
            elif isinstance(action.const, bool):
                v = v.lower() in ("1", "true", "yes", "on")
            defaults[k] = v
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    if args.threads is None:
        args.threads = int(os.environ.get(THREADS_ENV, "1"))
    if args.threads < 1:
        raise UsageError("threads must be >= 1")
    return args


def _config_echo(args: argparse.Namespace) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("no_timing",)}


# --------------------------------------------------------------- commands


def _cmd_compute(args):
    w, dom = _parse_weight(args.weight), _domain(args)
    if args.level < 1:
        raise UsageError("level must be >= 1")
    return cohomology(w, args.level, dom).as_dict()


def _cmd_sweep(args):
    w, dom = _parse_weight(args.weight), _domain(args)
    lo, hi = _parse_range(args.levels)
    rows = []
    for n in range(lo, hi + 1):
        r = cohomology(w, n, dom).as_dict()
        row = {"level": n, **{f"dim{j}": d for j, d in enumerate(r["dims"])}}
        if "h" in r:
            row.update({f"h{j}": h for j, h in enumerate(r["h"])})
        else:
            for j, g in enumerate(r["h_integer"]):
                row[f"h{j}_free"] = g["free"]
                row[f"h{j}_torsion"] = " ".join(str(t) for t in g["torsion"])
        rows.append(row)
    return {"weight": str(w), "domain": str(dom), "rows": rows}


def _cmd_class(args):
    dom = _domain(args)
    if not dom.is_field:
        raise UsageError("class needs a field (q or fp)")
    if args.level < 1:
        raise UsageError("level must be >= 1")
    return {"level": args.level, "domain": str(dom), "in_image": class_in_image(args.level, dom)}


def _cmd_death(args):
    primes = list(args.primes or [])
    if args.prime_list:
        primes += [int(x) for x in args.prime_list.split(",") if x.strip()]
    if not primes:
        primes = [2, 3, 5]
    primes = [_prime(p) for p in primes]
    if args.n_max < 1:
        raise UsageError("n-max must be >= 1")
    return {"rows": [death_level(p, args.n_max).as_dict() for p in primes]}


def _cmd_colim(args):
    w, dom = _parse_weight(args.weight), _domain(args)
    if not dom.is_field:
        raise UsageError("colim needs a field (q or fp)")
    lo, hi = _parse_range(args.levels)
    if lo == hi:
        raise UsageError("colim needs LO < HI")
    if not 0 <= args.degree <= 3:
        raise UsageError("degree must be in 0..3")
    t = colimit_rank(w, args.degree, lo, hi, dom, window=args.window)
    out = t.as_dict()
    out["rows"] = [{"level": lo + i, "rank": r} for i, r in enumerate(t.ranks)]
    return out


def _cmd_ucheck(args):
    w = _parse_weight(args.weight)
    if args.level < 1:
        raise UsageError("level must be >= 1")
    return universal_coefficients_check(w, args.level, _prime(args.p)).as_dict()


def _cmd_h6j(args):
    weights = DEFAULT_H6J_WEIGHTS
    if args.weights:
        weights = [_parse_weight(s) for s in args.weights.split(";") if s.strip()]
    if args.n_hi < 4:
        raise UsageError("n-hi must be >= 4 for a 3-level stabilisation window")
    return {"rows": [r.as_dict() for r in h6j_comparison(weights, n_hi=args.n_hi)]}


def _cmd_trace(args):
    lo, hi = _parse_range(args.levels)
    primes = [_prime(int(x)) for x in args.prime_list.split(",") if x.strip()]
    return divisibility_trace(range(lo, hi + 1), primes).as_dict()


def _cmd_residue(args):
    try:
        lams = [float(x) for x in args.lam.split(",")]
    except ValueError:
        raise UsageError(f"malformed lambda {args.lam!r}") from None
    if any(not 0.0 <= x <= 1.0 for x in lams):
        raise UsageError("lambda values must lie in [0, 1]")
    if args.grid < 1 or args.samples < 2:
        raise UsageError("grid and samples must be positive")
    grid = QuadratureSpec(nodes=args.grid, method=args.method, samples=args.samples, seed=args.seed, workers=args.threads)
    if len(lams) == 1:
        return integrate(args.phi, lams[0], grid).as_dict()
    return homotopy_invariance_check(args.phi, lams, grid, rtol=args.rtol).as_dict()


HANDLERS = {
    "compute": _cmd_compute,
    "sweep": _cmd_sweep,
    "class": _cmd_class,
    "death": _cmd_death,
    "colim": _cmd_colim,
    "ucheck": _cmd_ucheck,
    "h6j": _cmd_h6j,
    "trace": _cmd_trace,
    "residue": _cmd_residue,
}


# ----------------------------------------------------------------- reports


def emit_report(record: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(record, sort_keys=True, indent=2) + "\n"
    result = record["result"]
    if fmt == "csv":
        buf = io.StringIO()
        rows = result.get("rows") if isinstance(result, dict) else None
        if rows and all(isinstance(r, dict) for r in rows):
            header = list(dict.fromkeys(k for r in rows for k in r))
            writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
            writer.writeheader()
            for r in rows:
                writer.writerow({k: _cell(r.get(k)) for k in header})
        else:
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(["key", "value"])
            for k in sorted(result):
                writer.writerow([k, _cell(result[k])])
        return buf.getvalue()
    lines = [f"minorcoh {record['version']}  {record['config'].get('command')}"]
    for k, v in sorted(record["config"].items()):
        lines.append(f"  config.{k:<10} {v}")
    for k in sorted(result):
        lines.append(f"  {k:<17} {_cell(result[k])}")
    lines.append(f"  duration_ms       {record['duration_ms']}")
    return "\n".join(lines) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return str(v)


def run(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
    except SystemExit as exc:  # argparse usage errors and --help/--version
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    except (UsageError, OSError) as exc:
        print(f"minorcoh: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    start = time.perf_counter()
    try:
        result = HANDLERS[args.command](args)
    except UsageError as exc:
        print(f"minorcoh: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:
        print(f"minorcoh: computation failed: {exc.__class__.__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    duration = 0 if args.no_timing else int(round(1000 * (time.perf_counter() - start)))
    record = {"config": _config_echo(args), "result": result, "duration_ms": duration, "version": __version__}
    stdout.write(emit_report(record, args.format))
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
