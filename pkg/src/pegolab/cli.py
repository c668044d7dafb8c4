"""``pego-lab`` command-line front end.

Exit codes: 0 on success, 1 on any configuration or input error, 2 when
``--assert-compact`` is given and the diagnosis verdict is not compact.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

from . import __version__
from .criteria import (
    CRITERIA,
    EXP_EQUICONT,
    SCALE_KIND,
    exp_equicont_modulus,
    exp_equivanish_tail,
    l2_bound,
    laplace_equicont_modulus,
    laplace_equivanish_tail,
    scale_sweep,
)
from .diagnosis import COMPACT, SWEEP_KEYS, diagnose, run_chains
from .errors import ConfigurationError, PegoLabError, PreconditionError
from .families import family_from_dsl, family_names, get_family, random_family
from .halfline import TimeGrid, verify_pego
from .parallel import get_threads, set_threads
from .transform import FrequencyGrid, default_ygrid, laplace_line, plancherel_check

SCHEMA = "pego-lab/1"
COMMANDS = ("verify", "transform", "criteria", "diagnose", "chains", "sweep")
EXIT_OK, EXIT_CONFIG, EXIT_NOT_COMPACT = 0, 1, 2
SLACK_FACTOR = 3.0

# single scales used by ``criteria`` when --scales is not given
CRITERIA_DEFAULTS = {"time": 1.0, "freq": 10.0, "laplace": 0.1, "shift": 0.05}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigurationError(f"bad arguments: {message}")


def _env_threads():
    raw = os.environ.get("PEGO_LAB_THREADS")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ConfigurationError(f"PEGO_LAB_THREADS must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pego-lab", description="Compactness diagnostics for families of weighted L2 functions.")
    p.add_argument("--version", action="version", version=f"pego-lab {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        s = sub.add_parser(name)
        src = s.add_mutually_exclusive_group(required=True)
        src.add_argument("--family", help=f"catalog family: {', '.join(family_names())}")
        src.add_argument("--dsl", help="JSON file with one function, a list, or {\"members\": [...]}")
        s.add_argument("--x", type=float, default=None, help="order (default: the family's own)")
        s.add_argument("--eps", type=float, default=0.05)
        s.add_argument("--dt", type=float, default=1e-3)
        s.add_argument("--t-max", type=float, default=40.0)
        s.add_argument("--dy", type=float, default=None)
        s.add_argument("--y-max", type=float, default=None)
        s.add_argument("--scales", default=None,
                       help="sweep: v1,v2,...; diagnose/criteria: key=v1:v2,... with keys "
                       + ",".join(SWEEP_KEYS))
        s.add_argument("--threads", type=int, default=None, help="worker cap (default: $PEGO_LAB_THREADS or 1)")
        s.add_argument("--seed", type=int, default=0, help="seed for --family random")
        s.add_argument("--size", type=int, default=20, help="member count for --family random")
        s.add_argument("--out", default=None, help="output path (default: stdout)")
        s.add_argument("--format", choices=("json", "csv"), default="json")
        if name == "diagnose":
            s.add_argument("--assert-compact", action="store_true")
        if name == "sweep":
            s.add_argument("--criterion", required=True, choices=sorted(SCALE_KIND))
    return p


def _load_family(args):
    if args.dsl is not None:
        try:
            with open(args.dsl) as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise ConfigurationError(f"cannot read DSL file {args.dsl!r}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"malformed DSL file {args.dsl!r}: {exc.msg} at line {exc.lineno}") from None
        return family_from_dsl(doc, args.x)
    if args.family == "random":
        return random_family(args.seed, args.size, order=1.0 if args.x is None else args.x)
    return get_family(args.family)


def _grids(args):
    tgrid = TimeGrid(args.dt, args.t_max)
    if args.dy is None and args.y_max is None:
        return tgrid, default_ygrid(tgrid)
    base = default_ygrid(tgrid)
    dy = base.dy if args.dy is None else args.dy
    y_max = base.y_max if args.y_max is None else args.y_max
    return tgrid, FrequencyGrid(dy, y_max)


def _parse_float(text, what):
    try:
        v = float(text)
    except ValueError:
        raise ConfigurationError(f"{what}: {text!r} is not a number") from None
    if not math.isfinite(v):
        raise ConfigurationError(f"{what}: {text!r} is not finite")
    return v


def parse_keyed_scales(text) -> dict:
    """``"time=1:2,freq=8:16"`` -> ``{"time": [1.0, 2.0], "freq": [8.0, 16.0]}``."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        key, sep, values = item.partition("=")
        key = key.strip()
        if not sep or key not in SWEEP_KEYS:
            raise ConfigurationError(
                f"inconsistent scales: {item!r} must be key=v1:v2 with key in {sorted(SWEEP_KEYS)}"
            )
        if key in out:
            raise ConfigurationError(f"inconsistent scales: key {key!r} given twice")
        out[key] = [_parse_float(v, f"scale {key}") for v in values.split(":") if v.strip()]
        if not out[key]:
            raise ConfigurationError(f"inconsistent scales: no values for {key!r}")
    return out


def parse_plain_scales(text) -> list:
    if not text:
        raise ConfigurationError("sweep needs --scales v1,v2,...")
    return [_parse_float(v, "scale") for v in text.split(",") if v.strip()]


# ---------------------------------------------------------------------------
# commands; each returns (result, plot_rows, columns)


def _cmd_verify(args, F, ygrid):
    rows = []
    for i, f in enumerate(F.members):
        n = verify_pego(f, F.order, F.grid)
        rows.append({"index": i, "l1": n.l1, "l2": n.l2, "marginal": n.marginal})
    table = [[r["index"], r["l1"], r["l2"], int(r["marginal"])] for r in rows]
    return {"members": rows}, table, ("index", "l1", "l2", "marginal")


def _cmd_transform(args, F, ygrid):
    result, table = [], []
    for i, f in enumerate(F.members):
        try:
            spec = laplace_line(f, F.order, F.grid, ygrid)
        except PreconditionError as exc:
            raise ConfigurationError(f"member {i}: {exc}") from None
        check = plancherel_check(f, F.order, F.grid, ygrid)
        item = spec.to_dict()
        item["index"] = i
        item["plancherel"] = check.to_dict()
        result.append(item)
        table += [[i, *row] for row in spec.csv_rows()]
    return {"members": result}, table, ("member", "y", "re", "im", "abs")


def _cmd_criteria(args, F, ygrid):
    scales = dict(CRITERIA_DEFAULTS)
    for key, values in parse_keyed_scales(args.scales).items():
        if len(values) != 1:
            raise ConfigurationError(f"inconsistent scales: criteria takes one value per key, got {key}={values}")
        scales[key] = values[0]
    eps = args.eps
    reports = [
        l2_bound(F),
        exp_equivanish_tail(F, scales["time"], eps),
        laplace_equivanish_tail(F, scales["freq"], ygrid, eps),
        laplace_equicont_modulus(F, scales["laplace"], ygrid, eps),
        exp_equicont_modulus(F, scales["shift"], eps=math.sqrt(eps)),
    ]
    table = [[r.criterion, r.scale, r.supremum, int(r.passed)] for r in reports]
    return {"reports": [r.to_dict() for r in reports], "scales": scales}, table, (
        "criterion", "scale", "supremum", "pass")


def _sweep_table(sweeps):
    return [[name, r.scale, r.supremum, int(r.passed)] for name, reports in sweeps.items() for r in reports]


def _cmd_diagnose(args, F, ygrid):
    v = diagnose(F, args.eps, parse_keyed_scales(args.scales), ygrid)
    return v.to_dict(), _sweep_table(v.sweeps), ("criterion", "scale", "supremum", "pass")


def _cmd_chains(args, F, ygrid):
    checks = run_chains(F, args.eps, ygrid, parse_keyed_scales(args.scales))
    for c in checks:
        if not c.holds:
            print(f"pego-lab: chain {c.theorem_id} violated: {c.conclusion_value!r} > "
                  f"{c.bound!r} + {c.slack!r}", file=sys.stderr)
    table = [[c.theorem_id, c.premise_value, c.conclusion_value, c.bound, c.slack, int(c.holds)] for c in checks]
    result = {"checks": [c.to_dict() for c in checks], "all_hold": all(c.holds for c in checks)}
    return result, table, ("theorem_id", "premise", "conclusion", "bound", "slack", "holds")


def _cmd_sweep(args, F, ygrid):
    crit = args.criterion
    eps = math.sqrt(args.eps) if crit == EXP_EQUICONT else args.eps
    reports = scale_sweep(F, crit, parse_plain_scales(args.scales), eps, ygrid=ygrid)
    table = [[crit, r.scale, r.supremum, int(r.passed)] for r in reports]
    return {"reports": [r.to_dict() for r in reports]}, table, ("criterion", "scale", "supremum", "pass")


_COMMANDS = {
    "verify": _cmd_verify,
    "transform": _cmd_transform,
    "criteria": _cmd_criteria,
    "diagnose": _cmd_diagnose,
    "chains": _cmd_chains,
    "sweep": _cmd_sweep,
}
assert set(_COMMANDS) == set(COMMANDS)
assert set(SCALE_KIND) <= set(CRITERIA)


def render_json(report) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def render_csv(report) -> str:
    """CSV plot data; the first line is a comment naming the columns."""
    buf = io.StringIO()
    cols = report["plot_columns"]
    buf.write(f"# pego-lab {report['command']}: columns {', '.join(cols)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in report["plot_rows"]:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _write(text, path):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigurationError(f"cannot write {path!r}: {exc.strerror}") from None


def emit_plot_data(report, path) -> None:
    """Write the report's plot rows (sweep suprema or spectra) as CSV to ``path``."""
    _write(render_csv(report), path)


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        threads = args.threads if args.threads is not None else _env_threads()
        if threads is not None and threads < 1:
            raise ConfigurationError(f"--threads must be >= 1, got {threads}")
        if not args.eps > 0:
            raise ConfigurationError(f"--eps must be positive, got {args.eps}")
        set_threads(threads)
        spec = _load_family(args)
        tgrid, ygrid = _grids(args)
        F = spec.build(tgrid, args.x)
        result, rows, cols = _COMMANDS[args.command](args, F, ygrid)
        report = {
            "schema": SCHEMA,
            "command": args.command,
            "config": {
                "family": spec.to_dict(),
                "order": F.order,
                "eps": args.eps,
                "tgrid": tgrid.to_dict(),
                "ygrid": ygrid.to_dict(),
                "scales": args.scales,
                "seed": args.seed if args.family == "random" else None,
                "slack_factor": SLACK_FACTOR,
                "threads": get_threads(),
            },
            "result": result,
        }
        if args.format == "csv":
            emit_plot_data({"command": args.command, "plot_columns": cols, "plot_rows": rows}, args.out)
        else:
            _write(render_json(report), args.out)
    except PegoLabError as exc:
        print(f"pego-lab: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    finally:
        set_threads(None)
    if args.command == "diagnose" and args.assert_compact and result["verdict"] != COMPACT:
        print(f"pego-lab: verdict is {result['verdict']}, not compact", file=sys.stderr)
        return EXIT_NOT_COMPACT
    return EXIT_OK


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
