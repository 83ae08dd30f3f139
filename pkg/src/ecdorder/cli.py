"""Command-line interface.

Sub-commands::

    ecdorder dist          cdf/sf/pdf/hazard/reversed hazard of one component
    ecdorder order-check   st/hr/rh/lr verdicts between two systems
    ecdorder schur-scan    sign scan of the Schur-convexity criterion
    ecdorder mc-verify     Monte Carlo check of analytic system survivals
    ecdorder examples      recompute the published examples and figure data

Every option can also come from ``--config file.json`` whose keys are the
option names with dashes replaced by underscores; flags given on the
command line win.  Exit codes: 0 conclusive, 2 non-monotone/crossing
("Neither") or indeterminate, 1 error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import golden
from .ecd_core import DomainError, ECDParams, cdf, hazard, pdf, reversed_hazard, sf
from .majorization import SchurTarget, SchurVerdict, majorizes, schur_scan
from .montecarlo import empirical_sf, empirical_st_check, sample_system, sigma_band
from .ordering import (
    Direction,
    Grid,
    OrderingVerdict,
    check_hr,
    check_lr,
    check_rh,
    check_st,
    default_grid,
)
from .systems import ComponentSet, SystemSpec

log = logging.getLogger("ecdorder")

OUTPUT_DIR_ENV = "ECDORDER_OUTPUT_DIR"
EXIT_OK, EXIT_ERROR, EXIT_NEITHER = 0, 1, 2

CHECKS = {"st": check_st, "hr": check_hr, "rh": check_rh, "lr": check_lr}

# Parameters that must be shared (within and across systems) in each theorem
# mode, and the system kind each theorem is about.
THEOREMS = {
    1: ("series", ("alpha", "beta")),
    2: ("parallel", ("alpha", "beta")),
    3: ("parallel", ("alpha", "lambda")),
    4: ("series", ("beta", "lambda")),
    5: ("parallel", ("beta", "lambda")),
}
VARIED = {1: "lambda", 2: "lambda", 3: "beta", 4: "alpha"}


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _floats(text) -> list[float]:
    if isinstance(text, (int, float)):
        return [float(text)]
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    try:
        return [float(v) for v in str(text).replace(" ", "").split(",") if v]
    except ValueError as exc:
        raise ConfigError(f"not a number list: {text!r}") from exc


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["table", "csv", "json"], default=None)
    p.add_argument("--output", default=None, help="write to this file instead of stdout")
    p.add_argument("--config", default=None, help="JSON file with option values")


def _add_grid(p: argparse.ArgumentParser) -> None:
    p.add_argument("--x", action="append", default=None,
                   help="explicit grid points (comma separated, repeatable)")
    p.add_argument("--grid-min", type=float, default=None)
    p.add_argument("--grid-max", type=float, default=None)
    p.add_argument("--grid-count", type=int, default=None)
    p.add_argument("--spacing", choices=["linear", "log"], default=None)


def _add_systems(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kind", choices=["series", "parallel"], default=None)
    for suffix, who in (("", "system A"), ("-b", "system B (defaults to A's value)")):
        for name in ("alpha", "beta", "lambda"):
            p.add_argument(f"--{name}{suffix}", default=None, help=f"{name} for {who}; comma list or scalar")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ecdorder", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dist", help="single-component functions")
    p.add_argument("--alpha", default=None)
    p.add_argument("--beta", default=None)
    p.add_argument("--lambda", default=None)
    p.add_argument("--x", action="append", default=None)
    _add_output(p)

    p = sub.add_parser("order-check", help="ordering verdicts between two systems")
    _add_systems(p)
    p.add_argument("--relation", choices=["st", "hr", "rh", "lr", "all"], default=None)
    p.add_argument("--theorem", type=int, choices=sorted(THEOREMS), default=None,
                   help="validate the pair against a theorem's hypotheses")
    _add_grid(p)
    _add_output(p)

    p = sub.add_parser("schur-scan", help="Schur-convexity sign scan")
    p.add_argument("--target", choices=[t.value for t in SchurTarget], default=None)
    p.add_argument("--vector", default=None)
    p.add_argument("--alpha", default=None)
    p.add_argument("--beta", default=None)
    p.add_argument("--lambda", default=None)
    _add_grid(p)
    _add_output(p)

    p = sub.add_parser("mc-verify", help="Monte Carlo check of system survivals")
    _add_systems(p)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    _add_grid(p)
    _add_output(p)

    p = sub.add_parser("examples", help="recompute published examples and figure data")
    p.add_argument("which", choices=["1", "2", "3", "4", "fig1", "fig2", "all"])
    p.add_argument("--output-dir", default=None)
    p.add_argument("--config", default=None)
    return parser


DEFAULTS = {
    "format": "table", "relation": "all", "grid_count": 400, "spacing": "log",
    "n": 100_000,
}


def parse_config(data: dict, command: str | None = None, parser: argparse.ArgumentParser | None = None) -> dict:
    """Validate a config mapping against the option set of its command."""
    parser = parser or build_parser()
    command = command or data.get("command")
    if command is None:
        raise ConfigError("config has no 'command'")
    sub = _subparser(parser, command)
    allowed = {a.dest for a in sub._actions} - {"help", "config"}
    unknown = set(data) - allowed - {"command"}
    if unknown:
        raise ConfigError(f"unknown config field(s) for {command}: {sorted(unknown)}")
    if data.get("command", command) != command:
        raise ConfigError(f"config is for {data['command']!r}, not {command!r}")
    return {k: v for k, v in data.items() if k != "command"}


def _subparser(parser: argparse.ArgumentParser, command: str) -> argparse.ArgumentParser:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            if command not in action.choices:
                raise ConfigError(f"unknown command {command!r}")
            return action.choices[command]
    raise AssertionError("parser has no sub-commands")


def resolve(args: argparse.Namespace, parser: argparse.ArgumentParser) -> dict:
    """Merge defaults < config file < command-line flags."""
    cfg: dict = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            cfg = parse_config(json.load(fh), args.command, parser)
    merged = dict(DEFAULTS)
    merged.update(cfg)
    for k, v in vars(args).items():
        if v is not None and k not in ("config",):
            merged[k] = v
    return merged


def _grid(cfg: dict, a: SystemSpec | None = None, b: SystemSpec | None = None) -> Grid:
    if cfg.get("x"):
        xs = [v for item in (cfg["x"] if isinstance(cfg["x"], list) else [cfg["x"]]) for v in _floats(item)]
        return Grid(np.array(xs))
    if cfg.get("grid_min") is not None and cfg.get("grid_max") is not None:
        maker = Grid.log if cfg["spacing"] == "log" else Grid.linear
        return maker(float(cfg["grid_min"]), float(cfg["grid_max"]), int(cfg["grid_count"]))
    if a is None:
        raise ConfigError("a grid is required (--x or --grid-min/--grid-max)")
    return default_grid(a, b, count=int(cfg["grid_count"]))


def _require(cfg: dict, *names: str) -> None:
    missing = [n for n in names if cfg.get(n) is None]
    if missing:
        raise ConfigError("missing required option(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _systems(cfg: dict) -> tuple[SystemSpec, SystemSpec]:
    _require(cfg, "kind", "alpha", "beta", "lambda")
    vec = {}
    for name in ("alpha", "beta", "lambda"):
        vec[name] = _floats(cfg[name])
        vec[name + "_b"] = _floats(cfg[name + "_b"]) if cfg.get(name + "_b") is not None else vec[name]
    try:
        ca = ComponentSet.from_vectors(vec["alpha"], vec["beta"], vec["lambda"])
        cb = ComponentSet.from_vectors(vec["alpha_b"], vec["beta_b"], vec["lambda_b"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return SystemSpec(ca, cfg["kind"]), SystemSpec(cb, cfg["kind"])


def _check_theorem(theorem: int, a: SystemSpec, b: SystemSpec) -> dict:
    kind, shared = THEOREMS[theorem]
    if a.kind.value != kind:
        raise ConfigError(f"theorem {theorem} is about {kind} systems")
    if len(a.components) != len(b.components):
        raise ConfigError(f"theorem {theorem} needs equal component counts, "
                          f"got {len(a.components)} and {len(b.components)}")
    attr = {"alpha": "alpha", "beta": "beta", "lambda": "lam"}
    for name in shared:
        va, vb = getattr(a.components, attr[name]), getattr(b.components, attr[name])
        if not (np.all(va == va[0]) and np.all(vb == va[0])):
            raise ConfigError(f"theorem {theorem} needs a common {name} in both systems")
    info: dict = {"theorem": theorem}
    if theorem == 3 and not a.components.lam[0] > 1:
        raise ConfigError("theorem 3 needs lambda > 1")
    if theorem in VARIED:
        name = VARIED[theorem]
        info["majorized"] = majorizes(getattr(a.components, attr[name]), getattr(b.components, attr[name]))
    else:
        info["sum_alpha_le"] = bool(a.components.alpha.sum() <= b.components.alpha.sum())
    return info


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    return f"{v:.9g}" if isinstance(v, (float, np.floating)) else str(v)


def write_csv(columns: dict, fh) -> None:
    """CSV with a header row; numbers to 9 significant digits."""
    w = csv.writer(fh, lineterminator="\n")
    names = list(columns)
    w.writerow(names)
    for row in zip(*(columns[n] for n in names)):
        w.writerow([_fmt(v) for v in row])


def _emit(text: str, cfg: dict) -> None:
    if cfg.get("output"):
        Path(cfg["output"]).write_text(text)
    else:
        sys.stdout.write(text)


def _table(rows: list[dict]) -> str:
    if not rows:
        return ""
    names = list(rows[0])
    cells = [[_fmt(r[n]) for n in names] for r in rows]
    widths = [max(len(n), *(len(c[i]) for c in cells)) for i, n in enumerate(names)]
    lines = ["  ".join(n.rjust(w) for n, w in zip(names, widths))]
    lines += ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def _render_rows(rows: list[dict], cfg: dict, extra: dict | None = None) -> str:
    fmt = cfg["format"]
    if fmt == "json":
        payload = {"rows": rows, **(extra or {})}
        return json.dumps(payload, indent=2, default=_json_default) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        write_csv({k: [r[k] for r in rows] for k in rows[0]} if rows else {}, buf)
        return buf.getvalue()
    text = _table(rows)
    for k, v in (extra or {}).items():
        text += f"{k}: {json.dumps(v, default=_json_default)}\n"
    return text


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_dist(cfg: dict) -> int:
    _require(cfg, "alpha", "beta", "lambda", "x")
    try:
        p = ECDParams(float(cfg["alpha"]), float(cfg["beta"]), float(cfg["lambda"]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    xs = [v for item in (cfg["x"] if isinstance(cfg["x"], list) else [cfg["x"]]) for v in _floats(item)]
    rows = []
    for x in xs:
        try:
            try:
                h = hazard(p, x)
            except OverflowError:
                h = float("inf")
            rows.append({"x": x, "cdf": cdf(p, x), "sf": sf(p, x), "pdf": pdf(p, x),
                         "hazard": h, "reversed_hazard": reversed_hazard(p, x)})
        except DomainError as exc:
            raise ConfigError(f"x={x!r}: {exc}") from exc
    _emit(_render_rows(rows, cfg), cfg)
    return EXIT_OK


def _verdict_rows(verdicts: list[OrderingVerdict]) -> list[dict]:
    return [{"relation": v.relation.value, "direction": v.direction.value,
             "degenerate": v.degenerate, "n_saturated": len(v.saturated_points),
             "witnesses": json.dumps(v.to_dict()["witnesses"])} for v in verdicts]


def cmd_order_check(cfg: dict) -> int:
    a, b = _systems(cfg)
    extra: dict = {}
    if cfg.get("theorem") is not None:
        extra["hypotheses"] = _check_theorem(int(cfg["theorem"]), a, b)
    g = _grid(cfg, a, b)
    rel = cfg["relation"]
    names = list(CHECKS) if rel == "all" else [rel]
    verdicts = [CHECKS[n](a, b, g) for n in names]
    extra["grid"] = {"count": len(g), "min": float(g.points[0]), "max": float(g.points[-1])}
    if cfg["format"] == "json":
        text = json.dumps({"verdicts": [v.to_dict() for v in verdicts], **extra},
                          indent=2, default=_json_default) + "\n"
    else:
        text = _render_rows(_verdict_rows(verdicts), cfg, extra if cfg["format"] == "table" else None)
    _emit(text, cfg)
    return EXIT_NEITHER if any(v.direction is Direction.NEITHER for v in verdicts) else EXIT_OK


def cmd_schur_scan(cfg: dict) -> int:
    _require(cfg, "target", "vector")
    target = SchurTarget(cfg["target"])
    fixed = {}
    for name, key in (("alpha", "alpha"), ("beta", "beta"), ("lambda", "lam")):
        if cfg.get(name) is not None:
            fixed[key] = _floats(cfg[name])[0]
    g = _grid(cfg)
    report = schur_scan(target, fixed, _floats(cfg["vector"]), g.points)
    out = {
        "target": target.value, "verdict": report.verdict.value,
        "worst_violation": report.worst_violation,
        "n_positive": report.n_positive, "n_negative": report.n_negative,
        "n_within_tol": report.n_within_tol, "skipped_pairs": report.skipped_pairs,
        "note": report.note,
    }
    if cfg["format"] == "json":
        text = json.dumps(out, indent=2, default=_json_default) + "\n"
    else:
        text = _render_rows([{k: v for k, v in out.items() if not isinstance(v, (list, tuple))}], cfg)
        if report.worst_violation:
            text += f"worst_violation: {list(report.worst_violation)}\n"
    _emit(text, cfg)
    if report.verdict is SchurVerdict.INDETERMINATE and report.worst_violation is not None:
        return EXIT_NEITHER
    return EXIT_OK


def cmd_mc_verify(cfg: dict) -> int:
    _require(cfg, "seed")
    a, b = _systems(cfg)
    n, seed = int(cfg["n"]), int(cfg["seed"])
    if n < 10_000:
        log.warning("n=%d is below 10^4; 3-sigma bands are too wide to be informative", n)
    if cfg.get("x") or cfg.get("grid_min") is not None:
        g = _grid(cfg)
    else:
        g = default_grid(a, b, count=10, lo_q=0.05, hi_q=0.95)
    rows = []
    passed = 0
    for label, spec, s in (("A", a, seed), ("B", b, seed + 1)):
        draws = sample_system(spec, n, s).draws
        emp = empirical_sf(draws, g.points)
        ana = np.asarray(spec.sf(g.points))
        sig = sigma_band(ana, n)
        for x, e, an, sg in zip(g.points, emp, ana, sig):
            ok = abs(e - an) <= 3 * sg
            passed += ok
            rows.append({"system": label, "x": float(x), "analytic_sf": float(an),
                         "empirical_sf": float(e), "sigma": float(sg), "within_3sigma": bool(ok)})
    frac = passed / len(rows)
    extra = {"pass_fraction": frac}
    if n >= 10_000:
        extra["empirical_st"] = empirical_st_check(a, b, g, n, seed).to_dict()
    _emit(_render_rows(rows, cfg, extra), cfg)
    return EXIT_OK if frac >= 0.95 else EXIT_NEITHER


def cmd_examples(cfg: dict) -> int:
    out_dir = Path(cfg.get("output_dir") or os.environ.get(OUTPUT_DIR_ENV, "ecdorder_output"))
    out_dir.mkdir(parents=True, exist_ok=True)
    which = cfg["which"]
    names = ["1", "2", "3", "fig1", "fig2"] if which == "all" else [which]
    for name in names:
        columns, summary = golden.BUILDERS[name]()
        stem = f"example{name}" if name.isdigit() else name
        with open(out_dir / f"{stem}.csv", "w", newline="") as fh:
            write_csv(columns, fh)
        with open(out_dir / f"{stem}_summary.json", "w") as fh:
            json.dump(summary, fh, indent=2, default=_json_default)
            fh.write("\n")
        print(f"wrote {out_dir / (stem + '.csv')} and {stem}_summary.json")
    return EXIT_OK


COMMANDS = {
    "dist": cmd_dist,
    "order-check": cmd_order_check,
    "schur-scan": cmd_schur_scan,
    "mc-verify": cmd_mc_verify,
    "examples": cmd_examples,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        cfg = resolve(args, parser)
        return COMMANDS[args.command](cfg)
    except (ConfigError, DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
