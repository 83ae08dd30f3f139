"""Reference system pairs and recomputation of the published example values.

Each ``build_*`` function returns ``(columns, summary)``: ``columns`` is an
ordered mapping of CSV column name to a 1-d array (``x`` first) and
``summary`` a JSON-serialisable dict holding every quoted value next to its
recomputed counterpart.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .majorization import majorizes
from .ordering import Grid, check_hr, check_rh, check_st, default_grid, find_violation
from .systems import ComponentSet, SystemSpec, parallel_sf_naive

__all__ = ["EXAMPLE1", "EXAMPLE3", "EXAMPLE4", "example_pair", "BUILDERS", "system_config"]

EXAMPLE1 = {"lambda": (0.8, 1.2, 1.3, 1.9), "mu": (0.5, 0.7, 1.5, 2.5), "beta": 2.0}
EXAMPLE3 = {"alpha": 0.6, "lambda": 2.0, "beta": (0.4, 0.9, 2.0, 7.5), "beta_star": (0.2, 1.0, 1.9, 7.7)}
EXAMPLE4 = {"beta": 3.0, "lambda": 2.0, "alpha": (0.2, 1.0, 2.4), "alpha_star": (0.4, 1.0, 2.2)}

QUOTED_F1 = {
    0.7: {0.4: 1.032, 0.6: 1.051, 1.2: 1.033, 1.4: 1.008},
    1.5: {0.4: 0.975, 0.6: 0.943, 1.2: 0.948, 1.4: 0.987},
}
QUOTED_F2 = {
    0.7: {1.9524: 521403.0, 1.9528: 503289.0, 1.9536: 703257.0},
    1.5: {1.9524: 558646.0, 1.9528: 539238.0, 1.954: 727174.0},
}
QUOTED_F3 = {0.085: 0.0512, 0.086: 0.0488, 0.087: 0.0513}
QUOTED_F4 = {9.6: 1.453e6, 9.8: 2.729e6, 9.9: 2.646e6}


def example_pair(which: int, alpha: float | None = None, kind: str | None = None) -> tuple[SystemSpec, SystemSpec]:
    """The (X, Y) systems of example 1, 2, 3 or 4."""
    if which in (1, 2):
        kind = kind or ("series" if which == 1 else "parallel")
        e = EXAMPLE1
        return (SystemSpec(ComponentSet.from_vectors(alpha, e["beta"], e["lambda"]), kind),
                SystemSpec(ComponentSet.from_vectors(alpha, e["beta"], e["mu"]), kind))
    if which == 3:
        e = EXAMPLE3
        return (SystemSpec(ComponentSet.from_vectors(e["alpha"], e["beta"], e["lambda"]), "parallel"),
                SystemSpec(ComponentSet.from_vectors(e["alpha"], e["beta_star"], e["lambda"]), "parallel"))
    if which == 4:
        e = EXAMPLE4
        return (SystemSpec(ComponentSet.from_vectors(e["alpha"], e["beta"], e["lambda"]), "series"),
                SystemSpec(ComponentSet.from_vectors(e["alpha_star"], e["beta"], e["lambda"]), "series"))
    raise ValueError(f"unknown example {which!r}")


def system_config(a: SystemSpec, b: SystemSpec, relation: str = "all", **extra) -> dict:
    """order-check config (the CLI's JSON schema) describing the pair."""
    ca, cb = a.components, b.components
    cfg = {
        "command": "order-check",
        "kind": a.kind.value,
        "alpha": ca.alpha.tolist(), "beta": ca.beta.tolist(), "lambda": ca.lam.tolist(),
        "alpha_b": cb.alpha.tolist(), "beta_b": cb.beta.tolist(), "lambda_b": cb.lam.tolist(),
        "relation": relation,
    }
    cfg.update(extra)
    return cfg


def _entry(label: str, x: float, printed: float, value: float, **extra) -> dict:
    return {
        "label": label, "x": x, "printed": printed, "recomputed": float(value),
        "abs_dev": float(value - printed), "rel_dev": float((value - printed) / printed), **extra,
    }


def _pattern(values) -> str:
    v = np.asarray(values, dtype=float)
    return "-".join("up" if d > 0 else "down" if d < 0 else "flat" for d in np.diff(v))


def _sf_ratio(a: SystemSpec, b: SystemSpec, x) -> np.ndarray:
    return np.exp(np.asarray(b.log_sf(x)) - np.asarray(a.log_sf(x)))


def _cdf_ratio(a: SystemSpec, b: SystemSpec, x) -> np.ndarray:
    return np.exp(np.asarray(b.log_cdf(x)) - np.asarray(a.log_cdf(x)))


def _verdicts(a, b, g, checks) -> dict:
    return {fn.__name__.removeprefix("check_"): fn(a, b, g).to_dict() for fn in checks}


def build_example1():
    grid = Grid.linear(0.05, 3.0, 200)
    cols = {"x": grid.points}
    quoted, verdicts, configs = [], {}, {}
    for alpha, table in QUOTED_F1.items():
        X, Y = example_pair(1, alpha)
        tag = f"alpha{alpha:g}"
        cols[f"sf_X_{tag}"] = np.asarray(X.sf(grid.points))
        cols[f"sf_Y_{tag}"] = np.asarray(Y.sf(grid.points))
        cols[f"f1_{tag}"] = _sf_ratio(X, Y, grid.points)
        xs = np.array(list(table))
        vals = _sf_ratio(X, Y, xs)
        for x, v in zip(xs, vals):
            quoted.append(_entry(f"f1({x:g}) alpha={alpha:g}", float(x), table[x], v, alpha=alpha))
        verdicts[tag] = _verdicts(X, Y, grid, (check_st, check_hr))
        verdicts[tag]["hr_at_quoted_points"] = find_violation(list(zip(xs, vals)))
        configs[tag] = system_config(X, Y, x=xs.tolist())
    summary = {
        "example": "1",
        "description": "series systems, lambda vs mu, beta=2; f1 = S_Y / S_X",
        "majorized": majorizes(EXAMPLE1["lambda"], EXAMPLE1["mu"]),
        "quoted": quoted, "verdicts": verdicts, "configs": configs,
    }
    return cols, summary


def build_example2():
    fine = np.round(np.arange(1.9520, 1.95451, 0.0001), 4)
    cols = {"x": fine}
    quoted, patterns, verdicts, configs = [], {}, {}, {}
    for alpha, table in QUOTED_F2.items():
        X, Y = example_pair(2, alpha)
        tag = f"alpha{alpha:g}"
        cols[f"f2_{tag}"] = _sf_ratio(X, Y, fine)
        with np.errstate(divide="ignore", invalid="ignore"):
            cols[f"f2_naive_{tag}"] = (np.asarray(parallel_sf_naive(Y.components, fine))
                                       / np.asarray(parallel_sf_naive(X.components, fine)))
        xs = np.array(list(table))
        vals = _sf_ratio(X, Y, xs)
        naive = np.asarray(parallel_sf_naive(Y.components, xs)) / np.asarray(parallel_sf_naive(X.components, xs))
        for x, v, nv in zip(xs, vals, naive):
            quoted.append(_entry(f"f2({x:g}) alpha={alpha:g}", float(x), table[x], v,
                                 alpha=alpha, naive_float64=float(nv), sf_X=float(X.sf(x))))
        patterns[tag] = {"printed": _pattern(list(table.values())), "recomputed": _pattern(vals)}
        g = default_grid(X, Y)
        verdicts[tag] = _verdicts(X, Y, g, (check_st, check_hr, check_rh))
        configs[tag] = system_config(X, Y, x=xs.tolist())
    summary = {
        "example": "2",
        "description": "parallel systems of example 1; f2 = S_Y / S_X near x = 1.95",
        "note": ("S_X is about 3e-16 at these abscissae; the naive float64 column shows the "
                 "values obtained from 1 - prod(F_k)"),
        "quoted": quoted, "patterns": patterns, "verdicts": verdicts, "configs": configs,
    }
    return cols, summary


def build_example3():
    X, Y = example_pair(3)
    left = np.round(np.arange(0.080, 0.0901, 0.0005), 4)
    right = np.round(np.arange(9.5, 10.001, 0.05), 2)
    x = np.concatenate([left, right])
    cols = {"x": x, "f3": _cdf_ratio(X, Y, x), "f4": _sf_ratio(X, Y, x)}
    x3 = np.array(list(QUOTED_F3))
    x4 = np.array(list(QUOTED_F4))
    v3, v4 = _cdf_ratio(X, Y, x3), _sf_ratio(X, Y, x4)
    quoted = [_entry(f"f3({a:g})", float(a), QUOTED_F3[a], v) for a, v in zip(x3, v3)]
    quoted += [_entry(f"f4({a:g})", float(a), QUOTED_F4[a], v) for a, v in zip(x4, v4)]
    g = default_grid(X, Y)
    # x = 1 gives x**beta = 1 for every beta, so both systems coincide there
    near = np.array([0.9, 1.0, 1.1])
    coincidence = {
        "x": near.tolist(),
        "f3": _cdf_ratio(X, Y, near).tolist(),
        "f4": _sf_ratio(X, Y, near).tolist(),
        "note": "both ratios equal 1 at x = 1; f4 exceeds 1 and f3 stays below 1 on either side",
    }
    summary = {
        "example": "3",
        "description": "parallel systems F(x, 0.6, beta_i, 2), beta vs beta*; f3 = F_Y/F_X, f4 = S_Y/S_X",
        "majorized": majorizes(EXAMPLE3["beta"], EXAMPLE3["beta_star"]),
        "quoted": quoted,
        "patterns": {
            "f3": {"printed": _pattern(list(QUOTED_F3.values())), "recomputed": _pattern(v3)},
            "f4": {"printed": _pattern(list(QUOTED_F4.values())), "recomputed": _pattern(v4)},
        },
        "coincidence_at_one": coincidence,
        "verdicts": _verdicts(X, Y, g, (check_st, check_hr, check_rh)),
        "verdicts_refined_grid": _verdicts(X, Y, g.refined(), (check_st, check_hr, check_rh)),
        "configs": {"f3": system_config(X, Y, x=x3.tolist()), "f4": system_config(X, Y, x=x4.tolist())},
    }
    return cols, summary


def build_fig2():
    X, Y = example_pair(4)
    g = default_grid(X, Y)
    sx, sy = np.asarray(X.sf(g.points)), np.asarray(Y.sf(g.points))
    diff = sx - sy
    cols = {"x": g.points, "sf_X": sx, "sf_Y": sy, "diff": diff}
    e = EXAMPLE4
    summary = {
        "example": "4",
        "description": "series systems, alpha vs alpha*, beta=3, lambda=2; diff = S_X - S_Y",
        "claim": "the difference is negative",
        "max_diff": float(diff.max()),
        "min_diff": float(diff.min()),
        "all_nonpositive": bool(np.all(diff <= 1e-12)),
        "majorized_alpha_by_alpha_star": majorizes(e["alpha"], e["alpha_star"]),
        "majorized_alpha_star_by_alpha": majorizes(e["alpha_star"], e["alpha"]),
        "verdicts": _verdicts(X, Y, g, (check_st,)),
        "configs": {"st": system_config(X, Y, relation="st")},
    }
    return cols, summary


def build_fig1():
    x = np.linspace(0.01, 2.0, 200)
    cols = {"x": x}
    verdicts, configs = {}, {}
    for alpha in (0.7, 1.5):
        X, Y = example_pair(2, alpha)
        tag = f"alpha{alpha:g}"
        cols[f"F_ratio_{tag}"] = _cdf_ratio(X, Y, x)
        verdicts[tag] = _verdicts(X, Y, Grid(x), (check_rh,))
        configs[tag] = system_config(X, Y, relation="rh")
    summary = {
        "example": "fig1",
        "description": "parallel systems of example 1; F_Y / F_X on (0, 2]",
        "claim": "reversed hazard rate ordering may exist (grid observation only)",
        "verdicts": verdicts, "configs": configs,
    }
    return cols, summary


BUILDERS: dict[str, Callable[[], tuple[dict, dict]]] = {
    "1": build_example1,
    "2": build_example2,
    "3": build_example3,
    "4": build_fig2,
    "fig1": build_fig1,
    "fig2": build_fig2,
}
