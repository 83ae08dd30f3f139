"""Grid-based checks of the usual, hazard rate, reversed hazard rate and
likelihood ratio orders between two systems.

Verdicts only ever speak for the grid they were computed on.  All ratio
tests work on differences of logs, so survival values far below the
float64 range still compare correctly.  A grid point where either system's
relevant log probability is ``-inf`` is *saturated*: it is left out and
listed in the verdict.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .ecd_core import DomainError, quantile
from .systems import SystemKind, SystemSpec, log_lr_ratio_common

__all__ = [
    "Grid",
    "Relation",
    "Direction",
    "OrderingVerdict",
    "EmptyGridError",
    "default_grid",
    "find_violation",
    "check_st",
    "check_hr",
    "check_rh",
    "check_lr",
    "ST_REL_TOL",
    "STEP_REL_TOL",
]

ST_REL_TOL = 1e-12
STEP_REL_TOL = 1e-9
_EPS = np.finfo(float).eps


class EmptyGridError(ValueError):
    """Every grid point was saturated; nothing left to compare."""


@dataclass(frozen=True)
class Grid:
    """Strictly increasing positive evaluation points."""

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float).ravel()
        if pts.size < 2:
            raise DomainError("a grid needs at least two points")
        if not np.all(np.isfinite(pts)) or np.any(pts <= 0):
            raise DomainError("grid points must be finite and > 0")
        if np.any(np.diff(pts) <= 0):
            raise DomainError("grid points must be strictly increasing")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def linear(cls, lo: float, hi: float, count: int) -> "Grid":
        return cls(np.linspace(lo, hi, count))

    @classmethod
    def log(cls, lo: float, hi: float, count: int) -> "Grid":
        return cls(np.geomspace(lo, hi, count))

    def refined(self) -> "Grid":
        """Grid with the midpoint of every interval inserted."""
        mids = 0.5 * (self.points[1:] + self.points[:-1])
        return Grid(np.sort(np.concatenate([self.points, mids])))

    def __len__(self) -> int:
        return self.points.size


def default_grid(a: SystemSpec, b: SystemSpec, count: int = 400,
                 lo_q: float = 1e-4, hi_q: float = 1 - 1e-4) -> Grid:
    """Log-spaced grid from the smallest ``lo_q`` quantile to the largest
    ``hi_q`` quantile over all components of both systems."""
    comps = list(a.components) + list(b.components)
    lo = min(quantile(c, lo_q) for c in comps)
    hi = max(quantile(c, hi_q) for c in comps)
    return Grid.log(lo, hi, count)


class Relation(enum.Enum):
    ST = "st"
    HR = "hr"
    RH = "rh"
    LR = "lr"


class Direction(enum.Enum):
    A_LE_B = "A_le_B"
    B_LE_A = "B_le_A"
    NEITHER = "Neither"
    # only produced by Monte Carlo checks where no point separates
    INCONCLUSIVE = "Inconclusive"


@dataclass
class OrderingVerdict:
    """Result of an ordering check on a grid.

    For ST the witnesses are ``(x, value_a, value_b)`` points where each
    direction fails; for the ratio-based orders they are the three
    ``(x, ratio)`` pairs of an up-down or down-up turn.  ``degenerate``
    marks the case where both directions hold (equal systems, constant
    ratio); the direction is then reported as ``A_LE_B``.
    """

    relation: Relation
    direction: Direction
    witnesses: list = field(default_factory=list)
    saturated_points: list[float] = field(default_factory=list)
    degenerate: bool = False
    note: str = ""

    @property
    def conclusive(self) -> bool:
        return self.direction in (Direction.A_LE_B, Direction.B_LE_A)

    def to_dict(self) -> dict:
        return {
            "relation": self.relation.value,
            "direction": self.direction.value,
            "degenerate": self.degenerate,
            "witnesses": [list(map(float, w)) if not isinstance(w[0], tuple)
                          else [list(map(float, p)) for p in w] for w in self.witnesses],
            "saturated_points": [float(s) for s in self.saturated_points],
            "note": self.note,
        }


def _points(g) -> np.ndarray:
    return g.points if isinstance(g, Grid) else Grid(g).points


def _same_kind(a: SystemSpec, b: SystemSpec) -> None:
    if a.kind is not b.kind:
        raise ValueError("both systems must be of the same kind")


def _find_turn(values: np.ndarray, tol: np.ndarray):
    """First ``(i, j, k)`` with an up-down or down-up turn beyond ``tol``.

    ``tol[j]`` is the slack allowed around ``values[j]``; ``i`` and ``k``
    are the nearest indices on either side that clear it.
    """
    for j in range(1, values.size - 1):
        v, t = values[j], tol[j]
        for side in (values < v - t, values > v + t):
            before = np.nonzero(side[:j])[0]
            after = np.nonzero(side[j + 1:])[0]
            if before.size and after.size:
                return int(before[-1]), j, int(j + 1 + after[0])
    return None


def find_violation(values: Sequence[tuple[float, float]], rel_tol: float = STEP_REL_TOL):
    """Return indices ``(i, j, k)`` of a non-monotone turn in ``(x, ratio)`` pairs.

    A turn is ``r_i < r_j > r_k`` or ``r_i > r_j < r_k``, each comparison
    beyond ``rel_tol * |r_j|``.  Returns None for monotone or constant data.
    """
    vals = np.asarray([v for _, v in values], dtype=float)
    if vals.size < 3:
        raise ValueError("need at least three points")
    return _find_turn(vals, rel_tol * np.abs(vals))


def _monotone_verdict(relation: Relation, x: np.ndarray, log_ratio: np.ndarray,
                      scale: np.ndarray) -> OrderingVerdict:
    """Verdict from the monotonicity of a log ratio (nondecreasing means A <= B)."""
    sat = ~np.isfinite(log_ratio)
    saturated = [float(v) for v in x[sat]]
    xs, lr, sc = x[~sat], log_ratio[~sat], scale[~sat]
    if xs.size < 2:
        raise EmptyGridError(f"{relation.value}: fewer than two unsaturated grid points")
    tol = STEP_REL_TOL + 8.0 * _EPS * sc
    steps = np.diff(lr)
    step_tol = np.maximum(tol[1:], tol[:-1])
    up = steps >= -step_tol
    down = steps <= step_tol
    if up.all():
        return OrderingVerdict(relation, Direction.A_LE_B, [], saturated, bool(down.all()))
    if down.all():
        return OrderingVerdict(relation, Direction.B_LE_A, [], saturated)
    turn = _find_turn(lr, tol)
    if turn is None:
        # a rise and a fall each clear their step tolerance; bracket the extremum
        r, f = int(np.argmax(steps - step_tol)), int(np.argmin(steps + step_tol))
        lo, hi = min(r, f), max(r, f)
        inner = lr[lo + 1:hi + 1]
        j = lo + 1 + int(np.argmax(inner) if r < f else np.argmin(inner))
        turn = (lo, j, hi + 1)
    witness = tuple((float(xs[t]), float(np.exp(lr[t]))) for t in turn)
    return OrderingVerdict(relation, Direction.NEITHER, [witness], saturated)


def check_st(a: SystemSpec, b: SystemSpec, g) -> OrderingVerdict:
    """Usual stochastic order on the grid: ``A <=st B`` iff ``S_A <= S_B``.

    At each point the comparison uses whichever tail is smaller (survival
    if below 1/2, otherwise the cdf with the inequality reversed), so both
    ends keep their relative precision.
    """
    _same_kind(a, b)
    x = _points(g)
    lsa, lsb = np.asarray(a.log_sf(x)), np.asarray(b.log_sf(x))
    lca, lcb = np.asarray(a.log_cdf(x)), np.asarray(b.log_cdf(x))
    use_sf = np.maximum(lsa, lsb) < np.log(0.5)
    with np.errstate(invalid="ignore"):
        gap = np.where(use_sf, lsb - lsa, lca - lcb)   # >= 0 means S_A <= S_B here
        scale = np.where(use_sf, np.abs(lsa) + np.abs(lsb), np.abs(lca) + np.abs(lcb))
    sat = ~np.isfinite(gap)
    saturated = [float(v) for v in x[sat]]
    if sat.all():
        raise EmptyGridError("st: every grid point is saturated")
    tol = ST_REL_TOL * np.maximum(1.0, scale)
    ok = ~sat
    a_le_b = ok & (gap >= -tol)
    b_le_a = ok & (gap <= tol)
    sa, sb = np.exp(lsa), np.exp(lsb)
    if np.all(a_le_b[ok]):
        degenerate = bool(np.all(b_le_a[ok]))
        note = "systems agree on every grid point within tolerance" if degenerate else ""
        return OrderingVerdict(Relation.ST, Direction.A_LE_B, [], saturated, degenerate, note)
    if np.all(b_le_a[ok]):
        return OrderingVerdict(Relation.ST, Direction.B_LE_A, [], saturated)
    i = int(np.argmin(np.where(ok, gap, np.inf)))
    k = int(np.argmax(np.where(ok, gap, -np.inf)))
    witnesses = [(float(x[t]), float(sa[t]), float(sb[t])) for t in sorted((i, k))]
    return OrderingVerdict(Relation.ST, Direction.NEITHER, witnesses, saturated,
                           note="survival functions cross")


def check_hr(a: SystemSpec, b: SystemSpec, g) -> OrderingVerdict:
    """Hazard rate order: ``A <=hr B`` iff ``S_B / S_A`` is nondecreasing on the grid."""
    _same_kind(a, b)
    x = _points(g)
    lsa, lsb = np.asarray(a.log_sf(x)), np.asarray(b.log_sf(x))
    with np.errstate(invalid="ignore"):
        return _monotone_verdict(Relation.HR, x, lsb - lsa, np.abs(lsa) + np.abs(lsb))


def check_rh(a: SystemSpec, b: SystemSpec, g) -> OrderingVerdict:
    """Reversed hazard rate order: ``A <=rh B`` iff ``F_B / F_A`` is nondecreasing."""
    _same_kind(a, b)
    x = _points(g)
    lca, lcb = np.asarray(a.log_cdf(x)), np.asarray(b.log_cdf(x))
    with np.errstate(invalid="ignore"):
        return _monotone_verdict(Relation.RH, x, lcb - lca, np.abs(lca) + np.abs(lcb))


def _common_parallel(a: SystemSpec, b: SystemSpec) -> bool:
    if a.kind is not SystemKind.PARALLEL or b.kind is not SystemKind.PARALLEL:
        return False
    ca, cb = a.components, b.components
    return (ca.shares("beta", "lam") and cb.shares("beta", "lam")
            and ca.beta[0] == cb.beta[0] and ca.lam[0] == cb.lam[0])


def check_lr(a: SystemSpec, b: SystemSpec, g) -> OrderingVerdict:
    """Likelihood ratio order: ``A <=lr B`` iff ``f_B / f_A`` is nondecreasing.

    Parallel systems sharing ``beta`` and ``lambda`` use the closed-form
    density ratio; otherwise the system densities come from
    ``S * sum(hazards)`` (series) or ``F * sum(reversed hazards)`` (parallel).
    """
    _same_kind(a, b)
    x = _points(g)
    if _common_parallel(a, b):
        lr = np.asarray(log_lr_ratio_common(a.components, b.components, x))
        scale = np.abs(lr)
        note = "closed-form density ratio"
    else:
        la, lb = np.asarray(a.log_pdf(x)), np.asarray(b.log_pdf(x))
        with np.errstate(invalid="ignore"):
            lr = lb - la
        scale = np.abs(la) + np.abs(lb)
        note = "densities from summed (reversed) hazard rates"
    verdict = _monotone_verdict(Relation.LR, x, lr, scale)
    verdict.note = note
    return verdict
