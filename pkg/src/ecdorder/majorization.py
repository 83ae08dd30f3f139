"""Majorization, Schur-convexity scans and the auxiliary monotone functions.

``a`` is majorized by ``b`` (``a <m b``) when both have the same total and
for every ``k < n`` the ``k`` smallest entries of ``a`` sum to at least the
``k`` smallest entries of ``b``.  A symmetric function ``psi`` is
Schur-convex (Schur-concave) when ``a <m b`` implies
``psi(a) <= psi(b)`` (``>=``); for smooth ``psi`` this is equivalent to

    (a_i - a_j) * (d psi / d a_i - d psi / d a_j) >= 0   (<= 0)

for all ``i != j``.  :func:`schur_scan` checks that sign numerically.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .ecd_core import DomainError, chen_hazard_integral, log1mexp, log_cdf_values, log_sf_values

__all__ = [
    "majorizes",
    "random_majorized",
    "t_transform",
    "psi1",
    "phi1",
    "phi2",
    "psi2",
    "SchurTarget",
    "SchurVerdict",
    "SchurReport",
    "schur_scan",
    "FD_REL_STEP",
    "DELTA_REL_TOL",
]

TOTAL_TOL = 1e-9
PARTIAL_TOL = 1e-12
FD_REL_STEP = 1e-6
DELTA_REL_TOL = 1e-10
_EPS = np.finfo(float).eps


def _vec(a, name: str) -> np.ndarray:
    arr = np.asarray(a, dtype=float).ravel()
    if arr.size < 1 or not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be a non-empty finite vector")
    return arr


def majorizes(a, b) -> bool:
    """Return True iff ``a`` is majorized by ``b``.

    Totals must agree within 1e-9 and the increasing partial sums of ``a``
    must dominate those of ``b`` up to 1e-12.
    """
    a, b = _vec(a, "a"), _vec(b, "b")
    if a.size != b.size:
        raise ValueError(f"length mismatch: {a.size} vs {b.size}")
    if abs(math.fsum(a) - math.fsum(b)) > TOTAL_TOL:
        return False
    pa = np.cumsum(np.sort(a))[:-1]
    pb = np.cumsum(np.sort(b))[:-1]
    return bool(np.all(pa >= pb - PARTIAL_TOL))


def t_transform(a, i: int, j: int, t: float) -> np.ndarray:
    """Pairwise averaging ``a_i <- t a_i + (1-t) a_j``, ``a_j <- (1-t) a_i + t a_j``."""
    out = np.array(a, dtype=float)
    ai, aj = out[i], out[j]
    out[i] = t * ai + (1.0 - t) * aj
    out[j] = (1.0 - t) * ai + t * aj
    return out


def random_majorized(b, seed) -> np.ndarray:
    """Draw a vector majorized by ``b`` using one to three random T-transforms.

    ``seed`` is an int or a :class:`numpy.random.Generator`; the output is
    deterministic per seed.
    """
    b = _vec(b, "b")
    if b.size < 2:
        raise DomainError("need at least two entries")
    rng = np.random.default_rng(seed)
    a = b.copy()
    for _ in range(int(rng.integers(1, 4))):
        i, j = rng.choice(a.size, size=2, replace=False)
        t = rng.uniform(0.0, 1.0)
        while t == 0.0:
            t = rng.uniform(0.0, 1.0)
        a = t_transform(a, int(i), int(j), t)
    return a


# ---------------------------------------------------------------------------
# auxiliary functions from the monotonicity arguments
# ---------------------------------------------------------------------------

def _positive(**kw) -> None:
    for k, v in kw.items():
        if np.any(~(np.asarray(v, dtype=float) > 0)):
            raise DomainError(f"{k} must be > 0")


def psi1(alpha, y):
    """``y (1-y)^(alpha-1) / (1 - (1-y)^alpha)`` on ``0 < y < 1``.

    Increasing in ``y`` for ``alpha < 1``, decreasing for ``alpha > 1`` and
    identically 1 at ``alpha == 1``.
    """
    _positive(alpha=alpha)
    y = np.asarray(y, dtype=float)
    if np.any(~((y > 0) & (y < 1))):
        raise DomainError("y must lie in (0, 1)")
    log1my = np.log1p(-y)
    # 1 - (1-y)^alpha = -expm1(alpha log(1-y))
    out = y * np.exp((alpha - 1.0) * log1my) / -np.expm1(alpha * log1my)
    return float(out) if out.ndim == 0 else out


def phi1(lam, x, beta):
    """``1 - 1 / (1 - exp(lam (1 - exp(x^beta))))``, increasing in ``lam``."""
    _positive(lam=lam, x=x, beta=beta)
    z = np.asarray(chen_hazard_integral(beta, lam, np.asarray(x, dtype=float)))
    # 1 - 1/(1 - q) = -q / (1 - q)
    out = -np.exp(-z) / -np.expm1(-z)
    return float(out) if out.ndim == 0 else out


def phi2(t, lam):
    """``t exp(lam(1 - e^t) + t) / (1 - exp(lam(1 - e^t)))``; decreasing in t when lam > 1."""
    _positive(t=t, lam=lam)
    t = np.asarray(t, dtype=float)
    z = lam * np.expm1(t)
    out = t * np.exp(t - z) / -np.expm1(-z)
    return float(out) if out.ndim == 0 else out


def psi2(alpha, x, beta, lam):
    """``1 - 1 / (1 - F0(x)^alpha)`` with ``F0`` the Chen cdf; increasing in alpha."""
    _positive(alpha=alpha, x=x, beta=beta, lam=lam)
    log_w = log_cdf_values(np.asarray(alpha, dtype=float), beta, lam, np.asarray(x, dtype=float))
    out = -np.exp(log_w) / -np.expm1(log_w)
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# Schur scans
# ---------------------------------------------------------------------------

class SchurTarget(enum.Enum):
    """System function and the parameter vector it is scanned over."""

    SERIES_SF_LAMBDA = "series-sf-lambda"
    PARALLEL_CDF_LAMBDA = "parallel-cdf-lambda"
    PARALLEL_CDF_BETA = "parallel-cdf-beta"
    SERIES_SF_ALPHA = "series-sf-alpha"


def _log_terms(target: SchurTarget, fixed: dict) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """Per-component log factors (n, m) of the target as a function of the vector."""
    if target is SchurTarget.SERIES_SF_LAMBDA:
        a, b = fixed["alpha"], fixed["beta"]
        return lambda v, x: log_sf_values(a, b, v[:, None], x[None, :])
    if target is SchurTarget.PARALLEL_CDF_LAMBDA:
        a, b = fixed["alpha"], fixed["beta"]
        return lambda v, x: log_cdf_values(a, b, v[:, None], x[None, :])
    if target is SchurTarget.PARALLEL_CDF_BETA:
        a, lam = fixed["alpha"], fixed["lam"]
        return lambda v, x: log_cdf_values(a, v[:, None], lam, x[None, :])
    b, lam = fixed["beta"], fixed["lam"]
    return lambda v, x: log_sf_values(v[:, None], b, lam, x[None, :])


_REQUIRED = {
    SchurTarget.SERIES_SF_LAMBDA: ("alpha", "beta"),
    SchurTarget.PARALLEL_CDF_LAMBDA: ("alpha", "beta"),
    SchurTarget.PARALLEL_CDF_BETA: ("alpha", "lam"),
    SchurTarget.SERIES_SF_ALPHA: ("beta", "lam"),
}


class SchurVerdict(enum.Enum):
    SCHUR_CONVEX = "SchurConvex"
    SCHUR_CONCAVE = "SchurConcave"
    INDETERMINATE = "Indeterminate"


@dataclass
class SchurReport:
    """Outcome of :func:`schur_scan`.

    ``worst_violation`` is ``(i, j, x, delta)`` for the sampled Delta that
    most contradicts the reported verdict (or, for an indeterminate verdict,
    the largest Delta of the minority sign).  ``delta`` there is the
    unnormalised Delta, ``psi * (a_i - a_j) * (dlog psi_i - dlog psi_j)``.
    """

    verdict: SchurVerdict
    worst_violation: tuple[int, int, float, float] | None = None
    n_positive: int = 0
    n_negative: int = 0
    n_within_tol: int = 0
    skipped_pairs: list[tuple[int, int]] = field(default_factory=list)
    note: str = ""


def schur_scan(target, fixed: dict, vector, x_grid) -> SchurReport:
    """Classify the target as Schur-convex/concave at ``vector`` over ``x_grid``.

    Partial derivatives are central finite differences of ``log psi`` with
    step ``FD_REL_STEP * max(1, |a_i|)``; the sign test runs on
    ``Delta / psi``, which has the same sign as Delta and does not underflow.
    A sample counts as positive/negative only beyond a tolerance made of a
    relative part (``DELTA_REL_TOL``) plus the rounding floor of the finite
    differences.
    """
    target = SchurTarget(target)
    missing = [k for k in _REQUIRED[target] if k not in fixed]
    if missing:
        raise ValueError(f"missing fixed parameter(s) {missing} for {target.value}")
    a = _vec(vector, "vector")
    if a.size < 2:
        raise DomainError("vector must have length >= 2")
    _positive(vector=a)
    x = _vec(x_grid, "x_grid")
    _positive(x_grid=x)

    terms_fn = _log_terms(target, fixed)
    base_terms = terms_fn(a, x)
    base = base_terms.sum(axis=0)
    h = FD_REL_STEP * np.maximum(1.0, np.abs(a))
    deriv = np.empty((a.size, x.size))
    noise = np.empty((a.size, x.size))
    with np.errstate(invalid="ignore"):
        for i in range(a.size):
            up, dn = a.copy(), a.copy()
            up[i] += h[i]
            dn[i] -= h[i]
            t_up, t_dn = terms_fn(up, x), terms_fn(dn, x)
            deriv[i] = (t_up.sum(axis=0) - t_dn.sum(axis=0)) / (2.0 * h[i])
            scale = np.abs(t_up).sum(axis=0) + np.abs(t_dn).sum(axis=0)
            noise[i] = 4.0 * _EPS * scale / (2.0 * h[i])

    n_pos = n_neg = n_tol = 0
    worst_pos = worst_neg = None
    skipped: list[tuple[int, int]] = []
    finite = np.isfinite(base)
    for i in range(a.size):
        for j in range(i + 1, a.size):
            gap = a[i] - a[j]
            if gap == 0.0:
                skipped.append((i, j))
                continue
            norm = gap * (deriv[i] - deriv[j])
            tol = abs(gap) * (DELTA_REL_TOL * (np.abs(deriv[i]) + np.abs(deriv[j]))
                              + noise[i] + noise[j])
            ok = finite & np.isfinite(norm)
            pos = ok & (norm > tol)
            neg = ok & (norm < -tol)
            n_pos += int(pos.sum())
            n_neg += int(neg.sum())
            n_tol += int((ok & ~pos & ~neg).sum())
            if pos.any():
                k = int(np.argmax(np.where(pos, norm, -np.inf)))
                if worst_pos is None or norm[k] > worst_pos[1]:
                    worst_pos = ((i, j, float(x[k])), float(norm[k]), float(np.exp(base[k]) * norm[k]))
            if neg.any():
                k = int(np.argmin(np.where(neg, norm, np.inf)))
                if worst_neg is None or norm[k] < worst_neg[1]:
                    worst_neg = ((i, j, float(x[k])), float(norm[k]), float(np.exp(base[k]) * norm[k]))

    def _fmt(w):
        return (*w[0], w[2])

    if n_pos == 0 and n_neg == 0:
        note = ("all pairs tied; Delta vanishes identically" if n_tol == 0
                else "every sampled Delta is within tolerance of zero")
        return SchurReport(SchurVerdict.INDETERMINATE, None, 0, 0, n_tol, skipped, note)
    if n_neg == 0:
        return SchurReport(SchurVerdict.SCHUR_CONVEX, None, n_pos, 0, n_tol, skipped)
    if n_pos == 0:
        return SchurReport(SchurVerdict.SCHUR_CONCAVE, None, 0, n_neg, n_tol, skipped)
    minority = worst_neg if n_neg <= n_pos else worst_pos
    return SchurReport(SchurVerdict.INDETERMINATE, _fmt(minority), n_pos, n_neg, n_tol, skipped,
                       "Delta changes sign across the scan")
