"""Inverse-transform sampling and empirical checks of system distributions.

Draws are generated in fixed-size chunks; chunk ``k`` of a run seeded with
``seed`` uses ``numpy.random.default_rng([seed, k])`` (PCG64).  The result
is therefore the same whether chunks are produced serially or by separate
workers, and is byte-stable for a given seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ecd_core import ECDParams, quantile
from .ordering import Direction, OrderingVerdict, Relation, _points, _same_kind
from .systems import SystemKind, SystemSpec

__all__ = [
    "SampleBatch",
    "CHUNK_SIZE",
    "uniforms",
    "sample_component",
    "sample_system",
    "empirical_sf",
    "sigma_band",
    "empirical_st_check",
]

CHUNK_SIZE = 1 << 16
_U_LO = np.nextafter(0.0, 1.0)
_U_HI = np.nextafter(1.0, 0.0)


@dataclass(frozen=True)
class SampleBatch:
    draws: np.ndarray
    seed: int
    source: ECDParams | SystemSpec

    def __len__(self) -> int:
        return self.draws.size


def uniforms(n: int, width: int, seed: int, chunk_size: int = CHUNK_SIZE) -> np.ndarray:
    """``(n, width)`` uniforms on the open unit interval, chunk-seeded."""
    if n < 1:
        raise ValueError("n must be >= 1")
    parts = []
    for k, start in enumerate(range(0, n, chunk_size)):
        m = min(chunk_size, n - start)
        rng = np.random.default_rng([seed, k])
        parts.append(rng.random((m, width)))
    return np.clip(np.concatenate(parts), _U_LO, _U_HI)


def sample_component(p: ECDParams, n: int, seed: int) -> SampleBatch:
    u = uniforms(n, 1, seed)[:, 0]
    return SampleBatch(np.asarray(quantile(p, u)), seed, p)


def sample_system(s: SystemSpec, n: int, seed: int) -> SampleBatch:
    """Min (series) or max (parallel) of one independent draw per component."""
    comps = s.components.components
    u = uniforms(n, len(comps), seed)
    cols = np.column_stack([np.asarray(quantile(c, u[:, k])) for k, c in enumerate(comps)])
    reduce = np.min if s.kind is SystemKind.SERIES else np.max
    return SampleBatch(reduce(cols, axis=1), seed, s)


def empirical_sf(draws, x) -> np.ndarray:
    """Fraction of draws strictly greater than each ``x``."""
    d = np.sort(np.asarray(draws, dtype=float))
    x = np.asarray(x, dtype=float)
    return 1.0 - np.searchsorted(d, x, side="right") / d.size


def sigma_band(p, n: int) -> np.ndarray:
    """Binomial standard error ``sqrt(p (1 - p) / n)``."""
    p = np.asarray(p, dtype=float)
    return np.sqrt(p * (1.0 - p) / n)


def empirical_st_check(a: SystemSpec, b: SystemSpec, g, n: int, seed: int,
                       k_sigma: float = 3.0) -> OrderingVerdict:
    """Monte Carlo version of the usual stochastic order check.

    Each empirical survival gets a ``k_sigma`` binomial band; only grid
    points where the two bands are disjoint carry evidence.  With no such
    point the direction is ``INCONCLUSIVE``.  Systems use seeds ``seed``
    and ``seed + 1``.
    """
    if n < 10_000:
        raise ValueError("empirical_st_check needs n >= 10_000")
    _same_kind(a, b)
    x = _points(g)
    pa = empirical_sf(sample_system(a, n, seed).draws, x)
    pb = empirical_sf(sample_system(b, n, seed + 1).draws, x)
    sa, sb = sigma_band(pa, n), sigma_band(pb, n)
    below = pa + k_sigma * sa < pb - k_sigma * sb
    above = pa - k_sigma * sa > pb + k_sigma * sb
    w_below = [(float(x[i]), float(pa[i]), float(pb[i])) for i in np.nonzero(below)[0]]
    w_above = [(float(x[i]), float(pa[i]), float(pb[i])) for i in np.nonzero(above)[0]]
    note = f"{int(below.sum() + above.sum())} of {x.size} points separated at {k_sigma:g} sigma"
    if not w_below and not w_above:
        return OrderingVerdict(Relation.ST, Direction.INCONCLUSIVE, [], [], True, note)
    if not w_above:
        return OrderingVerdict(Relation.ST, Direction.A_LE_B, w_below, [], False, note)
    if not w_below:
        return OrderingVerdict(Relation.ST, Direction.B_LE_A, w_above, [], False, note)
    return OrderingVerdict(Relation.ST, Direction.NEITHER, [w_below[0], w_above[0]], [], False, note)
