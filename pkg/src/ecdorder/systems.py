"""Series (minimum) and parallel (maximum) systems of independent ECD components.

For components with distribution functions ``F_k`` and survival functions
``S_k``:

* series survival   ``S_{1:n}(x) = prod_k S_k(x)``
* parallel cdf      ``F_{n:n}(x) = prod_k F_k(x)``

Products are accumulated as sums of per-component logs.  The log terms are
sorted before summation so the result is bit-for-bit invariant under
permutation of the components.  The complementary quantities go through
``expm1``, or through a log-sum-exp of the component tails when every
component sits in its tail.

A component whose cumulative hazard ``lam * (exp(x**beta) - 1)`` overflows
has ``log S_k = -inf``; it is *saturated*.  In a parallel system such a
component simply drops out of the survival function, which is how the
surviving small-``beta`` components keep ratios finite far in the tail.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.special import logsumexp

from .ecd_core import (
    DomainError,
    ECDParams,
    _as_x,
    _ret,
    log1mexp,
    log_cdf_values,
    log_hazard_values,
    log_pdf_values,
    log_reversed_hazard_values,
    log_sf_values,
)

__all__ = [
    "ComponentSet",
    "SystemKind",
    "SystemSpec",
    "series_sf",
    "series_log_sf",
    "series_cdf",
    "series_log_cdf",
    "series_log_pdf",
    "parallel_cdf",
    "parallel_log_cdf",
    "parallel_sf",
    "parallel_log_sf",
    "parallel_log_pdf",
    "parallel_sf_naive",
    "parallel_pdf_common",
    "lr_ratio_common",
    "log_lr_ratio_common",
]

# When every component tail is below e^-40 the complement of the product is
# the sum of the tails to relative accuracy n * e^-40.
_TAIL_SWITCH = -40.0


@dataclass(frozen=True)
class ComponentSet:
    """Ordered, non-empty collection of independent ECD components."""

    components: tuple[ECDParams, ...]

    def __post_init__(self) -> None:
        comps = tuple(self.components)
        if not comps:
            raise DomainError("a component set needs at least one component")
        for c in comps:
            if not isinstance(c, ECDParams):
                raise TypeError(f"expected ECDParams, got {type(c).__name__}")
        object.__setattr__(self, "components", comps)

    @classmethod
    def from_vectors(cls, alpha, beta, lam) -> "ComponentSet":
        """Build from per-component vectors; scalars are broadcast."""
        a, b, l = np.broadcast_arrays(np.atleast_1d(np.asarray(alpha, float)),
                                      np.atleast_1d(np.asarray(beta, float)),
                                      np.atleast_1d(np.asarray(lam, float)))
        return cls(tuple(ECDParams(float(x), float(y), float(z)) for x, y, z in zip(a, b, l)))

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    @property
    def alpha(self) -> np.ndarray:
        return np.array([c.alpha for c in self.components])

    @property
    def beta(self) -> np.ndarray:
        return np.array([c.beta for c in self.components])

    @property
    def lam(self) -> np.ndarray:
        return np.array([c.lam for c in self.components])

    def shares(self, *names: str) -> bool:
        """True if every component has the same value for each named field."""
        return all(np.all(getattr(self, n) == getattr(self, n)[0]) for n in names)


class SystemKind(enum.Enum):
    SERIES = "series"
    PARALLEL = "parallel"


@dataclass(frozen=True)
class SystemSpec:
    components: ComponentSet
    kind: SystemKind

    def __post_init__(self) -> None:
        if not isinstance(self.components, ComponentSet):
            object.__setattr__(self, "components", ComponentSet(tuple(self.components)))
        object.__setattr__(self, "kind", SystemKind(self.kind))

    def log_sf(self, x):
        fn = series_log_sf if self.kind is SystemKind.SERIES else parallel_log_sf
        return fn(self.components, x)

    def log_cdf(self, x):
        fn = series_log_cdf if self.kind is SystemKind.SERIES else parallel_log_cdf
        return fn(self.components, x)

    def log_pdf(self, x):
        fn = series_log_pdf if self.kind is SystemKind.SERIES else parallel_log_pdf
        return fn(self.components, x)

    def sf(self, x):
        return _ret(np.exp(np.asarray(self.log_sf(x))))

    def cdf(self, x):
        return _ret(np.exp(np.asarray(self.log_cdf(x))))


def _cols(c: ComponentSet):
    # shape (n, 1) so component terms broadcast against a flat x
    return c.alpha[:, None], c.beta[:, None], c.lam[:, None]


def _grid(x) -> tuple[np.ndarray, tuple]:
    x = _as_x(x)
    return np.atleast_1d(x).ravel(), x.shape


def _shape(out: np.ndarray, shape: tuple):
    return _ret(out.reshape(shape))


def _sorted_sum(terms: np.ndarray) -> np.ndarray:
    # canonical accumulation order along the component axis
    return np.sort(terms, axis=0).sum(axis=0)


def _log_complement_of_product(log_tails: np.ndarray, log_bodies: np.ndarray) -> np.ndarray:
    """``log(1 - prod(exp(log_bodies)))`` with ``exp(log_tails) = 1 - exp(log_bodies)``."""
    total = _sorted_sum(log_bodies)
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = log1mexp(-total)
        via_tails = logsumexp(np.sort(log_tails, axis=0), axis=0)
    use_tails = np.max(log_tails, axis=0) < _TAIL_SWITCH
    return np.where(use_tails, via_tails, direct)


# ---------------------------------------------------------------------------
# series system
# ---------------------------------------------------------------------------

def series_log_sf(c: ComponentSet, x):
    """``log`` of the series-system survival, a sum of component log survivals."""
    xs, shape = _grid(x)
    terms = log_sf_values(*_cols(c), xs[None, :])
    return _shape(_sorted_sum(terms), shape)


def series_sf(c: ComponentSet, x):
    """Series-system survival ``prod_k [1 - (1 - e^{lam_k(1 - e^{x^beta_k})})^alpha_k]``."""
    return _ret(np.exp(np.asarray(series_log_sf(c, x))))


def series_log_cdf(c: ComponentSet, x):
    xs, shape = _grid(x)
    cols = _cols(c)
    lsf = log_sf_values(*cols, xs[None, :])
    lcdf = log_cdf_values(*cols, xs[None, :])
    return _shape(_log_complement_of_product(lcdf, lsf), shape)


def series_cdf(c: ComponentSet, x):
    return _ret(np.exp(np.asarray(series_log_cdf(c, x))))


def series_log_pdf(c: ComponentSet, x):
    """Series density ``S(x) * sum_k h_k(x)``, in log form."""
    xs, shape = _grid(x)
    cols = _cols(c)
    pos = np.where(xs > 0, xs, 1.0)[None, :]
    lsf = log_sf_values(*cols, pos)
    log_h = log_hazard_values(*cols, pos)
    out = _sorted_sum(lsf) + logsumexp(np.sort(log_h, axis=0), axis=0)
    out = np.where(np.any(np.isneginf(lsf), axis=0), -np.inf, out)
    return _shape(np.where(xs > 0, out, np.nan), shape)


# ---------------------------------------------------------------------------
# parallel system
# ---------------------------------------------------------------------------

def parallel_log_cdf(c: ComponentSet, x):
    """``log`` of the parallel-system cdf, a sum of component log cdfs."""
    xs, shape = _grid(x)
    terms = log_cdf_values(*_cols(c), xs[None, :])
    return _shape(_sorted_sum(terms), shape)


def parallel_cdf(c: ComponentSet, x):
    """Parallel-system cdf ``prod_k (1 - e^{lam_k(1 - e^{x^beta_k})})^alpha_k``."""
    return _ret(np.exp(np.asarray(parallel_log_cdf(c, x))))


def parallel_log_sf(c: ComponentSet, x):
    """``log(1 - prod F_k)``; ``-inf`` only if every component is saturated."""
    xs, shape = _grid(x)
    cols = _cols(c)
    lcdf = log_cdf_values(*cols, xs[None, :])
    lsf = log_sf_values(*cols, xs[None, :])
    return _shape(_log_complement_of_product(lsf, lcdf), shape)


def parallel_sf(c: ComponentSet, x):
    """Parallel-system survival; ``0.0`` where :func:`parallel_log_sf` is ``-inf``."""
    return _ret(np.exp(np.asarray(parallel_log_sf(c, x))))


def parallel_sf_naive(c: ComponentSet, x):
    """Textbook ``1 - prod F_k`` in plain float64.

    Kept for diagnostics only: it loses every significant digit once the
    survival falls near machine epsilon.
    """
    xs, shape = _grid(x)
    a, b, l = _cols(c)
    with np.errstate(over="ignore"):
        F = (1.0 - np.exp(l * (1.0 - np.exp(xs[None, :] ** b)))) ** a
    return _shape(1.0 - np.prod(F, axis=0), shape)


def parallel_log_pdf(c: ComponentSet, x):
    """Parallel density ``F(x) * sum_k rh_k(x)``, in log form."""
    xs, shape = _grid(x)
    cols = _cols(c)
    pos = np.where(xs > 0, xs, 1.0)[None, :]
    lcdf = log_cdf_values(*cols, pos)
    log_rh = log_reversed_hazard_values(*cols, pos)
    out = _sorted_sum(lcdf) + logsumexp(np.sort(log_rh, axis=0), axis=0)
    return _shape(np.where(xs > 0, out, np.nan), shape)


def _common(c: ComponentSet) -> tuple[float, float, float]:
    if not c.shares("beta", "lam"):
        raise DomainError("closed-form parallel density needs a common beta and lambda")
    return float(c.alpha.sum()), float(c.beta[0]), float(c.lam[0])


def parallel_pdf_common(c: ComponentSet, x):
    """Parallel density for components sharing ``beta`` and ``lambda``.

    The cdf is then ``F0(x)**sum(alpha)``, so the density is the single
    component density with ``alpha`` replaced by the sum.
    """
    total, beta, lam = _common(c)
    x = _as_x(x)
    if np.any(x == 0):
        raise DomainError("x must be > 0")
    return _ret(np.exp(log_pdf_values(total, beta, lam, x)))


def log_lr_ratio_common(ca: ComponentSet, cb: ComponentSet, x):
    """``log(f_B(x) / f_A(x))`` for parallel systems with a shared ``beta``, ``lambda``."""
    sa, beta, lam = _common(ca)
    sb, beta_b, lam_b = _common(cb)
    if (beta, lam) != (beta_b, lam_b):
        raise DomainError("both systems must share the same beta and lambda")
    x = _as_x(x)
    log_base = log_cdf_values(1.0, beta, lam, x)
    diff = sb - sa
    with np.errstate(invalid="ignore"):
        out = np.log(sb / sa) + np.where(diff == 0, 0.0, diff * log_base)
    return _ret(out)


def lr_ratio_common(ca: ComponentSet, cb: ComponentSet, x):
    """Density ratio ``(sum a*_k / sum a_k) * F0(x)**(sum a*_k - sum a_k)``."""
    return _ret(np.exp(np.asarray(log_lr_ratio_common(ca, cb, x))))


def components(params: Iterable[ECDParams] | Sequence[tuple[float, float, float]]) -> ComponentSet:
    """Convenience constructor accepting ``ECDParams`` or ``(alpha, beta, lam)`` tuples."""
    return ComponentSet(tuple(p if isinstance(p, ECDParams) else ECDParams(*p) for p in params))
