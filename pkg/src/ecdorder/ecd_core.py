"""Exponentiated Chen distribution (ECD) for a single component.

The ECD with parameters ``(alpha, beta, lambda)`` has distribution function

    F(x) = (1 - exp(lambda * (1 - exp(x**beta))))**alpha,   x > 0,

and reduces to the Chen distribution when ``alpha == 1``.

Everything tail sensitive is evaluated in log space.  Writing
``z = lambda * (exp(x**beta) - 1)`` the Chen survival is ``exp(-z)`` and

    log F(x)  = alpha * log(1 - exp(-z))
    log S(x)  = log(1 - exp(log F(x)))

so both tails keep full relative precision.  ``x**beta`` is formed as
``exp(beta * log(x))``.

The array helpers (``*_values``) broadcast over numpy arrays and are what
:mod:`ecdorder.systems` builds on.  The public functions take an
:class:`ECDParams` and return a float for scalar ``x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DomainError",
    "ECDParams",
    "chen_cdf",
    "cdf",
    "log_cdf",
    "sf",
    "log_sf",
    "pdf",
    "log_pdf",
    "reversed_hazard",
    "hazard",
    "quantile",
    "weibull_transform_sf",
]

LN2 = math.log(2.0)

# Above this value of z the survival 1 - (1 - e^-z)^alpha is replaced by its
# first-order expansion alpha * e^-z; e^-z is then below 1e-304.
_Z_ASYMPTOTIC = 700.0


class DomainError(ValueError):
    """Raised when an argument lies outside a function's domain."""


@dataclass(frozen=True)
class ECDParams:
    """Parameters of one Exponentiated Chen component.

    Attributes
    ----------
    alpha : float
        Exponentiation (proportional reversed hazard) parameter.
    beta : float
        Shape parameter.
    lam : float
        Rate-like parameter, called lambda in the literature.
    """

    alpha: float
    beta: float
    lam: float

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "lam"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float, np.floating, np.integer))
                    and math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be a finite positive real, got {value!r}")
            object.__setattr__(self, name, float(value))

    def with_(self, **changes: float) -> "ECDParams":
        fields = {"alpha": self.alpha, "beta": self.beta, "lam": self.lam}
        fields.update(changes)
        return ECDParams(**fields)


# ---------------------------------------------------------------------------
# numerical primitives
# ---------------------------------------------------------------------------

def log1mexp(a):
    """Return ``log(1 - exp(-a))`` for ``a >= 0`` without cancellation.

    Uses ``log(-expm1(-a))`` for small ``a`` and ``log1p(-exp(-a))``
    otherwise (Maechler's switch at log 2).
    """
    a = np.asarray(a, dtype=float)
    with np.errstate(divide="ignore"):
        small = a <= LN2
        out = np.where(
            small,
            np.log(-np.expm1(-np.where(small, a, 1.0))),
            np.log1p(-np.exp(-np.where(small, 1.0, a))),
        )
    return out


def _as_x(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)):
        raise DomainError("x must not be NaN")
    if np.any(arr < 0):
        bad = arr[arr < 0].flat[0]
        raise DomainError(f"x must be >= 0, got {bad!r}")
    return arr


def _ret(arr: np.ndarray):
    return float(arr) if arr.ndim == 0 else arr


def _power(x, beta):
    """``x**beta`` as ``exp(beta*log x)``, exact zero at ``x == 0``."""
    with np.errstate(divide="ignore", over="ignore"):
        return np.exp(beta * np.log(x))


def chen_hazard_integral(beta, lam, x):
    """Return ``z = lam * (exp(x**beta) - 1)``, the Chen cumulative hazard."""
    with np.errstate(over="ignore"):
        return lam * np.expm1(_power(x, beta))


# ---------------------------------------------------------------------------
# broadcasting array helpers
# ---------------------------------------------------------------------------

def log_cdf_values(alpha, beta, lam, x):
    """Broadcast ``log F(x)``; ``-inf`` at ``x == 0``."""
    z = chen_hazard_integral(beta, lam, x)
    with np.errstate(invalid="ignore"):
        out = alpha * log1mexp(z)
    # alpha * (-inf) is fine, but 0 * inf can appear when z is inf
    return np.where(np.isinf(z), 0.0, out)


def _log_sf_scaled(alpha, z):
    """``log(S * e^z)`` where ``S = 1 - (1 - e^-z)^alpha``.

    Separating the ``-z`` keeps hazard-type differences free of the
    cancellation between two huge logs.
    """
    alpha = np.asarray(alpha, dtype=float)
    big = z > _Z_ASYMPTOTIC
    zs = np.where(big, 1.0, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        exact = log1mexp(-alpha * log1mexp(zs)) + zs
        q = np.exp(-np.where(big, z, 0.0))
        # log(alpha (1 + (1 - alpha) q / 2 + ...)); q < 1e-304 here
        asym = np.log(alpha) + np.log1p(0.5 * (1.0 - alpha) * q)
    return np.where(big, asym, exact)


def log_sf_values(alpha, beta, lam, x):
    """Broadcast ``log S(x)``; ``-inf`` only when ``z`` overflows."""
    z = chen_hazard_integral(beta, lam, x)
    with np.errstate(invalid="ignore"):
        out = _log_sf_scaled(alpha, z) - z
    return np.where(np.isinf(z), -np.inf, out)


def log_hazard_values(alpha, beta, lam, x):
    """Broadcast ``log`` hazard rate for ``x > 0``; ``nan`` where saturated."""
    u = _power(x, beta)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        z = lam * np.expm1(u)
        out = (np.log(alpha) + (alpha - 1.0) * log1mexp(z) + np.log(beta * lam)
               + (beta - 1.0) * np.log(x) + u - _log_sf_scaled(alpha, z))
    return np.where(np.isinf(z), np.nan, out)


def log_pdf_values(alpha, beta, lam, x):
    """Broadcast ``log f(x)`` for ``x > 0``."""
    u = _power(x, beta)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        z = lam * np.expm1(u)
        out = (np.log(alpha) + (alpha - 1.0) * log1mexp(z) + np.log(beta)
               + np.log(lam) + (beta - 1.0) * np.log(x) + u - z)
    return np.where(np.isinf(z), -np.inf, out)


def log_reversed_hazard_values(alpha, beta, lam, x):
    """Broadcast ``log`` of the reversed hazard rate, direct closed form."""
    u = _power(x, beta)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        z = lam * np.expm1(u)
        out = (np.log(alpha * beta * lam) + (beta - 1.0) * np.log(x)
               + u - z - log1mexp(z))
    return np.where(np.isinf(z), -np.inf, out)


def _pdf_at_zero(p: ECDParams) -> float:
    # f(x) ~ alpha beta lam^alpha x^(alpha beta - 1) as x -> 0
    ab = p.alpha * p.beta
    if ab > 1:
        return 0.0
    if ab == 1:
        return p.alpha * p.beta * p.lam ** p.alpha
    return math.inf


# ---------------------------------------------------------------------------
# public single-component API
# ---------------------------------------------------------------------------

def chen_cdf(beta: float, lam: float, x):
    """Chen distribution function ``1 - exp(lam * (1 - exp(x**beta)))``."""
    ECDParams(1.0, beta, lam)
    x = _as_x(x)
    return _ret(-np.expm1(-chen_hazard_integral(beta, lam, x)))


def cdf(p: ECDParams, x):
    """Distribution function of the ECD."""
    x = _as_x(x)
    if p.alpha == 1.0:
        return _ret(-np.expm1(-chen_hazard_integral(p.beta, p.lam, x)))
    return _ret(np.exp(log_cdf_values(p.alpha, p.beta, p.lam, x)))


def log_cdf(p: ECDParams, x):
    """Natural log of :func:`cdf`."""
    return _ret(log_cdf_values(p.alpha, p.beta, p.lam, _as_x(x)))


def sf(p: ECDParams, x):
    """Survival function ``1 - F(x)``, computed without cancellation."""
    return _ret(np.exp(log_sf_values(p.alpha, p.beta, p.lam, _as_x(x))))


def log_sf(p: ECDParams, x):
    """Natural log of :func:`sf`."""
    return _ret(log_sf_values(p.alpha, p.beta, p.lam, _as_x(x)))


def log_pdf(p: ECDParams, x):
    x = _as_x(x)
    with np.errstate(divide="ignore"):
        out = np.where(x == 0, np.log(_pdf_at_zero(p)),
                       log_pdf_values(p.alpha, p.beta, p.lam, np.where(x == 0, 1.0, x)))
    return _ret(out)


def pdf(p: ECDParams, x):
    """Density ``alpha F0^(alpha-1) beta lam x^(beta-1) exp(lam(1-e^{x^beta}) + x^beta)``."""
    return _ret(np.exp(np.asarray(log_pdf(p, x))))


def reversed_hazard(p: ECDParams, x):
    """Reversed hazard rate ``f(x) / F(x)``, evaluated from its closed form."""
    x = _as_x(x)
    xs = np.where(x == 0, 1.0, x)
    out = np.exp(log_reversed_hazard_values(p.alpha, p.beta, p.lam, xs))
    return _ret(np.where(x == 0, np.inf, out))


def hazard(p: ECDParams, x):
    """Hazard rate ``f(x) / S(x)`` computed as ``exp(log f - log S)``.

    Raises
    ------
    OverflowError
        If the survival function is saturated (``log S == -inf``) or the
        hazard itself overflows.
    """
    x = _as_x(x)
    lsf = np.asarray(log_sf(p, x))
    if np.any(np.isneginf(lsf)):
        bad = x[np.isneginf(lsf)].flat[0]
        raise OverflowError(f"survival function underflows at x={bad!r}")
    with np.errstate(over="ignore"):
        out = np.exp(log_hazard_values(p.alpha, p.beta, p.lam, np.where(x == 0, 1.0, x)))
    out = np.where(x == 0, _pdf_at_zero(p), out)
    if np.any(np.isinf(out) & (x > 0)):
        raise OverflowError("hazard rate overflows")
    return _ret(out)


def quantile(p: ECDParams, u):
    """Inverse of :func:`cdf`.

    ``x = log(1 - log(1 - u**(1/alpha)) / lam) ** (1/beta)``, with every
    step written through ``expm1``/``log1p``.
    """
    u = np.asarray(u, dtype=float)
    if np.any(~((u > 0) & (u < 1))):
        raise DomainError("u must lie in the open interval (0, 1)")
    log_v = np.log(u) / p.alpha             # log of the Chen cdf at the quantile
    small = log_v < -LN2
    with np.errstate(divide="ignore"):
        neg_log_w = np.where(small, -np.log1p(-np.exp(np.where(small, log_v, -1.0))),
                             -np.log(-np.expm1(np.where(small, -1.0, log_v))))
    z = neg_log_w / p.lam
    with np.errstate(divide="ignore"):
        return _ret(np.exp(np.log(np.log1p(z)) / p.beta))


def weibull_transform_sf(beta: float, lam: float, t):
    """Survival of ``T = (exp(X**beta) - 1)**(1/beta)`` for ``X ~ Chen(beta, lam)``.

    ``T`` is Weibull, so the result equals ``exp(-lam * t**beta)``; here it
    is obtained by mapping ``t`` back to ``x`` and evaluating the Chen
    survival there.
    """
    ECDParams(1.0, beta, lam)
    t = np.asarray(t, dtype=float)
    if np.any(~(t > 0)):
        raise DomainError("t must be > 0")
    x = np.exp(np.log(np.log1p(_power(t, beta))) / beta)
    return _ret(np.exp(-chen_hazard_integral(beta, lam, x)))
