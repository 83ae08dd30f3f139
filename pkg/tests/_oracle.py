"""High-precision reference evaluations (mpmath, 50+ digits).

Written straight from the closed forms, with no log-space tricks, so they
stay independent of the code under test.  A component survival term
``exp(-z)`` with ``z > 1e5`` is set to zero: it is below 10**-43000 and
cannot affect a 50-digit result next to the surviving terms.
"""

import mpmath as mp

mp.mp.dps = 60
_Z_CUT = mp.mpf(10) ** 5


def _q(x, beta, lam):
    """Chen survival exp(lam (1 - e^{x^beta}))."""
    x, beta, lam = mp.mpf(x), mp.mpf(beta), mp.mpf(lam)
    z = lam * (mp.e ** (x ** beta) - 1)
    return mp.mpf(0) if z > _Z_CUT else mp.e ** (-z)


def _extra_digits(x, beta, lam):
    # digits lost in 1 - (1 - q)^alpha when q = e^-z is tiny
    with mp.workdps(30):
        z = mp.mpf(lam) * (mp.e ** (mp.mpf(x) ** mp.mpf(beta)) - 1)
    return 0 if z > _Z_CUT else int(z / mp.log(10)) + 10


def cdf(alpha, beta, lam, x):
    return (1 - _q(x, beta, lam)) ** mp.mpf(alpha)


def sf(alpha, beta, lam, x):
    with mp.workdps(mp.mp.dps + _extra_digits(x, beta, lam)):
        return +(1 - cdf(alpha, beta, lam, x))


def pdf(alpha, beta, lam, x):
    a, b, l, x = (mp.mpf(v) for v in (alpha, beta, lam, x))
    q = _q(x, b, l)
    return a * (1 - q) ** (a - 1) * b * l * x ** (b - 1) * q * mp.e ** (x ** b)


def series_sf(comps, x):
    out = mp.mpf(1)
    for a, b, l in comps:
        out *= sf(a, b, l, x)
    return out


def parallel_cdf(comps, x):
    out = mp.mpf(1)
    for a, b, l in comps:
        out *= cdf(a, b, l, x)
    return out


def parallel_sf(comps, x):
    extra = max(_extra_digits(x, b, l) for _, b, l in comps)
    with mp.workdps(mp.mp.dps + extra):
        return +(1 - parallel_cdf(comps, x))


def comps(alpha, beta, lam, n=None):
    """Broadcast scalars / sequences into a list of (alpha, beta, lam) triples."""
    vals = [alpha, beta, lam]
    n = n or max(len(v) for v in vals if isinstance(v, (list, tuple)))
    vals = [list(v) if isinstance(v, (list, tuple)) else [v] * n for v in vals]
    return list(zip(*vals))
