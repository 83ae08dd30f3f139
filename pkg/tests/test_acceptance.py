"""Acceptance criteria, one group per criterion (see conftest for the summary lines).

Criteria 2 and 3 compare against the values printed with the examples.
Those printed values do not survive an independent 60-digit recomputation,
so the parts of 2 and 3 that ask for the printed pattern or values fail
here by design; the oracle-agreement parts pass.
"""

import math
import time

import mpmath as mp
import numpy as np
import pytest

import _oracle as orc
import _pairs
from ecdorder.ecd_core import ECDParams, cdf, pdf, quantile, reversed_hazard, weibull_transform_sf
from ecdorder.golden import QUOTED_F1, QUOTED_F2, QUOTED_F3, QUOTED_F4, example_pair
from ecdorder.majorization import psi1
from ecdorder.montecarlo import empirical_sf, empirical_st_check, sample_system, sigma_band
from ecdorder.ordering import Direction, check_hr, check_lr, check_rh, check_st, default_grid

EX1_LAM = [0.8, 1.2, 1.3, 1.9]
EX1_MU = [0.5, 0.7, 1.5, 2.5]
EX3_BETA = [0.4, 0.9, 2.0, 7.5]
EX3_BETA_STAR = [0.2, 1.0, 1.9, 7.7]
MC_SEED = 20240611


def pattern(values):
    return ["up" if d > 0 else "down" if d < 0 else "flat" for d in np.diff(values)]


def ratio(fn_y, fn_x, x):
    return np.exp(np.asarray(fn_y(x)) - np.asarray(fn_x(x)))


# ---------------------------------------------------------------------------
# 1. Example 1 golden values
# ---------------------------------------------------------------------------

@pytest.mark.acceptance(1, "Example 1 series sf-ratio f1 within 0.002 of the printed values, < 1 s")
@pytest.mark.parametrize("alpha", [0.7, 1.5])
def test_c1_example1_values(alpha):
    t0 = time.perf_counter()
    X, Y = example_pair(1, alpha)
    xs = np.array(list(QUOTED_F1[alpha]))
    got = ratio(Y.log_sf, X.log_sf, xs)
    elapsed = time.perf_counter() - t0
    np.testing.assert_allclose(got, list(QUOTED_F1[alpha].values()), rtol=0, atol=0.002)
    assert elapsed < 1.0


# ---------------------------------------------------------------------------
# 2. Example 2 pattern and oracle
# ---------------------------------------------------------------------------

def _f2_oracle(alpha, x):
    a = orc.parallel_sf(orc.comps(alpha, 2, EX1_LAM), x)
    b = orc.parallel_sf(orc.comps(alpha, 2, EX1_MU), x)
    return b / a


@pytest.mark.acceptance(2, "Example 2 parallel sf-ratio f2: printed up/down pattern and 50-digit oracle within 1e-6")
@pytest.mark.parametrize("alpha", [0.7, 1.5])
def test_c2_example2_oracle(alpha, report):
    assert mp.mp.dps >= 50
    X, Y = example_pair(2, alpha)
    for x, printed in QUOTED_F2[alpha].items():
        ref = _f2_oracle(alpha, x)
        got = float(ratio(Y.log_sf, X.log_sf, x))
        assert got == pytest.approx(float(ref), rel=1e-6)
        factor = printed / float(ref)
        report(f"f2({x:g}) alpha={alpha:g}: printed {printed:g}, oracle {mp.nstr(ref, 10)}, "
               f"printed/oracle {factor:.4f} ({'within' if 1 / 1.5 <= factor <= 1.5 else 'outside'} factor 1.5)")


@pytest.mark.acceptance(2, "Example 2 parallel sf-ratio f2: printed up/down pattern and 50-digit oracle within 1e-6")
@pytest.mark.parametrize("alpha", [0.7, 1.5])
def test_c2_example2_pattern(alpha):
    X, Y = example_pair(2, alpha)
    xs = np.array(list(QUOTED_F2[alpha]))
    got = ratio(Y.log_sf, X.log_sf, xs)
    assert pattern(got) == pattern(list(QUOTED_F2[alpha].values()))


# ---------------------------------------------------------------------------
# 3. Example 3 patterns, values and oracle
# ---------------------------------------------------------------------------

CRIT3 = "Example 3: f3 down-up within 0.003 of printed values, f4 up-down, oracle agreement"


@pytest.mark.acceptance(3, CRIT3)
def test_c3_f3_values(report):
    X, Y = example_pair(3)
    xs = np.array(list(QUOTED_F3))
    got = ratio(Y.log_cdf, X.log_cdf, xs)
    report(f"f3 at {xs.tolist()}: recomputed {np.round(got, 6).tolist()}, printed {list(QUOTED_F3.values())}")
    np.testing.assert_allclose(got, list(QUOTED_F3.values()), rtol=0, atol=0.003)


@pytest.mark.acceptance(3, CRIT3)
def test_c3_f3_pattern():
    X, Y = example_pair(3)
    xs = np.array(list(QUOTED_F3))
    assert pattern(ratio(Y.log_cdf, X.log_cdf, xs)) == ["down", "up"]


@pytest.mark.acceptance(3, CRIT3)
def test_c3_f4_pattern(report):
    X, Y = example_pair(3)
    xs = np.array(list(QUOTED_F4))
    got = ratio(Y.log_sf, X.log_sf, xs)
    report(f"f4 at {xs.tolist()}: recomputed {[f'{v:.6g}' for v in got]}, printed {list(QUOTED_F4.values())}")
    assert pattern(got) == ["up", "down"]


@pytest.mark.acceptance(3, CRIT3)
def test_c3_oracle():
    assert mp.mp.dps >= 50
    X, Y = example_pair(3)
    A, B = orc.comps(0.6, EX3_BETA, 2), orc.comps(0.6, EX3_BETA_STAR, 2)
    for x in QUOTED_F3:
        ref = orc.parallel_cdf(B, x) / orc.parallel_cdf(A, x)
        assert float(ratio(Y.log_cdf, X.log_cdf, x)) == pytest.approx(float(ref), rel=1e-6)
    for x in QUOTED_F4:
        ref = orc.parallel_sf(B, x) / orc.parallel_sf(A, x)
        assert float(ratio(Y.log_sf, X.log_sf, x)) == pytest.approx(float(ref), rel=1e-6)


# ---------------------------------------------------------------------------
# 4. Example 4 / Figure 2
# ---------------------------------------------------------------------------

@pytest.mark.acceptance(4, "Example 4 series sf difference S_X - S_Y <= 1e-12 on the 400-point default grid")
def test_c4_example4_difference():
    X, Y = example_pair(4)
    g = default_grid(X, Y)
    assert len(g) == 400
    diff = np.asarray(X.sf(g.points)) - np.asarray(Y.sf(g.points))
    assert np.all(diff <= 1e-12)


# ---------------------------------------------------------------------------
# 5. Theorem property suites
# ---------------------------------------------------------------------------

CRIT5 = "Theorem suites, 50 seeded majorization pairs each, each suite < 30 s"


def _st_suite(gen, expected):
    t0 = time.perf_counter()
    bad = []
    for seed in range(50):
        X, Y = gen(seed)
        d = check_st(X, Y, default_grid(X, Y)).direction
        if d is not expected:
            bad.append((seed, d.value))
    return bad, time.perf_counter() - t0


@pytest.mark.acceptance(5, CRIT5)
@pytest.mark.parametrize("alpha,expected", [(0.7, Direction.A_LE_B), (1.5, Direction.B_LE_A)])
def test_c5a_theorem1(alpha, expected):
    bad, elapsed = _st_suite(lambda s: _pairs.theorem1(s, alpha), expected)
    assert bad == [] and elapsed < 30


@pytest.mark.acceptance(5, CRIT5)
@pytest.mark.parametrize("alpha", [0.7, 1.5])
def test_c5b_theorem2(alpha):
    bad, elapsed = _st_suite(lambda s: _pairs.theorem2(s, alpha), Direction.A_LE_B)
    assert bad == [] and elapsed < 30


@pytest.mark.acceptance(5, CRIT5)
def test_c5c_theorem3():
    bad, elapsed = _st_suite(lambda s: _pairs.theorem3(s, 2.0), Direction.A_LE_B)
    assert bad == [] and elapsed < 30


@pytest.mark.acceptance(5, CRIT5)
def test_c5d_theorem5():
    t0 = time.perf_counter()
    for seed in range(50):
        X, Y = _pairs.theorem5(seed)
        v = check_lr(X, Y, default_grid(X, Y))
        sa, sb = math.fsum(X.components.alpha), math.fsum(Y.components.alpha)
        assert (v.direction is Direction.A_LE_B) == (sa <= sb * (1 + 1e-12)), seed
    assert time.perf_counter() - t0 < 30


# ---------------------------------------------------------------------------
# 6. psi1 monotonicity
# ---------------------------------------------------------------------------

CRIT6 = "psi1 monotone in y on 1000-point grids with the alpha-dependent direction; psi1(1, y) = 1"


@pytest.mark.acceptance(6, CRIT6)
@pytest.mark.parametrize("alpha", [0.1, 0.5, 0.9, 1.1, 2.0, 5.0])
def test_c6_psi1_direction(alpha):
    y = np.linspace(0.0, 1.0, 1002)[1:-1]
    steps = np.diff(psi1(alpha, y))
    assert np.all(steps > 0) if alpha < 1 else np.all(steps < 0)


@pytest.mark.acceptance(6, CRIT6)
def test_c6_psi1_alpha_one():
    y = np.linspace(0.0, 1.0, 1002)[1:-1]
    assert np.max(np.abs(psi1(1.0, y) - 1.0)) <= 1e-12


# ---------------------------------------------------------------------------
# 7. analytic identities
# ---------------------------------------------------------------------------

CRIT7 = "Weibull transform, quantile roundtrips, pdf normalisation, reversed-hazard identity"


@pytest.mark.acceptance(7, CRIT7)
def test_c7_weibull_transform():
    rng = np.random.default_rng(MC_SEED)
    beta, lam, t = rng.uniform(0.2, 5, 50), rng.uniform(0.1, 5, 50), rng.uniform(0.01, 3, 50)
    got = np.array([weibull_transform_sf(b, l, s) for b, l, s in zip(beta, lam, t)])
    assert np.max(np.abs(got - np.exp(-lam * t ** beta))) <= 1e-12


@pytest.mark.acceptance(7, CRIT7)
def test_c7_quantile_roundtrips():
    rng = np.random.default_rng(MC_SEED + 1)
    for a, b, l in zip(rng.uniform(0.1, 5, 40), rng.uniform(0.2, 5, 40), rng.uniform(0.1, 5, 40)):
        p = ECDParams(a, b, l)
        u = rng.uniform(1e-6, 1 - 1e-6, 25)
        x = quantile(p, u)
        assert np.max(np.abs(cdf(p, x) - u)) <= 1e-10
        np.testing.assert_allclose(quantile(p, cdf(p, x)), x, rtol=1e-8)


@pytest.mark.acceptance(7, CRIT7)
@pytest.mark.parametrize("params", [(0.7, 2, 0.8), (2, 1, 1), (0.6, 3, 2), (1.5, 0.8, 0.5)])
def test_c7_pdf_normalisation(params):
    p = ECDParams(*params)
    x = np.linspace(0.0, quantile(p, 1 - 1e-10), 400_001)
    y = pdf(p, x)
    if not np.isfinite(y[0]):
        # integrable singularity at zero: integrate from the first grid point and add F(x1)
        total = np.trapezoid(y[1:], x[1:]) + cdf(p, x[1])
    else:
        total = np.trapezoid(y, x)
    assert abs(total - 1.0) <= 1e-6


@pytest.mark.acceptance(7, CRIT7)
def test_c7_reversed_hazard_identity():
    p = ECDParams(0.7, 2, 0.8)
    x = np.linspace(0.05, 3.0, 100)
    np.testing.assert_allclose(reversed_hazard(p, x), pdf(p, x) / cdf(p, x), rtol=1e-10)


# ---------------------------------------------------------------------------
# 8. Monte Carlo oracle
# ---------------------------------------------------------------------------

CRIT8 = "Monte Carlo: Example 1 sfs within 3 sigma at >= 95% of 10 points; never reverses st, < 60 s"


@pytest.mark.acceptance(8, CRIT8)
@pytest.mark.parametrize("alpha", [0.7, 1.5])
def test_c8_example1_bands(alpha):
    t0 = time.perf_counter()
    n = 100_000
    X, Y = example_pair(1, alpha)
    g = default_grid(X, Y, count=10, lo_q=0.05, hi_q=0.95)
    inside = []
    for spec, seed in ((X, MC_SEED), (Y, MC_SEED + 1)):
        emp = empirical_sf(sample_system(spec, n, seed).draws, g.points)
        ana = np.asarray(spec.sf(g.points))
        inside += list(np.abs(emp - ana) <= 3 * sigma_band(ana, n))
    assert np.mean(inside) >= 0.95
    assert time.perf_counter() - t0 < 60


@pytest.mark.acceptance(8, CRIT8)
def test_c8_never_reverses():
    t0 = time.perf_counter()
    for which, alpha in ((1, 0.7), (1, 1.5), (2, 0.7), (2, 1.5), (3, None), (4, None)):
        X, Y = example_pair(which, alpha)
        analytic = check_st(X, Y, default_grid(X, Y)).direction
        g = default_grid(X, Y, count=25, lo_q=0.02, hi_q=0.98)
        emp = empirical_st_check(X, Y, g, 100_000, MC_SEED).direction
        assert emp in (analytic, Direction.INCONCLUSIVE), (which, alpha, emp)
    assert time.perf_counter() - t0 < 60


# ---------------------------------------------------------------------------
# 9. order implications
# ---------------------------------------------------------------------------

@pytest.mark.acceptance(9, "lr direction implies the same hr, rh and st direction on 20 Theorem 5 pairs")
def test_c9_implications():
    for seed in range(20):
        X, Y = _pairs.theorem5(seed)
        g = default_grid(X, Y)
        lr = check_lr(X, Y, g)
        if not lr.conclusive:
            continue
        for check in (check_hr, check_rh, check_st):
            assert check(X, Y, g).direction is lr.direction, (seed, check.__name__)
