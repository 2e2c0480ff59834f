import math

import numpy as np
import pytest

from lqgduet.core import ProblemParams
from lqgduet.bounds_lower import (LowerBoundEvaluator, SliceParams, dl1, dl2,
                                  dl3, dl4, info_mmse, lower_weighted_cost,
                                  mmse_floor, mutual_info_ik,
                                  mutual_info_ik_doubleprime,
                                  mutual_info_ik_prime, mmse_from_info,
                                  power_expand, strong_region_floor,
                                  strong_thresholds, weak_region_floor)


def test_info_mmse_symmetric_single_round():
    # two equally good unit-noise observations of a unit disturbance
    assert info_mmse(2.5, 1.0, 1.0, 1, 1) == pytest.approx(1.0 / 3.0)


def test_info_mmse_one_useless_observation_limit():
    # as the second noise blows up only the first observation counts
    v = info_mmse(2.5, 1.0, 1e12, 1, 1)
    assert v == pytest.approx(0.5, rel=1e-6)


def test_info_mmse_oracle_value():
    assert info_mmse(2.5, 1.0, 10.0, 2, 4) \
        == pytest.approx(27.202298050139276, rel=1e-12)


def test_info_mmse_perfect_observation():
    assert info_mmse(2.5, 0.0, 1.0, 1, 3) == 0.0


def test_mmse_floor_base_case_and_cap():
    assert mmse_floor(2.5, 1.0, 2.0, 1) == 1.0
    v = mmse_floor(2.5, 1.0, 2.0, 3)
    assert 0 < v
    assert dl3(ProblemParams(a=2.5, sigmav1_sq=1.0, sigmav2_sq=2.0), 3) \
        == max(v, 1.0)


def test_power_expand_oracle():
    assert power_expand(2.0, 0.4, [1.0, 1.0]) == pytest.approx(9.1)
    with pytest.raises(ValueError):
        power_expand(1.0, 0.5, [1.0, 1.0])


def test_mutual_info_oracles():
    assert mutual_info_ik(3, 1.0, 2.0, 3, 0.5, 7.0) \
        == pytest.approx(8.534996957129168, rel=1e-12)
    assert mutual_info_ik_prime(3, 1.0, 2.0, 1.5, 3, 0.5, 7.0) \
        == pytest.approx(8.1889562416444623, rel=1e-12)
    assert mutual_info_ik_doubleprime(3, 1.0, 2.0, 1.5, 3, 0.5, 7.0) \
        == pytest.approx(9.2360518268251034, rel=1e-12)


def test_mutual_info_base_convention():
    # k = 1 starts the recursion from zero accumulated information
    v = mutual_info_ik_prime(3, 0.0, 2.0, 2.0, 1, 0.5, 0.0)
    assert v == 0.0


def test_mmse_from_info():
    assert mmse_from_info(4.0, 1.0) == pytest.approx(1.0)
    assert mmse_from_info(4.0, 0.0) == 4.0
    assert mmse_from_info(4.0, 1.0, base="nats") \
        == pytest.approx(4.0 * math.exp(-2.0))


def test_dl2_zero_power_value():
    p = ProblemParams(a=4.0, sigmav1_sq=0.0, sigmav2_sq=16.0)
    # with no power the estimate game is lost: a^2 Sigma + 1
    assert dl2(p, 1, 2, 1.0, 0.0, 0.0) == pytest.approx(17.0)


def test_dl2_inner_matches_brute_force():
    # the clamped coordinate-descent inner minimum vs a dense grid search
    from lqgduet.bounds_lower import _dl2_inner
    A, Sigma, sv1, sv2 = 4.0, 0.8, 1.3, 5.0
    for C1, C2 in [(0.5, 0.5), (2.0, 0.3), (5.0, 5.0), (0.05, 3.0)]:
        got = float(_dl2_inner(A, Sigma, sv1, sv2, C1, C2))
        c1 = np.linspace(-C1, C1, 401)[:, None]
        c2 = np.linspace(-C2, C2, 401)[None, :]
        brute = np.min((A - c1 - c2) ** 2 * Sigma + c1 ** 2 * sv1
                       + c2 ** 2 * sv2)
        assert got <= brute + 1e-6
        assert got == pytest.approx(brute, rel=1e-3, abs=1e-4)


def test_dl4_zero_power_and_direct_value():
    p = ProblemParams(a=4.0, sigmav1_sq=0.0, sigmav2_sq=16.0)
    assert dl4(p, 2, 0.0, 0.0) == pytest.approx(16.0)
    # one known instance with power
    g = 16.0 ** 0 / (1 - 2.5 / 16.0) / (1 - 0.4)
    expect = max(4.0 - math.sqrt(g * 0.5) - math.sqrt(g * 0.25), 0) ** 2
    assert dl4(p, 2, 0.5, 0.25) == pytest.approx(expect)


def test_dl4_resists_small_powers():
    # with both powers at a^2/400, the race is still lost by the controllers
    p = ProblemParams(a=2.5, sigmav1_sq=0.0, sigmav2_sq=16.0)
    for k in (2, 3, 5):
        Pt = 2.5 ** 2 / 400.0
        v = dl4(p, k, Pt, Pt)
        assert v >= 0.6 * 2.5 ** (2 * (k - 1))


def test_families_nonincreasing_in_power():
    p = ProblemParams(a=4.0, sigmav1_sq=0.5, sigmav2_sq=50.0)
    P = np.geomspace(1e-6, 1e6, 25)
    sp = SliceParams(k1=1, k2=3, k=4, sigmav2p_sq=50.0, alpha=1.0,
                     Sigma=1.0)
    for fam in [lambda x, y: dl1(p, sp, x, y),
                lambda x, y: dl2(p, 1, 3, 1.0, x, y),
                lambda x, y: dl4(p, 3, x, y)]:
        v1 = fam(P, np.full_like(P, 0.1))
        assert np.all(np.diff(v1) <= 1e-9)
        v2 = fam(np.full_like(P, 0.1), P)
        assert np.all(np.diff(v2) <= 1e-9)


def test_dl1_has_unit_floor_and_finite_values():
    p = ProblemParams(a=4.0, sigmav1_sq=0.5, sigmav2_sq=50.0)
    sp = SliceParams(k1=1, k2=3, k=4, sigmav2p_sq=50.0, alpha=1.0,
                     Sigma=1.0)
    v = dl1(p, sp, 1e12, 1e12)
    assert v == pytest.approx(1.0)
    v0 = dl1(p, sp, 0.0, 0.0)
    assert np.isfinite(v0) and v0 > 1.0


def test_slice_params_validation():
    p = ProblemParams(a=4.0, sigmav1_sq=0.5, sigmav2_sq=50.0)
    with pytest.raises(ValueError):
        SliceParams(1, 1, 3, 1.0, 1.0, 0.5).check(p)
    with pytest.raises(ValueError):
        SliceParams(1, 2, 3, 1.0, 2.0, 0.5).check(p)
    with pytest.raises(ValueError):
        SliceParams(1, 2, 3, 1.0, 1.0, 1.5).check(p)  # above the cap


def test_region_floors():
    p = ProblemParams(a=4.0, sigmav1_sq=0.0, sigmav2_sq=100.0)
    s = 2
    t = strong_thresholds(p, s)
    assert math.isinf(strong_region_floor(p, s, t["t1"] / 2, t["t2a"] / 2))
    v = strong_region_floor(p, s, t["t1"] / 2, t["t2a"] * 2)
    assert v >= 0.008 * 16.0 * 100.0 + 1.0
    assert strong_region_floor(p, s, t["t1hi"] * 2 + 1, 0.0) \
        == pytest.approx(0.295)

    pw = ProblemParams(a=4.0, sigmav1_sq=0.0, sigmav2_sq=1.0)
    assert math.isinf(weak_region_floor(pw, 0.0, 0.0))
    assert weak_region_floor(pw, 0.0, 1e9) \
        == pytest.approx(0.176 * 16.0 + 1.0)
    assert weak_region_floor(pw, 1e9, 0.0) == pytest.approx(0.295)


def test_lower_bound_basics():
    p = ProblemParams(a=4.0, q=0.0, r1=1.0, r2=1.0, sigmav1_sq=0.0,
                      sigmav2_sq=16.0)
    assert lower_weighted_cost(p) == 0.0
    p = ProblemParams(a=4.0, q=1.0, r1=0.0, r2=0.0, sigmav1_sq=0.0,
                      sigmav2_sq=16.0)
    assert lower_weighted_cost(p) >= 1.0


def test_lower_bound_grows_with_power_price():
    base = dict(a=4.0, q=1.0, r2=1e-3, sigmav1_sq=0.0, sigmav2_sq=16.0)
    lo = lower_weighted_cost(ProblemParams(r1=0.01, **base))
    hi = lower_weighted_cost(ProblemParams(r1=10.0, **base))
    assert hi >= lo


def test_lower_below_analytic_upper():
    # the converse never exceeds the achievable weighted cost
    from lqgduet.bounds_upper import optimize_upper
    rng = np.random.default_rng(0)
    for _ in range(25):
        a = float(rng.uniform(2.5, 30))
        sv1 = float(rng.uniform(0, 3))
        sv2 = sv1 + float(rng.uniform(0, 100))
        q = float(10 ** rng.uniform(-2, 2))
        r1 = float(10 ** rng.uniform(-3, 2))
        r2 = float(10 ** rng.uniform(-3, 2))
        p = ProblemParams(a=a, q=q, r1=r1, r2=r2, sigmav1_sq=sv1,
                          sigmav2_sq=sv2)
        assert lower_weighted_cost(p) <= optimize_upper(p).cost * (1 + 1e-9)


def test_evaluator_matches_direct_call():
    base = ProblemParams(a=4.0, sigmav1_sq=0.5, sigmav2_sq=50.0)
    ev = LowerBoundEvaluator(base)
    for (q, r1, r2) in [(1.0, 0.1, 0.1), (0.01, 1.0, 0.0), (100.0, 0, 0)]:
        p = ProblemParams(a=4.0, q=q, r1=r1, r2=r2, sigmav1_sq=0.5,
                          sigmav2_sq=50.0)
        assert ev.weighted(q, r1, r2) \
            == pytest.approx(lower_weighted_cost(p))
