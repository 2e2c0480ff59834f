"""Constant-ratio certification: region partition of the power plane,
ratio-transfer hypothesis checks with the closed-form region constants,
grid certification reports, and the large-a linear/nonlinear divergence
table.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .core import A_MIN_CERTIFIED, ProblemParams, Regime, classify, \
    noise_floor
from .bounds_lower import LowerBoundEvaluator, lower_weighted_cost, \
    strong_t2c, strong_thresholds, strong_region_floor, weak_region_floor
from .bounds_upper import linbb_bound, optimize_upper, \
    sig_candidate_points, simplified_bracket, simplified_upper

#: default certification caps by regime
CAP_WEAK = 1200.0
CAP_STRONG = 1.5e5

#: validity threshold for the divergence table
PROP1_A_MIN = 1.0e4


@dataclass(frozen=True)
class CertReport:
    params: ProblemParams
    regime: Regime
    upper: float
    lower: float
    ratio: float
    case_label: str
    cap: float
    passed: bool
    degenerate: bool = False


def region_label(p: ProblemParams, P1: float, P2: float) -> str:
    """Which region of the power-plane partition the point (P1, P2) falls
    in.  Weak regime: i (both powers small), ii (only P1 small),
    iii (P1 large).  Strong regime: i/ii split P2 at the stabilization
    threshold for P1 below the signaling bracket, iii/iv inside the
    bracket, v above it."""
    regime = classify(p)
    A = abs(p.a)
    m = noise_floor(p)
    if regime.kind == "weak":
        T1 = A ** 2 * m / 400.0
        T2 = A ** 2 * max(1.0, A ** 2 * p.sigmav2_sq) / 400.0
        if P1 <= T1:
            return "weak-i" if P2 <= T2 else "weak-ii"
        return "weak-iii"
    t = strong_thresholds(p, regime.s)
    if P1 <= t["t1"]:
        return "strong-i" if P2 <= t["t2a"] else "strong-ii"
    if P1 <= t["t1hi"]:
        t2c = float(strong_t2c(p, regime.s, P1))
        return "strong-iii" if P2 <= t2c else "strong-iv"
    return "strong-v"


def ratio_transfer_check(DU: Callable[[float, float], float],
                         DL: Callable[[float, float], float],
                         c: float,
                         grid: Iterable[Tuple[float, float]]) -> bool:
    """Hypothesis of the ratio-transfer lemma on a sampled grid:
    DU(c x1, c x2) <= c DL(x1, x2) at every grid point.  When it holds
    everywhere, the lemma gives the weighted-cost ratio cap for every
    (q, r1, r2); only the hypothesis is checked here."""
    if c < 1:
        raise ValueError("c must be >= 1")
    for x1, x2 in grid:
        dl = DL(x1, x2)
        if math.isinf(dl):
            continue
        if DU(c * x1, c * x2) > c * dl * (1 + 1e-12):
            return False
    return True


def _envelope_DU(p: ProblemParams) -> Callable[[float, float], float]:
    """Achievable disturbance at a power budget: best of the two linear
    candidates and (strong regime) the closed-form signaling envelope."""
    regime = classify(p)
    cands = [linbb_bound(p, 1), linbb_bound(p, 2)]
    sig: List = []
    if regime.kind == "strong":
        lo, hi = simplified_bracket(p, regime.s)
        if lo <= hi:
            for P in np.geomspace(lo, hi, 120):
                sig.append(simplified_upper(p, regime.s, float(P)))

    def DU(P1: float, P2: float) -> float:
        best = math.inf
        for pt in cands:
            if pt.P1 <= P1 and pt.P2 <= P2:
                best = min(best, pt.D)
        for pt in sig:
            if pt.P1 <= P1 and pt.P2 <= P2:
                best = min(best, pt.D)
        return best

    return DU


def region_constants(p: ProblemParams) -> dict:
    """Closed-form per-region ratio constants (regions whose lower bound is
    +inf need no constant and are listed with 1)."""
    regime = classify(p)
    if regime.kind == "weak":
        return {"weak-i": 1.0,
                "weak-ii": max(1.0 / 0.176, 3 * 400.0),
                "weak-iii": max(2.0 / 0.295, 1200.0)}
    return {"strong-i": 1.0,
            "strong-ii": max(1.0 / 0.008, 1.32 * 28000.0),
            "strong-iii": 1.0,
            "strong-iv": max(832.0 / 0.2541, 63.0 / 0.066, 80000.0,
                             6656.0 / 0.0457, 564.0 / 0.0113),
            "strong-v": max(2.0 / 0.295, 3 * 20000.0)}


def _region_grid(p: ProblemParams, label: str,
                 n: int = 8) -> List[Tuple[float, float]]:
    """Sample points inside one region of the partition."""
    A = abs(p.a)
    m = noise_floor(p)
    regime = classify(p)
    mults_hi = np.geomspace(1.01, 1e4, n)
    mults_lo = np.geomspace(1e-6, 0.99, n)
    pts: List[Tuple[float, float]] = []
    if regime.kind == "weak":
        T1 = A ** 2 * m / 400.0
        T2 = A ** 2 * max(1.0, A ** 2 * p.sigmav2_sq) / 400.0
        if label == "weak-ii":
            for f1 in mults_lo:
                for f2 in mults_hi:
                    pts.append((T1 * f1, T2 * f2))
        elif label == "weak-iii":
            for f1 in mults_hi:
                for f2 in np.geomspace(1e-6, 1e4, n):
                    pts.append((T1 * f1, T2 * f2))
        return pts
    t = strong_thresholds(p, regime.s)
    if label == "strong-ii":
        for f1 in mults_lo:
            for f2 in mults_hi:
                pts.append((t["t1"] * f1, t["t2a"] * f2))
    elif label == "strong-iv":
        if t["t1"] < t["t1hi"]:
            for P1 in np.geomspace(t["t1"] * 1.001, t["t1hi"] * 0.999, n):
                t2c = float(strong_t2c(p, regime.s, P1))
                for f2 in mults_hi:
                    pts.append((float(P1), t2c * f2))
    elif label == "strong-v":
        for f1 in mults_hi:
            for f2 in np.geomspace(1e-6, 1e4, n):
                pts.append((t["t1hi"] * f1, t["t2a"] * f2))
    return pts


def appendix_region_checks(p: ProblemParams) -> dict:
    """Run the ratio-transfer hypothesis check region by region with the
    closed-form constants; returns {region label: bool}."""
    regime = classify(p)
    consts = region_constants(p)
    DU = _envelope_DU(p)

    if regime.kind == "weak":
        def DL(x1, x2):
            return weak_region_floor(p, x1, x2)
    else:
        def DL(x1, x2):
            return strong_region_floor(p, regime.s, x1, x2)

    out = {}
    for label, c in consts.items():
        grid = _region_grid(p, label)
        if not grid:
            out[label] = True
            continue
        out[label] = ratio_transfer_check(DU, DL, max(c, 1.0), grid)
    return out


def certify_point(p: ProblemParams,
                  cap: Optional[float] = None,
                  evaluator: Optional[LowerBoundEvaluator] = None,
                  sig_points=None) -> CertReport:
    """Certify the upper/lower weighted-cost ratio at one parameter point
    against the regime's cap."""
    if abs(p.a) < A_MIN_CERTIFIED:
        raise ValueError("certification requires |a| >= 2.5")
    regime = classify(p)
    if cap is None:
        cap = CAP_WEAK if regime.kind == "weak" else CAP_STRONG
    res = optimize_upper(p, sig_points=sig_points)
    upper = res.cost
    if evaluator is not None:
        lower = evaluator.weighted(p.q, p.r1, p.r2)
    else:
        lower = lower_weighted_cost(p)
    degenerate = lower == 0 and upper > 0
    if lower > 0:
        ratio = upper / lower
    elif upper == 0:
        ratio = 1.0
    else:
        ratio = math.inf
    label = ("Degenerate" if degenerate
             else region_label(p, res.point.P1, res.point.P2))
    passed = (not degenerate) and ratio <= cap
    if p.q == p.r1 == p.r2 == 0:
        label, passed = "Degenerate", True
    return CertReport(p, regime, upper, lower, ratio, label, cap, passed,
                      degenerate)


def default_weight_grid() -> List[Tuple[float, float, float]]:
    """27-point logarithmic (q, r1, r2) grid."""
    vals = (1e-2, 1.0, 1e2)
    return [(q, r1, r2) for q in vals for r1 in vals for r2 in vals]


def certify_grid(param_list: Sequence[ProblemParams],
                 weights: Optional[Sequence[Tuple[float, float, float]]]
                 = None,
                 cap: Optional[float] = None) -> List[CertReport]:
    """Certify every (params, weights) combination; deterministic order."""
    if weights is None:
        weights = default_weight_grid()
    reports = []
    for base in param_list:
        evaluator = LowerBoundEvaluator(base)
        sig_points = sig_candidate_points(base)
        for q, r1, r2 in weights:
            p = ProblemParams(a=base.a, q=q, r1=r1, r2=r2,
                              sigma0_sq=base.sigma0_sq,
                              sigmav1_sq=base.sigmav1_sq,
                              sigmav2_sq=base.sigmav2_sq)
            reports.append(certify_point(p, cap, evaluator=evaluator,
                                         sig_points=sig_points))
    return reports


def weak_grid_params() -> List[ProblemParams]:
    """Weakly degraded certification grid: a in {2.5, 5, 25},
    sigmav1_sq in {0, 1, 10}, sigmav2_sq = max(1, a^2 sv1^2) * {0.1, 1}
    (raised to sv1^2 when the 0.1 multiple would fall below it, keeping the
    labeling convention; still weakly degraded)."""
    out = []
    for a in (2.5, 5.0, 25.0):
        for sv1 in (0.0, 1.0, 10.0):
            m = max(1.0, a * a * sv1)
            for f in (0.1, 1.0):
                sv2 = max(m * f, sv1)
                out.append(ProblemParams(a=a, sigmav1_sq=sv1,
                                         sigmav2_sq=sv2))
    return out


def strong_grid_params() -> List[ProblemParams]:
    """Strongly degraded certification grid: a in {2.5, 5, 25, 100},
    stage s in {1, 2, 3} realized by placing sigmav2_sq at the log-midpoint
    of the stage-s bracket, sigmav1_sq in {0, 1, 10}."""
    out = []
    for a in (2.5, 5.0, 25.0, 100.0):
        for sv1 in (0.0, 1.0, 10.0):
            m = max(1.0, a * a * sv1)
            for s in (1, 2, 3):
                sv2 = a ** (2 * s - 1) * m
                out.append(ProblemParams(a=a, sigmav1_sq=sv1,
                                         sigmav2_sq=sv2))
    return out


def prop1_divergence(a_values: Iterable[float]) -> List[dict]:
    """Linear-strategy lower bound a^3/66 vs nonlinear upper bound
    3297 a^2 ln a; their ratio (computed in log space) diverges, and is
    strictly increasing along any increasing sequence of a."""
    rows = []
    for a in a_values:
        if a < PROP1_A_MIN:
            raise ValueError(f"requires a >= {PROP1_A_MIN:g}")
        log_lin = 3 * math.log(a) - math.log(66.0)
        log_nonlin = math.log(3297.0) + 2 * math.log(a) \
            + math.log(math.log(a))
        rows.append({
            "a": a,
            "linear_lb": math.exp(log_lin),
            "nonlinear_ub": math.exp(log_nonlin),
            "ratio": math.exp(log_lin - log_nonlin),
        })
    return rows
