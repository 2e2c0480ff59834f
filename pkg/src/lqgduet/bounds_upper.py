"""Analytic achievability bounds: the signaling tradeoff triple, the linear
bang-bang triples, the simplified signaling envelope, and the weighted-cost
optimizer over those candidates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .core import ProblemParams, TradeoffPoint, classify, noise_floor
from .lattice import SeriesNonConvergent, q_tail, truncated_sum
from .strategies import StrategySpec

#: lattice-step grid for the (d, w1) search, relative to sigma_v2 / |a|^s
D_GRID_LO = 1e-4
D_GRID_HI = 1e4
D_GRID_POINTS = 200

#: w1 refinement multipliers around the base pairing w1 = |a|^s d / 6
W1_REFINE = (1.0 / 3.0, 0.5, 1.0, 2.0, 3.0)


@dataclass(frozen=True)
class SigDesign:
    """Signaling design (s, d, w1); feasibility requires

        d > 0, w1 > 0, |a|^s d - (|a|^{s-1} d |a|/(|a|-1) + w1) > 0.
    """

    s: int
    d: float
    w1: float

    def margin(self, a: float) -> float:
        A = abs(a)
        return A ** self.s * self.d - (A ** (self.s - 1) * self.d
                                       * A / (A - 1) + self.w1)

    def check(self, a: float) -> None:
        if abs(a) <= 1:
            raise ValueError("requires |a| > 1")
        if self.d <= 0:
            raise ValueError("infeasible design: d > 0 violated")
        if self.w1 <= 0:
            raise ValueError("infeasible design: w1 > 0 violated")
        if self.margin(a) <= 0:
            raise ValueError(
                "infeasible design: |a|^s d - (|a|^{s-1} d |a|/(|a|-1) + w1)"
                " > 0 violated")


def du1(p: ProblemParams, design: SigDesign) -> TradeoffPoint:
    """Achievable tradeoff triple of the s-stage signaling strategy:

        (D, a^2 d^2 / 4, 8 a^2 D + (7/2) a^{2(s+1)} d^2 + 4 a^2 sv2^2)

    with D the four-line disturbance bound (two truncated tail series).
    """
    design.check(p.a)
    A = abs(p.a)
    s, d, w1 = design.s, design.d, design.w1
    sv1_sq = p.sigmav1_sq
    sv2 = math.sqrt(p.sigmav2_sq)
    A2 = A * A
    A2s = A ** (2 * s)
    step = A ** s * d
    B = A ** (s - 1) * d * A / (A - 1) + w1

    line1 = 2.0 * A2s * (2.0 * (d / 2) ** 2 * (1.0 / (1.0 - 1.0 / A)) ** 2
                         + 2.0 / (1.0 - 1.0 / A2) + 2.0 * A2 * sv1_sq)

    if sv2 > 0:
        def term_main(i):
            return 4.0 * A2 * (i * step + B / 2) ** 2 \
                * q_tail(((2 * i - 1) * step - B) / (2.0 * sv2))

        series1 = truncated_sum(term_main)
    else:
        series1 = 0.0

    spread = math.sqrt(A ** (2 * (s - 1)) * A2 / (A2 - 1) + A2s * sv1_sq)
    outw = q_tail(w1 / (2.0 * spread))
    if sv2 > 0:
        def term_lat(i):
            return (i * step + step / 2) ** 2 \
                * q_tail((i - 1) * step / sv2)

        series2 = truncated_sum(term_lat)
    else:
        # only the i = 1 term survives (Q(0) = 1/2)
        series2 = (1.5 * step) ** 2 * 0.5

    D = line1 + series1 + 8.0 * A2 * outw * series2 \
        + 2.0 * A2 * (d / 2) ** 2 + 1.0
    P1 = A2 * d * d / 4.0
    P2 = 8.0 * A2 * D + 3.5 * A ** (2 * (s + 1)) * d * d \
        + 4.0 * A2 * p.sigmav2_sq
    return TradeoffPoint(D, P1, P2)


def linbb_bound(p: ProblemParams, controller: int) -> TradeoffPoint:
    """Linear bang-bang triple (a^2 sv^2 + 1, a^4 sv^2 + a^2 sv^2 + a^2, 0)
    on the active controller's side."""
    a2 = p.a * p.a
    sv = p.sigmav1_sq if controller == 1 else p.sigmav2_sq
    D = a2 * sv + 1.0
    P = a2 * a2 * sv + a2 * sv + a2
    if controller == 1:
        return TradeoffPoint(D, P, 0.0)
    return TradeoffPoint(D, 0.0, P)


def simplified_bracket(p: ProblemParams, s: int) -> Tuple[float, float]:
    """Validity bracket for the simplified signaling envelope:
    sv2^2/(70 a^{2(s-1)}) <= P <= max(a^2, a^4 sv1^2)/20000."""
    a2 = p.a * p.a
    lo = p.sigmav2_sq / (70.0 * abs(p.a) ** (2 * (s - 1)))
    hi = max(a2, a2 * a2 * p.sigmav1_sq) / 20000.0
    return lo, hi


def simplified_upper(p: ProblemParams, s: int, P: float) -> TradeoffPoint:
    """Closed-form signaling envelope at design power P:

        D  = 832 a^{2s} P e^{-50 a^{2(s-1)} P / sv2^2} + 63 a^{2s} m
        P1 = 80000 P
        P2 = 6656 a^{2(s+1)} P e^{...} + 564 a^{2(s+1)} m

    with m = max(1, a^2 sv1^2), valid on the bracket of simplified_bracket.
    """
    A = abs(p.a)
    if A < 2.5:
        raise ValueError("requires |a| >= 2.5")
    m = noise_floor(p)
    if not (A ** (2 * (s - 1)) * m <= p.sigmav2_sq <= A ** (2 * s) * m):
        raise ValueError("s does not bracket sigmav2_sq")
    lo, hi = simplified_bracket(p, s)
    if not (lo <= P <= hi):
        raise ValueError(f"P outside the validity bracket [{lo}, {hi}]")
    decay = math.exp(-50.0 * A ** (2 * (s - 1)) * P / p.sigmav2_sq)
    A2s = A ** (2 * s)
    A2s1 = A ** (2 * (s + 1))
    return TradeoffPoint(832.0 * A2s * P * decay + 63.0 * A2s * m,
                         80000.0 * P,
                         6656.0 * A2s1 * P * decay + 564.0 * A2s1 * m)


def appendix_design(p: ProblemParams, s: int, P: float) -> SigDesign:
    """The design pairing behind the simplified envelope:
    d = sqrt(320000 P / a^2), w1 = |a|^s d / 6."""
    d = math.sqrt(320000.0 * P / (p.a * p.a))
    return SigDesign(s, d, abs(p.a) ** s * d / 6.0)


@dataclass(frozen=True)
class UpperResult:
    cost: float
    spec: StrategySpec
    point: TradeoffPoint
    design: Optional[SigDesign] = None


def _sig_candidates(p: ProblemParams, s: int) -> List[SigDesign]:
    scale = math.sqrt(p.sigmav2_sq) / abs(p.a) ** s
    ds = np.geomspace(D_GRID_LO * scale, D_GRID_HI * scale, D_GRID_POINTS)
    out = []
    for d in ds:
        design = SigDesign(s, float(d), abs(p.a) ** s * float(d) / 6.0)
        if design.margin(p.a) > 0:
            out.append(design)
    return out


def _eval_design(p: ProblemParams, design: SigDesign):
    try:
        point = du1(p, design)
    except (SeriesNonConvergent, ValueError, OverflowError):
        return math.inf, None
    return p.weighted(point), point


def sig_candidate_points(p: ProblemParams) -> List[Tuple[SigDesign,
                                                         TradeoffPoint]]:
    """Feasible signaling designs on the search grid with their analytic
    tradeoff points (empty in the weak regime).  Weight-independent, so it
    can be shared across many (q, r1, r2) evaluations."""
    regime = classify(p)
    if regime.kind != "strong":
        return []
    out = []
    for design in _sig_candidates(p, regime.s):
        _, point = _eval_design(p, design)
        if point is not None:
            out.append((design, point))
    return out


def optimize_upper(p: ProblemParams,
                   sig_points: Optional[List[Tuple[SigDesign,
                                                   TradeoffPoint]]] = None
                   ) -> UpperResult:
    """Minimize q D + r1 P1 + r2 P2 over the linear bang-bang triples and
    the signaling designs (stage fixed by the regime); falls back to the
    linear candidates when no feasible signaling design exists."""
    best = None
    for controller in (1, 2):
        point = linbb_bound(p, controller)
        cost = p.weighted(point)
        spec = StrategySpec("linbb", controller=controller)
        if best is None or cost < best.cost:
            best = UpperResult(cost, spec, point)

    regime = classify(p)
    if regime.kind == "strong":
        s = regime.s
        if sig_points is None:
            sig_points = sig_candidate_points(p)
        best_sig = None
        for design, point in sig_points:
            cost = p.weighted(point)
            if best_sig is None or cost < best_sig.cost:
                best_sig = UpperResult(
                    cost, StrategySpec("sig", s=s, d=design.d), point, design)
        if best_sig is not None:
            # local refinement in d and in w1 around the best design
            base = best_sig.design
            for fd in (0.6, 0.8, 1.0, 1.25, 1.6):
                for fw in W1_REFINE:
                    design = SigDesign(s, base.d * fd, base.w1 * fd * fw)
                    if design.margin(p.a) <= 0:
                        continue
                    cost, point = _eval_design(p, design)
                    if point is not None and cost < best_sig.cost:
                        best_sig = UpperResult(
                            cost, StrategySpec("sig", s=s, d=design.d),
                            point, design)
            if best_sig.cost < best.cost:
                best = best_sig
    return best


def upper_envelope_D(p: ProblemParams, P1: float, P2: float,
                     sig_points: Optional[List[TradeoffPoint]] = None
                     ) -> float:
    """Best achievable disturbance among candidates whose power components
    fit under (P1, P2); +inf when none fits."""
    best = math.inf
    for controller in (1, 2):
        point = linbb_bound(p, controller)
        if point.P1 <= P1 and point.P2 <= P2:
            best = min(best, point.D)
    if sig_points:
        for point in sig_points:
            if point.P1 <= P1 and point.P2 <= P2:
                best = min(best, point.D)
    return best


def sig_envelope_points(p: ProblemParams) -> List[TradeoffPoint]:
    """Signaling tradeoff points over the design grid (strong regime only),
    for envelope queries."""
    return [point for _, point in sig_candidate_points(p)]


def sweep_labels(a: float, l_values) -> List[dict]:
    """Regularization sweep: for sv1^2 = 0, sv2^2 = a, q = 1, r1 = a^l,
    r2 = 0, report the best candidate label and cost per l."""
    rows = []
    for l in l_values:
        p = ProblemParams(a=a, q=1.0, r1=float(a) ** l, r2=0.0,
                          sigmav1_sq=0.0, sigmav2_sq=float(a))
        res = optimize_upper(p)
        rows.append({"l": float(l), "label": res.spec.label,
                     "cost": res.cost, "D": res.point.D,
                     "P1": res.point.P1, "P2": res.point.P2})
    return rows
