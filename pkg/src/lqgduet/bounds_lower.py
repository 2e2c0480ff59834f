"""Converse machinery: information-limited MMSE, power-expansion, the
state-amplification mutual-information bounds, the four lower-bound families
D_L1..D_L4, and the weighted-cost lower bound.

All families are nonincreasing in the power arguments, which the weighted
optimizer exploits: on each grid cell the objective q D + r1 P1 + r2 P2 is
lower-bounded by q D(upper corner) + r (lower corner), so the reported value
is a valid lower bound on the minimum over the whole quadrant, not just on
the grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .core import A_MIN_CERTIFIED, ProblemParams, classify, noise_floor

#: geometric slicing ratio used by the converse bounds
RCONST = 2.5
_BETA = 1.0 / RCONST

_LOG2_PIE_HALF = math.log2(math.pi * math.e / 2.0)


def _ln_or_log2(x, base):
    return np.log(x) if base == "nats" else np.log2(x)


def info_mmse(a: float, sigmav1_sq: float, sigmav2_sq: float,
              k1: int, k: int) -> float:
    """Residual variance of a^{k-1} w[0] after k1 rounds of two-channel
    observation:

        a^{2(k-1)} sv1^2 /
        ((1 + sv1^2/sv2^2) a^{2(k1-1)} (1 - a^{-2k1})/(1 - a^{-2}) + sv1^2)
    """
    if k1 < 1 or k < 1:
        raise ValueError("k1, k must be >= 1")
    if sigmav1_sq == 0:
        return 0.0
    A = abs(a)
    if sigmav2_sq == 0:
        return 0.0
    ratio = sigmav1_sq / sigmav2_sq
    geo = A ** (2 * (k1 - 1)) * (1 - A ** (-2 * k1)) / (1 - A ** -2)
    return A ** (2 * (k - 1)) * sigmav1_sq \
        / ((1 + ratio) * geo + sigmav1_sq)


def mmse_floor(a: float, sigmav1_sq: float, sigmav2_sq: float,
               k1: int) -> float:
    """Residual variance of a^{k1-1} w[0] given observations up to k1 - 1;
    equals 1 for k1 = 1 (no informative rounds).  This is also the cap on
    the slicing parameter Sigma."""
    if k1 == 1:
        return 1.0
    if sigmav1_sq == 0:
        return 0.0
    A = abs(a)
    ratio = sigmav1_sq / sigmav2_sq if sigmav2_sq > 0 else math.inf
    geo = A ** (2 * (k1 - 2)) * (1 - A ** (-2 * (k1 - 1))) / (1 - A ** -2)
    denom = (1 + ratio) * geo + sigmav1_sq
    if not math.isfinite(denom):
        return 0.0
    return A ** (2 * (k1 - 1)) * sigmav1_sq / denom


def power_expand(a: float, b: float, weighted_powers) -> float:
    """Bound on E[(a^{n-1} X0 + ... + X_{n-1})^2]:

        a^{2(n-1)} (1 - (1/(a^2 b))^n)/(1 - 1/(a^2 b))
          * (E[X0^2] + b E[X1^2] + ... + b^{n-1} E[X_{n-1}^2]).

    Requires |1/(a^2 b)| < 1.
    """
    powers = list(weighted_powers)
    n = len(powers)
    if n == 0:
        return 0.0
    r = 1.0 / (a * a * b)
    if abs(r) >= 1:
        raise ValueError("requires |1/(a^2 b)| < 1")
    A = abs(a)
    prefactor = A ** (2 * (n - 1)) * (1 - r ** n) / (1 - r)
    total = sum(b ** i * pi for i, pi in enumerate(powers))
    return prefactor * total


def mutual_info_ik(a: float, sigma0_sq: float, sigmav_sq: float,
                   k: int, w: float, P: float, base: str = "bits") -> float:
    """Observation information cap over k rounds:

        I_k = (k/2) log(1 + (1/(k sv^2)) (2 a^{2(k-1)} s0^2/(1 - a^{-2})
              + (2 a^{k-2}/(1 - a^{-2})) P/((1 - 1/(a^2 w))(1 - w))))

    The recoverable variance obeys error >= sigma0_sq / 2^{2 I_k} (bits).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    A = abs(a)
    if abs(1.0 / (A * A * w)) >= 1:
        raise ValueError("requires |1/(a^2 w)| < 1")
    if not 0 < w < 1:
        raise ValueError("requires 0 < w < 1")
    if sigmav_sq == 0:
        return math.inf
    inner = 1.0 + (1.0 / (k * sigmav_sq)) * (
        2.0 * A ** (2 * (k - 1)) * sigma0_sq / (1 - A ** -2)
        + (2.0 * A ** (k - 2) / (1 - A ** -2))
        * P / ((1 - 1.0 / (A * A * w)) * (1 - w)))
    return float(k / 2.0 * _ln_or_log2(inner, base))


def mutual_info_ik_prime(a: float, sigma0_sq: float, sigmav_sq: float,
                         sigmav_last_sq: float, k: int, w: float, P: float,
                         base: str = "bits") -> float:
    """Refined cap keeping the last observation out of the averaging:

        I_k' = I_{k-1} + (1/2) log(1 + (1/sv_last^2)(2 a^{2(k-1)} s0^2
               + 2 (a^{2(k-2)}/(1 - 1/(a^2 w))) P/(1 - w)))

    with the convention I_0 = 0.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    A = abs(a)
    prev = 0.0 if k == 1 else mutual_info_ik(a, sigma0_sq, sigmav_sq,
                                             k - 1, w, P, base)
    if sigmav_last_sq == 0:
        return math.inf
    inner = 1.0 + (1.0 / sigmav_last_sq) * (
        2.0 * A ** (2 * (k - 1)) * sigma0_sq
        + 2.0 * (A ** (2 * (k - 2)) / (1 - 1.0 / (A * A * w)))
        * P / (1 - w))
    return float(prev + 0.5 * _ln_or_log2(inner, base))


def mutual_info_ik_doubleprime(a: float, sigma0_sq: float, sigmav_sq: float,
                               sigmav_last_sq: float, k: int, w: float,
                               P: float, base: str = "bits") -> float:
    """As mutual_info_ik_prime plus the uniform-substitution penalty
    (1/2) log(pi e / 2)."""
    pen = 0.5 * (_LOG2_PIE_HALF if base == "bits"
                 else math.log(math.pi * math.e / 2))
    return mutual_info_ik_prime(a, sigma0_sq, sigmav_sq, sigmav_last_sq,
                                k, w, P, base) + pen


def mmse_from_info(sigma0_sq: float, info: float,
                   base: str = "bits") -> float:
    """Estimation-error floor sigma0_sq / 2^{2I} (or e^{2I} in nats)."""
    if base == "bits":
        return sigma0_sq * 2.0 ** (-2.0 * info)
    return sigma0_sq * math.exp(-2.0 * info)


@dataclass(frozen=True)
class SliceParams:
    """Free parameters of the first lower-bound family."""

    k1: int
    k2: int
    k: int
    sigmav2p_sq: float
    alpha: float
    Sigma: float

    def check(self, p: ProblemParams) -> None:
        if self.k1 < 1 or self.k2 - self.k1 - 1 < 0 or self.k < self.k2:
            raise ValueError("require k1 >= 1, k2 >= k1 + 1, k >= k2")
        if self.sigmav2p_sq < 0:
            raise ValueError("sigmav2p_sq must be >= 0")
        if not 0 <= self.alpha <= 1:
            raise ValueError("alpha must be in [0, 1]")
        cap = mmse_floor(p.a, p.sigmav1_sq, p.sigmav2_sq, self.k1)
        if not 0 <= self.Sigma <= cap * (1 + 1e-12):
            raise ValueError(f"Sigma outside [0, {cap}]")


def _geo(a: float, k_exp: int, count: int):
    """a^{2 k_exp} (1 - (2.5 a^{-2})^count) / (1 - 2.5 a^{-2});
    zero for count <= 0."""
    if count <= 0:
        return 0.0
    A2 = a * a
    r = RCONST / A2
    return A2 ** float(k_exp) * (1 - r ** count) / (1 - r)


def _relu(x):
    return np.maximum(np.nan_to_num(x, nan=0.0, posinf=np.inf,
                                    neginf=0.0), 0.0)


def dl1(p: ProblemParams, sp: SliceParams, P1t, P2t):
    """First lower-bound family (signaling converse), evaluated exactly as
    the two (.)_+^2 branches weighted by alpha, plus 1.  Broadcasts over
    power arrays."""
    sp.check(p)
    if abs(p.a) < A_MIN_CERTIFIED:
        raise ValueError("requires |a| >= 2.5")
    if p.sigmav2_sq == 0:
        raise ValueError("requires sigmav2_sq > 0")
    A = abs(p.a)
    sv2_sq = p.sigmav2_sq
    sv2 = math.sqrt(sv2_sq)
    sv2p = math.sqrt(sp.sigmav2p_sq)
    k1, k2, k = sp.k1, sp.k2, sp.k
    alpha, Sig = sp.alpha, sp.Sigma
    P1t = np.asarray(P1t, dtype=float)
    P2t = np.asarray(P2t, dtype=float)

    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        m = k2 - k1 - 1
        if m > 0:
            I2 = m / 2.0 * np.log2(
                1.0 + (1.0 / (m * sv2_sq)) * (
                    2.0 * A ** (2 * (k2 - 2 - k1)) / (1 - A ** -2) * Sig
                    + 2.0 * A ** (2 * (k2 - 3 - k1)) / (1 - A ** -2)
                    * RCONST * P1t
                    / ((1 - RCONST / A ** 2) * (1 - _BETA))))
        else:
            I2 = np.zeros_like(P1t)

        same = (sv2p == sv2)
        I1 = I2 + 0.5 * np.log2(
            1.0 + (1.0 / sp.sigmav2p_sq) * (
                2.0 * A ** (2 * (k2 - 1 - k1)) * Sig
                + 2.0 * A ** (2 * (k2 - 2 - k1)) * P1t
                / ((1 - RCONST / A ** 2) * (1 - _BETA)))) \
            if sp.sigmav2p_sq > 0 else np.full_like(P1t, np.inf)
        if not same:
            I1 = I1 + 0.5 * math.log2(2 * math.pi * math.e / 4)
            c = (2 * sv2p / (math.sqrt(2 * math.pi) * sv2)
                 * math.exp(-sp.sigmav2p_sq / (2 * sv2_sq)))
        else:
            c = 1.0

        log2A = math.log2(A)
        rad1 = np.sqrt(c * Sig * np.exp2(2 * (k - k1) * log2A - 2 * I1))
        rad2 = np.sqrt(c * _geo(A, k - k1 - 1, k2 - k1)
                       * P1t / (1 - _BETA))
        rad3 = np.sqrt(_geo(A, k - k2 - 1, k - k2)
                       * RCONST ** (k2 - k1) * P1t / (1 - _BETA))
        rad4 = np.sqrt(_geo(A, k - k2 - 1, k - k2) * P2t / (1 - _BETA))
        branch1 = _relu(rad1 - rad2 - rad3 - rad4) ** 2

        rb1 = np.sqrt(Sig * np.exp2(2 * (k - k1 - 1) * log2A - 2 * I2))
        rb2 = np.sqrt(_geo(A, k - k1 - 2, k - k1 - 1)
                      * RCONST * P1t / (1 - _BETA))
        rb3 = rad4
        branch2 = _relu(rb1 - rb2 - rb3) ** 2

        out = alpha * branch1 + (1 - alpha) * branch2 + 1.0
    if out.ndim == 0:
        return float(out)
    return out


def _dl2_inner(A: float, Sigma: float, sv1_sq: float, sv2_sq: float,
               C1, C2, iters: int = 300):
    """Minimize (A - c1 - c2)^2 Sigma + c1^2 sv1^2 + c2^2 sv2^2 over the box
    |c_i| <= C_i by clamped coordinate descent (convex quadratic)."""
    C1 = np.asarray(C1, dtype=float)
    C2 = np.asarray(C2, dtype=float)
    c1 = np.zeros(np.broadcast(C1, C2).shape)
    c2 = np.zeros_like(c1)
    if Sigma == 0:
        return np.zeros_like(c1)
    for _ in range(iters):
        c1 = np.clip(Sigma * (A - c2) / (Sigma + sv1_sq), -C1, C1)
        c2 = np.clip(Sigma * (A - c1) / (Sigma + sv2_sq), -C2, C2)
    return (A - c1 - c2) ** 2 * Sigma + c1 ** 2 * sv1_sq + c2 ** 2 * sv2_sq


def dl2(p: ProblemParams, k1: int, k: int, Sigma: float, P1t, P2t):
    """Second family (simultaneous-action converse): the clamped-radical
    form built on the constrained two-sensor estimation game."""
    if k < k1 + 1:
        raise ValueError("require k >= k1 + 1")
    cap = mmse_floor(p.a, p.sigmav1_sq, p.sigmav2_sq, k1)
    if not 0 <= Sigma <= cap * (1 + 1e-12):
        raise ValueError(f"Sigma outside [0, {cap}]")
    if abs(p.a) < A_MIN_CERTIFIED:
        raise ValueError("requires |a| >= 2.5")
    A = abs(p.a)
    P1t = np.asarray(P1t, dtype=float)
    P2t = np.asarray(P2t, dtype=float)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        C1 = np.sqrt(P1t / ((1 - _BETA) * (Sigma + p.sigmav1_sq))) \
            if Sigma + p.sigmav1_sq > 0 else np.full_like(P1t, np.inf)
        C2 = np.sqrt(P2t / ((1 - _BETA) * (Sigma + p.sigmav2_sq))) \
            if Sigma + p.sigmav2_sq > 0 else np.full_like(P2t, np.inf)
        inner = _dl2_inner(A, Sigma, p.sigmav1_sq, p.sigmav2_sq, C1, C2)
        rad0 = np.sqrt(A ** (2 * (k - k1 - 1)) * inner)
        gterm = _geo(A, k - k1 - 2, k - k1 - 1) / ((1 - _BETA) * _BETA)
        out = _relu(rad0 - np.sqrt(gterm * P1t)
                    - np.sqrt(gterm * P2t)) ** 2 + 1.0
    if out.ndim == 0:
        return float(out)
    return out


def dl3(p: ProblemParams, k1: int) -> float:
    """Third family: the power-independent information floor
    max(residual variance of a^{k1-1} w[0], 1)."""
    if k1 < 1:
        raise ValueError("k1 must be >= 1")
    return max(mmse_floor(p.a, p.sigmav1_sq, p.sigmav2_sq, k1), 1.0)


def dl4(p: ProblemParams, k: int, P1t, P2t):
    """Fourth family: the direct disturbance-vs-power race

        ( a^{k-1} - sqrt(a^{2(k-2)}/(1 - 2.5 a^{-2}) P1/(1 - 2.5^{-1}))
                  - sqrt(... P2 ...) )_+^2.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if abs(p.a) < A_MIN_CERTIFIED:
        raise ValueError("requires |a| >= 2.5")
    A = abs(p.a)
    P1t = np.asarray(P1t, dtype=float)
    P2t = np.asarray(P2t, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        g = A ** (2 * (k - 2)) / (1 - RCONST / A ** 2) / (1 - _BETA)
        out = _relu(A ** (k - 1) - np.sqrt(g * P1t)
                    - np.sqrt(g * P2t)) ** 2
    if out.ndim == 0:
        return float(out)
    return out


# ---------------------------------------------------------------------------
# weighted-cost lower bound
# ---------------------------------------------------------------------------

def _power_grid(hi: float = 1e12, lo: float = 1e-6,
                per_decade: int = 2) -> np.ndarray:
    n = int(per_decade * math.log10(hi / lo)) + 1
    return np.concatenate(([0.0], np.geomspace(lo, hi, n)))


def _cell_min(q: float, r1: float, r2: float, D_hi: np.ndarray,
              grid: np.ndarray, tail_floor: float) -> float:
    """Valid lower bound on min_{P1,P2 >= 0} q D(P1,P2) + r1 P1 + r2 P2
    for a D nonincreasing in both arguments.

    D_hi[i, j] = D(grid[i+1], grid[j+1]) is D at each cell's upper corner
    (grid includes 0; cells are [grid[i], grid[i+1]] x [grid[j], grid[j+1]]).
    tail_floor lower-bounds D beyond the grid.
    """
    lo1 = grid[:-1, None]
    lo2 = grid[None, :-1]
    with np.errstate(invalid="ignore"):
        vals = q * D_hi + r1 * lo1 + r2 * lo2
    best = float(np.nanmin(vals)) if vals.size else math.inf
    g_hi = grid[-1]
    best = min(best, q * tail_floor + r1 * g_hi,
               q * tail_floor + r2 * g_hi)
    return best


def _slicing_candidates(p: ProblemParams) -> Tuple[List[SliceParams],
                                                   List[Tuple[int, int,
                                                              float]]]:
    """Parameter recipes (with perturbations) for the dl1 and dl2 families."""
    a2sv1 = p.a * p.a * p.sigmav1_sq
    A = abs(p.a)
    m = noise_floor(p)
    # k1 recipe: a^{2(k1-2)} <= a^2 sv1^2 < a^{2(k1-1)}, else k1 = 1
    if a2sv1 < 1:
        k1_base = 1
    else:
        k1_base = 2 + int(math.floor(math.log(a2sv1) / (2 * math.log(A))))
    regime = classify(p)
    s = regime.s if regime.kind == "strong" else 1

    sigma_targets = [0.295 * m]
    dl1_cands: List[SliceParams] = []
    dl2_cands: List[Tuple[int, int, float]] = []
    sv2p_options = [p.sigmav2_sq]
    if p.sigmav2_sq > 0:
        # large-deviation variance inflation near the signaling power scale
        base_P = p.sigmav2_sq / (70.0 * A ** (2 * (s - 1)))
        for f in (1.0, 16.0):
            sv2p_options.append(100.0 * A ** (2 * (s - 1)) * base_P * f)
    for k1 in sorted({max(1, k1_base + off) for off in (-1, 0, 1)}):
        cap = mmse_floor(p.a, p.sigmav1_sq, p.sigmav2_sq, k1)
        sigmas = sorted({min(cap, t) for t in sigma_targets}
                        | {cap * f for f in (0.5, 1.0)})
        for Sigma in sigmas:
            if Sigma < 0:
                continue
            for k2_off in (0, 1):
                k2 = k1 + s + 1 + k2_off
                for k_off in (0, 2):
                    k = k2 + k_off
                    for alpha in (1.0,):
                        for sv2p_sq in sv2p_options:
                            if sv2p_sq <= 0:
                                continue
                            dl1_cands.append(SliceParams(
                                k1, k2, k, sv2p_sq, alpha, Sigma))
            for k_off in (1, 2, 4):
                dl2_cands.append((k1, k1 + k_off, Sigma))
    return dl1_cands, dl2_cands


class LowerBoundEvaluator:
    """Precomputes, for one set of system parameters, the D values of every
    candidate converse family on the power grid, so the weighted bound can
    be evaluated quickly for many (q, r1, r2) weightings."""

    def __init__(self, p: ProblemParams):
        self.p = p
        self.grid = _power_grid()
        self.families: List[Tuple[np.ndarray, float]] = []
        self.dl3_best = 1.0
        self.certified = abs(p.a) >= A_MIN_CERTIFIED and abs(p.a) > 1
        if not self.certified:
            return
        for k1 in range(1, 40):
            self.dl3_best = max(self.dl3_best, dl3(p, k1))
        hi1 = self.grid[1:, None]
        hi2 = self.grid[None, 1:]
        dl1_cands, dl2_cands = _slicing_candidates(p)
        if p.sigmav2_sq > 0:
            for sp in dl1_cands:
                try:
                    self.families.append((dl1(p, sp, hi1, hi2), 1.0))
                except ValueError:
                    continue
        for (k1, k, Sigma) in dl2_cands:
            try:
                self.families.append((dl2(p, k1, k, Sigma, hi1, hi2), 1.0))
            except ValueError:
                continue
        for k in (2, 3, 4, 6, 8):
            self.families.append((dl4(p, k, hi1, hi2), 0.0))

    def slicing_bound(self, q: float, r1: float, r2: float) -> float:
        best = q * self.dl3_best
        for D_hi, tail in self.families:
            best = max(best, _cell_min(q, r1, r2, D_hi, self.grid, tail))
        return best

    def weighted(self, q: float, r1: float, r2: float,
                 with_label: bool = False):
        if q == 0:
            return (0.0, "degenerate") if with_label else 0.0
        best, label = q * 1.0, "floor"
        if self.certified:
            pw = ProblemParams(a=self.p.a, q=q, r1=r1, r2=r2,
                               sigma0_sq=self.p.sigma0_sq,
                               sigmav1_sq=self.p.sigmav1_sq,
                               sigmav2_sq=self.p.sigmav2_sq)
            val, lab = _corollary_route(pw)
            if val > best:
                best, label = val, lab
            val = self.slicing_bound(q, r1, r2)
            if val > best:
                best, label = val, "slicing"
        if with_label:
            return best, label
        return best


def _slicing_route(p: ProblemParams) -> float:
    return LowerBoundEvaluator(p).slicing_bound(p.q, p.r1, p.r2)


def strong_thresholds(p: ProblemParams, s: int) -> dict:
    """Power thresholds of the strong-regime region partition."""
    A = abs(p.a)
    m = noise_floor(p)
    return {
        "t1": p.sigmav2_sq / (70.0 * A ** (2 * (s - 1))),
        "t1hi": max(A ** 2, A ** 4 * p.sigmav1_sq) / 20000.0,
        "t2a": A ** 4 * p.sigmav2_sq / 28000.0,
        "m": m,
    }


def strong_t2c(p: ProblemParams, s: int, P1) -> np.ndarray:
    """Second-controller stabilization threshold in the bracketed region:
    0.0457 a^{2(s+1)} P1 e^{-50 a^{2(s-1)} P1 / sv2^2}
    + 0.0113 a^{2(s+1)} m."""
    A = abs(p.a)
    m = noise_floor(p)
    P1 = np.asarray(P1, dtype=float)
    decay = np.exp(-50.0 * A ** (2 * (s - 1)) * P1 / p.sigmav2_sq)
    return 0.0457 * A ** (2 * (s + 1)) * P1 * decay \
        + 0.0113 * A ** (2 * (s + 1)) * m


def strong_region_floor(p: ProblemParams, s: int, P1: float,
                        P2: float) -> float:
    """Region-wise disturbance floor for the strongly degraded regime
    (+inf on the instability regions)."""
    t = strong_thresholds(p, s)
    A = abs(p.a)
    m = t["m"]
    floor_e = 0.295 * m
    if P1 <= t["t1"]:
        if P2 <= t["t2a"]:
            return math.inf
        return max(0.008 * A ** 2 * p.sigmav2_sq + 1.0, floor_e)
    if t["t1"] < P1 <= t["t1hi"]:
        if P2 <= float(strong_t2c(p, s, P1)):
            return math.inf
        decay = math.exp(-50.0 * A ** (2 * (s - 1)) * P1 / p.sigmav2_sq)
        return max(0.2541 * A ** (2 * s) * P1 * decay
                   + 0.066 * A ** (2 * s) * m + 1.0, floor_e)
    return floor_e


def weak_region_floor(p: ProblemParams, P1: float, P2: float) -> float:
    """Region-wise disturbance floor for the weakly degraded regime."""
    A = abs(p.a)
    m = noise_floor(p)
    T1 = A ** 2 * m / 400.0
    T2 = A ** 2 * max(1.0, A ** 2 * p.sigmav2_sq) / 400.0
    floor_c = 0.295 * m
    if P1 <= T1:
        if P2 <= T2:
            return math.inf
        return max(0.176 * A ** 2 * p.sigmav2_sq + 1.0, floor_c)
    return floor_c


def _corollary_route(p: ProblemParams) -> Tuple[float, str]:
    """Lower bound from the region-wise floors; returns (value, label of the
    region where the minimum lands)."""
    q, r1, r2 = p.q, p.r1, p.r2
    A = abs(p.a)
    regime = classify(p)
    m = noise_floor(p)
    options: List[Tuple[float, str]] = []
    if regime.kind == "weak":
        T1 = A ** 2 * m / 400.0
        T2 = A ** 2 * max(1.0, A ** 2 * p.sigmav2_sq) / 400.0
        if q == 0:
            options.append((0.0, "weak-i"))
        options.append((q * max(0.176 * A ** 2 * p.sigmav2_sq + 1.0,
                                0.295 * m) + r2 * T2, "weak-ii"))
        options.append((q * 0.295 * m + r1 * T1, "weak-iii"))
    else:
        s = regime.s
        t = strong_thresholds(p, s)
        if q == 0:
            options.append((0.0, "strong-i"))
        options.append((q * max(0.008 * A ** 2 * p.sigmav2_sq + 1.0,
                                0.295 * m) + r2 * t["t2a"], "strong-ii"))
        if t["t1"] < t["t1hi"]:
            # bracketed signaling region: cell-wise 1-D minimization; the
            # unimodal P1 e^{-c P1} factor attains its cell minimum at an
            # endpoint
            edges = np.geomspace(t["t1"], t["t1hi"], 201)
            A2s = A ** (2 * s)
            decay_c = 50.0 * A ** (2 * (s - 1)) / p.sigmav2_sq
            f = edges * np.exp(-decay_c * edges)
            f_min = np.minimum(f[:-1], f[1:])
            d_floor = np.maximum(0.2541 * A2s * f_min
                                 + 0.066 * A2s * m + 1.0, 0.295 * m)
            t2c = 0.0457 * A ** 2 * A2s * f_min + 0.0113 * A ** 2 * A2s * m
            vals = q * d_floor + r1 * edges[:-1] + r2 * t2c
            options.append((float(vals.min()), "strong-iv"))
            p1_edge = t["t1hi"]
        else:
            p1_edge = t["t1"]
        options.append((q * 0.295 * m + r1 * p1_edge, "strong-v"))
    val, label = min(options, key=lambda x: x[0])
    return val, label


def lower_weighted_cost(p: ProblemParams,
                        with_label: bool = False):
    """Valid lower bound on the infimum weighted average cost.

    Combines the universal disturbance floor (E[x^2] >= 1), the region-wise
    corollary floors, and the slicing families (cell-wise minimized so the
    result bounds the continuum minimum).  Outside |a| >= 2.5 only the
    universal floor is used.
    """
    q = p.q
    if q == 0:
        return (0.0, "degenerate") if with_label else 0.0
    best, label = q * 1.0, "floor"
    if abs(p.a) >= A_MIN_CERTIFIED and abs(p.a) > 1:
        val, lab = _corollary_route(p)
        if val > best:
            best, label = val, lab
        val = _slicing_route(p)
        if val > best:
            best, label = val, "slicing"
    if with_label:
        return best, label
    return best
