"""Monte Carlo engine for the closed-loop scalar system

    x[n+1] = a x[n] + u1[n] + u2[n] + w[n],   y_i[n] = x[n] + v_i[n].

Noise is drawn from a counter-based generator keyed by
(seed, trial, step, channel) so that results are bit-reproducible under any
scheduling of the independent trials.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import ProblemParams, TradeoffPoint
from .strategies import StrategySpec, make_strategy

DIVERGENCE_THRESHOLD = 1e150

_CH_W = 0
_CH_V1 = 1
_CH_V2 = 2
_CH_X0 = 3

_GOLD = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _mix(z: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer (64-bit avalanche bijection; the multiplies
    wrap mod 2^64 by design)."""
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
        return z ^ (z >> np.uint64(31))


def _uniform(counters: np.ndarray, seed_hash: np.uint64) -> np.ndarray:
    with np.errstate(over="ignore"):
        h = _mix(seed_hash ^ (counters * _GOLD))
    return ((h >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53


def counter_normals(seed: int, trials: int, step_lo: int, step_hi: int,
                    channel: int) -> np.ndarray:
    """Standard normals of shape (step_hi - step_lo, trials), a pure function
    of (seed, trial index, step index, channel)."""
    steps = np.arange(step_lo, step_hi, dtype=np.uint64)[:, None]
    trial = np.arange(trials, dtype=np.uint64)[None, :]
    base = (steps << np.uint64(24)) | (trial << np.uint64(4)) \
        | np.uint64(channel << 1)
    seed_hash = _mix(np.uint64(seed & 0xFFFFFFFFFFFFFFFF))
    u0 = _uniform(base, seed_hash)
    u1 = _uniform(base | np.uint64(1), seed_hash)
    return np.sqrt(-2.0 * np.log(u0)) * np.cos(2.0 * math.pi * u1)


@dataclass(frozen=True)
class SimConfig:
    horizon: int = 200_000
    burn_in: int = 1_000
    trials: int = 32
    seed: int = 0

    def __post_init__(self):
        if not (self.horizon > self.burn_in >= 0):
            raise ValueError("require horizon > burn_in >= 0")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


@dataclass(frozen=True)
class SimResult:
    avg_state_cost: float
    avg_u1_power: float
    avg_u2_power: float
    weighted_cost: float
    se_state: float
    se_u1: float
    se_u2: float
    unstable: bool = False
    unstable_step: Optional[int] = None

    def tradeoff(self) -> TradeoffPoint:
        return TradeoffPoint(self.avg_state_cost, self.avg_u1_power,
                             self.avg_u2_power)


def run(p: ProblemParams, spec: StrategySpec, cfg: SimConfig) -> SimResult:
    """Simulate the closed loop and return time-and-trial averages over the
    steps >= burn_in.  Divergence (|x| > 1e150) is reported as unstable with
    weighted cost +inf."""
    n_tr = cfg.trials
    strat = make_strategy(spec, p)
    strat.reset(n_tr)

    sigma0 = math.sqrt(p.sigma0_sq)
    sv1 = math.sqrt(p.sigmav1_sq)
    sv2 = math.sqrt(p.sigmav2_sq)

    x = sigma0 * counter_normals(cfg.seed, n_tr, 0, 1, _CH_X0)[0]

    sx = np.zeros(n_tr)
    su1 = np.zeros(n_tr)
    su2 = np.zeros(n_tr)

    chunk = 4096
    a = p.a
    burn_in = cfg.burn_in
    for lo in range(0, cfg.horizon, chunk):
        hi = min(lo + chunk, cfg.horizon)
        wc = counter_normals(cfg.seed, n_tr, lo, hi, _CH_W)
        v1c = sv1 * counter_normals(cfg.seed, n_tr, lo, hi, _CH_V1) \
            if sv1 else np.zeros((hi - lo, n_tr))
        v2c = sv2 * counter_normals(cfg.seed, n_tr, lo, hi, _CH_V2) \
            if sv2 else np.zeros((hi - lo, n_tr))
        for j in range(hi - lo):
            n = lo + j
            y1 = x + v1c[j]
            y2 = x + v2c[j]
            u1, u2 = strat.step(y1, y2)
            if n >= burn_in:
                sx += x * x
                su1 += u1 * u1
                su2 += u2 * u2
            x = a * x + u1 + u2 + wc[j]
            if np.max(np.abs(x)) > DIVERGENCE_THRESHOLD:
                return SimResult(math.inf, math.inf, math.inf, math.inf,
                                 math.nan, math.nan, math.nan,
                                 unstable=True, unstable_step=n)

    m = cfg.horizon - burn_in
    sx /= m
    su1 /= m
    su2 /= m

    def se(v):
        if n_tr < 2:
            return math.nan
        return float(np.std(v, ddof=1) / math.sqrt(n_tr))

    D, P1, P2 = float(sx.mean()), float(su1.mean()), float(su2.mean())
    return SimResult(D, P1, P2, p.q * D + p.r1 * P1 + p.r2 * P2,
                     se(sx), se(su1), se(su2))


def tradeoff(p: ProblemParams, spec: StrategySpec,
             cfg: SimConfig) -> TradeoffPoint:
    """The simulated (D, P1, P2) power-disturbance point."""
    return run(p, spec, cfg).tradeoff()
