"""Numerical laboratory for the scalar two-controller infinite-horizon
decentralized LQG problem: strategies, Monte Carlo simulation, analytic
achievability and converse bounds, constant-ratio certification, and the
binary deterministic toy models.
"""
from .core import (A_MIN_CERTIFIED, ProblemParams, RawParams, Regime,
                   TradeoffPoint, classify, noise_floor, normalize)
from .strategies import StrategySpec, parse_strategy, select_stage
from .simulator import SimConfig, SimResult, run, tradeoff
from .bounds_upper import (SigDesign, UpperResult, du1, linbb_bound,
                           optimize_upper, simplified_upper, sweep_labels)
from .bounds_lower import (SliceParams, dl1, dl2, dl3, dl4, info_mmse,
                           lower_weighted_cost, power_expand)
from .certifier import (CertReport, certify_grid, certify_point,
                        prop1_divergence, ratio_transfer_check)
from .detmodel import (DetParams, det_radner, det_witsen, run_det,
                       steady_upper_level)

__version__ = "0.1.0"

__all__ = [
    "A_MIN_CERTIFIED", "ProblemParams", "RawParams", "Regime",
    "TradeoffPoint", "classify", "noise_floor", "normalize",
    "StrategySpec", "parse_strategy", "select_stage",
    "SimConfig", "SimResult", "run", "tradeoff",
    "SigDesign", "UpperResult", "du1", "linbb_bound", "optimize_upper",
    "simplified_upper", "sweep_labels",
    "SliceParams", "dl1", "dl2", "dl3", "dl4", "info_mmse",
    "lower_weighted_cost", "power_expand",
    "CertReport", "certify_grid", "certify_point", "prop1_divergence",
    "ratio_transfer_check",
    "DetParams", "det_radner", "det_witsen", "run_det",
    "steady_upper_level",
    "__version__",
]
