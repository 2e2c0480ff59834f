"""Controller families: zero input, linear bang-bang, Kalman-based linear
control, and the s-stage quantization signaling pair.

Each runtime strategy exposes ``reset(n_trials)`` and
``step(y1, y2) -> (u1, u2)``, operating elementwise on trial vectors.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy import linalg as la

from .core import ProblemParams, classify
from .lattice import quantize, remainder


@dataclass(frozen=True)
class StrategySpec:
    """Tagged union over the strategy families.

    variant: 'zero' | 'linbb' | 'linkal' | 'sig'
      - linbb / linkal carry ``controller`` in {1, 2}
      - linkal carries the feedback gain ``k``
      - sig carries the stage count ``s`` >= 1 and lattice step ``d`` > 0
    """

    variant: str
    controller: Optional[int] = None
    k: Optional[float] = None
    s: Optional[int] = None
    d: Optional[float] = None

    def __post_init__(self):
        if self.variant not in ("zero", "linbb", "linkal", "sig"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.variant in ("linbb", "linkal"):
            if self.controller not in (1, 2):
                raise ValueError("controller must be 1 or 2")
        if self.variant == "linkal":
            if self.k is None or not math.isfinite(self.k):
                raise ValueError("linkal requires a finite gain k")
        if self.variant == "sig":
            if self.s is None or self.s < 1:
                raise ValueError("sig requires s >= 1")
            if self.d is None or self.d <= 0:
                raise ValueError("sig requires d > 0")

    @property
    def label(self) -> str:
        if self.variant == "zero":
            return "zero"
        if self.variant == "linbb":
            return f"linbb{self.controller}"
        if self.variant == "linkal":
            return f"linkal{self.controller}"
        return f"sig{self.s}"

    def to_json(self) -> dict:
        out = {"type": self.variant}
        if self.controller is not None:
            out["controller"] = self.controller
        if self.k is not None:
            out["k"] = self.k
        if self.s is not None:
            out["s"] = self.s
        if self.d is not None:
            out["d"] = self.d
        return out


def parse_strategy(text: Union[str, dict]) -> StrategySpec:
    """Parse a strategy from a shorthand string ('zero', 'linbb1', 'linbb2')
    or a JSON object/string like {"type": "sig", "s": 1, "d": 0.5}."""
    if isinstance(text, str):
        t = text.strip()
        if t.startswith("{"):
            obj = json.loads(t)
        elif t == "zero":
            return StrategySpec("zero")
        elif t in ("linbb1", "linbb2"):
            return StrategySpec("linbb", controller=int(t[-1]))
        else:
            raise ValueError(f"unknown strategy shorthand {text!r}")
    else:
        obj = dict(text)
    variant = obj.pop("type")
    return StrategySpec(variant, **obj)


def lqr_gain(a: float, q: float, r: float) -> float:
    """LQR-optimal scalar feedback gain k for x[n+1] = a x + u, unit input
    gain, stage cost q x^2 + r u^2 (helper for the Kalman-based strategy)."""
    A = np.array([[a]])
    B = np.array([[1.0]])
    X = la.solve_discrete_are(A, B, np.array([[q]]), np.array([[r]]))
    return float(la.solve(B.T @ X @ B + r, B.T @ X @ A)[0, 0])


def stationary_prior_variance(a: float, sigmav_sq: float) -> float:
    """Fixed point p of p = sigmav^2 (a^2 p + 1) / (a^2 p + 1 + sigmav^2):
    the stationary one-step-prediction error variance of the scalar filter.

    Returned as the *prior* (pre-update) variance a^2 p + 1 would be derived
    from; here p is the posterior variance fixed point.
    """
    if sigmav_sq == 0:
        return 0.0
    # p solves a^2 p^2 + (1 + sigmav_sq - a^2 sigmav_sq) p - sigmav_sq = 0
    b = 1 + sigmav_sq - a * a * sigmav_sq
    disc = b * b + 4 * a * a * sigmav_sq
    return (-b + math.sqrt(disc)) / (2 * a * a)


class _Base:
    def reset(self, n_trials: int) -> None:  # pragma: no cover - trivial
        pass


class ZeroInput(_Base):
    def step(self, y1, y2):
        z = np.zeros_like(np.asarray(y1, dtype=float))
        return z, z.copy()


class LinBB(_Base):
    """Active controller applies u = -a y; the other stays silent."""

    def __init__(self, a: float, controller: int):
        self.a = a
        self.controller = controller

    def step(self, y1, y2):
        y1 = np.asarray(y1, dtype=float)
        z = np.zeros_like(y1)
        if self.controller == 1:
            return -self.a * y1, z
        return z, -self.a * np.asarray(y2, dtype=float)


class LinKal(_Base):
    """u = -k * E[x | own observations, own past inputs], with the estimate
    from a scalar predict/correct filter that compensates past inputs."""

    def __init__(self, a: float, controller: int, k: float, sigmav_sq: float):
        self.a = a
        self.controller = controller
        self.k = k
        self.sigmav_sq = sigmav_sq
        self.xhat = None
        self.p = 0.0
        self.u_prev = None

    def reset(self, n_trials: int) -> None:
        self.xhat = np.zeros(n_trials)
        self.u_prev = np.zeros(n_trials)
        self.p = 0.0

    def step(self, y1, y2):
        y = np.asarray(y1 if self.controller == 1 else y2, dtype=float)
        if self.xhat is None:
            self.reset(y.shape[0] if y.ndim else 1)
        xhat_minus = self.a * self.xhat + self.u_prev
        p_minus = self.a * self.a * self.p + 1.0
        g = p_minus / (p_minus + self.sigmav_sq)
        self.xhat = xhat_minus + g * (y - xhat_minus)
        self.p = (1.0 - g) * p_minus
        u = -self.k * self.xhat
        self.u_prev = u
        z = np.zeros_like(u)
        if self.controller == 1:
            return u, z
        return z, u


class Sig(_Base):
    """s-stage signaling pair.

    Controller 1 cancels the sub-lattice residue: u1 = -a R_d(y1).
    Controller 2 compensates its own last s inputs,
        m = R_{|a|^s d}( sum_{i=1..s} a^{i-1} u2[n-i] ),
    and snaps the compensated observation to the coarse lattice:
        u2 = -a ( Q_{|a|^s d}(y2 - m) + m ).
    The u2 history is zero-padded (u2[n] = 0 for n < 0).
    """

    def __init__(self, a: float, s: int, d: float):
        self.a = a
        self.s = s
        self.d = d
        self.big_step = abs(a) ** s * d
        # a^{i-1} weights for i = 1..s, applied to u2[n-i]
        self.weights = a ** np.arange(s)
        self.hist = None
        self.pos = 0

    def reset(self, n_trials: int) -> None:
        self.hist = np.zeros((self.s, n_trials))
        self.pos = 0

    def compensation(self):
        """m[n]: the coarse-lattice residue of the weighted u2 history."""
        # hist[pos - i] holds u2[n-i]; roll the weights accordingly
        acc = np.zeros(self.hist.shape[1])
        for i in range(1, self.s + 1):
            acc += self.weights[i - 1] * self.hist[(self.pos - i) % self.s]
        return remainder(self.big_step, acc)

    def step(self, y1, y2):
        y1 = np.asarray(y1, dtype=float)
        y2 = np.asarray(y2, dtype=float)
        if self.hist is None or self.hist.shape[1] != y1.shape[0]:
            self.reset(y1.shape[0] if y1.ndim else 1)
        u1 = -self.a * remainder(self.d, y1)
        m = self.compensation()
        u2 = -self.a * (quantize(self.big_step, y2 - m) + m)
        self.hist[self.pos % self.s] = u2
        self.pos += 1
        return u1, u2


def make_strategy(spec: StrategySpec, p: ProblemParams) -> _Base:
    """Instantiate a runtime strategy for the given problem."""
    if spec.variant == "zero":
        return ZeroInput()
    if spec.variant == "linbb":
        return LinBB(p.a, spec.controller)
    if spec.variant == "linkal":
        sv = p.sigmav1_sq if spec.controller == 1 else p.sigmav2_sq
        return LinKal(p.a, spec.controller, spec.k, sv)
    return Sig(p.a, spec.s, spec.d)


def select_stage(p: ProblemParams) -> int:
    """Stage count s for the signaling strategy; rejects the weak regime."""
    regime = classify(p)
    if regime.kind != "strong":
        raise ValueError("stage selection requires the strongly degraded "
                         "regime")
    return regime.s
