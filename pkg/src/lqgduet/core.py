"""Problem parameter types, normalization to the canonical form, and regime
classification for the scalar two-controller decentralized LQG problem.

Canonical system (unit disturbance variance):

    x[n+1] = a x[n] + u1[n] + u2[n] + w[n],   w ~ N(0, 1)
    y_i[n] = x[n] + v_i[n],                   v_i ~ N(0, sigmavi_sq)

with cost  q E[x^2] + r1 E[u1^2] + r2 E[u2^2]  averaged over time, and the
labeling convention sigmav1_sq <= sigmav2_sq.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

#: Threshold on |a| below which the converse machinery is not certified.
#: Exposed as a knob; the default is the value the closed-form constants
#: were derived for.
A_MIN_CERTIFIED = 2.5


class TradeoffPoint(NamedTuple):
    """A power-disturbance triple (D, P1, P2) on the extended reals."""

    D: float
    P1: float
    P2: float

    def weighted(self, q: float, r1: float, r2: float) -> float:
        """Weighted cost q*D + r1*P1 + r2*P2 with +inf propagation."""
        terms = (q * self.D if q > 0 else 0.0,
                 r1 * self.P1 if r1 > 0 else 0.0,
                 r2 * self.P2 if r2 > 0 else 0.0)
        return sum(terms)


@dataclass(frozen=True)
class RawParams:
    """General (un-normalized) problem: x[n+1] = a x + b1 u1 + b2 u2 + w."""

    a: float
    b1: float = 1.0
    b2: float = 1.0
    c1: float = 1.0
    c2: float = 1.0
    q: float = 1.0
    r1: float = 0.0
    r2: float = 0.0
    sigma0_sq: float = 0.0
    sigmaw_sq: float = 1.0
    sigmav1_sq: float = 0.0
    sigmav2_sq: float = 0.0

    def __post_init__(self):
        for name in ("sigma0_sq", "sigmaw_sq", "sigmav1_sq", "sigmav2_sq"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.sigmaw_sq == 0:
            raise ValueError("sigmaw_sq must be > 0")
        for name in ("b1", "b2", "c1", "c2"):
            if getattr(self, name) == 0:
                raise ValueError(f"{name} must be nonzero")
        for name in ("q", "r1", "r2"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class ProblemParams:
    """Canonical problem parameters (sigmaw_sq = 1 implicit)."""

    a: float
    q: float = 1.0
    r1: float = 0.0
    r2: float = 0.0
    sigma0_sq: float = 0.0
    sigmav1_sq: float = 0.0
    sigmav2_sq: float = 0.0

    def __post_init__(self):
        for name in ("sigma0_sq", "sigmav1_sq", "sigmav2_sq"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        for name in ("q", "r1", "r2"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.sigmav1_sq > self.sigmav2_sq:
            raise ValueError("labeling convention requires "
                             "sigmav1_sq <= sigmav2_sq")

    def weighted(self, point: TradeoffPoint) -> float:
        return point.weighted(self.q, self.r1, self.r2)


@dataclass(frozen=True)
class Regime:
    """Observation-degradation regime.

    kind is 'weak' or 'strong'; s is the signaling stage count (None in the
    weak regime).  'strong' with stage s means

        a^{2(s-1)} max(1, a^2 sv1^2) < sv2^2 <= a^{2s} max(1, a^2 sv1^2).
    """

    kind: str
    s: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("weak", "strong"):
            raise ValueError("kind must be 'weak' or 'strong'")
        if self.kind == "strong" and (self.s is None or self.s < 1):
            raise ValueError("strong regime requires s >= 1")


def normalize(raw: RawParams) -> ProblemParams:
    """Rescale inputs by b_i, observations by c_i, the system by 1/sigma_w,
    then swap controller labels so that sigmav1_sq <= sigmav2_sq.

    The weighted cost of any strategy is preserved under the induced
    strategy bijection.
    """
    sw = raw.sigmaw_sq
    q = raw.q * sw
    r1 = raw.r1 * sw / raw.b1 ** 2
    r2 = raw.r2 * sw / raw.b2 ** 2
    sv1 = raw.sigmav1_sq / (raw.c1 ** 2 * sw)
    sv2 = raw.sigmav2_sq / (raw.c2 ** 2 * sw)
    s0 = raw.sigma0_sq / sw
    if sv1 > sv2:
        sv1, sv2 = sv2, sv1
        r1, r2 = r2, r1
    return ProblemParams(a=raw.a, q=q, r1=r1, r2=r2, sigma0_sq=s0,
                         sigmav1_sq=sv1, sigmav2_sq=sv2)


def noise_floor(p: ProblemParams) -> float:
    """max(1, a^2 sv1^2): the better observer's effective noise scale."""
    return max(1.0, p.a ** 2 * p.sigmav1_sq)


def classify(p: ProblemParams) -> Regime:
    """Classify the observation-degradation regime.

    Requires |a| > 1.  The boundary sigmav2_sq == max(1, a^2 sigmav1_sq) is
    assigned to the weak regime.
    """
    a = abs(p.a)
    if a <= 1:
        raise ValueError("classification requires |a| > 1")
    m = noise_floor(p)
    sv2 = p.sigmav2_sq
    if sv2 <= m:
        return Regime("weak")
    s = math.ceil((math.log(sv2) - math.log(m)) / (2 * math.log(a)))
    # Guard against floating-point edge effects on the bracketing
    #   a^{2(s-1)} m < sv2 <= a^{2s} m.
    while s > 1 and sv2 <= a ** (2 * (s - 1)) * m:
        s -= 1
    while sv2 > a ** (2 * s) * m:
        s += 1
    return Regime("strong", s=max(s, 1))
