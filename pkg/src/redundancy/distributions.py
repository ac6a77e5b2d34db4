"""Computing-unit service-time models.

Three families cover the usual straggler behaviours: a shifted exponential
(light tail over a deterministic floor), a Pareto (heavy polynomial tail),
and a two-point distribution that is either fast or straggles by a fixed
factor. All sampling is by inverse transform from a single uniform on
(0, 1], so a draw is a pure function of (distribution, uniform).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import MomentDoesNotExist
from .rng import RandomStream


@dataclass(frozen=True)
class ShiftedExp:
    """Minimum service time ``delta`` plus an exponential tail of scale ``w``.

    P{X > x} = exp(-(x - delta) / w) for x > delta. ``w = 0`` degenerates to
    a point mass at ``delta``.
    """

    delta: float
    w: float

    def __post_init__(self):
        if self.delta < 0 or self.w < 0:
            raise ValueError("ShiftedExp requires delta >= 0 and w >= 0")
        if self.delta == 0 and self.w == 0:
            raise ValueError("ShiftedExp(0, 0) is identically zero")

    def from_uniform(self, u):
        # -ln U ~ Exp(1) for U uniform on (0, 1]
        return self.delta - self.w * np.log(u)

    def sample(self, rng: RandomStream) -> float:
        return float(self.from_uniform(rng.uniform()))

    def mean(self) -> float:
        return self.delta + self.w

    def moment(self, p: int) -> float:
        """E[X^p] via the binomial expansion of (delta + Exp(w))^p."""
        _check_order(p)
        return sum(
            math.comb(p, j) * self.delta ** (p - j) * self.w**j * math.factorial(j)
            for j in range(p + 1)
        )

    def tail(self, x: float) -> float:
        """P{X > x}."""
        if x < self.delta:
            return 1.0
        if self.w == 0:
            return 0.0
        return math.exp(-(x - self.delta) / self.w)

    def minimum(self) -> float:
        return self.delta


@dataclass(frozen=True)
class Pareto:
    """Pareto service time with minimum ``lam`` and tail index ``alpha``.

    P{X > x} = (lam / x)^alpha for x > lam; smaller ``alpha`` means a
    heavier tail. The p-th moment exists only for alpha > p.
    """

    lam: float
    alpha: float

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("Pareto requires lam > 0")
        if not self.alpha > 0:
            raise ValueError("Pareto requires alpha > 0")

    def from_uniform(self, u):
        return self.lam * u ** (-1.0 / self.alpha)

    def sample(self, rng: RandomStream) -> float:
        return float(self.from_uniform(rng.uniform()))

    def mean(self) -> float:
        return self.moment(1)

    def moment(self, p: int) -> float:
        _check_order(p)
        if math.isinf(self.alpha):
            return self.lam**p
        if self.alpha <= p:
            raise MomentDoesNotExist(
                f"Pareto moment of order {p} needs alpha > {p}, got {self.alpha}"
            )
        return self.alpha * self.lam**p / (self.alpha - p)

    def tail(self, x: float) -> float:
        if x <= self.lam:
            return 1.0
        return (self.lam / x) ** self.alpha

    def minimum(self) -> float:
        return self.lam


@dataclass(frozen=True)
class BiModal:
    """Two-point service time: 1 with probability 1 - eps, else ``b`` > 1.

    ``eps`` is the probability of straggling and ``b`` its magnitude.
    """

    b: float
    eps: float

    def __post_init__(self):
        if not self.b > 1:
            raise ValueError("BiModal requires b > 1")
        if not 0.0 <= self.eps <= 1.0:
            raise ValueError("BiModal requires eps in [0, 1]")

    def from_uniform(self, u):
        # U uniform on (0, 1]: P{U <= eps} = eps, so eps = 0 never straggles
        # and eps = 1 always does.
        return np.where(np.asarray(u) <= self.eps, self.b, 1.0)

    def sample(self, rng: RandomStream) -> float:
        return self.b if rng.uniform() <= self.eps else 1.0

    def mean(self) -> float:
        return 1.0 - self.eps + self.b * self.eps

    def moment(self, p: int) -> float:
        _check_order(p)
        return 1.0 - self.eps + self.b**p * self.eps

    def tail(self, x: float) -> float:
        if x < 1.0:
            return 1.0
        if x < self.b:
            return self.eps
        return 0.0

    def minimum(self) -> float:
        return 1.0


ServiceDistribution = Union[ShiftedExp, Pareto, BiModal]


def _check_order(p: int) -> None:
    if not isinstance(p, int) or p < 1:
        raise ValueError("moment order must be a positive integer")


_PREFIXES = {"sexp": ShiftedExp, "pareto": Pareto, "bimodal": BiModal}


def parse_distribution(text: str) -> ServiceDistribution:
    """Parse a distribution literal: ``sexp:DELTA,W``, ``pareto:LAMBDA,ALPHA``
    or ``bimodal:B,EPS``."""
    name, sep, params = text.partition(":")
    if not sep or name not in _PREFIXES:
        raise ValueError(
            f"unknown distribution {text!r}; expected sexp:DELTA,W, "
            "pareto:LAMBDA,ALPHA or bimodal:B,EPS"
        )
    parts = params.split(",")
    if len(parts) != 2:
        raise ValueError(f"distribution {text!r} needs exactly two parameters")
    try:
        a, b = (float(p) for p in parts)
    except ValueError:
        raise ValueError(f"non-numeric parameter in distribution {text!r}") from None
    return _PREFIXES[name](a, b)


def distribution_literal(dist: ServiceDistribution) -> str:
    """Inverse of :func:`parse_distribution`."""
    if isinstance(dist, ShiftedExp):
        return f"sexp:{dist.delta:g},{dist.w:g}"
    if isinstance(dist, Pareto):
        return f"pareto:{dist.lam:g},{dist.alpha:g}"
    return f"bimodal:{dist.b:g},{dist.eps:g}"
