"""Task-size scaling: how a task of s computing units turns CU time into task time.

Three models are supported. Server-dependent scaling multiplies the random
part per server (a shifted-exponential keeps its shift unscaled; Pareto and
two-point times scale wholesale). Data-dependent scaling pays a deterministic
per-CU cost plus one unscaled random term. Additive scaling sums s i.i.d. CU
times.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .distributions import ServiceDistribution, ShiftedExp
from .rng import RandomStream


class Scaling(str, Enum):
    SERVER = "server"
    DATA = "data"
    ADDITIVE = "additive"


@dataclass(frozen=True)
class TaskModel:
    """A task of ``s`` CUs with a given CU distribution and scaling model.

    ``shift`` supplies the deterministic per-CU cost for data-dependent
    scaling of distributions that carry no intrinsic shift (Pareto,
    BiModal); it is required exactly then and forbidden otherwise.
    """

    dist: ServiceDistribution
    scaling: Scaling
    s: int
    shift: Optional[float] = None

    def __post_init__(self):
        if not isinstance(self.s, int) or self.s < 1:
            raise ValueError("task size s must be a positive integer")
        needs_shift = self.scaling == Scaling.DATA and not isinstance(self.dist, ShiftedExp)
        if needs_shift and self.shift is None:
            raise ValueError("data-dependent scaling of Pareto/BiModal needs a shift")
        if not needs_shift and self.shift is not None:
            raise ValueError("shift is only valid for data-dependent Pareto/BiModal")
        if self.shift is not None and self.shift < 0:
            raise ValueError("shift must be >= 0")

    @property
    def uniforms_per_task(self) -> int:
        """Uniform draws consumed per task: s for additive, 1 otherwise."""
        return self.s if self.scaling == Scaling.ADDITIVE else 1

    def task_times(self, u: np.ndarray) -> np.ndarray:
        """Map uniforms of shape (..., uniforms_per_task) to task times (...)."""
        d, s = self.dist, self.s
        if self.scaling == Scaling.ADDITIVE:
            return d.from_uniform(u).sum(axis=-1)
        x = d.from_uniform(u[..., 0])
        if self.scaling == Scaling.SERVER:
            if isinstance(d, ShiftedExp):
                # the handshake shift is paid once; only the random part scales
                return d.delta + s * (x - d.delta)
            return s * x
        # data-dependent
        if isinstance(d, ShiftedExp):
            return s * d.delta + (x - d.delta)
        return s * self.shift + x

    def sample_task_time(self, rng: RandomStream) -> float:
        """One task-time realization, consuming exactly uniforms_per_task draws."""
        u = rng.uniforms(self.uniforms_per_task)
        return float(self.task_times(u))

    def mean(self) -> float:
        """Closed-form task-time mean (when the CU mean exists)."""
        d, s = self.dist, self.s
        if self.scaling == Scaling.ADDITIVE:
            return s * d.mean()
        if self.scaling == Scaling.SERVER:
            if isinstance(d, ShiftedExp):
                return d.delta + s * d.w
            return s * d.mean()
        if isinstance(d, ShiftedExp):
            return s * d.delta + d.w
        return s * self.shift + d.mean()


def parse_scaling(text: str) -> Scaling:
    try:
        return Scaling(text)
    except ValueError:
        raise ValueError(f"unknown scaling {text!r}; expected server, data or additive") from None
