"""Job-level configuration: n workers, recovery threshold k, strategy labels."""
from __future__ import annotations

from dataclasses import dataclass

REPLICATION = "replication"
SPLITTING = "splitting"
CODING = "coding"


@dataclass(frozen=True)
class JobConfig:
    """An [n, k] assignment: n workers, any k completions finish the job.

    k must divide n so that each worker gets an integer task of s = n/k CUs.
    """

    n: int
    k: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError("n must be a positive integer")
        if not isinstance(self.k, int) or not 1 <= self.k <= self.n:
            raise ValueError(f"k must satisfy 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.n % self.k:
            raise ValueError(f"k must divide n, got k={self.k}, n={self.n}")

    @property
    def s(self) -> int:
        return self.n // self.k

    @property
    def rate(self) -> float:
        return self.k / self.n

    @property
    def strategy(self) -> str:
        return strategy_label(self.n, self.k)


def strategy_label(n: int, k: int) -> str:
    """Replication at k=1, splitting at k=n, coding in between.

    k = n means no redundancy at all, so n = 1 counts as splitting.
    """
    if k == n:
        return SPLITTING
    if k == 1:
        return REPLICATION
    return CODING


def divisors(n: int) -> list[int]:
    """Divisors of n in increasing order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]
