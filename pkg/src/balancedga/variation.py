"""Variation operators for fixed-weight bitstrings.

Counter-based balanced crossover, its adaptive-bias variant that may overshoot
the target weight with a cooling probability, and the weight-preserving swap
mutation. Operators take 0/1 sequences and return new lists; randomness always
comes from an explicit :class:`RandomSource`.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

__all__ = [
    "RandomSource",
    "BiasSchedule",
    "counter_cross",
    "counter_cross_unbal",
    "swap_mutation",
]

_MASK64 = (1 << 64) - 1


class RandomSource:
    """Seeded, single-owner stream of uniform draws.

    Backed by :class:`random.Random` (Mersenne Twister). Equal seeds give
    equal draw sequences; do not share one instance between threads.
    """

    def __init__(self, seed: int):
        if not 0 <= seed <= _MASK64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = seed
        self._rng = random.Random(seed)
        # bound for the crossover inner loops
        self.random = self._rng.random

    def randrange(self, n: int) -> int:
        return self._rng.randrange(n)

    def sample(self, n: int, k: int) -> list[int]:
        """``k`` distinct indices from ``range(n)``, in draw order."""
        return self._rng.sample(range(n), k)

    def getstate(self):
        return self._rng.getstate()


def _check_parents(x: Sequence[int], y: Sequence[int], k: int) -> int:
    n = len(x)
    if len(y) != n:
        raise ValueError(f"parent lengths differ: {n} != {len(y)}")
    if not 0 <= k <= n:
        raise ValueError(f"target weight {k} outside [0, {n}]")
    return n


def counter_cross(x: Sequence[int], y: Sequence[int], k: int, rng: RandomSource) -> list[int]:
    """Balanced counter-based crossover.

    Copies position by position from a uniformly chosen parent while fewer
    than ``n - k`` zeros and ``k`` ones have been written; the rest of the
    child is then filled with the value whose counter is still open. The
    child has weight exactly ``k`` whatever the parents' weights.
    """
    n = _check_parents(x, y, k)
    rand = rng.random
    z = [0] * n
    zeros_left, ones_left = n - k, k
    i = 0
    while zeros_left and ones_left:
        b = x[i] if rand() < 0.5 else y[i]
        z[i] = b
        if b:
            ones_left -= 1
        else:
            zeros_left -= 1
        i += 1
    if ones_left:
        z[i:] = [1] * (n - i)
    return z


def counter_cross_unbal(
    x: Sequence[int], y: Sequence[int], n: int, k: int, p: float, rng: RandomSource
) -> list[int]:
    """Counter-based crossover with adaptive bias.

    The first phase is :func:`counter_cross`. Once a counter saturates, each
    remaining position keeps receiving the saturated value with probability
    ``p``; the first draw ``r >= p`` writes the complement there and every
    later position gets the complement without further draws.
    """
    if _check_parents(x, y, k) != n:
        raise ValueError(f"parents have length {len(x)}, expected n={n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"unbalancedness probability {p} outside [0, 1]")
    rand = rng.random
    z = [0] * n
    cnt0 = cnt1 = 0
    i = 0
    while cnt0 < n - k and cnt1 < k:
        b = x[i] if rand() < 0.5 else y[i]
        z[i] = b
        if b:
            cnt1 += 1
        else:
            cnt0 += 1
        i += 1
    val = 0 if cnt0 == n - k else 1
    while i < n:
        if rand() < p:
            z[i] = val
            i += 1
        else:
            z[i:] = [val ^ 1] * (n - i)
            break
    return z


def swap_mutation(z: Sequence[int], p_m: float, rng: RandomSource) -> list[int]:
    """With probability ``p_m`` exchange a random 1-position with a random 0-position.

    One gate draw per call. Constant strings come back unchanged.
    """
    out = list(z)
    if rng.random() >= p_m:
        return out
    ones = [i for i, b in enumerate(out) if b]
    if not ones or len(ones) == len(out):
        return out
    zeros = [i for i, b in enumerate(out) if not b]
    i1 = ones[rng.randrange(len(ones))]
    i0 = zeros[rng.randrange(len(zeros))]
    out[i1], out[i0] = 0, 1
    return out


@dataclass
class BiasSchedule:
    """Unbalancedness probability under geometric cooling.

    ``current_p`` is multiplied by ``alpha`` each time another ``interval_m``
    fitness evaluations have been recorded, so after ``t`` updates it equals
    ``p0 * alpha**t``.
    """

    p0: float
    alpha: float
    interval_m: int = 2000
    updates_applied: int = 0
    current_p: float = field(default=None)
    pending_evaluations: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p0 <= 1.0:
            raise ValueError(f"p0 must lie in [0, 1], got {self.p0}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.interval_m < 1:
            raise ValueError(f"interval_m must be positive, got {self.interval_m}")
        if self.current_p is None:
            self.current_p = self.p0

    def cool(self) -> "BiasSchedule":
        self.current_p *= self.alpha
        self.updates_applied += 1
        return self

    def record_evaluations(self, count: int) -> "BiasSchedule":
        if count < 0:
            raise ValueError("evaluation count must be non-negative")
        total = self.pending_evaluations + count
        crossings, self.pending_evaluations = divmod(total, self.interval_m)
        for _ in range(crossings):
            self.cool()
        return self
