"""Brute-force reference computations for small truth tables.

Nothing here shares code with the fast transform in :mod:`balancedga.boolfn`:
the Walsh sums are evaluated term by term from the ``popcount(a & x)`` parity,
and nonlinearity is measured as a Hamming distance to every affine function.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

from .boolfn import TruthTable, WalshSpectrum

__all__ = [
    "OracleGuardError",
    "NAIVE_WALSH_MAX_N",
    "AFFINE_DISTANCE_MAX_N",
    "EXHAUSTIVE_MAX_N",
    "naive_walsh",
    "affine_distance_nl",
    "exhaustive_balanced_optimum",
]

NAIVE_WALSH_MAX_N = 14
AFFINE_DISTANCE_MAX_N = 12
EXHAUSTIVE_MAX_N = 4


class OracleGuardError(ValueError):
    """Input too large for an exhaustive computation."""


def _guard(n: int, limit: int, what: str):
    if n > limit:
        raise OracleGuardError(f"{what} is limited to n <= {limit}, got n={n}")


def _dot_parity_rows(n: int, rows: np.ndarray) -> np.ndarray:
    """``parity(popcount(a & x))`` for each ``a`` in ``rows`` and every ``x``."""
    xs = np.arange(1 << n, dtype=np.uint32)
    return (np.bitwise_count(rows[:, None] & xs[None, :]) & 1).astype(np.int8)


@lru_cache(maxsize=None)
def _linear_functions(n: int) -> np.ndarray:
    # Row a is the truth table of x -> a.x
    return _dot_parity_rows(n, np.arange(1 << n, dtype=np.uint32))


def naive_walsh(t: TruthTable, block: int = 256) -> WalshSpectrum:
    """``W_f(a)`` summed directly over all ``x`` for every ``a``; O(4**n)."""
    _guard(t.n, NAIVE_WALSH_MAX_N, "naive_walsh")
    size = 1 << t.n
    f = np.asarray(t.bits, dtype=np.int8)
    coeffs = []
    for lo in range(0, size, block):
        a = np.arange(lo, min(lo + block, size), dtype=np.uint32)
        exponent = _dot_parity_rows(t.n, a) ^ f[None, :]
        # (-1)**e summed over x, as (#even) - (#odd)
        coeffs.extend(int(v) for v in size - 2 * exponent.sum(axis=1, dtype=np.int64))
    return WalshSpectrum(t.n, tuple(coeffs))


def _affine_distances(n: int, tables: np.ndarray) -> np.ndarray:
    lin = _linear_functions(n).astype(np.int32)
    f = tables.astype(np.int32)
    # |f xor l| = |f| + |l| - 2 <f, l>
    d = f.sum(axis=1)[:, None] + lin.sum(axis=1)[None, :] - 2 * (f @ lin.T)
    size = 1 << n
    return np.minimum(d, size - d).min(axis=1)


def affine_distance_nl(t: TruthTable) -> int:
    """Minimum Hamming distance from ``t`` to the ``2**(n+1)`` affine functions."""
    _guard(t.n, AFFINE_DISTANCE_MAX_N, "affine_distance_nl")
    return int(_affine_distances(t.n, np.asarray([t.bits], dtype=np.int8))[0])


def exhaustive_balanced_optimum(n: int) -> tuple[int, int]:
    """Best nonlinearity over all balanced ``n``-variable tables, and how many attain it."""
    _guard(n, EXHAUSTIVE_MAX_N, "exhaustive_balanced_optimum")
    if n < 1:
        raise ValueError("n must be positive")
    size = 1 << n
    supports = np.array(list(combinations(range(size), size // 2)), dtype=np.intp)
    tables = np.zeros((len(supports), size), dtype=np.int8)
    np.put_along_axis(tables, supports, 1, axis=1)
    nls = _affine_distances(n, tables)
    best = int(nls.max())
    return best, int((nls == best).sum())
