"""Boolean functions as truth tables, and the spectral quantities derived from them.

A truth table of an ``n``-variable function holds ``2**n`` output bits. Entry
``i`` is ``f(x)`` where ``x`` is the big-endian ``n``-bit expansion of ``i``, so
the scalar product ``a . x`` is the parity of ``popcount(a & i)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numba
import numpy as np

__all__ = [
    "TruthTable",
    "WalshSpectrum",
    "TruthTableFormatError",
    "TruthTableLengthError",
    "NotPowerOfTwoError",
    "InvalidCharacterError",
    "hamming_weight",
    "support",
    "walsh_transform",
    "nonlinearity",
    "is_balanced",
    "parse_truth_table",
    "format_truth_table",
    "table_nonlinearity",
]


class TruthTableFormatError(ValueError):
    """Raised for malformed truth-table input (text or bit sequences)."""


def _log2_exact(length: int) -> int:
    if length < 2 or length & (length - 1):
        raise TruthTableFormatError(f"length {length} is not a power of two >= 2")
    return length.bit_length() - 1


@dataclass(frozen=True)
class TruthTable:
    n: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise TruthTableFormatError(f"variable count must be a positive integer, got {self.n!r}")
        if len(self.bits) != 1 << self.n:
            raise TruthTableFormatError(
                f"expected {1 << self.n} bits for n={self.n}, got {len(self.bits)}"
            )
        if any(b not in (0, 1) for b in self.bits):
            raise TruthTableFormatError("truth table entries must be 0 or 1")

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "TruthTable":
        bits = tuple(int(b) for b in bits)
        return cls(_log2_exact(len(bits)), bits)

    def __len__(self) -> int:
        return len(self.bits)

    def __getitem__(self, i):
        return self.bits[i]

    def __iter__(self):
        return iter(self.bits)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class WalshSpectrum:
    n: int
    coeffs: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, a):
        return self.coeffs[a]

    def max_abs(self) -> int:
        return max(abs(c) for c in self.coeffs)


def _bits_of(t) -> Sequence[int]:
    return t.bits if isinstance(t, TruthTable) else t


def hamming_weight(t) -> int:
    """Number of ones in a truth table or any 0/1 sequence."""
    return sum(_bits_of(t))


def support(t) -> set[int]:
    return {i for i, b in enumerate(_bits_of(t)) if b}


@numba.njit(cache=True)
def _fwht_inplace(a):
    # Sylvester-ordered butterfly over an int64 array of length 2**n.
    size = a.shape[0]
    h = 1
    while h < size:
        for start in range(0, size, 2 * h):
            for j in range(start, start + h):
                u = a[j]
                v = a[j + h]
                a[j] = u + v
                a[j + h] = u - v
        h *= 2


@numba.njit(cache=True)
def _max_abs_walsh(bits):
    size = bits.shape[0]
    a = np.empty(size, dtype=np.int64)
    for i in range(size):
        a[i] = 1 - 2 * bits[i]
    _fwht_inplace(a)
    m = 0
    for i in range(size):
        c = a[i] if a[i] >= 0 else -a[i]
        if c > m:
            m = c
    return m


def _signs(bits: Sequence[int]) -> np.ndarray:
    return 1 - 2 * np.asarray(bits, dtype=np.int64)


def walsh_transform(t: TruthTable) -> WalshSpectrum:
    """Walsh spectrum ``W_f(a) = sum_x (-1)**(f(x) ^ a.x)`` via the fast butterfly.

    Integer arithmetic throughout; O(n 2**n).
    """
    if not isinstance(t, TruthTable):
        t = TruthTable.from_bits(t)
    a = _signs(t.bits)
    _fwht_inplace(a)
    return WalshSpectrum(t.n, tuple(int(c) for c in a))


def nonlinearity(s: WalshSpectrum) -> int:
    # every |W| is even, so the halving is exact
    return (1 << (s.n - 1)) - s.max_abs() // 2


def table_nonlinearity(bits: Sequence[int]) -> int:
    """Nonlinearity straight from a 0/1 sequence of length ``2**n``.

    Same result as ``nonlinearity(walsh_transform(...))`` without building the
    intermediate spectrum; this is the fitness hot path.
    """
    arr = np.asarray(bits, dtype=np.int64)
    return (arr.shape[0] >> 1) - int(_max_abs_walsh(arr)) // 2


def is_balanced(t) -> bool:
    bits = _bits_of(t)
    return 2 * sum(bits) == len(bits)


_HEX = "0123456789abcdef"


class TruthTableLengthError(TruthTableFormatError):
    """Table text has the wrong number of entries for the requested ``n``."""


class NotPowerOfTwoError(TruthTableFormatError):
    """Table text length does not correspond to any ``2**n``."""


class InvalidCharacterError(TruthTableFormatError):
    """Table text contains characters outside the binary or hex alphabet."""


def _is_pow2(m: int) -> bool:
    return m >= 1 and not m & (m - 1)


def parse_truth_table(text: str, n: int | None = None) -> TruthTable:
    """Parse a binary (``"0110"``) or hex (``"6"``) truth table, leftmost first.

    A string of 0/1 characters whose length is a power of two is read as
    binary; anything else is read as hex, four entries per character with the
    nibble's high bit first. Prefix ``0b``/``0x`` to force either reading.
    When ``n`` is given the table must have exactly ``2**n`` entries.
    """
    s = text.strip().lower()
    if s.startswith("0x"):
        s, binary = s[2:], False
    elif s.startswith("0b"):
        s, binary = s[2:], True
    else:
        binary = set(s) <= {"0", "1"} and len(s) >= 2 and _is_pow2(len(s))
    if not s:
        raise TruthTableLengthError("empty truth table")
    alphabet = "01" if binary else _HEX
    bad = sorted(set(s) - set(alphabet))
    if bad:
        raise InvalidCharacterError(f"invalid characters {''.join(bad)!r} in truth table {text!r}")
    if not _is_pow2(len(s)) or (binary and len(s) < 2):
        raise NotPowerOfTwoError(
            f"truth table {text!r} has {len(s)} characters, not a power of two"
        )
    if binary:
        bits = tuple(int(c) for c in s)
    else:
        bits = tuple(int(b) for c in s for b in format(int(c, 16), "04b"))
    if n is not None and len(bits) != 1 << n:
        raise TruthTableLengthError(f"expected {1 << n} entries for n={n}, got {len(bits)}")
    return TruthTable(_log2_exact(len(bits)), bits)


def format_truth_table(t, fmt: str = "bin") -> str:
    """Render a truth table as ``"bin"`` or ``"hex"`` (hex needs ``n >= 2``)."""
    bits = _bits_of(t)
    if fmt == "bin":
        return "".join(map(str, bits))
    if fmt == "hex":
        if len(bits) % 4:
            raise TruthTableFormatError("hex format needs at least 4 entries (n >= 2)")
        return "".join(
            _HEX[(bits[i] << 3) | (bits[i + 1] << 2) | (bits[i + 2] << 1) | bits[i + 3]]
            for i in range(0, len(bits), 4)
        )
    raise ValueError(f"unknown truth table format {fmt!r}")
