"""Leaf counting for G(X^2 + a_1, ..., X^2 + a_n) over F_p.

A vertex v is a leaf iff v - a_i is a non-square for every shift a_i, so
the non-leaves are exactly the union of the translates Q_p + a_i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np
from numba import njit
from numpy.lib.stride_tricks import sliding_window_view

from .field import FieldError, PrimeField

__all__ = [
    "ShiftFamily",
    "TableUnavailable",
    "ROWS_LIMIT",
    "count_leaves_bitset",
    "count_leaves_scan",
    "leaf_set",
    "leaf_count_closed1",
    "leaf_count_closed2",
    "bound_count_n",
    "shifted_rows",
    "popcount_rows",
]

#: Largest p for which the full p x p packed translate table is cached.
ROWS_LIMIT = 1 << 14


class TableUnavailable(FieldError):
    """The bitset kernel needs a residue table; use count_leaves_scan."""


@dataclass(frozen=True)
class ShiftFamily:
    """A set of pairwise distinct shifts, stored sorted ascending."""

    field: PrimeField
    shifts: tuple[int, ...]

    def __post_init__(self):
        p = self.field.p
        raw = [int(a) for a in self.shifts]
        if not raw:
            raise FieldError("a family needs at least one shift")
        bad = [a for a in raw if not 0 <= a < p]
        if bad:
            raise FieldError(f"shifts {bad} not in [0, {p})")
        ordered = sorted(raw)
        dupes = sorted({a for a, b in zip(ordered, ordered[1:]) if a == b})
        if dupes:
            raise FieldError(f"shifts must be pairwise distinct; repeated: {dupes}")
        object.__setattr__(self, "shifts", tuple(ordered))

    @classmethod
    def of(cls, F: PrimeField, shifts: Iterable[int]) -> "ShiftFamily":
        return cls(F, tuple(shifts))

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def n(self) -> int:
        return len(self.shifts)

    def scaled(self, u: int) -> "ShiftFamily":
        """The family {u^2 a_i}; has the same leaf count for u != 0."""
        s = u * u % self.p
        return ShiftFamily(self.field, tuple(a * s % self.p for a in self.shifts))


def popcount_rows(words: np.ndarray) -> np.ndarray:
    """Set bits per row of a 2-D uint64 array."""
    return np.bitwise_count(words).sum(axis=-1, dtype=np.int64)


def _pack_rows(ind: np.ndarray) -> np.ndarray:
    """Pack a (..., p) bool array to (..., ceil(p/64)) uint64 words."""
    p = ind.shape[-1]
    nbytes = -(-p // 64) * 8
    packed = np.packbits(ind, axis=-1, bitorder="little")
    pad = nbytes - packed.shape[-1]
    if pad:
        widths = [(0, 0)] * (packed.ndim - 1) + [(0, pad)]
        packed = np.pad(packed, widths)
    return np.ascontiguousarray(packed).view("<u8")


@lru_cache(maxsize=8)
def shifted_rows(F: PrimeField) -> np.ndarray:
    """Packed indicator of Q_p + a for every a, shape (p, ceil(p/64)).

    Row a is the square-value indicator rotated by a.  Padding bits are 0.
    """
    p = F.p
    if p > ROWS_LIMIT:
        raise TableUnavailable(f"p={p} too large for the translate table")
    doubled = np.concatenate([F.squares, F.squares])
    # window starting at p - a holds sq[(v - a) mod p] for v = 0..p-1
    windows = sliding_window_view(doubled, p)[p:0:-1]
    rows = _pack_rows(windows)
    rows.flags.writeable = False
    return rows


def count_leaves_bitset(fam: ShiftFamily) -> int:
    """OR the rotated square indicators word-wise and count the zero bits."""
    F = fam.field
    if not F.has_table:
        raise TableUnavailable(f"p={F.p} has no residue table; use count_leaves_scan")
    p = F.p
    if p <= ROWS_LIMIT:
        rows = shifted_rows(F)
        acc = np.bitwise_or.reduce(rows[list(fam.shifts)], axis=0)
    else:
        acc = np.zeros(-(-p // 64), dtype=np.uint64)
        for a in fam.shifts:
            acc |= _pack_rows(np.roll(F.squares, a))
    return p - int(np.bitwise_count(acc).sum())


@njit(cache=True)
def _scan_table(squares, shifts):
    p = squares.shape[0]
    count = 0
    for v in range(p):
        leaf = True
        for a in shifts:
            d = v - a
            if d < 0:
                d += p
            if squares[d]:
                leaf = False
                break
        if leaf:
            count += 1
    return count


def count_leaves_scan(fam: ShiftFamily) -> int:
    """Per-vertex scan with early exit on the first shift that reaches it."""
    F = fam.field
    if F.has_table:
        return int(_scan_table(F.squares, np.asarray(fam.shifts, dtype=np.int64)))
    p = F.p
    count = 0
    for v in range(p):
        for a in fam.shifts:
            if F.is_square(v - a):
                break
        else:
            count += 1
    return count


def leaf_set(fam: ShiftFamily) -> list[int]:
    """The leaves themselves, in increasing order (table mode)."""
    F = fam.field
    covered = np.zeros(F.p, dtype=bool)
    for a in fam.shifts:
        covered |= np.roll(F.squares, a)
    return np.flatnonzero(~covered).tolist()


def leaf_count_closed1(F: PrimeField, a: int = 0) -> int:
    """L(a) = (p - 1)/2 for a single polynomial."""
    return (F.p - 1) // 2


def leaf_count_closed2(F: PrimeField, a: int, b: int) -> int:
    """Exact leaf count for two shifts.

    With p = 4k + 1 the count is k + (chi(a - b) - 1)/2; with p = 4k + 3
    it is k regardless of the shifts.
    """
    if a % F.p == b % F.p:
        raise FieldError(f"shifts must be distinct, got a=b={a}")
    k = F.p // 4
    if F.p % 4 == 1:
        return k + (F.chi(a - b) - 1) // 2
    return k


def bound_count_n(F: PrimeField, n: int) -> tuple[float, float]:
    """Open interval that must contain every leaf count of an n-family.

    Half-width is c*n*sqrt(p), with c = 1/2 when n < 2 sqrt(p) and 2/3
    otherwise.
    """
    p = F.p
    if not 1 <= n <= p:
        raise FieldError(f"need 1 <= n <= p, got n={n}, p={p}")
    c = 0.5 if n * n < 4 * p else 2.0 / 3.0
    centre = p / 2**n
    half = c * n * math.sqrt(p)
    return centre - half, centre + half
