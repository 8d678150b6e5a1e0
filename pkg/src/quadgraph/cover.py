"""Covering F_p by translates of the squares.

A family is leafless exactly when the translates Q_p + a_i cover F_p.
The greedy construction starts from a_1 = 0 and repeatedly adds the
translate that covers the most of what is still uncovered; each step
removes at least half of the residual, so at most ceil(log2 p) shifts
are needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .field import FieldError, PrimeField
from .leaves import ShiftFamily, count_leaves_scan

__all__ = [
    "CoverReport",
    "log2_ceiling",
    "coverage_scores",
    "best_cover_shift",
    "greedy_leafless",
    "verify_leafless",
    "theorem_leaves",
    "theorem_leaves2",
    "leaf_guarantee_threshold",
    "max_guaranteed_n",
    "intersect_shifted_squares",
]


@dataclass(frozen=True)
class CoverReport:
    p: int
    shifts: tuple[int, ...]
    residuals: tuple[int, ...]
    leafless: bool

    @property
    def n(self) -> int:
        return len(self.shifts)


def log2_ceiling(p: int) -> int:
    """ceil(log2 p) computed exactly."""
    return (p - 1).bit_length()


def coverage_scores(F: PrimeField, S: np.ndarray) -> np.ndarray:
    """|S & (Q_p + a)| for every a, with S a length-p bool row.

    Computed as the cyclic correlation sum_u S[u] * sq[u - a].
    """
    p = F.p
    members = np.flatnonzero(S)
    a = np.arange(p)
    return F.squares[(members[None, :] - a[:, None]) % p].sum(axis=1)


def best_cover_shift(F: PrimeField, S) -> int:
    """An a maximising |S & (Q_p + a)|; ties go to the smallest a."""
    row = _as_row(F, S)
    if not row.any():
        raise ValueError("S must be non-empty")
    return int(np.argmax(coverage_scores(F, row)))


def _as_row(F: PrimeField, S) -> np.ndarray:
    if isinstance(S, np.ndarray) and S.dtype == bool:
        return S
    row = np.zeros(F.p, dtype=bool)
    members = list(S)
    if any(not 0 <= u < F.p for u in members):
        raise FieldError(f"subset elements must lie in [0, {F.p})")
    row[members] = True
    return row


def greedy_leafless(F: PrimeField) -> CoverReport:
    """Leafless family built greedily from a_1 = 0.

    Raises AssertionError if a step breaks the halving guarantee or the
    size bound; both are theorems, so a failure means a bug.
    """
    p = F.p
    sq = F.squares
    shifts = [0]
    residual = ~sq.copy()
    residuals = [int(residual.sum())]
    while residuals[-1]:
        a = best_cover_shift(F, residual)
        if a in shifts:
            raise AssertionError(f"greedy step repeated shift {a} at p={p}")
        before = residuals[-1]
        residual &= ~np.roll(sq, a)
        after = int(residual.sum())
        if 2 * after > before:
            raise AssertionError(f"step {len(shifts)} at p={p} removed less than half")
        shifts.append(a)
        residuals.append(after)
    for i, s in enumerate(residuals, start=1):
        if s * 2**i >= p and s:
            raise AssertionError(f"|S_{i}|={s} not below p/2^{i} at p={p}")
    if len(shifts) > log2_ceiling(p):
        raise AssertionError(f"{len(shifts)} shifts exceed ceil(log2 {p})")
    fam = ShiftFamily(F, tuple(shifts))
    return CoverReport(p, tuple(shifts), tuple(residuals), verify_leafless(fam))


def verify_leafless(fam: ShiftFamily) -> bool:
    """True iff the translates cover F_p, checked by the scan counter."""
    return count_leaves_scan(fam) == 0


def theorem_leaves(n: int, p: int) -> bool:
    """n^2 2^(4n-4) < p: every n-family has a leaf."""
    return n * n * 2 ** (4 * n - 4) < p


def theorem_leaves2(n: int, p: int) -> bool:
    """p = 3 mod 4 and n^2 2^(2n-2) < p: every n-family has a leaf."""
    return p % 4 == 3 and n * n * 2 ** (2 * n - 2) < p


def leaf_guarantee_threshold(n: int, p: int) -> bool:
    """Whether either sufficient condition guarantees a leaf for every n-family."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return theorem_leaves(n, p) or theorem_leaves2(n, p)


def max_guaranteed_n(p: int) -> int:
    n = 0
    while leaf_guarantee_threshold(n + 1, p):
        n += 1
    return n


def intersect_shifted_squares(fam: ShiftFamily) -> tuple[int, float]:
    """(|common members of all Q_p + a_i|, |that - p/2^n|) by direct scan."""
    F = fam.field
    p = F.p
    count = 0
    for v in range(p):
        if all(F.is_square(v - a) for a in fam.shifts):
            count += 1
    return count, abs(count - p / 2**fam.n)


def lemma_intersection_bound(n: int, p: int) -> float:
    return 0.5 * n * math.sqrt(p)
