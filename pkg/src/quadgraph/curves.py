"""Frobenius traces of E: Y^2 = (X - a)(X - b)(X - c) and the n = 3 leaf count."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .field import FieldError, PrimeField, primes_between, build_field

__all__ = [
    "CLOSED3_CONSTANT",
    "TraceRecord",
    "frobenius_trace",
    "leaf_count_closed3",
    "closed3_constant_for",
    "resolve_closed3_constant",
    "frobenius_angle",
    "delta",
    "trace_record",
    "pair_traces",
]

#: Constant term of the three-shift closed form.  Resolved by
#: resolve_closed3_constant(61): every triple for every prime 3 <= p <= 61
#: yields 6.  The affine character sum equals -t once the point at
#: infinity is counted.
CLOSED3_CONSTANT = 6


def _check_distinct(F: PrimeField, a: int, b: int, c: int) -> None:
    p = F.p
    for u in (a, b, c):
        if not 0 <= u < p:
            raise FieldError(f"element {u} not in [0, {p})")
    if a == b or a == c or b == c:
        raise FieldError(f"need pairwise distinct elements, got ({a}, {b}, {c})")


@dataclass(frozen=True)
class TraceRecord:
    triple: tuple[int, int, int]
    t: int
    psi: float
    delta: float


def frobenius_trace(F: PrimeField, a: int, b: int, c: int) -> int:
    """t = p + 1 - #E(F_p) = -sum_x chi((x - a)(x - b)(x - c))."""
    _check_distinct(F, a, b, c)
    p = F.p
    if F.has_table:
        x = np.arange(p, dtype=np.int64)
        chis = F.chi_table
        s = (chis[(x - a) % p].astype(np.int64)
             * chis[(x - b) % p] * chis[(x - c) % p]).sum()
        return -int(s)
    return -sum(F.chi((x - a) * (x - b) % p * (x - c)) for x in range(p))


def _closed3_numerator(F: PrimeField, a: int, b: int, c: int, t: int) -> int:
    """8 L + C, i.e. everything in the closed form except the constant."""
    ch = F.chi
    pair = ch(a - b) + ch(a - c) + ch(b - c)
    cross = ch((a - b) * (a - c)) + ch((b - a) * (b - c)) + ch((c - a) * (c - b))
    return F.p + t + (1 + ch(-1)) * pair - cross


def leaf_count_closed3(F: PrimeField, a: int, b: int, c: int) -> int:
    """L(a, b, c) from the Frobenius trace of E_{a,b,c}."""
    t = frobenius_trace(F, a, b, c)
    num = _closed3_numerator(F, a, b, c, t) - CLOSED3_CONSTANT
    if num % 8:
        raise ArithmeticError(
            f"closed form is not integral at p={F.p}, triple={(a, b, c)}: {num}/8"
        )
    return num // 8


def closed3_constant_for(F: PrimeField, a: int, b: int, c: int, leaves: int) -> int:
    """The constant C that makes the closed form equal an observed count."""
    t = frobenius_trace(F, a, b, c)
    return _closed3_numerator(F, a, b, c, t) - 8 * leaves


def resolve_closed3_constant(pmax: int, pmin: int = 5) -> set[int]:
    """All constants implied by the scan oracle over every triple, pmin <= p <= pmax.

    A single-element result means the constant is universal on that range.
    """
    from .leaves import ShiftFamily, count_leaves_scan

    seen: set[int] = set()
    for p in primes_between(pmin, pmax):
        F = build_field(p)
        for trip in itertools.combinations(range(p), 3):
            L = count_leaves_scan(ShiftFamily(F, trip))
            seen.add(closed3_constant_for(F, *trip, L))
    return seen


def frobenius_angle(t: int, p: int) -> float:
    """psi in [0, pi] with cos(psi) = t / (2 sqrt(p))."""
    if t * t > 4 * p:
        raise ValueError(f"|t|={abs(t)} exceeds 2*sqrt({p}); Hasse bound violated")
    return math.acos(max(-1.0, min(1.0, t / (2.0 * math.sqrt(p)))))


def delta(F: PrimeField, a: int, b: int, c: int) -> float:
    """Normalised deviation (L - p/8) / sqrt(p)."""
    L = leaf_count_closed3(F, a, b, c)
    return (L - F.p / 8) / math.sqrt(F.p)


def trace_record(F: PrimeField, a: int, b: int, c: int) -> TraceRecord:
    t = frobenius_trace(F, a, b, c)
    return TraceRecord(
        triple=(a, b, c),
        t=t,
        psi=frobenius_angle(t, F.p),
        delta=delta(F, a, b, c),
    )


def pair_traces(F: PrimeField) -> np.ndarray:
    """Matrix T with T[a, b] = t(a, b, 0); diagonal and zero row/col meaningless.

    Translation x -> x + c gives t(a, b, c) = T[a - c, b - c].
    """
    p = F.p
    x = np.arange(p)
    shifted = F.chi_table[(x[None, :] - x[:, None]) % p].astype(np.float64)
    T = -((shifted * shifted[0]) @ shifted.T)
    return np.rint(T).astype(np.int64)
