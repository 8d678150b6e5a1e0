"""Prime-field arithmetic and the quadratic character.

Elements of F_p are the canonical integers 0..p-1.  Python integers never
overflow, so products of two elements below 2**61 are reduced exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

__all__ = [
    "FieldError",
    "PrimeField",
    "TABLE_LIMIT",
    "P_LIMIT",
    "is_prime",
    "primes_between",
    "build_field",
    "chi",
    "euler_chi",
]

#: Largest p that gets a residue bit-table (2**26 bits = 8 MiB).
TABLE_LIMIT = 1 << 26
#: Exclusive upper bound on the field characteristic.
P_LIMIT = 1 << 61

# Deterministic for every n < 3.3e24, which covers the 64-bit range.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class FieldError(ValueError):
    """Raised when a modulus fails one of the field preconditions."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin test, exact below 2**64."""
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_between(lo: int, hi: int) -> list[int]:
    """Odd primes p with lo <= p <= hi."""
    return [p for p in range(max(lo, 3), hi + 1) if p % 2 and is_prime(p)]


def euler_chi(p: int, u: int) -> int:
    """Quadratic character of u mod p by Euler's criterion."""
    u %= p
    if u == 0:
        return 0
    return 1 if pow(u, (p - 1) // 2, p) == 1 else -1


@dataclass(frozen=True, eq=False)
class PrimeField:
    """F_p with its square table and smallest non-square ``lam``.

    ``bits`` is the little-endian packed indicator of Q_p = {u^2}; it is
    ``None`` above :data:`TABLE_LIMIT`, in which case the character falls
    back to Euler's criterion.
    """

    p: int
    lam: int
    bits: np.ndarray | None

    def __repr__(self) -> str:
        mode = "table" if self.has_table else "euler"
        return f"PrimeField(p={self.p}, lam={self.lam}, mode={mode})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))

    @property
    def has_table(self) -> bool:
        return self.bits is not None

    @property
    def neg_one_is_square(self) -> bool:
        return self.p % 4 == 1

    @cached_property
    def squares(self) -> np.ndarray:
        """Unpacked boolean view of Q_p (length p)."""
        if self.bits is None:
            raise FieldError(f"p={self.p} exceeds the residue-table budget")
        out = np.unpackbits(self.bits, count=self.p, bitorder="little").view(bool)
        out.flags.writeable = False
        return out

    @cached_property
    def chi_table(self) -> np.ndarray:
        """chi(u) for u = 0..p-1 as int8."""
        out = np.where(self.squares, 1, -1).astype(np.int8)
        out[0] = 0
        out.flags.writeable = False
        return out

    def is_square(self, u: int) -> bool:
        u %= self.p
        if self.bits is not None:
            return bool((self.bits[u >> 3] >> (u & 7)) & 1)
        return u == 0 or pow(u, (self.p - 1) // 2, self.p) == 1

    def chi(self, u: int) -> int:
        u %= self.p
        if u == 0:
            return 0
        return 1 if self.is_square(u) else -1

    def chi_array(self, u) -> np.ndarray:
        """Vectorised character; needs the table."""
        return self.chi_table[np.asarray(u) % self.p]


def _square_bits(p: int) -> np.ndarray:
    ind = np.zeros(p, dtype=bool)
    j = np.arange((p + 1) // 2, dtype=np.int64)
    ind[(j * j) % p] = True
    return np.packbits(ind, bitorder="little")


@lru_cache(maxsize=128)
def build_field(p: int) -> PrimeField:
    """Validate ``p`` and materialise F_p.

    Raises FieldError naming the failed precondition.
    """
    if not isinstance(p, (int, np.integer)) or isinstance(p, bool):
        raise FieldError(f"p must be an integer, got {p!r}")
    p = int(p)
    if p < 3 or p >= P_LIMIT:
        raise FieldError(f"p={p} out of range: need 3 <= p < 2**61")
    if p % 2 == 0:
        raise FieldError(f"p={p} is even: need an odd prime")
    if not is_prime(p):
        raise FieldError(f"p={p} is not prime")
    bits = _square_bits(p) if p <= TABLE_LIMIT else None
    if bits is not None:
        bits.flags.writeable = False
    F = PrimeField(p=p, lam=0, bits=bits)
    lam = 2
    while F.is_square(lam):
        lam += 1
    object.__setattr__(F, "lam", lam)
    return F


def chi(F: PrimeField, u: int) -> int:
    """Quadratic character chi(u) in {-1, 0, 1}."""
    if not 0 <= u < F.p:
        raise FieldError(f"element {u} not in [0, {F.p})")
    return F.chi(u)
