"""Leaf-count histograms over all n-families, by brute force or orbit reduction.

The reduced method enumerates only families whose first shift is 0, 1 or
the smallest non-square lam (remaining shifts non-zero) and recovers the
full histogram with N_k = N_k^0 + (p - 1)(N_k^1 + N_k^lam) / (2n).
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from .field import FieldError, PrimeField, build_field
from .leaves import popcount_rows, shifted_rows

log = logging.getLogger(__name__)

__all__ = [
    "DEFAULT_BUCKET",
    "DEFAULT_BUDGET",
    "BudgetExceeded",
    "LeafHistogram",
    "ReducedCensus",
    "work_budget",
    "brute_cost",
    "reduced_cost",
    "subset_popcounts",
    "census_brute",
    "census_reduced",
    "census_sampled",
    "aggregate",
    "min_max_leaves",
    "proportions",
]

DEFAULT_BUCKET = 40
DEFAULT_BUDGET = 10**9
_PAIR_CHUNK = 1 << 16


class BudgetExceeded(RuntimeError):
    """Exhaustive enumeration would exceed the kernel vertex-visit budget."""

    def __init__(self, cost: int, budget: int, hint: str):
        self.cost = cost
        self.budget = budget
        super().__init__(
            f"estimated cost {cost:.3e} vertex-visits exceeds budget {budget:.3e}; {hint}"
        )


def work_budget() -> int:
    env = os.environ.get("QUADGRAPH_BUDGET")
    return int(float(env)) if env else DEFAULT_BUDGET


def brute_cost(p: int, n: int) -> int:
    return math.comb(p, n) * p


def reduced_cost(p: int, n: int) -> int:
    return (math.comb(p - 1, n - 1) + 2 * math.comb(p - 2, n - 1)) * p


@dataclass
class LeafHistogram:
    """N_k counts for one (p, n).

    When ``bucket_threshold`` is T, the key T holds every family with at
    least T leaves.
    """

    p: int
    n: int
    counts: dict[int, int]
    total: int
    method: str = "brute"
    bucket_threshold: int | None = None

    def __post_init__(self):
        self.counts = {int(k): int(v) for k, v in sorted(self.counts.items()) if v}
        if sum(self.counts.values()) != self.total:
            raise ValueError(
                f"histogram counts sum to {sum(self.counts.values())}, total is {self.total}"
            )

    @classmethod
    def from_array(cls, p, n, arr, method="brute", bucket=None) -> "LeafHistogram":
        counts = {k: int(v) for k, v in enumerate(arr) if v}
        hist = cls(p, n, counts, int(sum(counts.values())), method)
        return hist.bucketed(bucket) if bucket is not None else hist

    def bucketed(self, T: int | None) -> "LeafHistogram":
        if T is None:
            return self
        if self.bucket_threshold is not None and T > self.bucket_threshold:
            raise ValueError("cannot re-bucket above an existing threshold")
        merged: dict[int, int] = {}
        for k, v in self.counts.items():
            key = min(k, T)
            merged[key] = merged.get(key, 0) + v
        return LeafHistogram(self.p, self.n, merged, self.total, self.method, T)

    def is_bucket(self, k: int) -> bool:
        return self.bucket_threshold is not None and k == self.bucket_threshold

    def label(self, k: int) -> str:
        return f">={k}" if self.is_bucket(k) else str(k)

    def min_leaves(self) -> int:
        return min(self.counts)

    def max_leaves(self) -> int:
        return max(self.counts)


@dataclass
class ReducedCensus:
    """Histograms for first shift 0, 1 and lam respectively."""

    p: int
    n: int
    lam: int
    zero: LeafHistogram
    one: LeafHistogram
    lam_hist: LeafHistogram = field(repr=False)

    @property
    def total(self) -> int:
        return self.zero.total + self.one.total + self.lam_hist.total


# -- enumeration kernel -----------------------------------------------------


@lru_cache(maxsize=16)
def _pairs(m: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """triu pairs i < j of range(m), plus the offset where each i begins."""
    I, J = np.triu_indices(m, 1)
    starts = np.zeros(m + 1, dtype=np.int64)
    starts[1:] = np.cumsum(np.arange(m - 1, -1, -1))
    return I, J, starts


def _accumulate(op, base, rows):
    return rows.copy() if base is None else op(base, rows)


def _unit(rows, pool, m, head, op, start, p):
    """Histogram of popcounts over all m-subsets of pool whose first index is start."""
    out = np.zeros(p + 1, dtype=np.int64)
    first = rows[pool[start]]
    base = first if head is None else op(head, first)
    if m == 1:
        out[int(np.bitwise_count(base).sum())] += 1
        return out
    L = len(pool)
    if m == 2:
        vals = popcount_rows(op(base, rows[pool[start + 1:]]))
        return out + np.bincount(vals, minlength=p + 1)
    I, J, starts = _pairs(L)
    for rest in combinations(range(start + 1, L), m - 3):
        acc = base
        for i in rest:
            acc = op(acc, rows[pool[i]])
        tail = (rest[-1] if rest else start) + 1
        lo, hi = starts[tail], starts[L]
        for s in range(lo, hi, _PAIR_CHUNK):
            e = min(s + _PAIR_CHUNK, hi)
            block = op(op(acc, rows[pool[I[s:e]]]), rows[pool[J[s:e]]])
            out += np.bincount(popcount_rows(block), minlength=p + 1)
    return out


def _units_worker(args):
    p, pool, m, head, op_name, unit_ids = args
    F = build_field(p)
    rows = shifted_rows(F)
    op = np.bitwise_or if op_name == "or" else np.bitwise_and
    out = np.zeros(p + 1, dtype=np.int64)
    for u in unit_ids:
        out += _unit(rows, pool, m, head, op, u, p)
    return out


def subset_popcounts(
    F: PrimeField,
    pool,
    m: int,
    head=(),
    op: str = "or",
    workers: int = 1,
) -> np.ndarray:
    """Histogram (index = popcount) of combined translate rows.

    Every family is ``head`` plus an m-subset of ``pool``; the rows of its
    shifts are combined with OR (covered vertices) or AND (common
    vertices).  Work splits by the subset's first pool element, so the
    result does not depend on ``workers``.
    """
    p = F.p
    pool = np.asarray(sorted(pool), dtype=np.int64)
    rows = shifted_rows(F)
    npop = np.bitwise_or if op == "or" else np.bitwise_and
    head_acc = None
    for a in head:
        head_acc = _accumulate(npop, head_acc, rows[a])
    out = np.zeros(p + 1, dtype=np.int64)
    if m == 0:
        if head_acc is not None:
            out[int(np.bitwise_count(head_acc).sum())] += 1
        return out
    units = list(range(len(pool) - m + 1))
    if workers <= 1 or len(units) < 2:
        for u in units:
            out += _unit(rows, pool, m, head_acc, npop, u, p)
        return out
    shards = [units[i::workers] for i in range(workers)]
    args = [(p, pool, m, head_acc, op, s) for s in shards if s]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        for part in ex.map(_units_worker, args):
            out += part
    return out


def _leaf_hist(F, pool, m, head, method, bucket, workers) -> LeafHistogram:
    covered = subset_popcounts(F, pool, m, head, "or", workers)
    leaves = covered[::-1]  # index p - c
    return LeafHistogram.from_array(F.p, len(head) + m, leaves, method, bucket)


def _check_budget(cost: int, budget: int | None, hint: str) -> None:
    budget = work_budget() if budget is None else budget
    if cost > budget:
        raise BudgetExceeded(cost, budget, hint)


def _check_n(F: PrimeField, n: int) -> None:
    if not 1 <= n <= F.p:
        raise FieldError(f"need 1 <= n <= p, got n={n}, p={F.p}")


def census_brute(
    F: PrimeField,
    n: int,
    bucket: int | None = None,
    *,
    workers: int = 1,
    budget: int | None = None,
) -> LeafHistogram:
    """Leaf histogram over all C(p, n) families."""
    _check_n(F, n)
    _check_budget(brute_cost(F.p, n), budget,
                  "use census_reduced or sample families instead")
    return _leaf_hist(F, range(F.p), n, (), "brute", bucket, workers)


def census_reduced(
    F: PrimeField,
    n: int,
    bucket: int | None = None,
    *,
    workers: int = 1,
    budget: int | None = None,
) -> ReducedCensus:
    """Histograms for a_1 in {0, 1, lam}, other shifts non-zero."""
    _check_n(F, n)
    if n < 2:
        raise FieldError("the reduced census needs n >= 2")
    _check_budget(reduced_cost(F.p, n), budget, "sample families instead")
    p = F.p
    hists = []
    for a1 in (0, 1, F.lam):
        pool = [a for a in range(1, p) if a != a1]
        hists.append(_leaf_hist(F, pool, n - 1, (a1,), "reduced", bucket, workers))
    return ReducedCensus(p, n, F.lam, *hists)


def aggregate(R: ReducedCensus) -> LeafHistogram:
    """Full N_k from the three reduced histograms, in exact integers."""
    p, n = R.p, R.n
    keys = set(R.zero.counts) | set(R.one.counts) | set(R.lam_hist.counts)
    counts = {}
    for k in keys:
        num = (p - 1) * (R.one.counts.get(k, 0) + R.lam_hist.counts.get(k, 0))
        if num % (2 * n):
            raise ArithmeticError(
                f"orbit identity not integral at p={p}, n={n}, k={k}: {num}/{2 * n}"
            )
        counts[k] = R.zero.counts.get(k, 0) + num // (2 * n)
    total = sum(counts.values())
    if total != math.comb(p, n):
        raise ArithmeticError(f"aggregate total {total} != C({p},{n})")
    return LeafHistogram(p, n, counts, total, "reduced", R.zero.bucket_threshold)


def census_sampled(
    F: PrimeField,
    n: int,
    samples: int,
    seed: int,
    bucket: int | None = None,
    chunk: int = 1 << 15,
) -> LeafHistogram:
    """Estimate the histogram from uniformly random n-subsets.

    Chunk c draws from SeedSequence(seed).spawn(...)[c], so output only
    depends on (seed, samples, chunk).
    """
    _check_n(F, n)
    p = F.p
    rows = shifted_rows(F)
    nchunks = -(-samples // chunk)
    out = np.zeros(p + 1, dtype=np.int64)
    for c, ss in enumerate(np.random.SeedSequence(seed).spawn(nchunks)):
        rng = np.random.default_rng(ss)
        size = min(chunk, samples - c * chunk)
        fams = np.stack([rng.choice(p, size=n, replace=False) for _ in range(size)]) \
            if n > p // 2 else _distinct_draws(rng, p, n, size)
        acc = np.bitwise_or.reduce(rows[fams], axis=1)
        out += np.bincount(p - popcount_rows(acc), minlength=p + 1)
    return LeafHistogram.from_array(p, n, out, "sampled", bucket)


def _distinct_draws(rng, p, n, size):
    fams = rng.integers(0, p, size=(size, n))
    while True:
        srt = np.sort(fams, axis=1)
        bad = (np.diff(srt, axis=1) == 0).any(axis=1)
        if not bad.any():
            return fams
        fams[bad] = rng.integers(0, p, size=(int(bad.sum()), n))


def min_max_leaves(F: PrimeField, n: int, method: str = "reduced", **kw) -> tuple[int, int]:
    """Smallest and largest leaf counts attained by some n-family."""
    if method == "reduced" and n >= 2:
        H = aggregate(census_reduced(F, n, **kw))
    else:
        H = census_brute(F, n, **kw)
    return H.min_leaves(), H.max_leaves()


def proportions(H: LeafHistogram) -> list[tuple[str, float]]:
    """(label, percentage) rows, rounded to two decimals."""
    if H.total <= 0:
        raise ValueError("empty histogram")
    return [(H.label(k), round(100.0 * v / H.total, 2)) for k, v in H.counts.items()]
