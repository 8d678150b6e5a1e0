"""Property suites run by ``quadgraph verify``.

Each suite returns a list of failure dicts; an empty list means the
property held on the whole range.
"""

from __future__ import annotations

import itertools
import math
import random

import numpy as np

from .census import census_brute, subset_popcounts
from .cover import greedy_leafless, lemma_intersection_bound, log2_ceiling
from .curves import leaf_count_closed3
from .dist import delta_histogram, rho_theoretical, sup_cdf_deviation
from .field import build_field, primes_between
from .leaves import (
    ShiftFamily,
    bound_count_n,
    count_leaves_scan,
    leaf_count_closed1,
    leaf_count_closed2,
)

__all__ = ["SUITES", "run_suite", "SUP_CDF_LIMIT", "TREND_SLACK"]

SUP_CDF_LIMIT = 0.15
TREND_SLACK = 0.02


def closed_forms(pmax: int) -> list[dict]:
    fails = []
    for p in primes_between(3, pmax):
        F = build_field(p)
        for a in range(p):
            L = count_leaves_scan(ShiftFamily(F, (a,)))
            if L != leaf_count_closed1(F, a):
                fails.append({"check": "closed1", "p": p, "shifts": [a], "scan": L})
        for a, b in itertools.combinations(range(p), 2):
            L = count_leaves_scan(ShiftFamily(F, (a, b)))
            if L != leaf_count_closed2(F, a, b):
                fails.append({"check": "closed2", "p": p, "shifts": [a, b], "scan": L})
        for trip in itertools.combinations(range(p), 3):
            L = count_leaves_scan(ShiftFamily(F, trip))
            if L != leaf_count_closed3(F, *trip):
                fails.append({"check": "closed3", "p": p, "shifts": list(trip), "scan": L})
    return fails


def bounds(pmax: int, nmax: int = 6, nmax_intersect: int = 5) -> list[dict]:
    fails = []
    for p in primes_between(3, pmax):
        F = build_field(p)
        for n in range(1, min(nmax, p) + 1):
            H = census_brute(F, n)
            lo, hi = bound_count_n(F, n)
            if not (lo < H.min_leaves() and H.max_leaves() < hi):
                fails.append({"check": "count_n", "p": p, "n": n,
                              "range": [H.min_leaves(), H.max_leaves()], "bound": [lo, hi]})
            if n == 3:
                worst = max(abs(k - p / 8) for k in H.counts)
                if worst > math.sqrt(p) / 4 + 2:
                    fails.append({"check": "corollary3", "p": p, "worst": worst})
        for n in range(1, min(nmax_intersect, p) + 1):
            common = subset_popcounts(F, range(p), n, op="and")
            sizes = np.flatnonzero(common)
            worst = float(np.max(np.abs(sizes - p / 2**n)))
            if not worst < lemma_intersection_bound(n, p):
                fails.append({"check": "intersection", "p": p, "n": n, "worst": worst})
    return fails


def orbit(pmax: int, trials: int = 1000, seed: int = 0) -> list[dict]:
    fails = []
    rng = random.Random(seed)
    for p in primes_between(13, pmax):
        F = build_field(p)
        for _ in range(trials):
            n = rng.randint(1, min(8, p))
            fam = ShiftFamily(F, rng.sample(range(p), n))
            u = rng.randrange(1, p)
            a, b = count_leaves_scan(fam), count_leaves_scan(fam.scaled(u))
            if a != b:
                fails.append({"check": "orbit", "p": p, "shifts": list(fam.shifts),
                              "u": u, "leaves": [a, b]})
    return fails


def covers(pmax: int) -> list[dict]:
    fails = []
    for p in primes_between(3, pmax):
        try:
            r = greedy_leafless(build_field(p))
        except AssertionError as exc:
            fails.append({"check": "greedy", "p": p, "error": str(exc)})
            continue
        if not r.leafless or r.n > log2_ceiling(p):
            fails.append({"check": "greedy", "p": p, "n": r.n, "leafless": r.leafless})
    return fails


def dist(pmax: int, seed: int = 0) -> list[dict]:
    fails = []
    rng = np.random.default_rng(seed)
    for _ in range(100):
        s, t = np.sort(rng.uniform(-0.25, 0.25, 2))
        z = np.linspace(4 * s, 4 * t, 10**6)
        quad = 2 / math.pi * np.trapezoid(np.sqrt(np.clip(1 - z * z, 0, None)), z)
        if abs(quad - rho_theoretical(s, t)) > 1e-8:
            fails.append({"check": "quadrature", "interval": [s, t]})
    devs = {}
    for p in (101, 211, 401):
        if p > pmax:
            continue
        H = delta_histogram(build_field(p))
        if abs(H.empirical.sum() - 1) > 1e-12:
            fails.append({"check": "normalisation", "p": p})
        devs[p] = sup_cdf_deviation(H)
    if 101 in devs and devs[101] > SUP_CDF_LIMIT:
        fails.append({"check": "sup_cdf", "p": 101, "deviation": devs[101],
                      "limit": SUP_CDF_LIMIT})
    ordered = [devs[p] for p in sorted(devs)]
    for x, y in zip(ordered, ordered[1:]):
        if y > x + TREND_SLACK:
            fails.append({"check": "trend", "deviations": devs})
    return fails


SUITES = {
    "closed-forms": closed_forms,
    "bounds": bounds,
    "orbit": orbit,
    "covers": covers,
    "dist": dist,
}


def run_suite(name: str, pmax: int) -> dict[str, list[dict]]:
    names = list(SUITES) if name == "all" else [name]
    return {n: SUITES[n](pmax) for n in names}
