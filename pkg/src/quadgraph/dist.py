"""Distribution of the normalised three-shift deviation against Sato-Tate.

Delta(a, b, c) = (L(a, b, c) - p/8) / sqrt(p) is approximately
cos(psi)/4, so its law tends to the semicircle (2/pi) sqrt(1 - z^2) in
z = 4 Delta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import CLOSED3_CONSTANT, pair_traces
from .field import PrimeField

__all__ = [
    "DEFAULT_BINS",
    "DIST_RANGE",
    "DeltaHistogram",
    "sato_tate_mass",
    "rho_theoretical",
    "exhaustive_deltas",
    "sampled_deltas",
    "rho_empirical",
    "delta_histogram",
    "sup_cdf_deviation",
]

DEFAULT_BINS = 60
DIST_RANGE = (-0.30, 0.30)
EXHAUSTIVE_LIMIT = 4096


def _st_antiderivative(theta: float) -> float:
    return (theta - math.sin(theta) * math.cos(theta)) / 2.0


def sato_tate_mass(alpha: float, beta: float) -> float:
    """(2/pi) * integral of sin^2 over [alpha, beta], in closed form."""
    if not 0.0 <= alpha <= beta <= math.pi:
        raise ValueError(f"need 0 <= alpha <= beta <= pi, got [{alpha}, {beta}]")
    return 2.0 / math.pi * (_st_antiderivative(beta) - _st_antiderivative(alpha))


def _semicircle_antiderivative(z: float) -> float:
    return (z * math.sqrt(max(0.0, 1.0 - z * z)) + math.asin(z)) / 2.0


def rho_theoretical(sigma: float, tau: float) -> float:
    """Limit mass of Delta in [sigma, tau], for [sigma, tau] inside [-1/4, 1/4]."""
    if not -0.25 <= sigma <= tau <= 0.25:
        raise ValueError(f"need -1/4 <= sigma <= tau <= 1/4, got [{sigma}, {tau}]")
    return 2.0 / math.pi * (
        _semicircle_antiderivative(4 * tau) - _semicircle_antiderivative(4 * sigma)
    )


def _clamped_theory(lo: float, hi: float) -> float:
    lo, hi = max(lo, -0.25), min(hi, 0.25)
    return rho_theoretical(lo, hi) if lo < hi else 0.0


def exhaustive_deltas(F: PrimeField) -> tuple[np.ndarray, np.ndarray]:
    """Every attained Delta with its number of ordered distinct triples.

    Uses Delta(a, b, c) = Delta(a - c, b - c, 0): each ordered pair of
    distinct non-zero (a, b) stands for p triples.
    """
    p = F.p
    T = pair_traces(F)
    chi = F.chi_table.astype(np.int64)
    x = np.arange(1, p)
    A, B = np.meshgrid(x, x, indexing="ij")
    keep = A != B
    A, B = A[keep], B[keep]
    t = T[A, B]
    pair = chi[(A - B) % p] + chi[A] + chi[B]
    # with c = 0: (a-b)(a-0), (b-a)(b-0), (0-a)(0-b)
    cross = chi[(A - B) * A % p] + chi[(B - A) * B % p] + chi[A * B % p]
    num = p + t + (1 + chi[p - 1]) * pair - cross - CLOSED3_CONSTANT
    if np.any(num % 8):
        raise ArithmeticError(f"closed form not integral at p={p}")
    L = num // 8
    values, counts = np.unique(L, return_counts=True)
    deltas = (values - p / 8) / math.sqrt(p)
    return deltas, counts.astype(np.int64) * p


def sampled_deltas(F: PrimeField, samples: int, seed: int, chunk: int = 1 << 12):
    """Delta for uniform ordered distinct triples, by direct character sums.

    Chunk c is drawn from SeedSequence(seed).spawn(...)[c].
    """
    p = F.p
    chi = F.chi_table.astype(np.int8)
    x = np.arange(p)
    out = np.empty(samples, dtype=np.float64)
    nchunks = -(-samples // chunk)
    for c, ss in enumerate(np.random.SeedSequence(seed).spawn(nchunks)):
        rng = np.random.default_rng(ss)
        size = min(chunk, samples - c * chunk)
        trip = rng.integers(0, p, size=(size, 3))
        while True:
            bad = (trip[:, 0] == trip[:, 1]) | (trip[:, 0] == trip[:, 2]) | (trip[:, 1] == trip[:, 2])
            if not bad.any():
                break
            trip[bad] = rng.integers(0, p, size=(int(bad.sum()), 3))
        a, b, cc = (trip[:, i : i + 1] for i in range(3))
        prod = (chi[(x - a) % p] * chi[(x - b) % p]).astype(np.int8) * chi[(x - cc) % p]
        t = -prod.sum(axis=1, dtype=np.int64)
        a, b, cc = trip[:, 0], trip[:, 1], trip[:, 2]
        ci = chi.astype(np.int64)
        pair = ci[(a - b) % p] + ci[(a - cc) % p] + ci[(b - cc) % p]
        cross = (ci[(a - b) * (a - cc) % p] + ci[(b - a) * (b - cc) % p]
                 + ci[(cc - a) * (cc - b) % p])
        num = p + t + (1 + ci[p - 1]) * pair - cross - CLOSED3_CONSTANT
        L = num // 8
        out[c * chunk : c * chunk + size] = (L - p / 8) / math.sqrt(p)
    return out


def rho_empirical(F: PrimeField, sigma: float, tau: float, mode: str = "exhaustive",
                  samples: int = 10**6, seed: int = 0) -> float:
    """Fraction of ordered distinct triples with Delta in [sigma, tau]."""
    if F.p < 5:
        raise ValueError("rho_empirical needs p >= 5")
    if not sigma <= tau:
        raise ValueError(f"need sigma <= tau, got [{sigma}, {tau}]")
    if mode == "exhaustive":
        if F.p > EXHAUSTIVE_LIMIT:
            raise ValueError(f"p={F.p} too large for exhaustive mode; use mode='sampled'")
        d, w = exhaustive_deltas(F)
        hit = (d >= sigma) & (d <= tau)
        return int(w[hit].sum()) / (F.p * (F.p - 1) * (F.p - 2))
    d = sampled_deltas(F, samples, seed)
    return float(np.count_nonzero((d >= sigma) & (d <= tau))) / samples


@dataclass
class DeltaHistogram:
    p: int
    edges: np.ndarray
    empirical: np.ndarray
    theoretical: np.ndarray
    mode: str
    seed: int | None = None
    samples: int | None = None

    @property
    def conjectural(self) -> bool:
        """The limit law is only proved for primes p > 3."""
        return self.p <= 3


def delta_histogram(
    F: PrimeField,
    bins: int = DEFAULT_BINS,
    mode: str = "exhaustive",
    samples: int | None = None,
    seed: int | None = None,
) -> DeltaHistogram:
    """Binned Delta masses over [-0.30, 0.30] with the semicircle overlay.

    Values outside the range are folded into the end bins.
    """
    lo, hi = DIST_RANGE
    edges = np.linspace(lo, hi, bins + 1)
    if mode == "exhaustive":
        d, w = exhaustive_deltas(F)
        total = F.p * (F.p - 1) * (F.p - 2)
    elif mode == "sampled":
        if samples is None or seed is None:
            raise ValueError("sampled mode needs samples and seed")
        d = sampled_deltas(F, samples, seed)
        w = np.ones_like(d, dtype=np.int64)
        total = samples
    else:
        raise ValueError(f"unknown mode {mode!r}")
    idx = np.clip(np.searchsorted(edges, d, side="right") - 1, 0, bins - 1)
    counts = np.bincount(idx, weights=w, minlength=bins)
    theory = np.array([_clamped_theory(edges[i], edges[i + 1]) for i in range(bins)])
    return DeltaHistogram(
        p=F.p,
        edges=edges,
        empirical=counts / total,
        theoretical=theory,
        mode=mode,
        seed=seed if mode == "sampled" else None,
        samples=samples if mode == "sampled" else total,
    )


def sup_cdf_deviation(H: DeltaHistogram) -> float:
    """max over bin edges e of |F_emp(e) - F_theory(e)| on [-1/4, 1/4].

    Empirical mass of bins lying wholly outside [-1/4, 1/4] is first moved
    into the nearest bin that still meets the interval.
    """
    eps = 1e-12
    lo_e, hi_e = H.edges[:-1], H.edges[1:]
    inside = np.flatnonzero((hi_e > -0.25 + eps) & (lo_e < 0.25 - eps))
    mass = H.empirical[inside].astype(float)
    mass[0] += H.empirical[: inside[0]].sum()
    mass[-1] += H.empirical[inside[-1] + 1 :].sum()
    edges = np.clip(np.append(lo_e[inside], hi_e[inside[-1]]), -0.25, 0.25)
    emp_cdf = np.concatenate([[0.0], np.cumsum(mass)])
    theo_cdf = np.array([rho_theoretical(-0.25, e) for e in edges])
    return float(np.max(np.abs(emp_cdf - theo_cdf)))
