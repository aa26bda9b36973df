"""k-nearest-neighbour mutual information and the IMF selection rules."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .emd import ImfSet
from .signals import Signal, ZeroVariance, kurtosis


class DomainError(ValueError):
    """Argument outside the function's domain."""


class TooFewSamples(ValueError):
    """Series too short for the requested neighbour count."""


class DegenerateData(ValueError):
    """Ties collapse the neighbour distances; the series carry no geometry."""


class AllDegenerate(ValueError):
    """Every IMF has zero variance; no kurtosis selection possible."""


# MI scoring subsamples anything longer than this by stride; neighbour
# search is quadratic in the worst case.
MAX_MI_SAMPLES = 20000

# Fixed salt so the tie-breaking jitter is reproducible run to run.
_JITTER_SALT = 0x9E3779B9

# Shift arguments up to here before applying the asymptotic series; the
# first dropped term is below 1e-12 at 8.
_PSI_SHIFT = 8.0


def digamma(x: "float | np.ndarray") -> "float | np.ndarray":
    """Digamma via recurrence shift into the asymptotic regime.

    Accepts scalars or arrays; absolute error is below 1e-12 for
    arguments >= 1. Raises DomainError for non-positive input.
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.size == 0:
        return arr.copy()
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError("digamma requires positive finite arguments")
    scalar = arr.ndim == 0
    work = np.atleast_1d(arr).astype(np.float64).copy()
    acc = np.zeros_like(work)
    for _ in range(int(_PSI_SHIFT)):
        small = work < _PSI_SHIFT
        if not small.any():
            break
        acc[small] -= 1.0 / work[small]
        work[small] += 1.0
    inv = 1.0 / work
    y = inv * inv
    # Bernoulli tail B_2n/(2n x^2n) through x^-10.
    tail = y * (
        1.0 / 12.0
        - y * (1.0 / 120.0 - y * (1.0 / 252.0 - y * (1.0 / 240.0 - y / 132.0)))
    )
    psi = acc + np.log(work) - 0.5 * inv - tail
    if scalar:
        return float(psi[0])
    return psi.reshape(arr.shape)


def _break_ties(a: np.ndarray, stream: int) -> np.ndarray:
    """Jitter duplicated coordinates by 1e-10 of the data range.

    The perturbation is drawn from a fixed-salt stream so results stay
    reproducible. A zero-range series is returned unchanged (it stays
    degenerate and is caught downstream).
    """
    if np.unique(a).size == a.size:
        return a
    span = float(a.max() - a.min())
    if span == 0.0:
        return a
    rng = np.random.default_rng((_JITTER_SALT, stream, a.size))
    return a + 1e-10 * span * rng.standard_normal(a.size)


def _strict_marginal_counts(a: np.ndarray, eps: np.ndarray) -> np.ndarray:
    """Per point: how many other points lie strictly within eps on this axis.

    Counting |a_j - a_i| < eps_i through interval endpoints (a_i +- eps_i)
    miscounts points exactly at distance eps_i, because the endpoint
    addition rounds. A vectorized binary search over the sorted unique
    values evaluates the same float predicate a brute-force oracle would,
    so the counts agree with it bit for bit.
    """
    uniq, multiplicity = np.unique(a, return_counts=True)
    cumulative = np.concatenate(([0], np.cumsum(multiplicity)))
    m = uniq.size
    n = a.size

    def lower_bound(predicate) -> np.ndarray:
        lo = np.zeros(n, dtype=np.int64)
        hi = np.full(n, m, dtype=np.int64)
        while True:
            open_ = lo < hi
            if not open_.any():
                return lo
            mid = (lo + hi) // 2
            hit = np.zeros(n, dtype=bool)
            hit[open_] = predicate(uniq[mid[open_]], open_)
            hi = np.where(open_ & hit, mid, hi)
            lo = np.where(open_ & ~hit, mid + 1, lo)

    # first unique value v with (v - a_i) >= eps_i, i.e. at/after the right edge
    right = lower_bound(lambda v, sel: (v - a[sel]) >= eps[sel])
    # first unique value v with (a_i - v) < eps_i, i.e. the left edge itself
    left = lower_bound(lambda v, sel: (a[sel] - v) < eps[sel])
    counts = (cumulative[right] - cumulative[left]).astype(np.float64)
    counts -= 1.0  # the point itself sits strictly inside when eps > 0
    counts[eps == 0.0] = 0.0
    return counts


def knn_mutual_information(x: np.ndarray, y: np.ndarray, k: int = 3) -> float:
    """Mutual information in nats from k-th neighbour statistics.

    For each joint point the distance eps_i to its k-th nearest neighbour
    is found under the max-coordinate (Chebyshev) metric; n_x(i) and
    n_y(i) count the marginal points strictly inside eps_i. The estimate

        psi(N) + psi(k) - mean(psi(n_x + 1) + psi(n_y + 1))

    may come out slightly negative for independent data and is not
    clamped. Raises DegenerateData when more than 1% of the neighbour
    distances collapse to zero (identical or duplicated series).
    """
    xv = np.ascontiguousarray(x, dtype=np.float64)
    yv = np.ascontiguousarray(y, dtype=np.float64)
    if xv.size != yv.size:
        raise ValueError("x and y must have the same length")
    n = xv.size
    if k < 1:
        raise ValueError("k must be >= 1")
    if n <= k + 1:
        raise TooFewSamples(f"need more than k+1={k + 1} samples, got {n}")
    if xv.max() == xv.min() or yv.max() == yv.min():
        raise DegenerateData("constant series carries no neighbour geometry")
    xv = _break_ties(xv, 0)
    yv = _break_ties(yv, 1)
    points = np.column_stack((xv, yv))
    tree = cKDTree(points)
    eps = tree.query(points, k=k + 1, p=np.inf)[0][:, k]
    if np.count_nonzero(eps == 0.0) > 0.01 * n:
        raise DegenerateData("neighbour distances collapse to zero")
    nx = _strict_marginal_counts(xv, eps)
    ny = _strict_marginal_counts(yv, eps)
    psi_marginals = np.mean(digamma(nx + 1.0) + digamma(ny + 1.0))
    return float(digamma(float(n)) + digamma(float(k)) - psi_marginals)


@dataclass(frozen=True)
class MiScore:
    """Mutual information of one IMF against the raw signal."""

    imf_index: int  # 1-based, in decomposition order
    value_nats: float
    k: int
    degenerate: bool = False


def score_imfs(raw: Signal, imf_set: ImfSet, k: int = 3) -> list[MiScore]:
    """One MiScore per IMF, order preserved.

    Long records are strided down to MAX_MI_SAMPLES points for scoring
    only. A degenerate IMF (e.g. all-zero padding) scores 0 with its
    flag set instead of aborting the batch.
    """
    x = raw.samples
    if imf_set.source_length != x.size:
        raise ValueError("IMF set does not match the raw signal length")
    stride = max(1, math.ceil(x.size / MAX_MI_SAMPLES))
    xs = x[::stride]
    scores: list[MiScore] = []
    for i, imf in enumerate(imf_set.imfs, start=1):
        try:
            value = knn_mutual_information(xs, imf[::stride], k)
            scores.append(MiScore(i, value, k))
        except DegenerateData:
            scores.append(MiScore(i, 0.0, k, degenerate=True))
    return scores


def select_by_mi(scores: list[MiScore], threshold: float = 0.1) -> list[int]:
    """Indices of IMFs whose MI exceeds the threshold, ascending.

    An empty selection is a valid outcome and is reported upstream.
    """
    if not scores:
        raise ValueError("scores must be nonempty")
    return [s.imf_index for s in scores if s.value_nats > threshold]


def select_by_kurtosis(imf_set: ImfSet) -> int:
    """1-based index of the maximum-kurtosis IMF; ties go to the lowest index."""
    best_index = 0
    best_value = -math.inf
    for i, imf in enumerate(imf_set.imfs, start=1):
        try:
            value = kurtosis(imf)
        except ZeroVariance:
            continue
        if value > best_value:
            best_index, best_value = i, value
    if best_index == 0:
        raise AllDegenerate("every IMF has zero variance")
    return best_index
