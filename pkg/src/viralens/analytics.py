"""Cluster-level virality analytics.

Hard cluster assignment from membership probabilities, per-cluster share
statistics, pairwise pooled two-sample t-tests with exact Student critical
values, and word-cloud term frequencies for naming clusters.
"""

import math
from collections import Counter
from dataclasses import dataclass, replace

import numpy as np

from .text import tokenize


def cluster_assign(theta: np.ndarray) -> np.ndarray:
    """Hard assignment: argmax per row, ties broken toward the lowest index."""
    theta = np.asarray(theta, dtype=np.float64)
    if theta.ndim != 2:
        raise ValueError("theta must be 2-dimensional")
    if np.max(np.abs(theta.sum(axis=1) - 1.0)) > 1e-6:
        raise ValueError("theta rows must sum to 1")
    return theta.argmax(axis=1)


@dataclass(frozen=True)
class ClusterStat:
    """One Table-1 row: document count, mean and unbiased variance of shares.

    mean is None for empty clusters; variance is None whenever n < 2.
    """

    cluster: int
    frequency: int
    mean: float | None
    variance: float | None
    label: str = ""

    def with_label(self, label: str) -> "ClusterStat":
        return replace(self, label=label)


def cluster_stats(assignments, activities, n_clusters: int) -> list[ClusterStat]:
    """Per-cluster frequency, arithmetic mean, and sample variance (n-1)."""
    assignments = np.asarray(assignments, dtype=np.int64)
    activities = np.asarray(activities, dtype=np.float64)
    if assignments.shape != activities.shape:
        raise ValueError("assignments and activities must align")
    if assignments.size and (assignments.min() < 0 or assignments.max() >= n_clusters):
        raise ValueError("assignment index outside [0, n_clusters)")
    stats = []
    for k in range(n_clusters):
        values = activities[assignments == k]
        n = values.shape[0]
        mean = float(values.mean()) if n >= 1 else None
        variance = float(values.var(ddof=1)) if n >= 2 else None
        stats.append(ClusterStat(cluster=k, frequency=n, mean=mean, variance=variance))
    return stats


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    max_iter = 300
    eps = 3e-14
    fpmin = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise RuntimeError("incomplete beta continued fraction did not converge")


def betainc_reg(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if a <= 0 or b <= 0:
        raise ValueError("shape parameters must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        a * math.log(x)
        + b * math.log1p(-x)
        - (math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def t_cdf(t: float, df: int) -> float:
    """Student's t cumulative distribution via the incomplete beta."""
    if df < 1:
        raise ValueError("df must be at least 1")
    x = df / (df + t * t)
    tail = 0.5 * betainc_reg(df / 2.0, 0.5, x)
    return 1.0 - tail if t >= 0 else tail


def t_quantile(df: int, p: float) -> float:
    """Inverse Student's t CDF by bisection; absolute error below 1e-6."""
    if df < 1:
        raise ValueError("df must be at least 1")
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie strictly between 0 and 1")
    if p == 0.5:
        return 0.0
    if p < 0.5:
        return -t_quantile(df, 1.0 - p)
    lo, hi = 0.0, 1.0
    while t_cdf(hi, df) < p:
        hi *= 2.0
        if hi > 1e308:
            raise RuntimeError("t quantile out of range")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if t_cdf(mid, df) < p:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-9:
            break
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class PairwiseTestResult:
    t_stat: float
    df: int
    t_crit: float
    significant: bool

    def __post_init__(self):
        if self.df < 1:
            raise ValueError("df must be at least 1")
        if self.t_crit <= 0:
            raise ValueError("t_crit must be positive")


def _summary(group) -> tuple[int, float | None, float | None]:
    if isinstance(group, ClusterStat):
        return group.frequency, group.mean, group.variance
    n, m, v = group
    return int(n), m, v


def pooled_t_test(a, b, confidence: float = 0.95) -> PairwiseTestResult | None:
    """Equal-variance two-sample t-test from (n, mean, variance) summaries.

    Returns None when the test is undefined: a variance missing, df < 1, or
    zero pooled variance with unequal means.  Zero pooled variance with equal
    means yields t = 0.
    """
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must lie strictly between 0 and 1")
    n_a, m_a, v_a = _summary(a)
    n_b, m_b, v_b = _summary(b)
    if m_a is None or m_b is None or v_a is None or v_b is None:
        return None
    df = n_a + n_b - 2
    if n_a < 1 or n_b < 1 or df < 1:
        return None
    sp2 = ((n_a - 1) * v_a + (n_b - 1) * v_b) / df
    denom = math.sqrt(sp2 * (1.0 / n_a + 1.0 / n_b))
    if denom == 0.0:
        if m_a == m_b:
            t = 0.0
        else:
            return None
    else:
        t = (m_a - m_b) / denom
    crit = t_quantile(df, 0.5 + confidence / 2.0)
    return PairwiseTestResult(t_stat=t, df=df, t_crit=crit, significant=abs(t) > crit)


def pairwise_matrix(
    stats: list[ClusterStat], confidence: float = 0.95
) -> dict[tuple[int, int], PairwiseTestResult | None]:
    """All unordered cluster pairs (i < j); undefined tests stay None."""
    results: dict[tuple[int, int], PairwiseTestResult | None] = {}
    for i in range(len(stats)):
        for j in range(i + 1, len(stats)):
            results[(i, j)] = pooled_t_test(stats[i], stats[j], confidence)
    return results


def word_cloud_terms(
    titles_by_cluster: dict[int, list[str]], top_n: int = 10
) -> dict[int, list[tuple[str, int]]]:
    """Most frequent title terms per cluster.

    Descending frequency, ties broken lexicographically.  No stop-word
    filtering: the raw cloud is what gets rendered.
    """
    if top_n < 1:
        raise ValueError("top_n must be at least 1")
    out: dict[int, list[tuple[str, int]]] = {}
    for cluster, titles in titles_by_cluster.items():
        counts = Counter()
        for title in titles:
            counts.update(tokenize(title))
        ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        out[cluster] = ranked[:top_n]
    return out


def cluster_labels(
    titles_by_cluster: dict[int, list[str]], n_clusters: int, top_n: int = 3
) -> list[str]:
    """Name cluster k by its top title terms joined with '/'; may be empty."""
    clouds = word_cloud_terms(
        {k: v for k, v in titles_by_cluster.items() if v}, top_n=top_n
    )
    labels = []
    for k in range(n_clusters):
        terms = clouds.get(k, [])
        labels.append("/".join(term for term, _ in terms))
    return labels
