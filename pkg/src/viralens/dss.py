"""Design scoring: the decision-support layer over a trained model.

Given a trained archive and a candidate infographic, compute its cluster
membership probabilities (fold-in), expected social-media activity, viral
probability, and what-if deltas between two design variants.
"""

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from . import lda, vision
from .analytics import ClusterStat, PairwiseTestResult
from .errors import ScoringError, ViralensError

if TYPE_CHECKING:
    from .archive import ModelArchive

DEFAULT_VIRAL_RULE = "significant-greater-mean"


@dataclass(frozen=True)
class ViralSet:
    """Clusters designated viral, plus a descriptor of how they were picked."""

    clusters: frozenset
    rule: str = DEFAULT_VIRAL_RULE

    def __contains__(self, k: int) -> bool:
        return k in self.clusters


def derive_viral_set(
    stats: list[ClusterStat],
    tests: dict[tuple[int, int], PairwiseTestResult | None],
    override=None,
) -> ViralSet:
    """Default rule: a cluster is viral iff some significant pairwise
    comparison has it on the larger-mean side.  An explicit override wins.
    """
    if override is not None:
        bad = [k for k in override if not 0 <= k < len(stats)]
        if bad:
            raise ValueError(f"override clusters out of range: {bad}")
        return ViralSet(clusters=frozenset(override), rule="override")
    viral = set()
    for (i, j), result in tests.items():
        if result is None or not result.significant:
            continue
        winner = i if stats[i].mean > stats[j].mean else j
        viral.add(winner)
    return ViralSet(clusters=frozenset(viral), rule=DEFAULT_VIRAL_RULE)


def expected_activity(theta, means) -> float:
    """Theta-weighted average of cluster mean activities.

    Any weight above 1e-12 on a cluster without a defined mean is an error
    naming that cluster; smaller weights contribute zero.
    """
    theta = np.asarray(theta, dtype=np.float64)
    if len(means) != theta.shape[0]:
        raise ValueError("theta and means must have the same length")
    total = 0.0
    for k, (w, m) in enumerate(zip(theta, means)):
        if m is None:
            if w > 1e-12:
                raise ScoringError(
                    "expected-activity",
                    f"cluster {k} has no defined mean but carries weight {w:.3g}",
                )
            continue
        total += float(w) * float(m)
    return total


def viral_probability(theta, viral: ViralSet) -> float:
    theta = np.asarray(theta, dtype=np.float64)
    return float(sum(theta[k] for k in viral.clusters))


@dataclass(frozen=True)
class ScoreReport:
    theta: tuple[float, ...]
    expected_activity: float
    viral_probability: float
    contributions: tuple[float, ...]  # theta_k * mean_k, 0 where undefined
    labels: tuple[str, ...]

    def __post_init__(self):
        if abs(sum(self.theta) - 1.0) > 1e-9:
            raise ValueError("theta must sum to 1")
        if not 0.0 <= self.viral_probability <= 1.0 + 1e-12:
            raise ValueError("viral probability must lie in [0, 1]")


@dataclass(frozen=True)
class CompareReport:
    """Variant B minus variant A."""

    report_a: ScoreReport
    report_b: ScoreReport
    delta_theta: tuple[float, ...]
    delta_expected_activity: float
    delta_viral_probability: float


def score(archive: "ModelArchive", image_bytes: bytes) -> ScoreReport:
    """Full scoring pipeline for one image.

    Deterministic: the fold-in seed stored in the archive drives both the
    pixel clustering and the fold-in chain, so rescoring the same file gives
    the same report.
    """
    seed = archive.fold_in_seed
    try:
        grid = vision.decode_image(image_bytes)
    except ViralensError as exc:
        raise ScoringError("decode", str(exc)) from exc
    try:
        desc = vision.extract_visual_descriptor(grid, seed=seed)
        bag = vision.quantize_to_visual_words(desc, archive.quantization)
    except (ViralensError, ValueError) as exc:
        raise ScoringError("features", str(exc)) from exc
    try:
        theta = lda.fold_in(archive.lda_model, bag, seed=seed)
    except (ViralensError, ValueError) as exc:
        raise ScoringError("fold-in", str(exc)) from exc
    means = [s.mean for s in archive.cluster_stats]
    activity = expected_activity(theta, means)
    contributions = tuple(
        float(theta[k]) * float(m) if m is not None else 0.0
        for k, m in enumerate(means)
    )
    return ScoreReport(
        theta=tuple(float(t) for t in theta),
        expected_activity=activity,
        viral_probability=viral_probability(theta, archive.viral),
        contributions=contributions,
        labels=tuple(archive.labels),
    )


def compare(archive: "ModelArchive", image_a: bytes, image_b: bytes) -> CompareReport:
    """Score two variants with the same seed and report B minus A."""
    try:
        report_a = score(archive, image_a)
    except ScoringError as exc:
        raise ScoringError(exc.stage, exc.detail, variant="a") from exc
    try:
        report_b = score(archive, image_b)
    except ScoringError as exc:
        raise ScoringError(exc.stage, exc.detail, variant="b") from exc
    delta_theta = tuple(
        tb - ta for ta, tb in zip(report_a.theta, report_b.theta)
    )
    return CompareReport(
        report_a=report_a,
        report_b=report_b,
        delta_theta=delta_theta,
        delta_expected_activity=report_b.expected_activity - report_a.expected_activity,
        delta_viral_probability=report_b.viral_probability - report_a.viral_probability,
    )
