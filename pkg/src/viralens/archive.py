"""Model archive: one JSON file holding everything scoring needs.

The `*.viralens.json` file is self-describing UTF-8 JSON whose floats are
written with full round-trip precision, so save/load reproduces every
numeric field to better than 1e-12.
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .analytics import ClusterStat
from .dss import ViralSet
from .errors import ArchiveFormatError, ValidationError
from .lda import LdaHyperparams, LdaModel
from .vision import QuantizationConfig

FORMAT_VERSION = 1
ARCHIVE_SUFFIX = ".viralens.json"


@dataclass(frozen=True)
class ModelArchive:
    quantization: QuantizationConfig
    vocabulary: tuple[str, ...]
    lda_model: LdaModel
    cluster_stats: tuple[ClusterStat, ...]
    viral: ViralSet
    labels: tuple[str, ...]
    fold_in_seed: int
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        k = self.lda_model.k
        if len(self.vocabulary) != self.lda_model.phi.shape[1]:
            raise ValidationError(
                "vocabulary length must equal the topic-word matrix column count"
            )
        if tuple(self.vocabulary) != tuple(self.lda_model.vocabulary):
            raise ValidationError("archive vocabulary must match the model's")
        if len(self.cluster_stats) != k:
            raise ValidationError(f"need exactly {k} cluster stats, got {len(self.cluster_stats)}")
        if len(self.labels) != k:
            raise ValidationError(f"need exactly {k} labels, got {len(self.labels)}")
        if any(not 0 <= c < k for c in self.viral.clusters):
            raise ValidationError("viral clusters must lie in [0, K)")


def archive_payload(archive: ModelArchive) -> dict:
    """The exact JSON structure written to disk (also hashed for versioning)."""
    hp = archive.lda_model.hyperparams
    return {
        "format_version": archive.format_version,
        "quantization": {
            "bins_per_channel": archive.quantization.bins_per_channel,
            "tokens_per_channel": archive.quantization.tokens_per_channel,
        },
        "vocabulary": list(archive.vocabulary),
        "lda": {
            "k": hp.k,
            "alpha": [float(a) for a in hp.alpha_vector()],
            "eta": hp.eta,
            "sweeps": hp.sweeps,
            "burn_in": hp.burn_in,
            "seed": hp.seed,
            "phi": [[float(x) for x in row] for row in archive.lda_model.phi],
            "ll_trace": list(archive.lda_model.ll_trace),
        },
        "cluster_stats": [
            {
                "cluster": s.cluster,
                "frequency": s.frequency,
                "mean": s.mean,
                "variance": s.variance,
                "label": s.label,
            }
            for s in archive.cluster_stats
        ],
        "viral_clusters": sorted(archive.viral.clusters),
        "viral_rule": archive.viral.rule,
        "labels": list(archive.labels),
        "fold_in_seed": archive.fold_in_seed,
    }


def save_archive(archive: ModelArchive, path: str | Path):
    payload = archive_payload(archive)
    Path(path).write_text(json.dumps(payload, indent=1), encoding="utf-8")


def load_archive(path: str | Path) -> ModelArchive:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ArchiveFormatError(f"archive {path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ArchiveFormatError(f"archive {path} must be a JSON object")
    version = payload.get("format_version")
    if version != FORMAT_VERSION:
        raise ArchiveFormatError(
            f"archive {path} has unsupported format_version {version!r}"
        )
    try:
        q = payload["quantization"]
        cfg = QuantizationConfig(
            bins_per_channel=int(q["bins_per_channel"]),
            tokens_per_channel=int(q["tokens_per_channel"]),
        )
        vocabulary = tuple(payload["vocabulary"])
        l = payload["lda"]
        hp = LdaHyperparams(
            k=int(l["k"]),
            alpha=[float(a) for a in l["alpha"]],
            eta=float(l["eta"]),
            sweeps=int(l["sweeps"]),
            burn_in=int(l["burn_in"]),
            seed=int(l["seed"]),
        )
        model = LdaModel(
            hyperparams=hp,
            phi=np.asarray(l["phi"], dtype=np.float64),
            vocabulary=vocabulary,
            ll_trace=tuple(float(x) for x in l["ll_trace"]),
        )
        stats = tuple(
            ClusterStat(
                cluster=int(s["cluster"]),
                frequency=int(s["frequency"]),
                mean=None if s["mean"] is None else float(s["mean"]),
                variance=None if s["variance"] is None else float(s["variance"]),
                label=s.get("label", ""),
            )
            for s in payload["cluster_stats"]
        )
        viral = ViralSet(
            clusters=frozenset(int(c) for c in payload["viral_clusters"]),
            rule=payload.get("viral_rule", "unknown"),
        )
        labels = tuple(payload["labels"])
        fold_in_seed = int(payload["fold_in_seed"])
    except (KeyError, TypeError) as exc:
        raise ArchiveFormatError(f"archive {path} is missing fields: {exc}") from exc
    except ValueError as exc:
        raise ValidationError(f"archive {path} violates invariants: {exc}") from exc
    return ModelArchive(
        quantization=cfg,
        vocabulary=vocabulary,
        lda_model=model,
        cluster_stats=stats,
        viral=viral,
        labels=labels,
        fold_in_seed=fold_in_seed,
        format_version=version,
    )
