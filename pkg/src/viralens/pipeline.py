"""End-to-end orchestration: manifest -> corpus bundle -> trained archive.

Thin glue over the feature, topic-model, and analytics modules; every
random choice is keyed off one seed plus the document id so results do not
depend on manifest row order (beyond row order itself).
"""

import warnings
from pathlib import Path

from . import analytics, dss, lda, text, vision
from .archive import ModelArchive
from .corpus import CorpusBundle, ManifestRecord, assemble_doc_term, load_manifest
from .rng import derive


def _resolve(base: Path, p: str) -> Path:
    candidate = Path(p)
    return candidate if candidate.is_absolute() else base / candidate


def extract_features(
    records: list[ManifestRecord],
    base_dir: Path,
    cfg: vision.QuantizationConfig,
    seed: int,
):
    """Per-document visual descriptor and quantized bag, keyed by doc id."""
    descriptors: dict[str, vision.VisualDescriptor] = {}
    visual_bags: dict[str, dict[str, int]] = {}
    for rec in records:
        data = _resolve(base_dir, rec.image_path).read_bytes()
        grid = vision.decode_image(data)
        desc = vision.extract_visual_descriptor(grid, seed=derive(seed, "image", rec.id))
        descriptors[rec.id] = desc
        visual_bags[rec.id] = vision.quantize_to_visual_words(desc, cfg)
    return descriptors, visual_bags


def ingest_corpus(
    manifest_path: str | Path,
    cfg: vision.QuantizationConfig | None = None,
    seed: int = 42,
    dictionary_path: str | Path | None = None,
) -> tuple[CorpusBundle, list[str]]:
    """Build the corpus bundle a manifest describes.

    Text bags are produced only when a dictionary is supplied; documents
    without a sidecar then contribute an empty text bag.
    """
    manifest_path = Path(manifest_path)
    cfg = cfg or vision.QuantizationConfig()
    records = load_manifest(manifest_path)
    base = manifest_path.parent
    _, visual_bags = extract_features(records, base, cfg, seed)

    text_bags = None
    if dictionary_path is not None:
        dictionary = text.load_dictionary(dictionary_path)
        text_bags = {}
        for rec in records:
            if rec.token_sidecar:
                sidecar = text.load_sidecar(_resolve(base, rec.token_sidecar))
                kept = text.dictionary_filter(sidecar.tokens, dictionary)
                text_bags[rec.id] = text.build_text_bag(kept)
            else:
                text_bags[rec.id] = {}

    matrix, warn = assemble_doc_term(
        visual_bags, text_bags, vision.visual_vocabulary(cfg)
    )
    for message in warn:
        warnings.warn(message, stacklevel=2)
    bundle = CorpusBundle(
        matrix=matrix,
        titles=tuple(r.title for r in records),
        total_shares=tuple(r.total_shares for r in records),
        quantization=cfg,
    )
    return bundle, warn


def train_archive(
    bundle: CorpusBundle,
    hp: lda.LdaHyperparams,
    viral_override=None,
    confidence: float = 0.95,
):
    """Train the topic model and characterize clusters; returns (archive, theta)."""
    model, theta = lda.gibbs_train(bundle.matrix, hp)
    assignments = analytics.cluster_assign(theta)
    stats = analytics.cluster_stats(assignments, bundle.total_shares, hp.k)

    titles_by_cluster: dict[int, list[str]] = {k: [] for k in range(hp.k)}
    for row, cluster in enumerate(assignments):
        titles_by_cluster[int(cluster)].append(bundle.titles[row])
    labels = analytics.cluster_labels(titles_by_cluster, hp.k)
    stats = [s.with_label(labels[s.cluster]) for s in stats]

    tests = analytics.pairwise_matrix(stats, confidence)
    viral = dss.derive_viral_set(stats, tests, override=viral_override)
    archive = ModelArchive(
        quantization=bundle.quantization,
        vocabulary=bundle.matrix.vocabulary,
        lda_model=model,
        cluster_stats=tuple(stats),
        viral=viral,
        labels=tuple(labels),
        fold_in_seed=derive(hp.seed, "fold-in-seed"),
    )
    return archive, theta
