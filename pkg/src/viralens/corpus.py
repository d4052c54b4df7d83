"""Dataset manifest ingestion and doc-term matrix assembly.

The manifest is a CSV describing each infographic: its image file, title,
per-platform share counts, and an optional token sidecar.  Visual and text
bags are merged into one sparse counts matrix whose columns start with the
fixed visual vocabulary and continue with text terms in first-seen order.
"""

import csv
import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .errors import AssemblyError, SchemaError, ValidationError
from .vision import QuantizationConfig

BUNDLE_FORMAT_VERSION = 1

_REQUIRED_COLUMNS = (
    "id",
    "image_path",
    "title",
    "shares_facebook",
    "shares_pinterest",
    "shares_linkedin",
    "shares_twitter",
)
_SHARE_COLUMNS = _REQUIRED_COLUMNS[3:]


@dataclass(frozen=True)
class ManifestRecord:
    id: str
    image_path: str
    title: str
    shares_facebook: int
    shares_pinterest: int
    shares_linkedin: int
    shares_twitter: int
    token_sidecar: str | None = None

    @property
    def total_shares(self) -> int:
        """The virality measure: shares summed over the four platforms."""
        return (
            self.shares_facebook
            + self.shares_pinterest
            + self.shares_linkedin
            + self.shares_twitter
        )


def load_manifest(path: str | Path) -> list[ManifestRecord]:
    """Parse a manifest CSV into records, validating shares and id uniqueness."""
    records: list[ManifestRecord] = []
    seen: set[str] = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"manifest {path} has no header row")
        for col in _REQUIRED_COLUMNS:
            if col not in reader.fieldnames:
                raise SchemaError(f"manifest missing required column '{col}'")
        for row in reader:
            line = reader.line_num
            doc_id = (row["id"] or "").strip()
            if not doc_id:
                raise ValidationError(f"row {line}: empty document id")
            if doc_id in seen:
                raise ValidationError(f"row {line}: duplicate document id '{doc_id}'")
            seen.add(doc_id)
            shares = {}
            for col in _SHARE_COLUMNS:
                raw = (row[col] or "").strip()
                try:
                    value = int(raw)
                except ValueError:
                    raise ValidationError(
                        f"row {line}: {col} must be an integer, got {raw!r}"
                    ) from None
                if value < 0:
                    raise ValidationError(f"row {line}: {col} is negative ({value})")
                shares[col] = value
            sidecar = (row.get("token_sidecar") or "").strip() or None
            records.append(
                ManifestRecord(
                    id=doc_id,
                    image_path=(row["image_path"] or "").strip(),
                    title=row["title"] or "",
                    token_sidecar=sidecar,
                    **shares,
                )
            )
    return records


class VocabularyRegistry:
    """Append-only word -> column index map shared across bag producers.

    Single-writer append under an internal lock; lookups after lock() are
    read-only and raise on unseen words.
    """

    def __init__(self, initial=()):
        self._words: list[str] = []
        self._index: dict[str, int] = {}
        self._locked = False
        self._mutex = threading.Lock()
        for w in initial:
            self.index(w)

    def index(self, word: str) -> int:
        existing = self._index.get(word)
        if existing is not None:
            return existing
        with self._mutex:
            existing = self._index.get(word)
            if existing is not None:
                return existing
            if self._locked:
                raise ValidationError(f"vocabulary is locked; unknown word {word!r}")
            self._index[word] = len(self._words)
            self._words.append(word)
            return self._index[word]

    def lock(self):
        with self._mutex:
            self._locked = True

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(self._words)

    def __len__(self) -> int:
        return len(self._words)

    def __contains__(self, word: str) -> bool:
        return word in self._index


@dataclass(frozen=True)
class DocTermMatrix:
    """Sparse documents x vocabulary count matrix.

    Stored counts are strictly positive; absent entries mean zero.  Row order
    follows the ingestion order of the documents.
    """

    doc_ids: tuple[str, ...]
    vocabulary: tuple[str, ...]
    counts: sp.csr_matrix

    def __post_init__(self):
        m, v = self.counts.shape
        if m != len(self.doc_ids) or m < 1:
            raise ValidationError("counts row count must match doc_ids (M >= 1)")
        if v != len(self.vocabulary) or v < 1:
            raise ValidationError("counts column count must match vocabulary (V >= 1)")
        if len(set(self.doc_ids)) != m:
            raise ValidationError("doc_ids must be unique")
        self.counts.eliminate_zeros()
        if self.counts.nnz and self.counts.data.min() <= 0:
            raise ValidationError("stored counts must be positive")

    def token_totals(self) -> np.ndarray:
        """N_d per document: row sums."""
        return np.asarray(self.counts.sum(axis=1)).ravel().astype(np.int64)

    def row_bag(self, d: int) -> dict[str, int]:
        row = self.counts.getrow(d)
        return {self.vocabulary[w]: int(c) for w, c in zip(row.indices, row.data)}


def assemble_doc_term(
    visual_bags: dict[str, dict[str, int]],
    text_bags: dict[str, dict[str, int]] | None,
    visual_vocab,
) -> tuple[DocTermMatrix, list[str]]:
    """Merge per-document bags into one matrix.

    Columns are the fixed visual vocabulary followed by text terms in
    first-seen order (scanning documents in row order).  Returns the matrix
    plus a warning list naming documents whose rows are entirely zero.
    """
    if not visual_bags:
        raise AssemblyError("no documents to assemble")
    if text_bags is not None:
        vis_ids = set(visual_bags)
        txt_ids = set(text_bags)
        if vis_ids != txt_ids:
            only_vis = sorted(vis_ids - txt_ids)
            only_txt = sorted(txt_ids - vis_ids)
            raise AssemblyError(
                "visual and text bags cover different documents: "
                f"visual-only={only_vis}, text-only={only_txt}"
            )

    registry = VocabularyRegistry(visual_vocab)
    rows: list[int] = []
    cols: list[int] = []
    data: list[int] = []
    doc_ids = tuple(visual_bags.keys())
    warnings: list[str] = []
    for d, doc_id in enumerate(doc_ids):
        merged: dict[str, int] = {}
        for word, count in visual_bags[doc_id].items():
            if word not in registry:
                raise AssemblyError(
                    f"document {doc_id!r} uses visual word {word!r} "
                    "outside the fixed visual vocabulary"
                )
            merged[word] = merged.get(word, 0) + int(count)
        if text_bags is not None:
            for word, count in text_bags[doc_id].items():
                merged[word] = merged.get(word, 0) + int(count)
        total = 0
        for word, count in merged.items():
            if count < 0:
                raise AssemblyError(f"document {doc_id!r}: negative count for {word!r}")
            if count == 0:
                continue
            rows.append(d)
            cols.append(registry.index(word))
            data.append(count)
            total += count
        if total == 0:
            warnings.append(f"document {doc_id!r} has zero total tokens")
    registry.lock()
    vocabulary = registry.words
    counts = sp.csr_matrix(
        (np.asarray(data, dtype=np.int64), (rows, cols)),
        shape=(len(doc_ids), len(vocabulary)),
    )
    return DocTermMatrix(doc_ids=doc_ids, vocabulary=vocabulary, counts=counts), warnings


@dataclass(frozen=True)
class CorpusBundle:
    """Everything ingest produces: the matrix plus per-document metadata."""

    matrix: DocTermMatrix
    titles: tuple[str, ...]
    total_shares: tuple[int, ...]
    quantization: QuantizationConfig = field(default_factory=QuantizationConfig)

    def __post_init__(self):
        m = len(self.matrix.doc_ids)
        if len(self.titles) != m or len(self.total_shares) != m:
            raise ValidationError("titles and total_shares must align with doc_ids")


def save_corpus(bundle: CorpusBundle, path: str | Path):
    coo = bundle.matrix.counts.tocoo()
    payload = {
        "format_version": BUNDLE_FORMAT_VERSION,
        "doc_ids": list(bundle.matrix.doc_ids),
        "titles": list(bundle.titles),
        "total_shares": list(bundle.total_shares),
        "vocabulary": list(bundle.matrix.vocabulary),
        "counts": [
            [int(r), int(c), int(v)] for r, c, v in zip(coo.row, coo.col, coo.data)
        ],
        "quantization": {
            "bins_per_channel": bundle.quantization.bins_per_channel,
            "tokens_per_channel": bundle.quantization.tokens_per_channel,
        },
    }
    Path(path).write_text(json.dumps(payload, indent=1), encoding="utf-8")


def load_corpus(path: str | Path) -> CorpusBundle:
    from .errors import ArchiveFormatError

    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ArchiveFormatError(f"corpus bundle {path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("format_version") != BUNDLE_FORMAT_VERSION:
        raise ArchiveFormatError(
            f"corpus bundle {path} has unsupported format_version "
            f"{payload.get('format_version') if isinstance(payload, dict) else '?'}"
        )
    try:
        doc_ids = tuple(payload["doc_ids"])
        vocabulary = tuple(payload["vocabulary"])
        triplets = payload["counts"]
        titles = tuple(payload["titles"])
        total_shares = tuple(int(s) for s in payload["total_shares"])
        q = payload["quantization"]
        cfg = QuantizationConfig(
            bins_per_channel=int(q["bins_per_channel"]),
            tokens_per_channel=int(q["tokens_per_channel"]),
        )
    except (KeyError, TypeError) as exc:
        raise ArchiveFormatError(f"corpus bundle {path} is missing fields: {exc}") from exc
    rows = [t[0] for t in triplets]
    cols = [t[1] for t in triplets]
    data = [t[2] for t in triplets]
    counts = sp.csr_matrix(
        (np.asarray(data, dtype=np.int64), (rows, cols)),
        shape=(len(doc_ids), len(vocabulary)),
    )
    matrix = DocTermMatrix(doc_ids=doc_ids, vocabulary=vocabulary, counts=counts)
    return CorpusBundle(
        matrix=matrix, titles=titles, total_shares=total_shares, quantization=cfg
    )
