import json

import numpy as np
import pytest

from viralens.analytics import ClusterStat
from viralens.archive import (
    ARCHIVE_SUFFIX,
    ModelArchive,
    archive_payload,
    load_archive,
    save_archive,
)
from viralens.dss import ViralSet
from viralens.errors import ArchiveFormatError, ValidationError
from viralens.lda import LdaHyperparams, LdaModel
from viralens.vision import QuantizationConfig


def small_archive() -> ModelArchive:
    vocab = ("R0", "R1", "growth")
    phi = np.array([[0.2, 0.3, 0.5], [0.6, 0.3, 0.1]])
    hp = LdaHyperparams(k=2, alpha=(0.4, 0.6), eta=0.2, sweeps=10, burn_in=2, seed=31)
    model = LdaModel(hyperparams=hp, phi=phi, vocabulary=vocab, ll_trace=(-5.0, -4.5))
    stats = (
        ClusterStat(cluster=0, frequency=3, mean=150.5, variance=20.25, label="growth"),
        ClusterStat(cluster=1, frequency=0, mean=None, variance=None, label=""),
    )
    return ModelArchive(
        quantization=QuantizationConfig(),
        vocabulary=vocab,
        lda_model=model,
        cluster_stats=stats,
        viral=ViralSet(clusters=frozenset({0})),
        labels=("growth", ""),
        fold_in_seed=777,
    )


class TestRoundTrip:
    def test_save_load_reproduces_everything(self, tmp_path):
        archive = small_archive()
        path = tmp_path / ("model" + ARCHIVE_SUFFIX)
        save_archive(archive, path)
        loaded = load_archive(path)

        assert loaded.quantization == archive.quantization
        assert loaded.vocabulary == archive.vocabulary
        assert np.max(np.abs(loaded.lda_model.phi - archive.lda_model.phi)) < 1e-12
        assert loaded.lda_model.hyperparams.k == 2
        assert np.allclose(
            loaded.lda_model.hyperparams.alpha_vector(),
            archive.lda_model.hyperparams.alpha_vector(),
        )
        assert loaded.lda_model.ll_trace == archive.lda_model.ll_trace
        assert loaded.cluster_stats == archive.cluster_stats
        assert loaded.viral == archive.viral
        assert loaded.labels == archive.labels
        assert loaded.fold_in_seed == 777

    def test_trained_fixture_round_trips(self, tmp_path, fixture_archive):
        path = tmp_path / ("fixture" + ARCHIVE_SUFFIX)
        save_archive(fixture_archive, path)
        loaded = load_archive(path)
        assert np.max(np.abs(loaded.lda_model.phi - fixture_archive.lda_model.phi)) < 1e-12
        assert loaded.cluster_stats == fixture_archive.cluster_stats
        assert loaded.fold_in_seed == fixture_archive.fold_in_seed

    def test_payload_is_plain_json(self):
        payload = archive_payload(small_archive())
        # must survive a JSON round trip unchanged
        assert json.loads(json.dumps(payload)) == payload
        assert payload["viral_clusters"] == [0]
        assert payload["lda"]["k"] == 2


class TestFormatErrors:
    def test_not_json(self, tmp_path):
        p = tmp_path / "bad.viralens.json"
        p.write_text("{ truncated", encoding="utf-8")
        with pytest.raises(ArchiveFormatError, match="JSON"):
            load_archive(p)

    def test_unsupported_version(self, tmp_path):
        p = tmp_path / "bad.viralens.json"
        p.write_text('{"format_version": 99}', encoding="utf-8")
        with pytest.raises(ArchiveFormatError, match="format_version"):
            load_archive(p)

    def test_missing_fields(self, tmp_path):
        p = tmp_path / "bad.viralens.json"
        p.write_text('{"format_version": 1, "vocabulary": []}', encoding="utf-8")
        with pytest.raises(ArchiveFormatError, match="missing fields"):
            load_archive(p)

    def test_invariant_violation_reports_validation_error(self, tmp_path):
        archive = small_archive()
        payload = archive_payload(archive)
        payload["lda"]["phi"][0][0] = -0.5  # breaks positivity
        p = tmp_path / "bad.viralens.json"
        p.write_text(json.dumps(payload), encoding="utf-8")
        with pytest.raises(ValidationError, match="invariants"):
            load_archive(p)

    def test_non_object_payload(self, tmp_path):
        p = tmp_path / "bad.viralens.json"
        p.write_text("[1, 2, 3]", encoding="utf-8")
        with pytest.raises(ArchiveFormatError):
            load_archive(p)


class TestConstructionInvariants:
    def test_vocabulary_must_match_model(self):
        archive = small_archive()
        with pytest.raises(ValidationError, match="vocabulary"):
            ModelArchive(
                quantization=archive.quantization,
                vocabulary=("R0", "R1", "other"),
                lda_model=archive.lda_model,
                cluster_stats=archive.cluster_stats,
                viral=archive.viral,
                labels=archive.labels,
                fold_in_seed=1,
            )

    def test_stats_count_must_match_k(self):
        archive = small_archive()
        with pytest.raises(ValidationError, match="cluster stats"):
            ModelArchive(
                quantization=archive.quantization,
                vocabulary=archive.vocabulary,
                lda_model=archive.lda_model,
                cluster_stats=archive.cluster_stats[:1],
                viral=archive.viral,
                labels=archive.labels,
                fold_in_seed=1,
            )

    def test_viral_clusters_must_be_in_range(self):
        archive = small_archive()
        with pytest.raises(ValidationError, match="viral"):
            ModelArchive(
                quantization=archive.quantization,
                vocabulary=archive.vocabulary,
                lda_model=archive.lda_model,
                cluster_stats=archive.cluster_stats,
                viral=ViralSet(clusters=frozenset({5})),
                labels=archive.labels,
                fold_in_seed=1,
            )
