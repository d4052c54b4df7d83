import numpy as np
import pytest

from viralens.analytics import ClusterStat, PairwiseTestResult
from viralens.dss import (
    ViralSet,
    compare,
    derive_viral_set,
    expected_activity,
    score,
    viral_probability,
)
from viralens.errors import ScoringError


def stat(k, n=10, mean=None, var=1.0):
    return ClusterStat(cluster=k, frequency=n, mean=mean, variance=var)


def result(t, crit=2.0):
    return PairwiseTestResult(t_stat=t, df=20, t_crit=crit, significant=abs(t) > crit)


class TestViralSet:
    def test_winner_is_larger_mean_side(self):
        stats = [stat(0, mean=5.0), stat(1, mean=9.0), stat(2, mean=1.0)]
        tests = {
            (0, 1): result(-3.0),  # significant, cluster 1 larger
            (0, 2): result(1.0),   # not significant
            (1, 2): result(4.0),   # significant, cluster 1 larger
        }
        viral = derive_viral_set(stats, tests)
        assert viral.clusters == frozenset({1})
        assert viral.rule == "significant-greater-mean"
        assert 1 in viral and 0 not in viral

    def test_multiple_winners(self):
        stats = [stat(0, mean=9.0), stat(1, mean=1.0), stat(2, mean=8.0)]
        tests = {(0, 1): result(3.0), (1, 2): result(-3.0), (0, 2): result(0.5)}
        assert derive_viral_set(stats, tests).clusters == frozenset({0, 2})

    def test_none_results_skipped(self):
        stats = [stat(0, mean=5.0), stat(1)]
        assert derive_viral_set(stats, {(0, 1): None}).clusters == frozenset()

    def test_override_wins(self):
        stats = [stat(0, mean=5.0), stat(1, mean=9.0)]
        viral = derive_viral_set(stats, {(0, 1): result(-3.0)}, override=[0])
        assert viral.clusters == frozenset({0})
        assert viral.rule == "override"

    def test_override_out_of_range(self):
        with pytest.raises(ValueError, match="out of range"):
            derive_viral_set([stat(0, mean=1.0)], {}, override=[3])


class TestExpectedActivity:
    def test_weighted_average(self):
        assert expected_activity([0.5, 0.5], [10.0, 20.0]) == pytest.approx(15.0)

    def test_one_hot(self):
        assert expected_activity([0.0, 1.0, 0.0], [5.0, 7.0, 9.0]) == pytest.approx(7.0)

    def test_convex_bounds(self):
        rng = np.random.default_rng(51)
        means = [100.0, 300.0, 250.0, 40.0]
        for _ in range(50):
            theta = rng.dirichlet(np.ones(4))
            value = expected_activity(theta, means)
            assert min(means) - 1e-9 <= value <= max(means) + 1e-9

    def test_undefined_mean_with_weight_is_error(self):
        with pytest.raises(ScoringError, match="cluster 1"):
            expected_activity([0.5, 0.5], [10.0, None])

    def test_undefined_mean_with_negligible_weight_is_fine(self):
        assert expected_activity([1.0, 1e-15], [10.0, None]) == pytest.approx(10.0)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            expected_activity([1.0], [10.0, 20.0])


class TestViralProbability:
    def test_sums_member_weights(self):
        viral = ViralSet(clusters=frozenset({0, 2}))
        assert viral_probability([0.1, 0.2, 0.3, 0.4], viral) == pytest.approx(0.4)

    def test_empty_set_gives_zero(self):
        assert viral_probability([0.5, 0.5], ViralSet(clusters=frozenset())) == 0.0


class TestScore:
    def test_report_is_well_formed(self, fixture_archive, fixture_png):
        report = score(fixture_archive, fixture_png)
        assert sum(report.theta) == pytest.approx(1.0, abs=1e-9)
        assert len(report.theta) == fixture_archive.lda_model.k
        assert 0.0 <= report.viral_probability <= 1.0
        assert report.expected_activity > 0
        assert len(report.contributions) == len(report.theta)
        assert report.labels == tuple(fixture_archive.labels)
        defined = [s.mean is not None for s in fixture_archive.cluster_stats]
        assert report.expected_activity == pytest.approx(
            sum(c for c, d in zip(report.contributions, defined) if d)
        )

    def test_deterministic(self, fixture_archive, fixture_png):
        a = score(fixture_archive, fixture_png)
        b = score(fixture_archive, fixture_png)
        assert a == b

    def test_decode_failure_stage(self, fixture_archive):
        with pytest.raises(ScoringError) as err:
            score(fixture_archive, b"junk")
        assert err.value.stage == "decode"
        assert str(err.value).startswith("[decode]")


class TestCompare:
    def test_identical_variants_have_zero_deltas(self, fixture_archive, fixture_png):
        report = compare(fixture_archive, fixture_png, fixture_png)
        assert all(d == 0.0 for d in report.delta_theta)
        assert report.delta_expected_activity == 0.0
        assert report.delta_viral_probability == 0.0

    def test_swapping_variants_flips_signs(self, fixture_archive, fixture_png, corpus_dir):
        other = (corpus_dir / "images" / "ocean-0.png").read_bytes()
        fwd = compare(fixture_archive, fixture_png, other)
        rev = compare(fixture_archive, other, fixture_png)
        assert fwd.delta_expected_activity == pytest.approx(-rev.delta_expected_activity)
        assert fwd.delta_viral_probability == pytest.approx(-rev.delta_viral_probability)
        for d_f, d_r in zip(fwd.delta_theta, rev.delta_theta):
            assert d_f == pytest.approx(-d_r)
        assert fwd.report_a == rev.report_b

    def test_deltas_are_b_minus_a(self, fixture_archive, fixture_png, corpus_dir):
        other = (corpus_dir / "images" / "forest-3.png").read_bytes()
        report = compare(fixture_archive, fixture_png, other)
        assert report.delta_expected_activity == pytest.approx(
            report.report_b.expected_activity - report.report_a.expected_activity
        )

    def test_bad_variant_is_named(self, fixture_archive, fixture_png):
        with pytest.raises(ScoringError) as err:
            compare(fixture_archive, fixture_png, b"junk")
        assert err.value.variant == "b"
        assert str(err.value).startswith("[decode:b]")
