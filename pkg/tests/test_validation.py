"""Validation reports: correlation grid, regression table, per-tag ANOVA."""

import math

import numpy as np
import pytest

from versemood.corpus import DEFAULT_CATALOG, AnnotationSet
from versemood.features import FEATURE_NAMES, FeatureMatrix, GamFeatureVector
from versemood.stats import spearman
from versemood.validation import (
    FEATURE_PAIRINGS,
    SIGNIFICANCE_LEVEL,
    anova_report,
    bivariate_report,
    partial_dependence_report,
)

CATALOG = DEFAULT_CATALOG


def synthetic_matrix(rng, n_sonnets, pair_signal=None):
    """A feature matrix with every feature defined and consistent spans.

    ``pair_signal`` maps a gam feature to a callable producing the
    annotated value from that feature, letting tests plant regression
    or correlation structure.
    """
    ids = tuple(f"s{i:03d}" for i in range(1, n_sonnets + 1))
    vectors = {}
    for sid in ids:
        values = {}
        for name in FEATURE_NAMES:
            values[name] = float(rng.uniform(1, 7))
        for short in ("arousal", "valence"):
            lo = float(rng.uniform(1, 4))
            hi = lo + float(rng.uniform(0.5, 4))
            values[f"min_{short}"] = lo
            values[f"max_{short}"] = hi
            values[f"{short}_span"] = hi - lo
        for short in ("aro", "val"):
            rho = float(rng.uniform(-1, 1))
            values[f"cor_{short}"] = rho
            values[f"abs_cor_{short}"] = abs(rho)
        vectors[sid] = GamFeatureVector(
            values=values, reasons={}
        )
    undefined = {name: 0 for name in FEATURE_NAMES}
    return FeatureMatrix(sonnet_ids=ids, vectors=vectors, undefined_counts=undefined)


def median_for(matrix, rng, tag_members=None, annotated_from=None):
    """Median-annotator values aligned with the matrix's sonnets."""
    values = {}
    tag_members = tag_members or {}
    annotated_from = annotated_from or {}
    for sid in matrix.sonnet_ids:
        for feature in CATALOG.ordinal:
            if feature in annotated_from:
                values[(sid, feature)] = annotated_from[feature](
                    matrix.vectors[sid].values
                )
            else:
                values[(sid, feature)] = float(rng.integers(1, 5))
        for tag in CATALOG.psychological:
            members = tag_members.get(tag)
            if members is None:
                values[(sid, tag)] = float(rng.integers(0, 2))
            else:
                values[(sid, tag)] = 1.0 if sid in members else 0.0
    return AnnotationSet(
        annotator_id=0,
        sonnet_ids=matrix.sonnet_ids,
        features=tuple(CATALOG.all_features),
        values=values,
    )


def test_feature_pairings_inventory():
    assert len(FEATURE_PAIRINGS) == 10
    assert ("valence", "valence_mean") in FEATURE_PAIRINGS
    assert ("context availability", "cont_ava_mean") in FEATURE_PAIRINGS


# ---------------------------------------------------------------------------
# bivariate grid


def test_bivariate_grid_shape_and_pairwise_n():
    rng = np.random.default_rng(90)
    matrix = synthetic_matrix(rng, 15)
    median = median_for(matrix, rng)
    cells = bivariate_report(matrix, median)
    assert len(cells) == len(CATALOG.ordinal) * len(FEATURE_NAMES)
    for cell in cells:
        assert cell.n == 15
        if cell.rho is not None:
            assert -1.0 - 1e-12 <= cell.rho <= 1.0 + 1e-12


def test_bivariate_matches_direct_spearman():
    rng = np.random.default_rng(91)
    matrix = synthetic_matrix(rng, 12)
    median = median_for(matrix, rng)
    cells = {
        (c.annotated_feature, c.gam_feature): c for c in bivariate_report(matrix, median)
    }
    cell = cells[("valence", "arousal_mean")]
    xs = [matrix.vectors[sid].values["arousal_mean"] for sid in matrix.sonnet_ids]
    ys = [median.values[(sid, "valence")] for sid in matrix.sonnet_ids]
    assert cell.rho == pytest.approx(spearman(xs, ys).rho, abs=1e-12)


def test_bivariate_pairwise_deletion_counts_shared_rows():
    rng = np.random.default_rng(92)
    matrix = synthetic_matrix(rng, 10)
    # knock one feature out on three sonnets
    for sid in matrix.sonnet_ids[:3]:
        matrix.vectors[sid].values["fear_mean"] = None
        matrix.vectors[sid].reasons["fear_mean"] = "no matched words with fear"
    median = median_for(matrix, rng)
    cells = {
        (c.annotated_feature, c.gam_feature): c for c in bivariate_report(matrix, median)
    }
    assert cells[("valence", "fear_mean")].n == 7
    assert cells[("valence", "valence_mean")].n == 10


def test_bivariate_constant_series_noted():
    rng = np.random.default_rng(93)
    matrix = synthetic_matrix(rng, 8)
    for sid in matrix.sonnet_ids:
        matrix.vectors[sid].values["anger_mean"] = 3.0
    median = median_for(matrix, rng)
    cells = {
        (c.annotated_feature, c.gam_feature): c for c in bivariate_report(matrix, median)
    }
    cell = cells[("anger", "anger_mean")]
    assert cell.rho is None
    assert cell.note is not None


# ---------------------------------------------------------------------------
# partial dependence regressions


def test_collinear_spans_dropped_then_fit_succeeds():
    rng = np.random.default_rng(94)
    matrix = synthetic_matrix(rng, 60)
    median = median_for(matrix, rng, annotated_from={
        "valence": lambda v: 2.0 * v["valence_mean"] + rng.normal(scale=0.1),
    })
    rows = partial_dependence_report(matrix, median)
    all_rows = {r.annotated_feature: r for r in rows if r.category == "all"}
    row = all_rows["valence"]
    assert row.note is None
    assert not row.pruned
    assert set(row.dropped_columns) == {"arousal_span", "valence_span"}
    assert row.n_predictors == len(FEATURE_NAMES) - 2
    assert row.coefficient > 0
    assert row.p_value < SIGNIFICANCE_LEVEL
    assert row.significant


def test_significant_requires_positive_coefficient():
    rng = np.random.default_rng(95)
    matrix = synthetic_matrix(rng, 60)
    median = median_for(matrix, rng, annotated_from={
        "arousal": lambda v: -2.0 * v["arousal_mean"] + rng.normal(scale=0.1),
    })
    rows = partial_dependence_report(matrix, median)
    row = next(
        r for r in rows if r.category == "all" and r.annotated_feature == "arousal"
    )
    assert row.p_value < SIGNIFICANCE_LEVEL
    assert row.coefficient < 0
    assert not row.significant


def test_significance_flag_is_exactly_p_and_sign():
    rng = np.random.default_rng(96)
    matrix = synthetic_matrix(rng, 60)
    median = median_for(matrix, rng)
    for row in partial_dependence_report(matrix, median):
        if row.note is not None:
            assert not row.significant
            continue
        expected = row.p_value < SIGNIFICANCE_LEVEL and row.coefficient > 0
        assert row.significant == expected


def test_midsize_category_prunes_to_mean_sd():
    rng = np.random.default_rng(97)
    matrix = synthetic_matrix(rng, 26)
    median = median_for(matrix, rng)
    rows = partial_dependence_report(matrix, median)
    row = next(
        r for r in rows if r.category == "all" and r.annotated_feature == "valence"
    )
    assert row.pruned
    assert row.note is None
    assert row.n_predictors == 20
    assert row.gam_feature == "valence_mean"


def test_tiny_category_not_computable():
    rng = np.random.default_rng(98)
    matrix = synthetic_matrix(rng, 40)
    members = set(matrix.sonnet_ids[:4])
    median = median_for(matrix, rng, tag_members={"Solitude": members})
    rows = partial_dependence_report(matrix, median)
    solitude = [r for r in rows if r.category == "Solitude"]
    assert len(solitude) == 10
    for row in solitude:
        assert row.note is not None
        assert "insufficient rows" in row.note
        assert not row.significant


def test_category_rows_cover_all_plus_tags():
    rng = np.random.default_rng(99)
    matrix = synthetic_matrix(rng, 30)
    median = median_for(matrix, rng)
    rows = partial_dependence_report(matrix, median)
    categories = {r.category for r in rows}
    assert categories == {"all", *CATALOG.psychological}
    assert len(rows) == (1 + len(CATALOG.psychological)) * 10


def test_listwise_deletion_drops_incomplete_sonnets():
    rng = np.random.default_rng(100)
    matrix = synthetic_matrix(rng, 60)
    for sid in matrix.sonnet_ids[:5]:
        matrix.vectors[sid].values["disgust_sd"] = None
    median = median_for(matrix, rng)
    rows = partial_dependence_report(matrix, median)
    row = next(
        r for r in rows if r.category == "all" and r.annotated_feature == "valence"
    )
    assert row.n == 55


# ---------------------------------------------------------------------------
# per-tag ANOVA


def test_anova_grid_totals_and_significance_filter():
    rng = np.random.default_rng(101)
    matrix = synthetic_matrix(rng, 24)
    median = median_for(matrix, rng)
    report = anova_report(matrix, median)
    assert report.n_total == len(CATALOG.psychological) * 10
    assert report.n_significant == len(report.rows)
    for row in report.rows:
        assert row.p_value < SIGNIFICANCE_LEVEL


def test_anova_detects_planted_group_difference():
    rng = np.random.default_rng(102)
    matrix = synthetic_matrix(rng, 30)
    members = set(matrix.sonnet_ids[:15])
    for sid in matrix.sonnet_ids:
        base = 6.0 if sid in members else 2.0
        matrix.vectors[sid].values["sadness_mean"] = base + float(rng.normal(scale=0.2))
    median = median_for(matrix, rng, tag_members={"Depression": members})
    report = anova_report(matrix, median)
    row = next(
        r for r in report.rows
        if r.category == "Depression" and r.gam_feature == "sadness_mean"
    )
    assert row.n_in == 15
    assert row.n_out == 15
    assert row.mean_in == pytest.approx(6.0, abs=0.3)
    assert row.mean_out == pytest.approx(2.0, abs=0.3)
    assert row.p_value < 1e-6


def test_anova_skips_underfilled_groups():
    rng = np.random.default_rng(103)
    matrix = synthetic_matrix(rng, 12)
    median = median_for(matrix, rng, tag_members={"Grandeur": {matrix.sonnet_ids[0]}})
    report = anova_report(matrix, median)
    skipped_combos = {(s[0], s[1]) for s in report.skipped}
    assert ("Grandeur", "valence_mean") in skipped_combos
    assert all(r.category != "Grandeur" for r in report.rows)


def test_anova_means_are_group_means():
    rng = np.random.default_rng(104)
    matrix = synthetic_matrix(rng, 20)
    members = set(matrix.sonnet_ids[:8])
    for sid in matrix.sonnet_ids:
        value = 5.5 if sid in members else 1.5
        matrix.vectors[sid].values["anger_mean"] = value
    median = median_for(matrix, rng, tag_members={"Anger": members})
    report = anova_report(matrix, median)
    row = next(
        r for r in report.rows
        if r.category == "Anger" and r.gam_feature == "anger_mean"
    )
    assert row.mean_in == pytest.approx(5.5)
    assert row.mean_out == pytest.approx(1.5)
    assert math.isinf(row.f_statistic) or row.f_statistic > 0
