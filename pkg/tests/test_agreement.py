"""Agreement coefficient tests: hand cases, invariances, oracle equivalence."""

import numpy as np
import pytest

import oracles
from versemood.agreement import (
    AGREEMENT_THRESHOLD,
    AgreementError,
    ReliabilityMatrix,
    agreement_band,
    agreement_report,
    krippendorff_alpha,
    pairwise_alpha,
    reliability_from_sets,
)
from versemood.corpus import DEFAULT_CATALOG, AnnotationSet


def matrix_from_rows(rows, level="nominal"):
    """Build a matrix from per-unit row lists; None marks a missing cell."""
    n_raters = max(len(r) for r in rows)
    units = tuple(f"u{i}" for i in range(len(rows)))
    values = {}
    for i, row in enumerate(rows):
        for j, cell in enumerate(row):
            if cell is not None:
                values[(f"u{i}", j + 1)] = float(cell)
    return ReliabilityMatrix(
        level=level, raters=tuple(range(1, n_raters + 1)), units=units, values=values
    )


def test_perfect_agreement_is_one():
    result = krippendorff_alpha(matrix_from_rows([[1, 1], [2, 2], [3, 3]]))
    assert result.alpha == 1.0
    assert result.band == "Perfect"
    assert not result.degenerate


def test_systematic_swap_goes_negative():
    result = krippendorff_alpha(matrix_from_rows([[1, 2], [2, 1]]))
    assert result.alpha == pytest.approx(-0.5, abs=1e-12)
    assert result.band == "Very low"


def test_two_category_levels_coincide():
    rows = [[1, 1], [1, 2], [2, 2]]
    alphas = [
        krippendorff_alpha(matrix_from_rows(rows, level)).alpha
        for level in ("nominal", "ordinal", "interval")
    ]
    assert alphas[0] == pytest.approx(alphas[1], abs=1e-12)
    assert alphas[1] == pytest.approx(alphas[2], abs=1e-12)
    assert alphas[0] == pytest.approx(0.4444444444444444, abs=1e-12)


def test_short_units_are_excluded():
    with_short = matrix_from_rows([[1, 1], [2, 2], [3, None]])
    without = matrix_from_rows([[1, 1], [2, 2]])
    a = krippendorff_alpha(with_short)
    b = krippendorff_alpha(without)
    assert a.alpha == b.alpha
    assert a.n_pairable == 4


def test_no_pairable_units_raises():
    with pytest.raises(AgreementError):
        krippendorff_alpha(matrix_from_rows([[1, None], [None, 2]]))


def test_no_variation_flagged_degenerate():
    result = krippendorff_alpha(matrix_from_rows([[2, 2], [2, 2]]))
    assert result.alpha == 1.0
    assert result.degenerate
    assert "no variation" in result.note


def test_nominal_relabeling_invariance():
    rng = np.random.default_rng(50)
    for _ in range(200):
        rows = rng.integers(1, 5, size=(6, 3)).tolist()
        base = krippendorff_alpha(matrix_from_rows(rows, "nominal")).alpha
        relabel = {1: 9.0, 2: 3.5, 3: 7.0, 4: 1.0}
        mapped = [[relabel[v] for v in row] for row in rows]
        again = krippendorff_alpha(matrix_from_rows(mapped, "nominal")).alpha
        assert again == pytest.approx(base, abs=1e-12)


def test_ordinal_monotone_relabeling_invariance():
    rng = np.random.default_rng(51)
    for _ in range(200):
        rows = rng.integers(1, 5, size=(7, 3)).tolist()
        base = krippendorff_alpha(matrix_from_rows(rows, "ordinal")).alpha
        mapped = [[v**2 + 10 for v in row] for row in rows]
        again = krippendorff_alpha(matrix_from_rows(mapped, "ordinal")).alpha
        assert again == pytest.approx(base, abs=1e-12)


def test_row_and_column_permutation_invariance():
    rng = np.random.default_rng(52)
    for _ in range(100):
        rows = rng.integers(1, 4, size=(6, 4)).tolist()
        for level in ("nominal", "ordinal", "interval"):
            base = krippendorff_alpha(matrix_from_rows(rows, level)).alpha
            shuffled_units = [rows[i] for i in rng.permutation(6)]
            order = rng.permutation(4)
            shuffled_both = [[row[j] for j in order] for row in shuffled_units]
            again = krippendorff_alpha(matrix_from_rows(shuffled_both, level)).alpha
            assert again == pytest.approx(base, abs=1e-12)


def test_added_consensus_unit_never_lowers_alpha():
    rng = np.random.default_rng(53)
    for _ in range(100):
        rows = rng.integers(1, 4, size=(5, 3)).tolist()
        base = krippendorff_alpha(matrix_from_rows(rows, "nominal"))
        if base.degenerate:
            continue
        seen = rows[0][0]  # reuse an existing category
        extended = rows + [[seen, seen, seen]]
        grown = krippendorff_alpha(matrix_from_rows(extended, "nominal"))
        assert grown.alpha >= base.alpha - 1e-12


def test_matches_pair_enumeration_oracle():
    rng = np.random.default_rng(54)
    checked = 0
    while checked < 300:
        n_units = int(rng.integers(2, 7))
        n_raters = int(rng.integers(2, 5))
        rows = rng.integers(1, 5, size=(n_units, n_raters)).astype(float)
        mask = rng.random(size=rows.shape) < 0.15
        cells = [
            [None if mask[i, j] else rows[i, j] for j in range(n_raters)]
            for i in range(n_units)
        ]
        units = [[v for v in row if v is not None] for row in cells]
        pooled = [v for u in units if len(u) >= 2 for v in u]
        if len(pooled) < 2 or len(set(pooled)) < 2:
            continue
        level = ("nominal", "ordinal", "interval")[checked % 3]
        mine = krippendorff_alpha(matrix_from_rows(cells, level))
        assert mine.alpha == pytest.approx(
            oracles.krippendorff_alpha(units, level), abs=1e-12
        )
        checked += 1


def test_two_rater_interval_against_oracle_tightly():
    rng = np.random.default_rng(55)
    for _ in range(200):
        n_units = int(rng.integers(2, 7))
        rows = rng.integers(1, 6, size=(n_units, 2)).astype(float).tolist()
        pooled = [v for row in rows for v in row]
        if len(set(pooled)) < 2:
            continue
        mine = krippendorff_alpha(matrix_from_rows(rows, "interval"))
        ref = oracles.krippendorff_alpha(rows, "interval")
        assert mine.alpha == pytest.approx(ref, abs=1e-12)


def test_band_boundaries():
    assert agreement_band(-0.01) == "Very low"
    assert agreement_band(0.0) == "Light"
    assert agreement_band(0.2099) == "Light"
    assert agreement_band(0.21) == "Acceptable"
    assert agreement_band(0.41) == "Moderate"
    assert agreement_band(0.61) == "Substantial"
    assert agreement_band(0.81) == "Perfect"
    assert agreement_band(1.0) == "Perfect"
    assert AGREEMENT_THRESHOLD == 0.21


def small_sets(values_by_annotator, feature="valence", ids=("s1", "s2", "s3", "s4")):
    sets = []
    for annotator_id, values in values_by_annotator.items():
        cells = {
            (sid, feature): float(v)
            for sid, v in zip(ids, values)
            if v is not None
        }
        sets.append(
            AnnotationSet(
                annotator_id=annotator_id,
                sonnet_ids=tuple(ids),
                features=(feature,),
                values=cells,
            )
        )
    return sets


def test_reliability_from_sets_collects_cells():
    sets = small_sets({1: [1, 2, 3, 4], 2: [1, 2, 3, None]})
    matrix = reliability_from_sets(sets, "valence", "ordinal")
    assert matrix.units == ("s1", "s2", "s3", "s4")
    assert matrix.raters == (1, 2)
    assert ("s4", 2) not in matrix.values
    assert matrix.values[("s2", 1)] == 2.0


def test_pairwise_alpha_keys_and_all():
    sets = small_sets({1: [1, 2, 3, 4], 2: [1, 2, 3, 4], 3: [4, 3, 2, 1]})
    results = pairwise_alpha(sets, "valence", "ordinal")
    assert set(results) == {(1, 2), (1, 3), (2, 3), "all"}
    assert results[(1, 2)].alpha == 1.0
    assert results[(1, 3)].alpha < 0


def test_agreement_report_levels_and_columns():
    catalog = DEFAULT_CATALOG
    rng = np.random.default_rng(56)
    ids = tuple(f"s{i}" for i in range(8))
    sets = []
    for annotator_id in (1, 2, 3):
        values = {}
        for sid in ids:
            for feat in catalog.ordinal:
                values[(sid, feat)] = float(rng.integers(1, 5))
            for feat in catalog.psychological:
                values[(sid, feat)] = float(rng.integers(0, 2))
        sets.append(
            AnnotationSet(
                annotator_id=annotator_id,
                sonnet_ids=ids,
                features=tuple(catalog.all_features),
                values=values,
            )
        )
    rows = agreement_report(sets)
    assert len(rows) == len(catalog.all_features)
    by_feature = {r.feature: r for r in rows}
    assert by_feature["valence"].level == "ordinal"
    assert by_feature["Anxiety"].level == "nominal"
    for row in rows:
        assert set(row.cells) == {"all", "a1-a2", "a1-a3", "a2-a3"}
    # random annotations agree poorly, so the threshold flag must fire somewhere
    assert any(row.below_threshold for row in rows)


def test_agreement_report_median_columns():
    catalog = DEFAULT_CATALOG
    ids = ("s1", "s2", "s3")
    sets = []
    for annotator_id in (1, 2, 3):
        values = {}
        for sid_idx, sid in enumerate(ids):
            for feat in catalog.ordinal:
                values[(sid, feat)] = float(1 + (sid_idx + annotator_id) % 4)
            for feat in catalog.psychological:
                values[(sid, feat)] = float((sid_idx + annotator_id) % 2)
        sets.append(
            AnnotationSet(
                annotator_id=annotator_id,
                sonnet_ids=ids,
                features=tuple(catalog.all_features),
                values=values,
            )
        )
    median_values = {}
    for sid_idx, sid in enumerate(ids):
        for feat in catalog.all_features:
            triple = sorted(sets[k].values[(sid, feat)] for k in range(3))
            median_values[(sid, feat)] = triple[1]
    median = AnnotationSet(
        annotator_id=0,
        sonnet_ids=ids,
        features=tuple(catalog.all_features),
        values=median_values,
    )
    rows = agreement_report(sets, median)
    for row in rows:
        assert set(row.cells) == {
            "all", "a1-a2", "a1-a3", "a2-a3", "a1-m", "a2-m", "a3-m",
        }
