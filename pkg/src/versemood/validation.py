"""Validation battery: annotated features against the lexical profile.

Three views of the same question (do the lexicon-derived features track
what the experts annotated?): a bivariate rank-correlation matrix,
per-category regressions reporting the paired feature's partial
dependence, and per-tag ANOVA of every mean feature between tagged and
untagged sonnets.

Regressions use all 32 features as predictors.  Two of them are exact
linear combinations by construction (each span is its max minus its
min), so the regression layer removes whatever columns the rank check
reports, keeping the first occurrence of every direction; every removal
is logged.  Categories too small for the full predictor set fall back
to the 20 mean/sd features.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .corpus import DEFAULT_CATALOG, AnnotationSet, FeatureCatalog, subset_by_tag
from .features import FEATURE_NAMES, MEAN_FEATURES, MEAN_SD_FEATURES, FeatureMatrix
from .stats import RankDeficiencyError, ols, one_way_anova, spearman

__all__ = [
    "ALL_CATEGORY",
    "AnovaReport",
    "AnovaRow",
    "BivariateCell",
    "FEATURE_PAIRINGS",
    "PartialDependenceRow",
    "SIGNIFICANCE_LEVEL",
    "anova_report",
    "bivariate_report",
    "partial_dependence_report",
]

logger = logging.getLogger(__name__)

ALL_CATEGORY = "all"

SIGNIFICANCE_LEVEL = 0.05

FEATURE_PAIRINGS: tuple[tuple[str, str], ...] = (
    ("valence", "valence_mean"),
    ("arousal", "arousal_mean"),
    ("happiness", "happiness_mean"),
    ("anger", "anger_mean"),
    ("sadness", "sadness_mean"),
    ("fear", "fear_mean"),
    ("disgust", "disgust_mean"),
    ("concreteness", "concreteness_mean"),
    ("imageability", "imageability_mean"),
    ("context availability", "cont_ava_mean"),
)


@dataclass(frozen=True)
class BivariateCell:
    """Rank correlation of one annotated feature with one lexical feature."""

    annotated_feature: str
    gam_feature: str
    rho: float | None
    n: int
    band: str | None
    note: str | None = None


def bivariate_report(
    matrix: FeatureMatrix,
    median: AnnotationSet,
    catalog: FeatureCatalog = DEFAULT_CATALOG,
) -> list[BivariateCell]:
    """Spearman rho for every annotated feature against all 32 features.

    Sonnets where the lexical feature is undefined are dropped pairwise,
    cell by cell.
    """
    cells = []
    for annotated in catalog.ordinal:
        for gam_feature in FEATURE_NAMES:
            xs = []
            ys = []
            for sid in matrix.sonnet_ids:
                gam_value = matrix.vectors[sid].values[gam_feature]
                annotated_value = median.values.get((sid, annotated))
                if gam_value is None or annotated_value is None:
                    continue
                xs.append(annotated_value)
                ys.append(gam_value)
            if len(xs) < 2:
                cells.append(
                    BivariateCell(
                        annotated, gam_feature, None, len(xs), None,
                        note="fewer than two paired sonnets",
                    )
                )
                continue
            result = spearman(xs, ys)
            cells.append(
                BivariateCell(
                    annotated_feature=annotated,
                    gam_feature=gam_feature,
                    rho=result.rho,
                    n=result.n,
                    band=result.band,
                    note=result.undefined_reason,
                )
            )
    return cells


@dataclass(frozen=True)
class PartialDependenceRow:
    """One category-by-pairing regression outcome.

    The regression fits the annotated feature on the whole predictor
    set; ``coefficient`` and ``p_value`` belong to the paired lexical
    feature.  ``note`` is set (and the numeric fields are None) when the
    row was not computable.
    """

    category: str
    annotated_feature: str
    gam_feature: str
    n: int
    n_predictors: int
    r_squared: float | None
    adjusted_r_squared: float | None
    coefficient: float | None
    p_value: float | None
    significant: bool
    pruned: bool
    dropped_columns: tuple[str, ...]
    note: str | None = None


def _not_computable(
    category: str, annotated: str, gam_feature: str, n: int, reason: str
) -> PartialDependenceRow:
    return PartialDependenceRow(
        category=category,
        annotated_feature=annotated,
        gam_feature=gam_feature,
        n=n,
        n_predictors=0,
        r_squared=None,
        adjusted_r_squared=None,
        coefficient=None,
        p_value=None,
        significant=False,
        pruned=False,
        dropped_columns=(),
        note=reason,
    )


def _listwise_ids(
    matrix: FeatureMatrix, ids: tuple[str, ...], predictors: tuple[str, ...]
) -> list[str]:
    return [
        sid
        for sid in ids
        if all(matrix.vectors[sid].values[p] is not None for p in predictors)
    ]


def _fit_pairing(
    matrix: FeatureMatrix,
    median: AnnotationSet,
    category: str,
    ids: tuple[str, ...],
    annotated: str,
    gam_feature: str,
) -> PartialDependenceRow:
    predictors = FEATURE_NAMES
    rows = _listwise_ids(matrix, ids, predictors)
    pruned = False
    if len(rows) <= len(predictors) + 1:
        predictors = MEAN_SD_FEATURES
        pruned = True
        rows = _listwise_ids(matrix, ids, predictors)
        logger.info(
            "partial dependence %s/%s: pruned predictors to mean/sd set (n=%d)",
            category, annotated, len(rows),
        )
    if len(rows) <= len(predictors) + 1:
        return _not_computable(
            category, annotated, gam_feature, len(rows),
            f"insufficient rows for regression ({len(rows)} sonnets, "
            f"{len(predictors)} predictors)",
        )

    y = [median.values[(sid, annotated)] for sid in rows]
    dropped: list[str] = []
    active = list(predictors)
    while True:
        X = [[matrix.vectors[sid].values[p] for p in active] for sid in rows]
        try:
            fit = ols(X, y, column_names=active)
            break
        except RankDeficiencyError as exc:
            bad = [c for c in exc.columns if c != "intercept"]
            if not bad:
                return _not_computable(
                    category, annotated, gam_feature, len(rows),
                    "design matrix not usable (intercept degenerate)",
                )
            logger.info(
                "partial dependence %s/%s: dropped dependent columns %s",
                category, annotated, ", ".join(bad),
            )
            dropped.extend(bad)
            active = [p for p in active if p not in bad]
            if gam_feature not in active:
                return _not_computable(
                    category, annotated, gam_feature, len(rows),
                    f"paired feature {gam_feature} is collinear in this category",
                )
        except ValueError as exc:
            return _not_computable(category, annotated, gam_feature, len(rows), str(exc))

    idx = active.index(gam_feature)
    coefficient = fit.coefficients[idx]
    p_value = fit.p_values[idx]
    return PartialDependenceRow(
        category=category,
        annotated_feature=annotated,
        gam_feature=gam_feature,
        n=fit.n,
        n_predictors=fit.k,
        r_squared=fit.r_squared,
        adjusted_r_squared=fit.adjusted_r_squared,
        coefficient=coefficient,
        p_value=p_value,
        significant=p_value < SIGNIFICANCE_LEVEL and coefficient > 0.0,
        pruned=pruned,
        dropped_columns=tuple(dropped),
        note=None,
    )


def partial_dependence_report(
    matrix: FeatureMatrix,
    median: AnnotationSet,
    catalog: FeatureCatalog = DEFAULT_CATALOG,
) -> list[PartialDependenceRow]:
    """Per-category regressions of each annotated feature on the profile.

    Categories are the whole corpus and every psychological tag's tagged
    subset.  Sonnets with any undefined value among the active
    predictors are dropped listwise per category.
    """
    categories: list[tuple[str, tuple[str, ...]]] = [(ALL_CATEGORY, matrix.sonnet_ids)]
    for tag in catalog.psychological:
        categories.append((tag, subset_by_tag(median, tag, catalog)[0]))
    rows = []
    for category, ids in categories:
        for annotated, gam_feature in FEATURE_PAIRINGS:
            rows.append(
                _fit_pairing(matrix, median, category, ids, annotated, gam_feature)
            )
    return rows


@dataclass(frozen=True)
class AnovaRow:
    """A tag/feature combination whose group difference is significant."""

    category: str
    gam_feature: str
    n_in: int
    n_out: int
    mean_in: float
    mean_out: float
    f_statistic: float
    p_value: float


@dataclass(frozen=True)
class AnovaReport:
    """Significant rows plus the size of the grid they were drawn from."""

    rows: tuple[AnovaRow, ...]
    n_total: int
    n_significant: int
    skipped: tuple[tuple[str, str, str], ...]


def anova_report(
    matrix: FeatureMatrix,
    median: AnnotationSet,
    catalog: FeatureCatalog = DEFAULT_CATALOG,
) -> AnovaReport:
    """One-way ANOVA of every mean feature between tagged and untagged.

    All tag-by-feature combinations are tested; only those significant
    at the 0.05 level become rows.  Combinations that cannot run (a
    group with fewer than two defined values) are listed as skipped.
    """
    rows: list[AnovaRow] = []
    skipped: list[tuple[str, str, str]] = []
    n_total = 0
    for tag in catalog.psychological:
        in_ids, out_ids = subset_by_tag(median, tag, catalog)
        in_set = set(in_ids)
        for feature in MEAN_FEATURES:
            n_total += 1
            in_vals = []
            out_vals = []
            for sid, value in matrix.column(feature):
                (in_vals if sid in in_set else out_vals).append(value)
            if len(in_vals) < 2 or len(out_vals) < 2:
                skipped.append((tag, feature, "a group has fewer than two values"))
                continue
            result = one_way_anova([in_vals, out_vals])
            if result.p_value < SIGNIFICANCE_LEVEL:
                rows.append(
                    AnovaRow(
                        category=tag,
                        gam_feature=feature,
                        n_in=len(in_vals),
                        n_out=len(out_vals),
                        mean_in=result.group_means[0],
                        mean_out=result.group_means[1],
                        f_statistic=result.f_statistic,
                        p_value=result.p_value,
                    )
                )
    return AnovaReport(
        rows=tuple(rows),
        n_total=n_total,
        n_significant=len(rows),
        skipped=tuple(skipped),
    )
