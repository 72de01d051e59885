"""Affective profiling of Spanish sonnets from merged lexical norms.

The package merges word-level norm lexicons onto a common scale,
normalizes sonnet text (tokenization, stopword removal, stemming or
lemmatization), computes a 32-value affective feature vector per
sonnet, and validates the features against expert annotations with
agreement, correlation, regression, and ANOVA reports.
"""

from .agreement import (
    AGREEMENT_THRESHOLD,
    AgreementError,
    AlphaResult,
    ReliabilityMatrix,
    agreement_band,
    agreement_report,
    krippendorff_alpha,
    pairwise_alpha,
    reliability_from_sets,
)
from .corpus import (
    DEFAULT_CATALOG,
    MEDIAN_ANNOTATOR_ID,
    AnnotationFormatError,
    AnnotationSet,
    Corpus,
    CorpusFormatError,
    FeatureCatalog,
    Sonnet,
    build_median_annotator,
    corpus_statistics,
    fill_missing_psych,
    load_annotation_set,
    load_corpus,
    reverse_ordinal_scale,
    subset_by_tag,
)
from .features import (
    FEATURE_NAMES,
    FeatureMatrix,
    GamFeatureVector,
    compute_corpus_matrix,
    compute_features,
)
from .lexicon import (
    CANONICAL_SCALES,
    LexiconFormatError,
    MergedLexicon,
    SourceLexicon,
    coverage_report,
    load_lexicon,
    merge_lexicons,
    missing_word_report,
    rescale_value,
    word_count_report,
)
from .stats import (
    AnovaResult,
    CorrelationResult,
    RankDeficiencyError,
    RegressionResult,
    correlation_band,
    min_sample_size,
    ols,
    one_way_anova,
    regularized_incomplete_beta,
    spearman,
    t_tail,
    two_sample_power,
)
from .textnorm import (
    MODES,
    NormalizationConfig,
    Token,
    default_stopwords,
    load_lemma_table,
    load_stopwords,
    normalize,
    tokenize,
)
from .validation import (
    FEATURE_PAIRINGS,
    SIGNIFICANCE_LEVEL,
    anova_report,
    bivariate_report,
    partial_dependence_report,
)

__version__ = "0.1.0"

__all__ = [
    "AGREEMENT_THRESHOLD",
    "AgreementError",
    "AlphaResult",
    "AnnotationFormatError",
    "AnnotationSet",
    "AnovaResult",
    "CANONICAL_SCALES",
    "Corpus",
    "CorpusFormatError",
    "CorrelationResult",
    "DEFAULT_CATALOG",
    "FEATURE_NAMES",
    "FEATURE_PAIRINGS",
    "FeatureCatalog",
    "FeatureMatrix",
    "GamFeatureVector",
    "LexiconFormatError",
    "MEDIAN_ANNOTATOR_ID",
    "MODES",
    "MergedLexicon",
    "NormalizationConfig",
    "RankDeficiencyError",
    "RegressionResult",
    "ReliabilityMatrix",
    "SIGNIFICANCE_LEVEL",
    "Sonnet",
    "SourceLexicon",
    "Token",
    "agreement_band",
    "agreement_report",
    "anova_report",
    "bivariate_report",
    "build_median_annotator",
    "compute_corpus_matrix",
    "compute_features",
    "correlation_band",
    "corpus_statistics",
    "coverage_report",
    "default_stopwords",
    "fill_missing_psych",
    "krippendorff_alpha",
    "load_annotation_set",
    "load_corpus",
    "load_lemma_table",
    "load_lexicon",
    "load_stopwords",
    "merge_lexicons",
    "min_sample_size",
    "missing_word_report",
    "normalize",
    "ols",
    "one_way_anova",
    "pairwise_alpha",
    "partial_dependence_report",
    "regularized_incomplete_beta",
    "reliability_from_sets",
    "rescale_value",
    "reverse_ordinal_scale",
    "spearman",
    "subset_by_tag",
    "t_tail",
    "tokenize",
    "two_sample_power",
    "word_count_report",
]
