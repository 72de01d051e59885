"""Per-sonnet affective profile: the 32-feature vector.

Each sonnet is reduced to the tokens that survive normalization and are
found in the merged lexicon.  From those word observations come, per
dimension, the mean of the word means and the mean of the word standard
deviations, then arousal and valence extremes and spans, rank
correlations of arousal and valence against token position (how feeling
moves across the poem), and a dispersion term scaling the mean by the
square root of the number of matched observations.

Any feature whose inputs are absent is carried as undefined with a
reason rather than silently zeroed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .corpus import Corpus
from .lexicon import DIMENSIONS, MergedLexicon
from .stats import spearman
from .textnorm import NormalizationConfig, normalize

__all__ = [
    "FEATURE_NAMES",
    "MEAN_SD_FEATURES",
    "MEAN_FEATURES",
    "FeatureMatrix",
    "GamFeatureVector",
    "WordObservation",
    "compute_corpus_matrix",
    "compute_features",
    "features_from_observations",
    "observe_words",
]

_DIM_PREFIX = {dim: dim for dim in DIMENSIONS}
_DIM_PREFIX["context_availability"] = "cont_ava"

MEAN_FEATURES: tuple[str, ...] = tuple(f"{_DIM_PREFIX[d]}_mean" for d in DIMENSIONS)

MEAN_SD_FEATURES: tuple[str, ...] = tuple(
    name for d in DIMENSIONS for name in (f"{_DIM_PREFIX[d]}_mean", f"{_DIM_PREFIX[d]}_sd")
)

FEATURE_NAMES: tuple[str, ...] = MEAN_SD_FEATURES + (
    "max_arousal",
    "min_arousal",
    "max_valence",
    "min_valence",
    "arousal_span",
    "valence_span",
    "cor_aro",
    "cor_val",
    "abs_cor_aro",
    "abs_cor_val",
    "sigma_aro",
    "sigma_val",
)


@dataclass(frozen=True)
class WordObservation:
    """One lexicon-matched token: where it sits and what the norms say."""

    surface: str
    key: str
    position: int
    dims: dict[str, tuple[float, float | None]]


@dataclass
class GamFeatureVector:
    """The 32 features of one sonnet.

    ``values`` holds a float (or None) per feature name; ``reasons``
    explains every None.  Every feature name is always present in
    ``values``.
    """

    values: dict[str, float | None] = field(default_factory=dict)
    reasons: dict[str, str] = field(default_factory=dict)

    def get(self, name: str) -> float | None:
        return self.values[name]

    def defined(self, name: str) -> bool:
        return self.values[name] is not None


def observe_words(
    text: str, merged: MergedLexicon, config: NormalizationConfig
) -> list[WordObservation]:
    """Normalize a sonnet and keep the tokens the merged lexicon knows.

    Positions are the post-stopword-removal token positions, so the
    position sequence of the observations may have gaps where unmatched
    words sat.
    """
    observations = []
    for token in normalize(text, config):
        entry = merged.lookup(token.normalized)
        if entry is not None:
            observations.append(
                WordObservation(
                    surface=token.surface,
                    key=token.normalized,
                    position=token.position,
                    dims=entry,
                )
            )
    return observations


def _position_correlation(
    observations: Sequence[WordObservation], dim: str
) -> tuple[float | None, str | None]:
    pairs = [
        (float(o.position), o.dims[dim][0]) for o in observations if dim in o.dims
    ]
    if len(pairs) < 2:
        return None, f"fewer than two matched words with {dim}"
    positions = [p for p, _ in pairs]
    means = [m for _, m in pairs]
    result = spearman(means, positions)
    if result.rho is None:
        return None, f"{dim} values are constant across the sonnet"
    return result.rho, None


def features_from_observations(
    observations: Sequence[WordObservation],
) -> GamFeatureVector:
    """Fold word observations into the 32-feature vector."""
    vec = GamFeatureVector()

    def set_value(name: str, value: float | None, reason: str | None = None) -> None:
        vec.values[name] = value
        if value is None:
            vec.reasons[name] = reason or "undefined"

    for dim in DIMENSIONS:
        prefix = _DIM_PREFIX[dim]
        means = [o.dims[dim][0] for o in observations if dim in o.dims]
        sds = [
            o.dims[dim][1]
            for o in observations
            if dim in o.dims and o.dims[dim][1] is not None
        ]
        if means:
            set_value(f"{prefix}_mean", sum(means) / len(means))
        else:
            set_value(f"{prefix}_mean", None, f"no matched words with {dim}")
        if sds:
            set_value(f"{prefix}_sd", sum(sds) / len(sds))
        else:
            set_value(f"{prefix}_sd", None, f"no word standard deviations for {dim}")

    for dim, label in (("arousal", "arousal"), ("valence", "valence")):
        means = [o.dims[dim][0] for o in observations if dim in o.dims]
        count = len(means)
        if means:
            set_value(f"max_{label}", max(means))
            set_value(f"min_{label}", min(means))
            set_value(f"{label}_span", max(means) - min(means))
        else:
            reason = f"no matched words with {dim}"
            set_value(f"max_{label}", None, reason)
            set_value(f"min_{label}", None, reason)
            set_value(f"{label}_span", None, reason)
        short = "aro" if dim == "arousal" else "val"
        rho, reason = _position_correlation(observations, dim)
        set_value(f"cor_{short}", rho, reason)
        set_value(f"abs_cor_{short}", abs(rho) if rho is not None else None, reason)
        mean_value = vec.values[f"{_DIM_PREFIX[dim]}_mean"]
        if mean_value is not None:
            set_value(f"sigma_{short}", mean_value * math.sqrt(count))
        else:
            set_value(f"sigma_{short}", None, f"no matched words with {dim}")

    return vec


def compute_features(
    text: str, merged: MergedLexicon, config: NormalizationConfig
) -> GamFeatureVector:
    """The 32-feature vector of one sonnet text."""
    return features_from_observations(observe_words(text, merged, config))


@dataclass(frozen=True)
class FeatureMatrix:
    """Feature vectors for a whole corpus, in corpus order."""

    sonnet_ids: tuple[str, ...]
    vectors: dict[str, GamFeatureVector]
    undefined_counts: dict[str, int]

    def column(self, feature: str) -> list[tuple[str, float]]:
        """Defined (sonnet_id, value) pairs for one feature, corpus order."""
        out = []
        for sid in self.sonnet_ids:
            value = self.vectors[sid].values[feature]
            if value is not None:
                out.append((sid, value))
        return out


def compute_corpus_matrix(
    corpus: Corpus, merged: MergedLexicon, config: NormalizationConfig
) -> FeatureMatrix:
    """Feature vectors for every sonnet plus per-feature undefined counts."""
    vectors: dict[str, GamFeatureVector] = {}
    undefined = {name: 0 for name in FEATURE_NAMES}
    for sonnet in corpus.sonnets:
        if sonnet.text is None:
            raise ValueError(f"sonnet {sonnet.sonnet_id} was loaded without text")
        vec = compute_features(sonnet.text, merged, config)
        vectors[sonnet.sonnet_id] = vec
        for name in FEATURE_NAMES:
            if vec.values[name] is None:
                undefined[name] += 1
    return FeatureMatrix(
        sonnet_ids=corpus.sonnet_ids,
        vectors=vectors,
        undefined_counts=undefined,
    )
