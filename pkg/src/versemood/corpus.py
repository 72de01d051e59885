"""Corpus model: sonnets, expert annotation sets, and their fusion.

Annotation files are delimited text with one header row naming the
annotated features and one row per sonnet in metadata order.  The three
expert sets are fused into a median annotator after two repairs that the
annotation campaign made necessary: a valence scale reversal for the
annotators who used the scale upside down, and a zero fill for
psychological tags missing in exactly one of the three sets.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Sequence

from .textnorm import NormalizationConfig, normalize

__all__ = [
    "AnnotationFormatError",
    "AnnotationSet",
    "Corpus",
    "CorpusFormatError",
    "CorpusStats",
    "DEFAULT_CATALOG",
    "FeatureCatalog",
    "HistogramBin",
    "Sonnet",
    "UnfilledCell",
    "build_median_annotator",
    "corpus_statistics",
    "fill_missing_psych",
    "load_annotation_set",
    "load_corpus",
    "reverse_ordinal_scale",
    "subset_by_tag",
]

logger = logging.getLogger(__name__)

MEDIAN_ANNOTATOR_ID = 0

ORDINAL_MIN = 1
ORDINAL_MAX = 4


class AnnotationFormatError(ValueError):
    """Malformed annotation file (bad header, cell value, or row count)."""


class CorpusFormatError(ValueError):
    """Malformed corpus metadata or unreadable sonnet text."""


@dataclass(frozen=True)
class FeatureCatalog:
    """Names and kinds of the annotated features.

    Affective and lexico-semantic features are ordinal on a 1..4 scale
    and are never missing; psychological tags are binary 0/1 and may be
    missing.  Names are case-sensitive: the ordinal 'fear' and 'anger'
    are distinct from the capitalized psychological tags.
    """

    affective: tuple[str, ...]
    lexico_semantic: tuple[str, ...]
    psychological: tuple[str, ...]

    @property
    def ordinal(self) -> tuple[str, ...]:
        return self.affective + self.lexico_semantic

    @property
    def all_features(self) -> tuple[str, ...]:
        return self.affective + self.lexico_semantic + self.psychological

    def kind(self, feature: str) -> str:
        if feature in self.affective:
            return "affective"
        if feature in self.lexico_semantic:
            return "lexico_semantic"
        if feature in self.psychological:
            return "psychological"
        raise KeyError(feature)


DEFAULT_CATALOG = FeatureCatalog(
    affective=("valence", "arousal", "happiness", "anger", "sadness", "fear", "disgust"),
    lexico_semantic=("concreteness", "imageability", "context availability"),
    psychological=(
        "Anxiety",
        "Aversion",
        "Depression",
        "Disappointment",
        "Dramatisation",
        "Illusion",
        "Helplessness",
        "Instability",
        "Insecurity",
        "Anger",
        "Obsession",
        "Pride",
        "Prejudice",
        "Fear (binary)",
        "Vulnerability",
        "Compulsion",
        "Daydream",
        "Grandeur",
        "Idealization",
        "Irritability",
        "Solitude",
    ),
)


@dataclass(frozen=True)
class Sonnet:
    """One poem: identity, bibliographic fields, and (optionally) text."""

    sonnet_id: str
    author: str
    year: str
    title: str
    text: str | None


@dataclass(frozen=True)
class Corpus:
    sonnets: tuple[Sonnet, ...]
    _by_id: dict[str, Sonnet] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self._by_id.update({s.sonnet_id: s for s in self.sonnets})
        if len(self._by_id) != len(self.sonnets):
            raise CorpusFormatError("duplicate sonnet ids in metadata")

    def __len__(self) -> int:
        return len(self.sonnets)

    @property
    def sonnet_ids(self) -> tuple[str, ...]:
        return tuple(s.sonnet_id for s in self.sonnets)

    def get(self, sonnet_id: str) -> Sonnet:
        return self._by_id[sonnet_id]


@dataclass(frozen=True)
class AnnotationSet:
    """One annotator's matrix of sonnet-by-feature values.

    ``values`` maps (sonnet_id, feature) to a number; absent keys are
    missing cells.  The median annotator produced by fusion reuses this
    type with ``annotator_id`` 0 and may hold half-integer values where
    an even count had to be averaged.
    """

    annotator_id: int
    sonnet_ids: tuple[str, ...]
    features: tuple[str, ...]
    values: dict[tuple[str, str], float]

    def get(self, sonnet_id: str, feature: str) -> float | None:
        return self.values.get((sonnet_id, feature))

    def present(self, sonnet_id: str, feature: str) -> bool:
        return (sonnet_id, feature) in self.values


class UnfilledCell(NamedTuple):
    """A psychological cell missing in two or more annotation sets."""

    sonnet_id: str
    feature: str
    n_present: int


class HistogramBin(NamedTuple):
    low: float
    high: float
    count: int


@dataclass(frozen=True)
class CorpusStats:
    """Word-count summary plus per-tag sonnet counts from the median set."""

    n_sonnets: int
    word_mean: float
    word_sd: float
    histogram: tuple[HistogramBin, ...]
    tag_counts: dict[str, int]


_METADATA_COLUMNS = ("author", "year", "title", "id_sonnet", "file_path")


def load_corpus(metadata_path: str | Path, corpus_root: str | Path | None) -> Corpus:
    """Load sonnet metadata and, when a root directory is given, the texts.

    The metadata file is delimited text with at least the columns
    author, year, title, id_sonnet and file_path.  Texts are read from
    file_path resolved against ``corpus_root``; passing None skips text
    loading for commands that only need identities.
    """
    metadata_path = Path(metadata_path)
    try:
        handle = metadata_path.open(encoding="utf-8", newline="")
    except OSError as exc:
        raise CorpusFormatError(f"cannot read metadata file {metadata_path}: {exc}") from exc
    with handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        missing = [c for c in _METADATA_COLUMNS if c not in header]
        if missing:
            raise CorpusFormatError(
                f"{metadata_path}: missing metadata columns: {', '.join(missing)}"
            )
        sonnets = []
        for lineno, row in enumerate(reader, start=2):
            sonnet_id = (row["id_sonnet"] or "").strip()
            if not sonnet_id:
                raise CorpusFormatError(f"{metadata_path}: line {lineno}: empty id_sonnet")
            text: str | None = None
            if corpus_root is not None:
                text_path = Path(corpus_root) / (row["file_path"] or "").strip()
                try:
                    text = text_path.read_text(encoding="utf-8")
                except OSError as exc:
                    raise CorpusFormatError(
                        f"{metadata_path}: line {lineno}: cannot read sonnet text {text_path}: {exc}"
                    ) from exc
            sonnets.append(
                Sonnet(
                    sonnet_id=sonnet_id,
                    author=(row["author"] or "").strip(),
                    year=(row["year"] or "").strip(),
                    title=(row["title"] or "").strip(),
                    text=text,
                )
            )
    if not sonnets:
        raise CorpusFormatError(f"{metadata_path}: no sonnets listed")
    return Corpus(sonnets=tuple(sonnets))


def load_annotation_set(
    path: str | Path,
    annotator_id: int,
    catalog: FeatureCatalog = DEFAULT_CATALOG,
    sonnet_ids: Sequence[str] | None = None,
) -> AnnotationSet:
    """Read one annotator's delimited file and validate every cell.

    The header must name exactly the catalog features (any order).  Rows
    follow metadata order; when ``sonnet_ids`` is given the row count
    must match and rows are keyed by those ids, otherwise synthetic ids
    s0001, s0002, ... are assigned.  Ordinal cells must be integers in
    1..4 and may not be empty; binary cells must be 0 or 1 and may be
    empty.  All violations report row and column coordinates.
    """
    path = Path(path)
    try:
        handle = path.open(encoding="utf-8", newline="")
    except OSError as exc:
        raise AnnotationFormatError(f"cannot read annotation file {path}: {exc}") from exc
    with handle:
        reader = csv.reader(handle)
        rows = [row for row in reader if any(cell.strip() for cell in row)]
    if not rows:
        raise AnnotationFormatError(f"{path}: file is empty")
    header = [h.strip() for h in rows[0]]
    known = set(catalog.all_features)
    for col, name in enumerate(header, start=1):
        if name not in known:
            raise AnnotationFormatError(
                f"{path}: row 1, column {col}: unknown feature name {name!r}"
            )
    if len(set(header)) != len(header):
        raise AnnotationFormatError(f"{path}: duplicate feature columns in header")
    absent = [f for f in catalog.all_features if f not in header]
    if absent:
        raise AnnotationFormatError(f"{path}: missing feature columns: {', '.join(absent)}")

    data_rows = rows[1:]
    if sonnet_ids is not None:
        if len(data_rows) != len(sonnet_ids):
            raise AnnotationFormatError(
                f"{path}: {len(data_rows)} data rows but {len(sonnet_ids)} sonnets in metadata"
            )
        ids = tuple(sonnet_ids)
    else:
        ids = tuple(f"s{i:04d}" for i in range(1, len(data_rows) + 1))

    ordinal = set(catalog.ordinal)
    values: dict[tuple[str, str], float] = {}
    for row_idx, row in enumerate(data_rows, start=2):
        if len(row) != len(header):
            raise AnnotationFormatError(
                f"{path}: row {row_idx}: expected {len(header)} cells, found {len(row)}"
            )
        sid = ids[row_idx - 2]
        for col_idx, (feature, cell) in enumerate(zip(header, row), start=1):
            cell = cell.strip()
            if not cell:
                if feature in ordinal:
                    raise AnnotationFormatError(
                        f"{path}: row {row_idx}, column {col_idx} ({feature}): "
                        "ordinal features may not be missing"
                    )
                continue
            try:
                value = int(cell)
            except ValueError:
                raise AnnotationFormatError(
                    f"{path}: row {row_idx}, column {col_idx} ({feature}): "
                    f"not an integer: {cell!r}"
                ) from None
            if feature in ordinal:
                if not ORDINAL_MIN <= value <= ORDINAL_MAX:
                    raise AnnotationFormatError(
                        f"{path}: row {row_idx}, column {col_idx} ({feature}): "
                        f"value {value} outside {ORDINAL_MIN}..{ORDINAL_MAX}"
                    )
            elif value not in (0, 1):
                raise AnnotationFormatError(
                    f"{path}: row {row_idx}, column {col_idx} ({feature}): "
                    f"binary tag value must be 0 or 1, found {value}"
                )
            values[(sid, feature)] = float(value)
    return AnnotationSet(
        annotator_id=annotator_id,
        sonnet_ids=ids,
        features=tuple(catalog.all_features),
        values=values,
    )


def reverse_ordinal_scale(
    annotation_set: AnnotationSet,
    feature: str,
    catalog: FeatureCatalog = DEFAULT_CATALOG,
) -> AnnotationSet:
    """Map an ordinal feature through x -> 5 - x (1..4 scale flip).

    Used for annotators who applied the scale in the opposite direction.
    Applying it twice is the identity.
    """
    if feature not in catalog.ordinal:
        raise ValueError(f"{feature!r} is not an ordinal feature")
    values = dict(annotation_set.values)
    for sid in annotation_set.sonnet_ids:
        key = (sid, feature)
        if key in values:
            values[key] = float(ORDINAL_MIN + ORDINAL_MAX) - values[key]
    return AnnotationSet(
        annotator_id=annotation_set.annotator_id,
        sonnet_ids=annotation_set.sonnet_ids,
        features=annotation_set.features,
        values=values,
    )


def _require_aligned_sets(sets: Sequence[AnnotationSet]) -> None:
    if len(sets) != 3:
        raise ValueError(f"expected exactly 3 annotation sets, got {len(sets)}")
    first = sets[0].sonnet_ids
    if any(s.sonnet_ids != first for s in sets[1:]):
        raise ValueError("annotation sets cover different sonnets")


def fill_missing_psych(
    sets: Sequence[AnnotationSet],
    catalog: FeatureCatalog = DEFAULT_CATALOG,
) -> tuple[list[AnnotationSet], list[UnfilledCell]]:
    """Fill psychological cells missing in exactly one of three sets with 0.

    A tag left blank by a single annotator is read as 'not confirmed'
    rather than unknown.  Cells missing in two or all three sets are
    left missing and returned for reporting.
    """
    _require_aligned_sets(sets)
    filled = [dict(s.values) for s in sets]
    unfilled: list[UnfilledCell] = []
    for sid in sets[0].sonnet_ids:
        for tag in catalog.psychological:
            key = (sid, tag)
            present = [key in s.values for s in sets]
            n_present = sum(present)
            if n_present == 2:
                for pos, has in enumerate(present):
                    if not has:
                        filled[pos][key] = 0.0
            elif n_present < 2:
                unfilled.append(UnfilledCell(sid, tag, n_present))
    result = [
        AnnotationSet(
            annotator_id=s.annotator_id,
            sonnet_ids=s.sonnet_ids,
            features=s.features,
            values=vals,
        )
        for s, vals in zip(sets, filled)
    ]
    if unfilled:
        logger.info("%d psychological cells unfillable (missing in 2+ sets)", len(unfilled))
    return result, unfilled


def build_median_annotator(
    sets: Sequence[AnnotationSet],
    catalog: FeatureCatalog = DEFAULT_CATALOG,
) -> AnnotationSet:
    """Fuse three aligned annotation sets into a median annotator.

    Cells with three values take the middle one; the median of a binary
    tag is then the majority vote.  A cell with two values (one was
    unfillable) resolves a 0/1 split to 0 and averages ordinals, which
    can yield half-integers.  Cells with fewer than two values stay
    missing.  Scale reversal and the missing fill are expected to have
    been applied already.
    """
    _require_aligned_sets(sets)
    binary = set(catalog.psychological)
    values: dict[tuple[str, str], float] = {}
    for sid in sets[0].sonnet_ids:
        for feature in catalog.all_features:
            key = (sid, feature)
            avail = sorted(s.values[key] for s in sets if key in s.values)
            if len(avail) == 3:
                values[key] = avail[1]
            elif len(avail) == 2:
                if feature in binary and avail[0] != avail[1]:
                    logger.info(
                        "median %s/%s: 0/1 split over two values resolved to 0", sid, feature
                    )
                    values[key] = 0.0
                else:
                    if avail[0] != avail[1]:
                        logger.info(
                            "median %s/%s: averaging two ordinal values %s", sid, feature, avail
                        )
                    values[key] = 0.5 * (avail[0] + avail[1])
            # 0 or 1 available values: cell stays missing
    return AnnotationSet(
        annotator_id=MEDIAN_ANNOTATOR_ID,
        sonnet_ids=sets[0].sonnet_ids,
        features=tuple(catalog.all_features),
        values=values,
    )


def subset_by_tag(
    median: AnnotationSet,
    tag: str,
    catalog: FeatureCatalog = DEFAULT_CATALOG,
) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Split sonnet ids into (tagged, untagged) by the median tag value.

    A missing median cell counts as untagged, so the two groups always
    partition the full corpus.
    """
    if tag not in catalog.psychological:
        raise ValueError(f"{tag!r} is not a psychological tag")
    in_group = []
    out_group = []
    for sid in median.sonnet_ids:
        if median.values.get((sid, tag)) == 1.0:
            in_group.append(sid)
        else:
            out_group.append(sid)
    return tuple(in_group), tuple(out_group)


def corpus_statistics(
    corpus: Corpus,
    median: AnnotationSet,
    config: NormalizationConfig,
    catalog: FeatureCatalog = DEFAULT_CATALOG,
    n_bins: int = 10,
) -> CorpusStats:
    """Word-count distribution and per-tag counts.

    Word counts are surviving tokens after stopword removal (repeats
    included).  The standard deviation is the sample one (n-1 in the
    denominator); the histogram uses ``n_bins`` equal-width bins over
    the observed range with the last bin closed on the right.
    """
    counts = []
    for sonnet in corpus.sonnets:
        if sonnet.text is None:
            raise ValueError(f"sonnet {sonnet.sonnet_id} was loaded without text")
        counts.append(len(normalize(sonnet.text, config)))
    n = len(counts)
    mean = sum(counts) / n
    if n > 1:
        sd = math.sqrt(sum((c - mean) ** 2 for c in counts) / (n - 1))
    else:
        sd = 0.0
    lo, hi = float(min(counts)), float(max(counts))
    if hi == lo:
        bins = [HistogramBin(lo, hi, n)]
    else:
        width = (hi - lo) / n_bins
        tallies = [0] * n_bins
        for c in counts:
            idx = min(int((c - lo) / width), n_bins - 1)
            tallies[idx] += 1
        bins = [
            HistogramBin(lo + i * width, lo + (i + 1) * width, tallies[i])
            for i in range(n_bins)
        ]
    tag_counts = {
        tag: len(subset_by_tag(median, tag, catalog)[0]) for tag in catalog.psychological
    }
    return CorpusStats(
        n_sonnets=n,
        word_mean=mean,
        word_sd=sd,
        histogram=tuple(bins),
        tag_counts=tag_counts,
    )
