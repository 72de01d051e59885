"""Affective lexicons: loading, rescaling, merging, and corpus coverage.

Published word-norm datasets disagree on rating scales, so every source
is first mapped onto one canonical scale per dimension (1..9 for valence
and arousal, 1..5 for the five discrete emotions, 1..7 for the
lexico-semantic norms).  Sources are then merged per surface word by the
median across sources, and finally the surface words are collapsed onto
normalization keys (stems or lemmas), averaging whatever collides.

Two input shapes are supported: a canonical long format (one row per
word and dimension, scale declared inline) and arbitrary published
layouts adapted through a small descriptor that names the word column
and the mean/sd columns per dimension.
"""

from __future__ import annotations

import csv
import json
import logging
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .corpus import DEFAULT_CATALOG, AnnotationSet, Corpus, FeatureCatalog, subset_by_tag
from .textnorm import NormalizationConfig, lemmatize, normalize, stem

__all__ = [
    "CANONICAL_SCALES",
    "CoverageRow",
    "DIMENSIONS",
    "LexiconFormatError",
    "MergedLexicon",
    "SourceLexicon",
    "coverage_report",
    "load_lexicon",
    "merge_lexicons",
    "missing_word_report",
    "rescale_value",
    "word_count_report",
]

logger = logging.getLogger(__name__)

CANONICAL_SCALES: dict[str, tuple[float, float]] = {
    "valence": (1.0, 9.0),
    "arousal": (1.0, 9.0),
    "happiness": (1.0, 5.0),
    "anger": (1.0, 5.0),
    "sadness": (1.0, 5.0),
    "fear": (1.0, 5.0),
    "disgust": (1.0, 5.0),
    "concreteness": (1.0, 7.0),
    "imageability": (1.0, 7.0),
    "context_availability": (1.0, 7.0),
}

DIMENSIONS: tuple[str, ...] = tuple(CANONICAL_SCALES)


class LexiconFormatError(ValueError):
    """Malformed lexicon file or descriptor (coordinates in the message)."""


@dataclass(frozen=True)
class SourceLexicon:
    """One published lexicon on its native scales.

    ``entries`` maps surface word to a per-dimension (mean, sd) pair; sd
    may be None when the source does not publish it.  ``scales`` holds
    the declared native range per dimension.
    """

    source_id: str
    scales: dict[str, tuple[float, float]]
    entries: dict[str, dict[str, tuple[float, float | None]]]

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class MergedLexicon:
    """Sources fused onto canonical scales and keyed by normalized form."""

    mode: str
    source_ids: tuple[str, ...]
    entries: dict[str, dict[str, tuple[float, float | None]]]

    def lookup(self, key: str) -> dict[str, tuple[float, float | None]] | None:
        return self.entries.get(key)

    def __contains__(self, key: str) -> bool:
        return key in self.entries

    def __len__(self) -> int:
        return len(self.entries)


def rescale_value(
    value: float,
    from_scale: tuple[float, float],
    to_scale: tuple[float, float],
) -> float:
    """Affinely map a value between two declared scales.

    Equal scales pass the value through untouched so canonical-scale
    sources stay bit-identical across a merge.
    """
    lo, hi = from_scale
    if hi <= lo:
        raise ValueError(f"degenerate scale ({lo}, {hi})")
    new_lo, new_hi = to_scale
    if (lo, hi) == (new_lo, new_hi):
        return value
    return new_lo + (value - lo) * (new_hi - new_lo) / (hi - lo)


def _rescale_sd(sd: float | None, from_scale, to_scale) -> float | None:
    if sd is None:
        return None
    lo, hi = from_scale
    new_lo, new_hi = to_scale
    return sd * (new_hi - new_lo) / (hi - lo)


def _parse_float(cell: str, where: str) -> float:
    try:
        return float(cell)
    except ValueError:
        raise LexiconFormatError(f"{where}: not a number: {cell!r}") from None


def _finish_source(
    source_id: str,
    scales: dict[str, tuple[float, float]],
    raw: dict[str, dict[str, list[tuple[float, float | None]]]],
) -> SourceLexicon:
    """Collapse duplicate rows (same word and dimension) by averaging."""
    entries: dict[str, dict[str, tuple[float, float | None]]] = {}
    n_dupes = 0
    for word, dims in raw.items():
        out: dict[str, tuple[float, float | None]] = {}
        for dim, pairs in dims.items():
            if len(pairs) > 1:
                n_dupes += 1
            mean = sum(p[0] for p in pairs) / len(pairs)
            sds = [p[1] for p in pairs if p[1] is not None]
            sd = sum(sds) / len(sds) if sds else None
            out[dim] = (mean, sd)
        entries[word] = out
    if n_dupes:
        logger.info("%s: averaged %d duplicate word/dimension rows", source_id, n_dupes)
    return SourceLexicon(source_id=source_id, scales=scales, entries=entries)


def _load_canonical(path: Path, source_id: str) -> SourceLexicon:
    with path.open(encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        required = {"word", "dimension", "mean", "sd", "scale_min", "scale_max"}
        have = set(reader.fieldnames or [])
        if not required <= have:
            raise LexiconFormatError(
                f"{path}: missing columns: {', '.join(sorted(required - have))}"
            )
        scales: dict[str, tuple[float, float]] = {}
        raw: dict[str, dict[str, list[tuple[float, float | None]]]] = {}
        for lineno, row in enumerate(reader, start=2):
            where = f"{path}: line {lineno}"
            word = (row["word"] or "").strip().lower()
            dim = (row["dimension"] or "").strip()
            if not word:
                raise LexiconFormatError(f"{where}: empty word")
            if dim not in CANONICAL_SCALES:
                raise LexiconFormatError(f"{where}: unknown dimension {dim!r}")
            lo = _parse_float(row["scale_min"], where)
            hi = _parse_float(row["scale_max"], where)
            if hi <= lo:
                raise LexiconFormatError(f"{where}: scale_min must be below scale_max")
            if dim in scales and scales[dim] != (lo, hi):
                raise LexiconFormatError(
                    f"{where}: conflicting scale for {dim}: {scales[dim]} vs {(lo, hi)}"
                )
            scales.setdefault(dim, (lo, hi))
            mean = _parse_float(row["mean"], where)
            if not lo <= mean <= hi:
                raise LexiconFormatError(
                    f"{where}: mean {mean} outside declared scale [{lo}, {hi}]"
                )
            sd_cell = (row["sd"] or "").strip()
            sd = None
            if sd_cell:
                sd = _parse_float(sd_cell, where)
                if sd < 0:
                    raise LexiconFormatError(f"{where}: negative sd {sd}")
            raw.setdefault(word, {}).setdefault(dim, []).append((mean, sd))
    if not raw:
        raise LexiconFormatError(f"{path}: no entries")
    return _finish_source(source_id, scales, raw)


def _load_descriptor(descriptor: Mapping | str | Path) -> tuple[Mapping, Path | None]:
    if isinstance(descriptor, (str, Path)):
        desc_path = Path(descriptor)
        try:
            loaded = json.loads(desc_path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise LexiconFormatError(f"cannot read descriptor {desc_path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise LexiconFormatError(f"{desc_path}: invalid JSON: {exc}") from exc
        return loaded, desc_path.parent
    return descriptor, None


def _load_described(path: Path, descriptor: Mapping, source_id: str) -> SourceLexicon:
    word_column = descriptor.get("word_column")
    dims_spec = descriptor.get("dimensions")
    if not word_column or not isinstance(dims_spec, Mapping) or not dims_spec:
        raise LexiconFormatError(
            f"descriptor for {source_id}: needs word_column and a dimensions mapping"
        )
    delimiter = descriptor.get("delimiter", ",")
    scales: dict[str, tuple[float, float]] = {}
    for dim, spec in dims_spec.items():
        if dim not in CANONICAL_SCALES:
            raise LexiconFormatError(f"descriptor for {source_id}: unknown dimension {dim!r}")
        scale = spec.get("scale")
        if (
            not isinstance(scale, Sequence)
            or len(scale) != 2
            or not all(isinstance(v, (int, float)) for v in scale)
        ):
            raise LexiconFormatError(
                f"descriptor for {source_id}: dimension {dim}: scale must be [low, high]"
            )
        lo, hi = float(scale[0]), float(scale[1])
        if hi <= lo:
            raise LexiconFormatError(
                f"descriptor for {source_id}: dimension {dim}: scale low must be below high"
            )
        if "mean" not in spec:
            raise LexiconFormatError(
                f"descriptor for {source_id}: dimension {dim}: needs a mean column"
            )
        scales[dim] = (lo, hi)

    with path.open(encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle, delimiter=delimiter)
        header = set(reader.fieldnames or [])
        needed = {word_column} | {spec["mean"] for spec in dims_spec.values()}
        needed |= {spec["sd"] for spec in dims_spec.values() if spec.get("sd")}
        missing = needed - header
        if missing:
            raise LexiconFormatError(
                f"{path}: columns named by descriptor are absent: {', '.join(sorted(missing))}"
            )
        raw: dict[str, dict[str, list[tuple[float, float | None]]]] = {}
        for lineno, row in enumerate(reader, start=2):
            where = f"{path}: line {lineno}"
            word = (row[word_column] or "").strip().lower()
            if not word:
                raise LexiconFormatError(f"{where}: empty word")
            for dim, spec in dims_spec.items():
                cell = (row[spec["mean"]] or "").strip()
                if not cell:
                    continue
                mean = _parse_float(cell, where)
                lo, hi = scales[dim]
                if not lo <= mean <= hi:
                    raise LexiconFormatError(
                        f"{where}: {dim} mean {mean} outside declared scale [{lo}, {hi}]"
                    )
                sd = None
                sd_col = spec.get("sd")
                if sd_col:
                    sd_cell = (row[sd_col] or "").strip()
                    if sd_cell:
                        sd = _parse_float(sd_cell, where)
                        if sd < 0:
                            raise LexiconFormatError(f"{where}: negative sd {sd}")
                raw.setdefault(word, {}).setdefault(dim, []).append((mean, sd))
    if not raw:
        raise LexiconFormatError(f"{path}: no entries")
    return _finish_source(source_id, scales, raw)


def load_lexicon(
    path: str | Path,
    descriptor: Mapping | str | Path | None = None,
    source_id: str | None = None,
) -> SourceLexicon:
    """Load one lexicon file.

    Without a descriptor the file must be in the canonical long format
    (columns word, dimension, mean, sd, scale_min, scale_max).  With a
    descriptor (mapping or path to a JSON file) the named columns of the
    published layout are read instead.  The source id defaults to the
    descriptor's, or the file stem.
    """
    path = Path(path)
    if not path.exists():
        raise LexiconFormatError(f"lexicon file not found: {path}")
    if descriptor is None:
        return _load_canonical(path, source_id or path.stem)
    desc, _ = _load_descriptor(descriptor)
    sid = source_id or desc.get("source_id") or path.stem
    return _load_described(path, desc, sid)


def _median(values: list[float]) -> float:
    """Median with the even-count convention: mean of the two middle values."""
    return statistics.median(values)


def _normalize_key(word: str, config: NormalizationConfig) -> str:
    if config.mode == "raw":
        return word
    if config.mode == "stem":
        return stem(word)
    assert config.lemma_table is not None
    return lemmatize(word, config.lemma_table)


def merge_lexicons(
    sources: Sequence[SourceLexicon], config: NormalizationConfig
) -> MergedLexicon:
    """Fuse sources onto canonical scales, then onto normalization keys.

    Per surface word and dimension the merged value is the median of the
    rescaled source values (mean of the two middle ones when the count
    is even); standard deviations are combined the same way over the
    sources that publish them.  Surface words whose normalized keys
    collide are averaged per dimension.
    """
    if not sources:
        raise ValueError("need at least one source lexicon")
    ids = [s.source_id for s in sources]
    if len(set(ids)) != len(ids):
        raise ValueError("source ids are not unique")

    by_surface: dict[str, dict[str, tuple[list[float], list[float]]]] = {}
    for source in sources:
        for word, dims in source.entries.items():
            slot = by_surface.setdefault(word, {})
            for dim, (mean, sd) in dims.items():
                native = source.scales[dim]
                canonical = CANONICAL_SCALES[dim]
                means, sds = slot.setdefault(dim, ([], []))
                means.append(rescale_value(mean, native, canonical))
                rescaled_sd = _rescale_sd(sd, native, canonical)
                if rescaled_sd is not None:
                    sds.append(rescaled_sd)

    by_key: dict[str, dict[str, tuple[list[float], list[float]]]] = {}
    n_collisions = 0
    for word in sorted(by_surface):
        key = _normalize_key(word, config)
        slot = by_key.setdefault(key, {})
        if slot:
            n_collisions += 1
        for dim, (means, sds) in by_surface[word].items():
            key_means, key_sds = slot.setdefault(dim, ([], []))
            key_means.append(_median(means))
            if sds:
                key_sds.append(_median(sds))
    if n_collisions:
        logger.info(
            "merge: %d surface words collapsed onto existing keys (%s mode)",
            n_collisions,
            config.mode,
        )

    entries: dict[str, dict[str, tuple[float, float | None]]] = {}
    for key, dims in by_key.items():
        entry: dict[str, tuple[float, float | None]] = {}
        for dim, (means, sds) in dims.items():
            mean = sum(means) / len(means)
            sd = sum(sds) / len(sds) if sds else None
            entry[dim] = (mean, sd)
        entries[key] = entry
    return MergedLexicon(mode=config.mode, source_ids=tuple(ids), entries=entries)


@dataclass(frozen=True)
class CoverageRow:
    """Coverage of one corpus category's distinct keys."""

    category: str
    n_keys: int
    fraction_merged: float
    per_source: dict[str, float]


def _keys_for_sonnets(
    corpus: Corpus, sonnet_ids: Sequence[str], config: NormalizationConfig
) -> set[str]:
    keys: set[str] = set()
    for sid in sonnet_ids:
        sonnet = corpus.get(sid)
        if sonnet.text is None:
            raise ValueError(f"sonnet {sid} was loaded without text")
        keys.update(tok.normalized for tok in normalize(sonnet.text, config))
    return keys


def _categories(
    corpus: Corpus,
    median: AnnotationSet | None,
    catalog: FeatureCatalog,
) -> list[tuple[str, tuple[str, ...]]]:
    cats: list[tuple[str, tuple[str, ...]]] = [("all", corpus.sonnet_ids)]
    if median is not None:
        for tag in catalog.psychological:
            cats.append((tag, subset_by_tag(median, tag, catalog)[0]))
    return cats


def coverage_report(
    corpus: Corpus,
    sources: Sequence[SourceLexicon],
    merged: MergedLexicon,
    config: NormalizationConfig,
    median: AnnotationSet | None = None,
    catalog: FeatureCatalog = DEFAULT_CATALOG,
) -> list[CoverageRow]:
    """Fraction of distinct corpus keys found in the merged lexicon.

    One row for the whole corpus and, when a median annotation set is
    given, one per psychological tag (over its tagged sonnets only).
    Per-source fractions check the same keys against each source's words
    normalized under the same mode.
    """
    source_keys = {
        s.source_id: {_normalize_key(w, config) for w in s.entries} for s in sources
    }
    rows = []
    for category, ids in _categories(corpus, median, catalog):
        keys = _keys_for_sonnets(corpus, ids, config)
        if not keys:
            rows.append(CoverageRow(category, 0, 0.0, {s: 0.0 for s in source_keys}))
            continue
        hit = sum(1 for k in keys if k in merged)
        per_source = {
            sid: sum(1 for k in keys if k in sk) / len(keys)
            for sid, sk in source_keys.items()
        }
        rows.append(
            CoverageRow(
                category=category,
                n_keys=len(keys),
                fraction_merged=hit / len(keys),
                per_source=per_source,
            )
        )
    return rows


@dataclass(frozen=True)
class WordCountRow:
    """Distinct-key counts per normalization mode for one category."""

    category: str
    counts: dict[str, int | None]


def word_count_report(
    corpus: Corpus,
    config: NormalizationConfig,
    median: AnnotationSet | None = None,
    catalog: FeatureCatalog = DEFAULT_CATALOG,
) -> list[WordCountRow]:
    """Distinct keys per category under raw, stem, and lemma modes.

    The lemma column is None when no lemma table is configured.  The
    stopword list of the supplied config applies to all three modes.
    """
    configs: dict[str, NormalizationConfig | None] = {
        "raw": NormalizationConfig(
            mode="raw",
            stopwords=config.stopwords,
            lowercase=config.lowercase,
            strip_punctuation=config.strip_punctuation,
        ),
        "stem": NormalizationConfig(
            mode="stem",
            stopwords=config.stopwords,
            lowercase=config.lowercase,
            strip_punctuation=config.strip_punctuation,
        ),
        "lemma": (
            NormalizationConfig(
                mode="lemma",
                stopwords=config.stopwords,
                lemma_table=config.lemma_table,
                lowercase=config.lowercase,
                strip_punctuation=config.strip_punctuation,
            )
            if config.lemma_table
            else None
        ),
    }
    rows = []
    for category, ids in _categories(corpus, median, catalog):
        counts: dict[str, int | None] = {}
        for mode, mode_config in configs.items():
            if mode_config is None:
                counts[mode] = None
            else:
                counts[mode] = len(_keys_for_sonnets(corpus, ids, mode_config))
        rows.append(WordCountRow(category=category, counts=counts))
    return rows


def missing_word_report(
    corpus: Corpus,
    merged: MergedLexicon,
    config: NormalizationConfig,
) -> list[tuple[str, int]]:
    """Corpus keys absent from the merged lexicon, with occurrence counts.

    Counts are token occurrences (not distinct sonnets), stopwords
    already removed by normalization.  Sorted by count descending, then
    alphabetically.
    """
    counts: dict[str, int] = {}
    for sonnet in corpus.sonnets:
        if sonnet.text is None:
            raise ValueError(f"sonnet {sonnet.sonnet_id} was loaded without text")
        for tok in normalize(sonnet.text, config):
            if tok.normalized not in merged:
                counts[tok.normalized] = counts.get(tok.normalized, 0) + 1
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
