"""Normalization pipeline for Spanish verse.

Turns raw sonnet text into a list of positioned tokens under one of
three key modes: the surface word itself (raw), its Snowball stem, or a
lemma looked up in a user-supplied table.  Stopword removal happens
before the mode transform, and token positions are recomputed over the
surviving tokens so later position-based statistics see a gap-free
sequence.
"""

from __future__ import annotations

import csv
import functools
import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import snowball_es

__all__ = [
    "MODES",
    "NormalizationConfig",
    "Token",
    "default_stopwords",
    "lemmatize",
    "load_lemma_table",
    "load_stopwords",
    "normalize",
    "remove_stopwords",
    "stem",
    "tokenize",
]

logger = logging.getLogger(__name__)

MODES = ("raw", "stem", "lemma")

_stem_cached = functools.lru_cache(maxsize=None)(snowball_es.stem)


def stem(word: str) -> str:
    """Snowball stem of one word (memoized; corpora repeat words a lot)."""
    return _stem_cached(word)


@functools.lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    """The bundled Snowball Spanish stopword list."""
    text = resources.files(__package__).joinpath("data/stopwords_es.txt").read_text("utf-8")
    return frozenset(text.split())


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a stopword list, one word per line, blank lines ignored."""
    words = Path(path).read_text(encoding="utf-8").split()
    return frozenset(w.lower() for w in words)


def load_lemma_table(path: str | Path) -> dict[str, str]:
    """Read a surface-to-lemma table from two-column delimited text.

    The delimiter is a tab when the first line contains one, otherwise a
    comma.  Surfaces and lemmas are lowercased; duplicate surfaces keep
    the first entry.
    """
    path = Path(path)
    raw = path.read_text(encoding="utf-8").splitlines()
    rows = [line for line in raw if line.strip()]
    if not rows:
        raise ValueError(f"{path}: lemma table is empty")
    delim = "\t" if "\t" in rows[0] else ","
    table: dict[str, str] = {}
    for lineno, row in enumerate(csv.reader(rows, delimiter=delim), start=1):
        if len(row) < 2:
            raise ValueError(f"{path}: line {lineno}: expected two columns")
        surface = row[0].strip().lower()
        lemma = row[1].strip().lower()
        if not surface or not lemma:
            raise ValueError(f"{path}: line {lineno}: empty surface or lemma")
        table.setdefault(surface, lemma)
    return table


@dataclass(frozen=True)
class NormalizationConfig:
    """How text becomes lookup keys.

    ``mode`` selects the key transform.  Lemma mode needs a non-empty
    ``lemma_table``; the other modes ignore it.  An empty stopword set is
    allowed and simply keeps every token.
    """

    mode: str = "stem"
    stopwords: frozenset[str] = field(default_factory=default_stopwords)
    lemma_table: dict[str, str] | None = None
    lowercase: bool = True
    strip_punctuation: bool = True

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.mode == "lemma" and not self.lemma_table:
            raise ValueError("lemma mode requires a non-empty lemma table")


@dataclass(frozen=True)
class Token:
    """A surviving token: surface form, 1-based position, and its key."""

    surface: str
    position: int
    normalized: str


def tokenize(text: str, lowercase: bool = True, strip_punctuation: bool = True) -> list[str]:
    """Split text on whitespace and trim punctuation off token edges.

    Trimming removes leading and trailing non-alphanumeric characters
    (quotes, dashes, inverted exclamation marks and the like) while
    keeping interior ones, so hyphenated forms survive.  Diacritics are
    preserved.  Tokens that trim away to nothing are dropped.
    """
    tokens = []
    for chunk in text.split():
        if strip_punctuation:
            start, end = 0, len(chunk)
            while start < end and not chunk[start].isalnum():
                start += 1
            while end > start and not chunk[end - 1].isalnum():
                end -= 1
            chunk = chunk[start:end]
        if not chunk:
            continue
        tokens.append(chunk.lower() if lowercase else chunk)
    return tokens


def remove_stopwords(tokens: list[str], stopwords: frozenset[str]) -> list[Token]:
    """Drop stopwords and renumber the survivors from position 1."""
    survivors = []
    for tok in tokens:
        if tok in stopwords:
            continue
        survivors.append(Token(surface=tok, position=len(survivors) + 1, normalized=tok))
    return survivors


def lemmatize(word: str, table: dict[str, str]) -> str:
    """Look a word up in the lemma table, falling back to the word itself."""
    lemma = table.get(word)
    if lemma is None:
        logger.debug("no lemma for %r, keeping surface form", word)
        return word
    return lemma


def normalize(text: str, config: NormalizationConfig) -> list[Token]:
    """Full pipeline: tokenize, drop stopwords, apply the key transform."""
    tokens = tokenize(text, lowercase=config.lowercase, strip_punctuation=config.strip_punctuation)
    survivors = remove_stopwords(tokens, config.stopwords)
    if config.mode == "raw":
        return survivors
    if config.mode == "stem":
        return [
            Token(t.surface, t.position, stem(t.surface)) for t in survivors
        ]
    assert config.lemma_table is not None
    return [
        Token(t.surface, t.position, lemmatize(t.surface, config.lemma_table))
        for t in survivors
    ]
