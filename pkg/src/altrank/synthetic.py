"""Synthetic mention corpora with a planted journal quality order."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Mapping

import numpy as np

from .errors import ConfigError
from .ingest import MentionRecord, write_mentions_csv

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

DEFAULT_SOURCES = {"twitter": 0.6, "facebook": 0.1, "google+": 0.05, "blogs": 0.1,
                   "news": 0.15}


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters of a synthetic corpus.

    Quality comes from ``quality`` when given, else from a geometric ladder
    with ``quality_ratio`` between neighbouring journals, else from a power
    law ``(rank + 1) ** -quality_exponent``. Journal ``J01`` is always the
    best. Author activity is Pareto distributed with tail index
    ``activity_exponent``.
    """

    journals: int = 20
    authors: int = 2000
    mentions: int = 100_000
    quality: tuple[float, ...] | None = None
    quality_ratio: float | None = 2.0
    quality_exponent: float | None = None
    activity_exponent: float = 1.5
    papers_per_journal: int = 200
    sources: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_SOURCES))

    def __post_init__(self):
        if self.journals < 1 or self.authors < 1 or self.mentions < 0:
            raise ConfigError("journals and authors must be >= 1, mentions >= 0")
        if self.papers_per_journal < 1:
            raise ConfigError("papers_per_journal must be >= 1")
        if self.activity_exponent <= 0:
            raise ConfigError("activity_exponent must be positive")
        q = self.qualities()
        if q.size != self.journals or not np.all(q > 0) or not np.all(np.isfinite(q)):
            raise ConfigError("need one finite positive quality per journal")
        if not self.sources or any(p <= 0 for p in self.sources.values()):
            raise ConfigError("source mix must be non-empty with positive rates")

    def qualities(self) -> np.ndarray:
        if self.quality is not None:
            return np.asarray(self.quality, dtype=np.float64)
        rank = np.arange(self.journals, dtype=np.float64)
        if self.quality_exponent is not None:
            return (rank + 1.0) ** -self.quality_exponent
        ratio = 2.0 if self.quality_ratio is None else self.quality_ratio
        if ratio <= 0:
            raise ConfigError("quality_ratio must be positive")
        # Normalised so the worst journal has quality 1.
        return ratio ** (self.journals - 1 - rank)

    def journal_ids(self) -> list[str]:
        width = len(str(self.journals))
        return [f"J{i + 1:0{width}d}" for i in range(self.journals)]


def load_spec(path: str | Path) -> SyntheticSpec:
    with open(path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    known = set(SyntheticSpec.__dataclass_fields__)
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    if "quality" in data:
        data["quality"] = tuple(data["quality"])
    try:
        return SyntheticSpec(**data)
    except TypeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def generate_synthetic(spec: SyntheticSpec, seed: int) -> list[MentionRecord]:
    """Draw a corpus: heavy-tailed author activity, journals chosen by quality."""
    rng = np.random.default_rng(seed)
    activity = rng.pareto(spec.activity_exponent, size=spec.authors) + 1.0
    per_author = rng.multinomial(spec.mentions, activity / activity.sum())
    author_of = np.repeat(np.arange(spec.authors), per_author)

    q = spec.qualities()
    journal_of = rng.choice(spec.journals, size=spec.mentions, p=q / q.sum())
    paper_of = rng.integers(spec.papers_per_journal, size=spec.mentions)
    source_names = sorted(spec.sources)
    rates = np.array([spec.sources[s] for s in source_names], dtype=np.float64)
    source_of = rng.choice(len(source_names), size=spec.mentions, p=rates / rates.sum())

    journal_ids = spec.journal_ids()
    a_width = len(str(spec.authors))
    p_width = len(str(spec.papers_per_journal))
    author_ids = [f"A{i + 1:0{a_width}d}" for i in range(spec.authors)]
    return [
        MentionRecord(author_ids[a], source_names[s],
                      f"{journal_ids[j]}-P{p + 1:0{p_width}d}", journal_ids[j])
        for a, j, p, s in zip(author_of.tolist(), journal_of.tolist(), paper_of.tolist(),
                              source_of.tolist())
    ]


def write_synthetic(spec: SyntheticSpec, seed: int, fh: IO[str]) -> int:
    records = generate_synthetic(spec, seed)
    write_mentions_csv(records, fh)
    return len(records)
