"""Reading mention records and aggregating them into journal x author counts."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import sys
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO

import numpy as np
from scipy import sparse

from .errors import (
    ConfigError,
    DuplicateJournalError,
    InconsistentJournalError,
    MalformedLineError,
    NonNumericScoreError,
)

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

log = logging.getLogger(__name__)

REQUIRED_FIELDS = ("author_id", "source", "paper_id", "journal_id")
OTHER = "other"

DEFAULT_SOCIAL = frozenset({"twitter", "facebook", "google+"})
# Artifact defaults only; override through a taxonomy file.
DEFAULT_WEIGHTS = {
    "news": 8.0,
    "blogs": 5.0,
    "twitter": 1.0,
    "facebook": 0.25,
    "google+": 1.0,
    OTHER: 1.0,
}


@dataclass(frozen=True)
class MentionRecord:
    author_id: str
    source: str
    paper_id: str
    journal_id: str
    timestamp: str | None = None


@dataclass(frozen=True)
class SourceTaxonomy:
    """Source weights (for ``ca``) and the social / non-social split.

    Any source not listed in ``social`` is non-social. Sources without a
    weight fall back to the ``"other"`` weight when one is configured.
    """

    weights: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    social: frozenset[str] = DEFAULT_SOCIAL

    def __post_init__(self):
        object.__setattr__(self, "social", frozenset(self.social))
        object.__setattr__(self, "weights", {k: float(v) for k, v in self.weights.items()})
        for source, w in self.weights.items():
            if not math.isfinite(w) or w < 0:
                raise ConfigError(f"weight for {source!r} must be finite and >= 0, got {w}")

    def is_social(self, source: str) -> bool:
        return source in self.social

    def sources_in(self, cls: str, sources: Iterable[str]) -> set[str]:
        """The subset of ``sources`` belonging to class ``social`` or ``nonsocial``."""
        if cls not in ("social", "nonsocial"):
            raise ValueError(f"unknown source class {cls!r}")
        want = cls == "social"
        return {s for s in sources if self.is_social(s) == want}

    def weight(self, source: str) -> float | None:
        if source in self.weights:
            return self.weights[source]
        return self.weights.get(OTHER)


def load_taxonomy(path: str | Path) -> SourceTaxonomy:
    """Load a taxonomy from a TOML file.

    The file holds ``social = [...]`` and one ``weights.<source> = <number>``
    entry per source, e.g.::

        social = ["twitter", "facebook"]
        weights.news = 8
        weights.other = 1
    """
    with open(path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    unknown = set(data) - {"social", "weights"}
    if unknown:
        raise ConfigError(f"{path}: unknown taxonomy keys {sorted(unknown)}")
    social = data.get("social", sorted(DEFAULT_SOCIAL))
    weights = data.get("weights", DEFAULT_WEIGHTS)
    if not isinstance(social, list) or not all(isinstance(s, str) for s in social):
        raise ConfigError(f"{path}: 'social' must be a list of source labels")
    if not isinstance(weights, dict):
        raise ConfigError(f"{path}: 'weights' must be a table")
    try:
        weights = {str(k): float(v) for k, v in weights.items()}
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: non-numeric weight ({exc})") from exc
    return SourceTaxonomy(weights=weights, social=frozenset(social))


@dataclass(frozen=True, eq=False)
class MentionProfile:
    """Per-journal, per-author mention counts.

    ``counts[j, a]`` is the number of mentions by author ``authors[a]`` of
    papers published in journal ``journals[j]``. Journals and authors are
    sorted lexicographically. The record-level index arrays are kept so the
    profile can be sliced by source.
    """

    journals: tuple[str, ...]
    authors: tuple[str, ...]
    counts: sparse.csr_matrix
    per_paper: Mapping[tuple[str, str], int]
    sources: tuple[str, ...]
    record_journal: np.ndarray
    record_author: np.ndarray
    record_paper: np.ndarray
    record_source: np.ndarray
    papers: tuple[str, ...]

    @property
    def n_records(self) -> int:
        return int(self.record_journal.size)

    def restrict(self, sources: Iterable[str]) -> MentionProfile:
        """Profile over the same journals built only from mentions via ``sources``."""
        keep = set(sources)
        code = np.array([s in keep for s in self.sources], dtype=bool)
        mask = code[self.record_source] if self.record_source.size else np.zeros(0, dtype=bool)
        return _assemble(
            self.journals,
            [self.authors[i] for i in self.record_author[mask]],
            self.record_journal[mask],
            self.papers,
            self.record_paper[mask],
            self.sources,
            self.record_source[mask],
        )

    def same_as(self, other: MentionProfile) -> bool:
        return (
            self.journals == other.journals
            and self.authors == other.authors
            and self.counts.shape == other.counts.shape
            and (self.counts != other.counts).nnz == 0
            and dict(self.per_paper) == dict(other.per_paper)
        )


@dataclass(frozen=True)
class ExternalRating:
    name: str
    scores: Mapping[str, float]
    unmatched: tuple[str, ...] = ()


def _open_text(stream: IO[str] | str | Path) -> IO[str]:
    if isinstance(stream, (str, Path)):
        return open(stream, encoding="utf-8", newline="")
    return stream


def infer_format(path: str | Path) -> str:
    suffix = Path(path).suffix.lower()
    return "jsonl" if suffix in (".jsonl", ".ndjson", ".json") else "csv"


def _check_fields(row: Mapping[str, object]) -> str | None:
    missing = [k for k in REQUIRED_FIELDS if k not in row or row[k] is None]
    if missing:
        return f"missing field(s) {', '.join(missing)}"
    for k in REQUIRED_FIELDS:
        v = row[k]
        if not isinstance(v, str):
            return f"field {k} must be a string"
        if not v.strip():
            return f"empty {k}"
    return None


def _iter_csv(fh: IO[str]):
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        return
    header = [h.strip() for h in header]
    missing = [k for k in REQUIRED_FIELDS if k not in header]
    if missing:
        raise MalformedLineError([(1, f"header lacks {', '.join(missing)}")])
    width = len(header)
    for row in reader:
        lineno = reader.line_num
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != width:
            yield lineno, None, f"expected {width} fields, found {len(row)}"
            continue
        yield lineno, dict(zip(header, row)), None


def _iter_jsonl(fh: IO[str]):
    for lineno, line in enumerate(fh, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            yield lineno, None, f"invalid JSON ({exc.msg})"
            continue
        if not isinstance(obj, dict):
            yield lineno, None, "expected a JSON object"
            continue
        yield lineno, obj, None


def parse_mentions(
    stream: IO[str] | str | Path,
    fmt: str = "csv",
    *,
    report: list[tuple[int, str]] | None = None,
) -> list[MentionRecord]:
    """Parse mention records from CSV or JSON Lines.

    Malformed lines are collected with their line numbers. When ``report``
    is given they are appended to it and skipped; otherwise a
    :class:`MalformedLineError` listing all of them is raised after the
    whole input has been read. A paper seen under two journals raises
    :class:`InconsistentJournalError` immediately.
    """
    if fmt not in ("csv", "jsonl"):
        raise ValueError(f"unknown mention format {fmt!r}")
    fh = _open_text(stream)
    owned = fh is not stream
    problems: list[tuple[int, str]] = []
    records: list[MentionRecord] = []
    journal_of: dict[str, str] = {}
    try:
        rows = _iter_csv(fh) if fmt == "csv" else _iter_jsonl(fh)
        for lineno, row, err in rows:
            if err is None:
                err = _check_fields(row)
            if err is not None:
                problems.append((lineno, err))
                continue
            paper, journal = row["paper_id"], row["journal_id"]
            seen = journal_of.setdefault(paper, journal)
            if seen != journal:
                raise InconsistentJournalError(paper, seen, journal, lineno)
            ts = row.get("timestamp") or None
            records.append(
                MentionRecord(row["author_id"], row["source"], paper, journal,
                              ts if isinstance(ts, str) else None)
            )
    finally:
        if owned:
            fh.close()
    if problems:
        if report is None:
            raise MalformedLineError(problems, getattr(fh, "name", None))
        report.extend(problems)
    return records


def _assemble(journals, author_ids, rec_journal, papers, rec_paper, sources, rec_source,
              ) -> MentionProfile:
    authors = tuple(sorted(set(author_ids)))
    a_index = {a: i for i, a in enumerate(authors)}
    rec_author = np.fromiter((a_index[a] for a in author_ids), dtype=np.int64,
                             count=len(author_ids))
    rec_journal = np.asarray(rec_journal, dtype=np.int64)
    counts = sparse.csr_matrix(
        (np.ones(rec_journal.size, dtype=np.int64), (rec_journal, rec_author)),
        shape=(len(journals), len(authors)),
    )
    counts.sum_duplicates()
    counts.sort_indices()
    per_paper: dict[tuple[str, str], int] = {}
    if rec_journal.size:
        pairs, n = np.unique(np.stack([rec_journal, rec_paper]), axis=1, return_counts=True)
        for (j, p), c in zip(pairs.T, n):
            per_paper[(journals[j], papers[p])] = int(c)
    return MentionProfile(
        journals=tuple(journals),
        authors=authors,
        counts=counts,
        per_paper=per_paper,
        sources=tuple(sources),
        record_journal=rec_journal,
        record_author=rec_author,
        record_paper=np.asarray(rec_paper, dtype=np.int64),
        record_source=np.asarray(rec_source, dtype=np.int64),
        papers=tuple(papers),
    )


def build_profile(
    records: Iterable[MentionRecord],
    restrict: Iterable[str] | None = None,
    *,
    dedup: bool = False,
) -> MentionProfile:
    """Aggregate mention records into a :class:`MentionProfile`.

    Every mention counts, including repeats of the same paper by the same
    author, unless ``dedup`` is set. With ``restrict``, only mentions via
    those sources contribute; the journal list still covers every journal
    in ``records`` so that restricted profiles stay aligned.
    """
    records = list(records)
    journals = sorted({r.journal_id for r in records})
    papers = sorted({r.paper_id for r in records})
    sources = sorted({r.source for r in records})
    keep = None if restrict is None else set(restrict)
    if dedup:
        seen: set[tuple[str, str, str]] = set()
        unique = []
        for r in records:
            key = (r.author_id, r.paper_id, r.source)
            if key not in seen:
                seen.add(key)
                unique.append(r)
        records = unique
    if keep is not None:
        records = [r for r in records if r.source in keep]
    j_index = {j: i for i, j in enumerate(journals)}
    p_index = {p: i for i, p in enumerate(papers)}
    s_index = {s: i for i, s in enumerate(sources)}
    return _assemble(
        journals,
        [r.author_id for r in records],
        [j_index[r.journal_id] for r in records],
        papers,
        [p_index[r.paper_id] for r in records],
        sources,
        [s_index[r.source] for r in records],
    )


def load_external_ratings(
    stream: IO[str] | str | Path,
    name: str,
    corpus_journals: Iterable[str] | None = None,
) -> ExternalRating:
    """Read a ``journal_id,score`` CSV (header row optional)."""
    fh = _open_text(stream)
    owned = fh is not stream
    scores: dict[str, float] = {}
    try:
        for rowno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise MalformedLineError([(rowno, f"expected 2 fields, found {len(row)}")])
            journal, raw = row[0].strip(), row[1].strip()
            if rowno == 1 and journal == "journal_id" and raw == "score":
                continue
            try:
                value = float(raw)
            except ValueError:
                raise NonNumericScoreError(raw, rowno) from None
            if not math.isfinite(value):
                raise NonNumericScoreError(raw, rowno)
            if journal in scores:
                raise DuplicateJournalError(journal, rowno)
            scores[journal] = value
    finally:
        if owned:
            fh.close()
    unmatched: tuple[str, ...] = ()
    if corpus_journals is not None:
        known = set(corpus_journals)
        unmatched = tuple(sorted(j for j in scores if j not in known))
        if unmatched:
            log.warning("%s: %d of %d journal(s) not in the mention corpus",
                        name, len(unmatched), len(scores))
    return ExternalRating(name=name, scores=scores, unmatched=unmatched)


def write_mentions_csv(records: Iterable[MentionRecord], fh: IO[str]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(REQUIRED_FIELDS)
    for r in records:
        writer.writerow((r.author_id, r.source, r.paper_id, r.journal_id))


def parse_mentions_text(text: str, fmt: str = "csv") -> list[MentionRecord]:
    return parse_mentions(io.StringIO(text), fmt)
