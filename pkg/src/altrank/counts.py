"""Count-based journal ratings: bc, sbc, nsbc, ca and pc."""

from __future__ import annotations

import logging

import numpy as np

from .errors import MissingWeightError
from .ingest import SourceTaxonomy, MentionProfile
from .rating import RatingVector

log = logging.getLogger(__name__)

_warned_sources: set[str] = set()


def blind_count(profile: MentionProfile, scheme: str = "bc") -> RatingVector:
    """Every mention adds one to its journal."""
    scores = np.asarray(profile.counts.sum(axis=1), dtype=np.float64).ravel()
    return RatingVector(scheme, profile.journals, scores)


def class_count(profile: MentionProfile, taxonomy: SourceTaxonomy, cls: str) -> RatingVector:
    """Blind count over social (``sbc``) or non-social (``nsbc``) sources only."""
    chosen = taxonomy.sources_in(cls, profile.sources)
    label = "sbc" if cls == "social" else "nsbc"
    return blind_count(profile.restrict(chosen), scheme=label)


def _source_weights(profile: MentionProfile, taxonomy: SourceTaxonomy) -> np.ndarray:
    weights = np.empty(len(profile.sources))
    for i, source in enumerate(profile.sources):
        w = taxonomy.weight(source)
        if w is None:
            raise MissingWeightError(source)
        if source not in taxonomy.weights and source not in _warned_sources:
            _warned_sources.add(source)
            log.info("source %r has no configured weight; using 'other' (%g)", source, w)
        weights[i] = w
    return weights


def weighted_count(profile: MentionProfile, taxonomy: SourceTaxonomy) -> RatingVector:
    """Sum of source weights over each journal's mentions (``ca``)."""
    scores = np.zeros(len(profile.journals))
    if profile.n_records:
        per_record = _source_weights(profile, taxonomy)[profile.record_source]
        scores = np.bincount(profile.record_journal, weights=per_record,
                             minlength=len(profile.journals)).astype(np.float64)
    return RatingVector("ca", profile.journals, scores)


def paper_count(profile: MentionProfile, mode: str = "distinct") -> RatingVector:
    """Distinct mentioned papers per journal (``pc``).

    ``mode="mentions"`` switches to the alternative reading, the total
    number of paper mentions, which coincides with the blind count.
    """
    if mode == "mentions":
        return blind_count(profile, scheme="pc")
    if mode != "distinct":
        raise ValueError(f"unknown pc mode {mode!r}")
    index = {j: i for i, j in enumerate(profile.journals)}
    scores = np.zeros(len(profile.journals))
    for journal, _paper in profile.per_paper:
        scores[index[journal]] += 1
    return RatingVector("pc", profile.journals, scores)
