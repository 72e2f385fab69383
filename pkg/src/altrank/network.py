"""Journal-vs-journal comparison networks built from shared authors.

Two journals are compared only through authors who mention papers in both.
Each such author is one "game" between the journals, scored by the
author's mention counts. Three edge weightings are supported:

* ``S``: mean count for journal j over the shared authors,
* ``P``: fraction of shared authors mentioning j strictly more than l,
* ``Q``: like ``P`` but a tie awards half a win to each side.

Everything is computed with sparse products over the binary incidence
matrix, so cost scales with the number of comparable pairs rather than
with journals squared.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import IO, Iterator

import numpy as np
from scipy import sparse

from .ingest import MentionProfile

KINDS = ("S", "P", "Q")


@dataclass(frozen=True, eq=False)
class ComparableIndex:
    """Which authors can compare which journal pairs.

    ``sizes[j, l]`` is the number of authors mentioning both j and l
    (off-diagonal only, pairs below ``min_authors`` removed).
    """

    journals: tuple[str, ...]
    incidence: sparse.csr_matrix
    sizes: sparse.csr_matrix
    min_authors: int = 1

    def authors(self, j: int, l: int) -> np.ndarray:
        """Sorted author indices shared by journals ``j`` and ``l``."""
        if j == l or self.sizes[j, l] == 0:
            return np.zeros(0, dtype=np.int64)
        row_j = self.incidence.indices[self.incidence.indptr[j]:self.incidence.indptr[j + 1]]
        row_l = self.incidence.indices[self.incidence.indptr[l]:self.incidence.indptr[l + 1]]
        return np.intersect1d(row_j, row_l)

    def pairs(self) -> Iterator[tuple[int, int]]:
        """Unordered comparable pairs ``(j, l)`` with ``j < l``."""
        coo = sparse.triu(self.sizes, k=1).tocoo()
        order = np.lexsort((coo.col, coo.row))
        for j, l in zip(coo.row[order], coo.col[order]):
            yield int(j), int(l)

    @property
    def n_pairs(self) -> int:
        return int(sparse.triu(self.sizes, k=1).nnz)


@dataclass(frozen=True, eq=False)
class JournalNetwork:
    """Directed weighted journal network.

    For ``S`` and ``Q`` every comparable ordered pair is a stored entry,
    possibly with weight 0 (a Q sweep); ``P`` stores only positive weights.
    ``opponents[j]`` is the number of journals j can be compared with.
    """

    kind: str
    journals: tuple[str, ...]
    weights: sparse.csr_matrix
    opponents: np.ndarray
    comparisons: sparse.csr_matrix

    @property
    def n(self) -> int:
        return len(self.journals)

    def dense(self) -> np.ndarray:
        return self.weights.toarray()

    def scaled(self, factor: float) -> JournalNetwork:
        return JournalNetwork(self.kind, self.journals, (self.weights * factor).tocsr(),
                              self.opponents, self.comparisons)


def comparable_authors(profile: MentionProfile, min_authors: int = 1) -> ComparableIndex:
    if min_authors < 1:
        raise ValueError("min_authors must be >= 1")
    incidence = (profile.counts > 0).astype(np.int64).tocsr()
    sizes = (incidence @ incidence.T).tocsr()
    sizes.setdiag(0)
    if min_authors > 1:
        sizes.data[sizes.data < min_authors] = 0
    sizes.eliminate_zeros()
    sizes.sort_indices()
    return ComparableIndex(profile.journals, incidence, sizes, min_authors)


def _on_support(values: sparse.spmatrix, sizes: sparse.csr_matrix,
                keep_zeros: bool = True) -> sparse.csr_matrix:
    """``values / sizes`` on every comparable pair.

    With ``keep_zeros`` a comparable pair whose value is 0 stays a stored
    entry, so the sparsity pattern equals the comparability pattern.
    """
    pattern = sizes.tocoo()
    if pattern.nnz == 0:
        return sparse.csr_matrix(sizes.shape, dtype=np.float64)
    numer = np.asarray(sparse.csr_matrix(values)[pattern.row, pattern.col],
                       dtype=np.float64).ravel()
    out = sparse.csr_matrix(
        (numer / pattern.data.astype(np.float64), (pattern.row, pattern.col)),
        shape=sizes.shape,
    )
    if not keep_zeros:
        out.eliminate_zeros()
    out.sort_indices()
    return out


def _network(kind, profile, index, weights) -> JournalNetwork:
    opponents = np.diff(index.sizes.indptr).astype(np.int64)
    return JournalNetwork(kind, profile.journals, weights, opponents, index.sizes)


def build_S(profile: MentionProfile, index: ComparableIndex) -> JournalNetwork:
    """Mean mention count of journal j among authors who also mention l."""
    totals = profile.counts.astype(np.int64) @ index.incidence.T
    return _network("S", profile, index, _on_support(totals, index.sizes))


def _win_tie_counts(profile: MentionProfile):
    """Integer matrices of strict wins and ties over shared authors.

    ``wins[j, l]`` counts authors with ``0 < J[l, a] < J[j, a]`` and
    ``ties[j, l]`` authors with ``J[j, a] == J[l, a] > 0``; both are summed
    level by level over the distinct count values present.
    """
    counts = profile.counts
    n = counts.shape[0]
    wins = sparse.csr_matrix((n, n), dtype=np.int64)
    ties = sparse.csr_matrix((n, n), dtype=np.int64)
    for t in np.unique(counts.data):
        at_level = (counts == t).astype(np.int64)
        above = (counts > t).astype(np.int64)
        wins = wins + above @ at_level.T
        ties = ties + at_level @ at_level.T
    return wins.tocsr(), ties.tocsr()


def build_P(profile: MentionProfile, index: ComparableIndex) -> JournalNetwork:
    """Fraction of shared authors who mention j strictly more often than l."""
    wins, _ = _win_tie_counts(profile)
    return _network("P", profile, index, _on_support(wins, index.sizes, keep_zeros=False))


def build_Q(profile: MentionProfile, index: ComparableIndex) -> JournalNetwork:
    """Like :func:`build_P`, with ties shared equally."""
    wins, ties = _win_tie_counts(profile)
    score = wins.astype(np.float64) + 0.5 * ties.astype(np.float64)
    return _network("Q", profile, index, _on_support(score, index.sizes))


BUILDERS = {"S": build_S, "P": build_P, "Q": build_Q}


def build_network(profile: MentionProfile, kind: str, index: ComparableIndex | None = None,
                  min_authors: int = 1) -> JournalNetwork:
    kind = kind.upper()
    if kind not in BUILDERS:
        raise ValueError(f"unknown network kind {kind!r}")
    if index is None:
        index = comparable_authors(profile, min_authors)
    return BUILDERS[kind](profile, index)


def write_network(net: JournalNetwork, fh: IO[str]) -> None:
    """Dump edges as ``j,l,weight`` rows after a ``# kind=<K>`` header line."""
    fh.write(f"# kind={net.kind}\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(("j", "l", "weight"))
    coo = net.weights.tocoo()
    order = np.lexsort((coo.col, coo.row))
    for r, c, w in zip(coo.row[order], coo.col[order], coo.data[order]):
        writer.writerow((net.journals[r], net.journals[c], repr(float(w))))
