"""Comparing rating schemes: correlation matrices, PCA and clustering."""

from __future__ import annotations

import csv
import math
import re
import warnings
from dataclasses import dataclass
from itertools import combinations
from typing import IO, Sequence

import numpy as np
from scipy.stats import kendalltau

from .errors import InsufficientOverlapError, ZeroVarianceWarning
from .rating import RatingVector, fractional_ranks

METHODS = ("pearson", "spearman", "kendall")
LINKAGES = ("single", "complete", "average")
MIN_OVERLAP = 3


@dataclass(frozen=True, eq=False)
class RatingEnsemble:
    """Several schemes scored over one journal list.

    ``scores[:, k]`` belongs to ``labels[k]``; ``mask[:, k]`` is True where
    that scheme has no score for the journal.
    """

    journals: tuple[str, ...]
    labels: tuple[str, ...]
    scores: np.ndarray
    mask: np.ndarray

    @classmethod
    def from_vectors(cls, vectors: Sequence[RatingVector]) -> RatingEnsemble:
        if not vectors:
            raise ValueError("an ensemble needs at least one rating vector")
        journals = vectors[0].journals
        for v in vectors[1:]:
            if v.journals != journals:
                raise ValueError(f"{v.scheme}: journal list differs from {vectors[0].scheme}")
        scores = np.column_stack([v.scores for v in vectors])
        return cls(journals, tuple(v.scheme for v in vectors), scores,
                   np.zeros_like(scores, dtype=bool))

    @classmethod
    def from_mappings(cls, journals: Sequence[str], named: Sequence[tuple[str, dict]]
                      ) -> RatingEnsemble:
        """Align ``(label, {journal: score})`` pairs to ``journals``, masking gaps."""
        journals = tuple(journals)
        scores = np.zeros((len(journals), len(named)))
        mask = np.ones_like(scores, dtype=bool)
        for k, (_, mapping) in enumerate(named):
            for i, j in enumerate(journals):
                if j in mapping:
                    scores[i, k] = mapping[j]
                    mask[i, k] = False
        return cls(journals, tuple(label for label, _ in named), scores, mask)

    def pair(self, a: int, b: int) -> tuple[np.ndarray, np.ndarray]:
        keep = ~(self.mask[:, a] | self.mask[:, b])
        return self.scores[keep, a], self.scores[keep, b]


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    labels: tuple[str, ...]
    values: np.ndarray
    method: str
    flags: tuple[tuple[str, str, str], ...] = ()

    def write_csv(self, fh: IO[str]) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow((self.method, *self.labels))
        for label, row in zip(self.labels, self.values):
            writer.writerow((label, *(_fmt(v) for v in row)))


def _fmt(value: float) -> str:
    return repr(float(value))


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - x.mean()
    yc = y - y.mean()
    sxx = float(xc @ xc)
    syy = float(yc @ yc)
    if sxx == 0.0 or syy == 0.0:
        return math.nan
    r = float(xc @ yc) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


def _kendall(x: np.ndarray, y: np.ndarray) -> float:
    if np.all(x == x[0]) or np.all(y == y[0]):
        return math.nan
    return float(kendalltau(x, y, variant="b").statistic)


def pairwise_correlation(x, y, method: str) -> float:
    """Correlation of two aligned score lists; NaN when either is constant."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if method == "pearson":
        return _pearson(x, y)
    if method == "spearman":
        return _pearson(fractional_ranks(x), fractional_ranks(y))
    if method == "kendall":
        return _kendall(x, y)
    raise ValueError(f"unknown correlation method {method!r}")


def correlation_matrix(ensemble: RatingEnsemble, method: str = "spearman") -> CorrelationMatrix:
    """All-pairs correlation over pairwise-complete journals.

    A scheme pair that cannot be correlated because one side is constant
    gets 0 and a ``zero-variance`` flag rather than NaN.
    """
    if method not in METHODS:
        raise ValueError(f"unknown correlation method {method!r}")
    k = len(ensemble.labels)
    if k < 2:
        raise ValueError("correlation needs at least two schemes")
    values = np.eye(k)
    flags = []
    for a, b in combinations(range(k), 2):
        x, y = ensemble.pair(a, b)
        if x.size < MIN_OVERLAP:
            raise InsufficientOverlapError(ensemble.labels[a], ensemble.labels[b], x.size)
        r = pairwise_correlation(x, y, method)
        if math.isnan(r):
            la, lb = ensemble.labels[a], ensemble.labels[b]
            warnings.warn(f"{la} vs {lb}: constant scores, {method} correlation set to 0",
                          ZeroVarianceWarning, stacklevel=2)
            flags.append((ensemble.labels[a], ensemble.labels[b], "zero-variance"))
            r = 0.0
        values[a, b] = values[b, a] = r
    return CorrelationMatrix(ensemble.labels, values, method, tuple(flags))


@dataclass(frozen=True, eq=False)
class PcaResult:
    labels: tuple[str, ...]
    coordinates: np.ndarray
    explained_variance: np.ndarray
    components: np.ndarray

    def write_csv(self, fh: IO[str]) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        m = self.coordinates.shape[1]
        writer.writerow(("label", *(f"pc{i + 1}" for i in range(m))))
        for label, row in zip(self.labels, self.coordinates):
            writer.writerow((label, *(_fmt(v) for v in row)))
        writer.writerow(("explained_variance", *(_fmt(v) for v in self.explained_variance)))


def pca(corr: CorrelationMatrix) -> PcaResult:
    """Project schemes onto the principal axes of their correlation profiles.

    Each scheme's row of the correlation matrix is its feature vector.
    Components are ordered by decreasing variance and each is signed so
    that its largest-magnitude loading is positive.
    """
    features = np.asarray(corr.values, dtype=np.float64)
    centered = features - features.mean(axis=0)
    k = centered.shape[0]
    cov = centered.T @ centered / max(k - 1, 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(-eigvals, kind="stable")
    eigvals = np.clip(eigvals[order], 0.0, None)
    eigvecs = eigvecs[:, order]
    for c in range(eigvecs.shape[1]):
        lead = np.argmax(np.abs(eigvecs[:, c]))
        if eigvecs[lead, c] < 0:
            eigvecs[:, c] = -eigvecs[:, c]
    total = eigvals.sum()
    explained = eigvals / total if total > 0 else np.zeros_like(eigvals)
    return PcaResult(corr.labels, centered @ eigvecs, explained, eigvecs)


@dataclass(frozen=True)
class Merge:
    left: int
    right: int
    height: float
    size: int


@dataclass(frozen=True, eq=False)
class Dendrogram:
    """Binary merge tree in linkage order.

    Leaves are numbered ``0..n-1``; the cluster created by ``merges[i]`` is
    ``n + i``.
    """

    labels: tuple[str, ...]
    merges: tuple[Merge, ...]
    linkage: str = "average"

    def linkage_matrix(self) -> np.ndarray:
        """The tree as a SciPy-style ``(n-1, 4)`` linkage array."""
        return np.array([[m.left, m.right, m.height, m.size] for m in self.merges],
                        dtype=np.float64).reshape(-1, 4)

    def heights(self) -> np.ndarray:
        return np.array([m.height for m in self.merges])

    def to_newick(self) -> str:
        """Newick string; branch lengths are height differences to 12 significant digits."""
        n = len(self.labels)
        if n == 1:
            return f"{_newick_label(self.labels[0])};"
        node_height = [0.0] * n + [m.height for m in self.merges]

        def render(node: int, parent_height: float) -> str:
            length = f"{parent_height - node_height[node]:.12g}"
            if node < n:
                return f"{_newick_label(self.labels[node])}:{length}"
            m = self.merges[node - n]
            inner = f"({render(m.left, m.height)},{render(m.right, m.height)})"
            return f"{inner}:{length}"

        m = self.merges[-1]
        return f"({render(m.left, m.height)},{render(m.right, m.height)});"


_NEWICK_SAFE = re.compile(r"^[^\s()\[\]':;,]+$")


def _newick_label(label: str) -> str:
    if _NEWICK_SAFE.match(label):
        return label
    return "'" + label.replace("'", "''") + "'"


def hcluster(corr: CorrelationMatrix, linkage: str = "average", tie_tol: float = 1e-12
             ) -> Dendrogram:
    """Agglomerative clustering on ``1 - correlation``.

    Among pairs within ``tie_tol`` of the closest distance the pair whose
    sorted leaf labels compare smallest merges first, so results do not
    depend on input order.
    """
    if linkage not in LINKAGES:
        raise ValueError(f"unknown linkage {linkage!r}")
    labels = tuple(corr.labels)
    n = len(labels)
    dist = 1.0 - np.asarray(corr.values, dtype=np.float64)
    # cluster id -> (leaf labels sorted, size)
    active: dict[int, tuple[tuple[str, ...], int]] = {i: ((labels[i],), 1) for i in range(n)}
    d: dict[tuple[int, int], float] = {}
    for a, b in combinations(range(n), 2):
        d[(a, b)] = float(dist[a, b])
    merges: list[Merge] = []
    last = 0.0
    next_id = n
    while len(active) > 1:
        best = min(d.values())
        candidates = [key for key, v in d.items() if v <= best + tie_tol]

        def sort_key(key):
            x, y = sorted((active[key[0]][0], active[key[1]][0]))
            return (x, y)

        a, b = min(candidates, key=sort_key)
        if sort_key((a, b))[0] != active[a][0]:
            a, b = b, a
        height = max(d[(min(a, b), max(a, b))], last)
        last = height
        (la, na), (lb, nb) = active.pop(a), active.pop(b)
        merges.append(Merge(a, b, height, na + nb))
        new = next_id
        next_id += 1
        for c in active:
            dac = d.pop((min(a, c), max(a, c)))
            dbc = d.pop((min(b, c), max(b, c)))
            if linkage == "average":
                dnc = (na * dac + nb * dbc) / (na + nb)
            elif linkage == "single":
                dnc = min(dac, dbc)
            else:
                dnc = max(dac, dbc)
            d[(c, new)] = dnc
        d.pop((min(a, b), max(a, b)))
        active[new] = (tuple(sorted(la + lb)), na + nb)
    return Dendrogram(labels, tuple(merges), linkage)
