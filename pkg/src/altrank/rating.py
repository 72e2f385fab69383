"""Ratings from journal networks: PageRank, HITS and points spread."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy import sparse
from scipy.stats import rankdata

from .errors import DegenerateNetworkError, NotConvergedError
from .network import JournalNetwork


@dataclass(frozen=True, eq=False)
class RatingVector:
    """Named per-journal scores; ``diagnostics`` records solver details."""

    scheme: str
    journals: tuple[str, ...]
    scores: np.ndarray
    diagnostics: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=np.float64)
        if scores.shape != (len(self.journals),):
            raise ValueError(f"{self.scheme}: {scores.size} scores for {len(self.journals)} journals")
        if not np.all(np.isfinite(scores)):
            raise ValueError(f"{self.scheme}: scores must be finite")
        scores.setflags(write=False)
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "journals", tuple(self.journals))

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.journals, self.scores.tolist()))

    def relabel(self, scheme: str) -> RatingVector:
        return RatingVector(scheme, self.journals, self.scores, self.diagnostics)


@dataclass(frozen=True, eq=False)
class Ranking:
    """Descending fractional ranking of a rating vector.

    ``rank`` is aligned with ``journals`` of the source vector; ``order``
    lists journal indices best first, equal scores broken by journal id.
    """

    scheme: str
    journals: tuple[str, ...]
    scores: np.ndarray
    rank: np.ndarray
    order: np.ndarray

    def rows(self):
        for i in self.order:
            yield self.journals[i], float(self.scores[i]), float(self.rank[i])


def fractional_ranks(scores) -> np.ndarray:
    """Rank 1 for the largest score; tied scores share their mean position."""
    scores = np.asarray(scores, dtype=np.float64)
    if scores.size == 0:
        return np.zeros(0)
    return rankdata(-scores, method="average")


def to_ranking(rv: RatingVector) -> Ranking:
    rank = fractional_ranks(rv.scores)
    names = np.array(rv.journals, dtype=object)
    order = np.lexsort((names, -rv.scores)) if len(names) else np.zeros(0, dtype=np.int64)
    return Ranking(rv.scheme, rv.journals, rv.scores, rank, order)


def _check_net(net: JournalNetwork):
    if net.n == 0:
        raise DegenerateNetworkError("network has no journals")
    w = net.weights.tocsr().astype(np.float64)
    if w.nnz and (w.data < 0).any():
        raise ValueError("network weights must be non-negative")
    return w


def pagerank(net: JournalNetwork, damping: float = 0.85, tol: float = 1e-10,
             max_iter: int = 1000, scheme: str | None = None) -> RatingVector:
    """Stationary distribution of a damped walk from losers toward winners.

    From journal l the walker moves to j with probability proportional to
    ``W[j, l]`` (j's result against l). Columns with no weight, and the
    ``1 - damping`` share of every step, jump uniformly.
    """
    if not 0 < damping < 1:
        raise ValueError("damping must lie strictly between 0 and 1")
    w = _check_net(net)
    n = net.n
    colsum = np.asarray(w.sum(axis=0)).ravel()
    dangling = colsum == 0
    inv = np.zeros(n)
    inv[~dangling] = 1.0 / colsum[~dangling]
    transition = (w @ sparse.diags(inv)).tocsr()

    x = np.full(n, 1.0 / n)
    residual = np.inf
    for it in range(1, max_iter + 1):
        jump = (damping * x[dangling].sum() + (1.0 - damping)) / n
        new = damping * (transition @ x) + jump
        new /= new.sum()
        residual = float(np.abs(new - x).sum())
        x = new
        if residual < tol:
            break
    else:
        raise NotConvergedError("pagerank", max_iter, residual)
    label = scheme or f"{net.kind.lower()}pr"
    return RatingVector(label, net.journals, x,
                        {"method": "pagerank", "iterations": it, "residual": residual,
                         "damping": damping})


def hits(net: JournalNetwork, tol: float = 1e-10, max_iter: int = 1000,
         scheme: str | None = None) -> tuple[RatingVector, RatingVector]:
    """Hub and authority scores, each of unit Euclidean norm.

    Rows of a comparison matrix hold a journal's wins, so the hub vector is
    the journal rating; the authority vector is returned alongside it.
    """
    w = _check_net(net)
    if w.nnz == 0 or not w.data.any():
        raise DegenerateNetworkError(f"{net.kind} network has no edges")
    wt = w.T.tocsr()
    n = net.n
    hub = np.full(n, 1.0 / np.sqrt(n))
    auth = hub.copy()
    residual = np.inf
    for it in range(1, max_iter + 1):
        new_auth = wt @ hub
        new_auth /= np.linalg.norm(new_auth)
        new_hub = w @ new_auth
        new_hub /= np.linalg.norm(new_hub)
        residual = float(max(np.abs(new_hub - hub).sum(), np.abs(new_auth - auth).sum()))
        hub, auth = new_hub, new_auth
        if residual < tol:
            break
    else:
        raise NotConvergedError("hits", max_iter, residual)
    label = scheme or f"{net.kind.lower()}h"
    diag = {"method": "hits", "iterations": it, "residual": residual}
    return (RatingVector(label, net.journals, hub, diag),
            RatingVector(f"{label}-authority", net.journals, auth, diag))


def points_spread(net: JournalNetwork, global_n: bool = False,
                  scheme: str | None = None) -> RatingVector:
    """``r_j = sum_l (W[j, l] - W[l, j]) / n_j``.

    ``n_j`` is the number of journals j can be compared with; journals with
    none score 0. With ``global_n`` every journal divides by the total
    journal count instead.
    """
    w = net.weights.tocsr().astype(np.float64)
    # Pairwise differences first, so exactly symmetric weights cancel exactly.
    margin = np.asarray((w - w.T).sum(axis=1)).ravel()
    if global_n:
        denom = np.full(net.n, float(net.n))
    else:
        denom = net.opponents.astype(np.float64)
    r = np.zeros(net.n)
    has = denom > 0
    r[has] = margin[has] / denom[has]
    label = scheme or f"{net.kind.lower()}-psr"
    return RatingVector(label, net.journals, r, {"method": "psr", "global_n": global_n})
