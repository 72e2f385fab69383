"""Journal rankings from altmetric mention data.

Mentions are aggregated into journal x author counts, turned into simple
count ratings and into pairwise-comparison networks (S, P, Q) that are
rated with PageRank, HITS and points spread. Schemes are then compared
through correlation matrices, PCA and hierarchical clustering.
"""

from .comparison import (CorrelationMatrix, Dendrogram, PcaResult, RatingEnsemble,
                         correlation_matrix, fractional_ranks, hcluster, pca)
from .counts import blind_count, class_count, paper_count, weighted_count
from .ingest import (ExternalRating, MentionProfile, MentionRecord, SourceTaxonomy,
                     build_profile, load_external_ratings, load_taxonomy, parse_mentions)
from .network import (ComparableIndex, JournalNetwork, build_P, build_Q, build_S,
                      comparable_authors)
from .rating import Ranking, RatingVector, hits, pagerank, points_spread, to_ranking

__version__ = "0.1.0"

__all__ = [
    "ComparableIndex", "CorrelationMatrix", "Dendrogram", "ExternalRating", "JournalNetwork",
    "MentionProfile", "MentionRecord", "PcaResult", "Ranking", "RatingEnsemble",
    "RatingVector", "SourceTaxonomy", "blind_count", "build_P", "build_Q", "build_S",
    "build_profile", "class_count", "comparable_authors", "correlation_matrix",
    "fractional_ranks", "hcluster", "hits", "load_external_ratings", "load_taxonomy",
    "pagerank", "paper_count", "parse_mentions", "pca", "points_spread", "to_ranking",
    "weighted_count",
]
