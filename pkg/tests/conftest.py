import numpy as np
import pytest

from altrank.ingest import MentionRecord, build_profile


def mentions(spec, source="twitter"):
    """Records from ``{author: {journal: count}}``; each mention hits a new paper."""
    out = []
    for author, per_journal in spec.items():
        for journal, n in per_journal.items():
            for k in range(n):
                out.append(MentionRecord(author, source, f"{journal}-{author}-{k}", journal))
    return out


def random_records(rng, n_journals, n_authors, max_count, density=0.4, sources=("twitter",)):
    recs = []
    for a in range(n_authors):
        for j in range(n_journals):
            if rng.random() < density:
                c = int(rng.integers(1, max_count + 1))
                for k in range(c):
                    src = sources[int(rng.integers(len(sources)))]
                    recs.append(MentionRecord(f"a{a:03d}", src, f"p{j:02d}-{a}-{k}",
                                              f"j{j:02d}"))
    return recs


@pytest.fixture
def f2_profile():
    # a1(X:2, Y:1), a2(X:1, Y:1)
    return build_profile(mentions({"a1": {"X": 2, "Y": 1}, "a2": {"X": 1, "Y": 1}}))


@pytest.fixture
def lone_author_records():
    # Author A2 mentions two papers in J1 and one in J2.
    return [
        MentionRecord("A2", "twitter", "P1", "J1"),
        MentionRecord("A2", "twitter", "P2", "J1"),
        MentionRecord("A2", "twitter", "P3", "J2"),
    ]


@pytest.fixture
def rng():
    return np.random.default_rng(20150630)
