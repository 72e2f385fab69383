import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from altrank.counts import blind_count, class_count, paper_count, weighted_count
from altrank.errors import MissingWeightError
from altrank.ingest import MentionRecord, SourceTaxonomy, build_profile

from conftest import mentions

UNIT = SourceTaxonomy(weights={"other": 1.0})


def scores(rv):
    return rv.as_dict()


def test_blind_count_lone_author(lone_author_records):
    rv = blind_count(build_profile(lone_author_records))
    assert rv.scheme == "bc"
    assert scores(rv) == {"J1": 2.0, "J2": 1.0}


def test_blind_count_empty():
    rv = blind_count(build_profile([]))
    assert rv.scores.size == 0


def test_blind_count_two_authors():
    prof = build_profile(mentions({"a": {"J1": 3}, "b": {"J1": 3, "J2": 1}}))
    assert scores(blind_count(prof))["J1"] == 6


def test_class_count():
    recs = mentions({"a": {"J1": 2}}, "twitter") + mentions({"b": {"J1": 1}}, "news")
    prof = build_profile(recs)
    tax = SourceTaxonomy()
    assert scores(class_count(prof, tax, "social")) == {"J1": 2.0}
    assert scores(class_count(prof, tax, "nonsocial")) == {"J1": 1.0}
    assert class_count(prof, tax, "social").scheme == "sbc"


def test_class_count_empty_class():
    prof = build_profile(mentions({"a": {"J1": 2, "J2": 1}}, "twitter"))
    assert not class_count(prof, SourceTaxonomy(), "nonsocial").scores.any()


def test_weighted_count():
    recs = mentions({"a": {"J1": 1}}, "news") + mentions({"b": {"J1": 2}}, "blogs")
    rv = weighted_count(build_profile(recs), SourceTaxonomy(weights={"news": 8, "blogs": 5}))
    assert rv.scheme == "ca"
    assert scores(rv) == {"J1": 18.0}


def test_weighted_count_zero_weights():
    recs = mentions({"a": {"J1": 3, "J2": 1}}, "news")
    rv = weighted_count(build_profile(recs), SourceTaxonomy(weights={"other": 0}))
    assert not rv.scores.any()


def test_weighted_count_missing_weight():
    prof = build_profile(mentions({"a": {"J1": 1}}, "reddit"))
    with pytest.raises(MissingWeightError):
        weighted_count(prof, SourceTaxonomy(weights={"news": 1}))


def test_paper_count():
    recs = [MentionRecord(f"a{i}", "twitter", "p1", "J1") for i in range(100)]
    assert scores(paper_count(build_profile(recs))) == {"J1": 1.0}
    assert scores(paper_count(build_profile(recs), mode="mentions")) == {"J1": 100.0}
    assert paper_count(build_profile([])).scores.size == 0


def test_paper_count_one_mention_each():
    prof = build_profile(mentions({"a": {"J1": 2}, "b": {"J1": 1}}))
    assert scores(paper_count(prof)) == scores(blind_count(prof)) == {"J1": 3.0}


records = st.lists(
    st.builds(
        lambda a, s, j, k: MentionRecord(f"a{a}", s, f"J{j}-p{k}", f"J{j}"),
        st.integers(0, 5), st.sampled_from(["twitter", "facebook", "google+", "news", "blogs",
                                            "reddit"]),
        st.integers(0, 3), st.integers(0, 4)),
    min_size=1, max_size=50,
)


@settings(max_examples=80, deadline=None)
@given(records)
def test_count_identities(recs):
    prof = build_profile(recs)
    tax = SourceTaxonomy()
    bc = blind_count(prof).scores
    assert np.array_equal(class_count(prof, tax, "social").scores
                          + class_count(prof, tax, "nonsocial").scores, bc)
    assert np.array_equal(weighted_count(prof, UNIT).scores, bc)
    assert np.all(paper_count(prof).scores <= bc)


@settings(max_examples=60, deadline=None)
@given(records, records)
def test_counts_monotone(base, extra):
    # Align journal lists by scoring over the union.
    full = build_profile(base + extra)
    part = build_profile(base)
    tax = SourceTaxonomy()
    for fn in (blind_count, lambda p: weighted_count(p, tax),
               lambda p: class_count(p, tax, "social"),
               lambda p: class_count(p, tax, "nonsocial")):
        before = scores(fn(part))
        after = scores(fn(full))
        assert all(after[j] >= v for j, v in before.items())
