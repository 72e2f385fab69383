import io

import numpy as np
import pytest

from altrank.counts import blind_count
from altrank.errors import ConfigError
from altrank.ingest import build_profile, parse_mentions
from altrank.synthetic import SyntheticSpec, generate_synthetic, load_spec, write_synthetic


def bc(spec, seed):
    return blind_count(build_profile(generate_synthetic(spec, seed))).as_dict()


def test_equal_quality_split():
    spec = SyntheticSpec(journals=2, quality=(1.0, 1.0), authors=500, mentions=10_000)
    counts = bc(spec, 11)
    sigma = np.sqrt(10_000 * 0.25)
    assert abs(counts["J1"] - 5_000) <= 5 * sigma
    assert counts["J1"] + counts["J2"] == 10_000


def test_quality_ratio_recovered():
    spec = SyntheticSpec(journals=2, quality=(4.0, 1.0), authors=2_000, mentions=100_000)
    counts = bc(spec, 5)
    assert counts["J1"] / counts["J2"] == pytest.approx(4.0, rel=0.05)


def test_same_seed_same_bytes():
    spec = SyntheticSpec(journals=6, authors=50, mentions=2_000)
    a, b, c = io.StringIO(), io.StringIO(), io.StringIO()
    write_synthetic(spec, 42, a)
    write_synthetic(spec, 42, b)
    write_synthetic(spec, 43, c)
    assert a.getvalue() == b.getvalue()
    assert a.getvalue() != c.getvalue()


def test_output_parses_back():
    spec = SyntheticSpec(journals=5, authors=40, mentions=500)
    buf = io.StringIO()
    n = write_synthetic(spec, 1, buf)
    buf.seek(0)
    assert len(parse_mentions(buf, "csv")) == n == 500


def test_heavy_tailed_activity():
    spec = SyntheticSpec(journals=5, authors=2_000, mentions=50_000, activity_exponent=1.2)
    prof = build_profile(generate_synthetic(spec, 3))
    per_author = np.asarray(prof.counts.sum(axis=0)).ravel()
    assert per_author.max() > 20 * np.median(per_author)


def test_quality_generators():
    assert SyntheticSpec(journals=3, quality_ratio=2.0).qualities().tolist() == [4.0, 2.0, 1.0]
    q = SyntheticSpec(journals=3, quality_ratio=None, quality_exponent=1.0).qualities()
    np.testing.assert_allclose(q, [1, 1 / 2, 1 / 3])
    assert SyntheticSpec(journals=12).journal_ids()[:2] == ["J01", "J02"]


def test_invalid_spec():
    with pytest.raises(ConfigError):
        SyntheticSpec(journals=2, quality=(1.0, 0.0))
    with pytest.raises(ConfigError):
        SyntheticSpec(sources={"twitter": 0.0})


def test_load_spec(tmp_path):
    p = tmp_path / "spec.toml"
    p.write_text('journals = 3\nquality = [3, 2, 1]\nmentions = 100\n'
                 '[sources]\ntwitter = 1\nnews = 1\n')
    spec = load_spec(p)
    assert spec.qualities().tolist() == [3.0, 2.0, 1.0]
    assert set(spec.sources) == {"twitter", "news"}
    p.write_text("bogus = 1\n")
    with pytest.raises(ConfigError):
        load_spec(p)
