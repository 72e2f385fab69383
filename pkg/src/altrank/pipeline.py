"""End-to-end runs: mentions in, rankings, comparisons and figures out."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
import re
import sys
import tempfile
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

from . import counts, network, rating
from .comparison import (LINKAGES, METHODS, RatingEnsemble, correlation_matrix, hcluster,
                         pca)
from .errors import ConfigError, EmptyCorpusError, ZeroVarianceWarning
from .ingest import (MentionProfile, MentionRecord, SourceTaxonomy, build_profile,
                     infer_format, load_external_ratings, load_taxonomy, parse_mentions)
from .plotting import dendrogram_plot, pca_scatter
from .rating import RatingVector, to_ranking

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

log = logging.getLogger(__name__)

COUNT_SCHEMES = ("bc", "sbc", "nsbc", "ca", "pc")
NETWORK_SCHEMES = tuple(f"{k}{m}" for k in "spq" for m in ("pr", "h", "-psr"))
DEFAULT_SCHEMES = COUNT_SCHEMES + NETWORK_SCHEMES
_SCHEME_RE = re.compile(r"^(?P<base>[a-z-]+)(?:@(?P<source>[^@\s]+))?$")


@dataclass(frozen=True)
class SolverConfig:
    damping: float = 0.85
    tol: float = 1e-10
    max_iter: int = 1000
    min_authors: int = 1
    psr_global_n: bool = False
    pc_mode: str = "distinct"
    dedup: bool = False


@dataclass(frozen=True)
class PipelineConfig:
    mentions: Path
    output_dir: Path
    format: str | None = None
    taxonomy: Path | None = None
    external: dict[str, Path] = field(default_factory=dict)
    schemes: tuple[str, ...] = DEFAULT_SCHEMES
    solver: SolverConfig = SolverConfig()
    methods: tuple[str, ...] = METHODS
    linkage: str = "average"
    dump_networks: bool = False
    seed: int = 0

    def __post_init__(self):
        if not self.schemes:
            raise ConfigError("at least one scheme must be enabled")
        for label in self.schemes:
            parse_scheme(label)
        if len(set(self.schemes)) != len(self.schemes):
            raise ConfigError("duplicate scheme labels")
        for m in self.methods:
            if m not in METHODS:
                raise ConfigError(f"unknown correlation method {m!r}")
        if self.linkage not in LINKAGES:
            raise ConfigError(f"unknown linkage {self.linkage!r}")
        if not 0 < self.solver.damping < 1:
            raise ConfigError("damping must lie strictly between 0 and 1")
        if self.solver.min_authors < 1:
            raise ConfigError("min_authors must be >= 1")
        if self.solver.pc_mode not in ("distinct", "mentions"):
            raise ConfigError("pc_mode must be 'distinct' or 'mentions'")
        clash = set(self.external) & set(self.schemes)
        if clash:
            raise ConfigError(f"external rating names clash with schemes: {sorted(clash)}")

    def echo(self) -> dict:
        """Settings as plain data; input files by name and content hash."""
        out = asdict(self)
        del out["output_dir"]
        out["mentions"] = _fingerprint(self.mentions)
        out["taxonomy"] = None if self.taxonomy is None else _fingerprint(self.taxonomy)
        out["external"] = {k: _fingerprint(v) for k, v in sorted(self.external.items())}
        out["schemes"] = list(self.schemes)
        out["methods"] = list(self.methods)
        return out


def _fingerprint(path: Path) -> dict[str, str]:
    digest = hashlib.sha256(Path(path).read_bytes()).hexdigest()
    return {"name": Path(path).name, "sha256": digest}


def parse_scheme(label: str) -> tuple[str, str | None]:
    """Split ``"qh@blogs"`` into ``("qh", "blogs")``; ``spsr`` is read as ``s-psr``."""
    m = _SCHEME_RE.match(label)
    base = m.group("base") if m else None
    if base in ("spsr", "ppsr", "qpsr"):
        base = f"{base[0]}-psr"
    if base not in COUNT_SCHEMES and base not in NETWORK_SCHEMES:
        raise ConfigError(f"unknown scheme {label!r}")
    return base, m.group("source")


def canonical_scheme(label: str) -> str:
    base, source = parse_scheme(label)
    return base if source is None else f"{base}@{source}"


_CONFIG_SECTIONS = {"input", "schemes", "solver", "comparison", "output", "seed"}


def load_config(path: str | Path) -> PipelineConfig:
    """Read a TOML run configuration; relative paths resolve against its folder."""
    path = Path(path)
    with open(path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    unknown = set(data) - _CONFIG_SECTIONS
    if unknown:
        raise ConfigError(f"{path}: unknown sections {sorted(unknown)}")
    base = path.parent

    def resolve(p):
        return None if p is None else (base / p)

    inp = data.get("input", {})
    if "mentions" not in inp:
        raise ConfigError(f"{path}: [input] mentions is required")
    out = data.get("output", {})
    sch = data.get("schemes", {})
    cmp_ = data.get("comparison", {})
    try:
        solver = SolverConfig(**data.get("solver", {}))
    except TypeError as exc:
        raise ConfigError(f"{path}: [solver] {exc}") from exc
    enabled = [canonical_scheme(s) for s in sch.get("enabled", DEFAULT_SCHEMES)]
    for source in sch.get("per_source", []):
        enabled.extend(f"{s}@{source}" for s in sch.get("per_source_schemes", ["bc", "qh"]))
    return PipelineConfig(
        mentions=resolve(inp["mentions"]),
        format=inp.get("format"),
        taxonomy=resolve(inp.get("taxonomy")),
        external={name: resolve(p) for name, p in inp.get("external", {}).items()},
        output_dir=resolve(out.get("dir", "altrank-out")),
        schemes=tuple(enabled),
        solver=solver,
        methods=tuple(cmp_.get("methods", METHODS)),
        linkage=cmp_.get("linkage", "average"),
        dump_networks=bool(out.get("dump_networks", False)),
        seed=int(data.get("seed", 0)),
    )


class SchemeComputer:
    """Computes scheme ratings, caching profiles and networks per source slice."""

    def __init__(self, records: list[MentionRecord], taxonomy: SourceTaxonomy,
                 solver: SolverConfig = SolverConfig()):
        self.taxonomy = taxonomy
        self.solver = solver
        self.full = build_profile(records, dedup=solver.dedup)
        self._profiles: dict[str | None, MentionProfile] = {None: self.full}
        self._networks: dict[tuple[str | None, str], network.JournalNetwork] = {}
        self._indices: dict[str | None, network.ComparableIndex] = {}

    def profile(self, source: str | None) -> MentionProfile:
        if source not in self._profiles:
            self._profiles[source] = self.full.restrict([source])
        return self._profiles[source]

    def network(self, source: str | None, kind: str) -> network.JournalNetwork:
        key = (source, kind)
        if key not in self._networks:
            prof = self.profile(source)
            if source not in self._indices:
                self._indices[source] = network.comparable_authors(prof, self.solver.min_authors)
            self._networks[key] = network.build_network(prof, kind, self._indices[source])
        return self._networks[key]

    def prepare(self, labels) -> None:
        """Build every profile and network ``labels`` needs (not thread-safe)."""
        for label in labels:
            base, source = parse_scheme(label)
            self.profile(source)
            if base in NETWORK_SCHEMES:
                self.network(source, base[0].upper())

    def compute(self, label: str) -> RatingVector:
        base, source = parse_scheme(label)
        label = canonical_scheme(label)
        prof = self.profile(source)
        s = self.solver
        if base == "bc":
            rv = counts.blind_count(prof)
        elif base == "sbc":
            rv = counts.class_count(prof, self.taxonomy, "social")
        elif base == "nsbc":
            rv = counts.class_count(prof, self.taxonomy, "nonsocial")
        elif base == "ca":
            rv = counts.weighted_count(prof, self.taxonomy)
        elif base == "pc":
            rv = counts.paper_count(prof, s.pc_mode)
        else:
            net = self.network(source, base[0].upper())
            method = base[1:]
            if method == "pr":
                rv = rating.pagerank(net, s.damping, s.tol, s.max_iter)
            elif method == "h":
                hub, auth = rating.hits(net, s.tol, s.max_iter)
                rv = RatingVector(hub.scheme, hub.journals, hub.scores,
                                  {**hub.diagnostics, "authority": auth.scores.tolist()})
            else:
                rv = rating.points_spread(net, s.psr_global_n)
        return rv.relabel(label)


def _threads() -> int:
    raw = os.environ.get("ALTRANK_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ConfigError(f"ALTRANK_THREADS must be an integer, got {raw!r}") from None
    return min(4, os.cpu_count() or 1)


def compute_schemes(computer: SchemeComputer, labels) -> list[RatingVector]:
    labels = list(labels)
    computer.prepare(labels)
    workers = min(_threads(), len(labels))
    if workers <= 1:
        return [computer.compute(label) for label in labels]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(computer.compute, labels))


def write_atomic(path: Path, data: bytes | str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(data, str):
        data = data.encode("utf-8")
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _text(writer: Callable[[io.StringIO], None]) -> str:
    buf = io.StringIO()
    writer(buf)
    return buf.getvalue()


def ranking_csv(rv: RatingVector, header: bool = True) -> str:
    ranking = to_ranking(rv)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow(("scheme", "journal_id", "score", "rank"))
    for journal, score, rank in ranking.rows():
        w.writerow((rv.scheme, journal, repr(score), repr(rank)))
    return buf.getvalue()


def ranking_jsonl(rv: RatingVector) -> str:
    return "".join(
        json.dumps({"scheme": rv.scheme, "journal_id": j, "score": s, "rank": r}) + "\n"
        for j, s, r in to_ranking(rv).rows()
    )


def _file_stem(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9._@+-]", "_", label)


@dataclass
class RunResult:
    output_dir: Path
    files: list[str]
    manifest: dict


def read_mentions(path: Path, fmt: str | None = None) -> list[MentionRecord]:
    records = parse_mentions(path, fmt or infer_format(path))
    if not records:
        raise EmptyCorpusError(f"{path}: no mention records")
    return records


def run_pipeline(config: PipelineConfig) -> RunResult:
    """Run every enabled scheme and comparison, writing results under ``output_dir``."""
    records = read_mentions(config.mentions, config.format)
    taxonomy = load_taxonomy(config.taxonomy) if config.taxonomy else SourceTaxonomy()
    computer = SchemeComputer(records, taxonomy, config.solver)
    profile = computer.full

    vectors = compute_schemes(computer, config.schemes)
    externals = [
        load_external_ratings(path, name, profile.journals)
        for name, path in sorted(config.external.items())
    ]

    outputs: dict[str, bytes | str] = {}
    for rv in vectors:
        outputs[f"rankings/{_file_stem(rv.scheme)}.csv"] = ranking_csv(rv)
    if config.dump_networks:
        for (source, kind), net in sorted(computer._networks.items(),
                                          key=lambda kv: (kv[0][0] or "", kv[0][1])):
            stem = kind if source is None else f"{kind}@{source}"
            outputs[f"networks/{_file_stem(stem)}.csv"] = _text(
                lambda fh, net=net: network.write_network(net, fh))

    comparison_info: dict[str, object] = {}
    n_schemes = len(vectors) + len(externals)
    if n_schemes >= 2:
        named = [(rv.scheme, rv.as_dict()) for rv in vectors]
        named += [(ext.name, dict(ext.scores)) for ext in externals]
        ensemble = RatingEnsemble.from_mappings(profile.journals, named)
        for method in config.methods:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", ZeroVarianceWarning)
                corr = correlation_matrix(ensemble, method)
            outputs[f"correlation_{method}.csv"] = _text(corr.write_csv)
            result = pca(corr)
            outputs[f"pca_{method}.csv"] = _text(result.write_csv)
            outputs[f"pca_{method}.svg"] = pca_scatter(result, f"PCA of {method} correlations")
            tree = hcluster(corr, config.linkage)
            outputs[f"dendrogram_{method}.nwk"] = tree.to_newick() + "\n"
            outputs[f"dendrogram_{method}.svg"] = dendrogram_plot(
                tree, f"{config.linkage} linkage, {method}")
            comparison_info[method] = {
                "flags": [list(f) for f in corr.flags],
                "explained_variance": result.explained_variance.tolist(),
            }
    else:
        log.info("only one scheme enabled; skipping comparisons")

    manifest = {
        "config": config.echo(),
        "corpus": {
            "records": len(records),
            "journals": len(profile.journals),
            "authors": len(profile.authors),
            "papers": len(profile.per_paper),
            "sources": _source_counts(records),
            "comparable_pairs": {
                (k if k is not None else "all"): idx.n_pairs
                for k, idx in sorted(computer._indices.items(), key=lambda kv: kv[0] or "")
            },
        },
        "schemes": {
            rv.scheme: {k: v for k, v in rv.diagnostics.items() if k != "authority"}
            for rv in vectors
        },
        "external": {ext.name: {"journals": len(ext.scores), "unmatched": list(ext.unmatched)}
                     for ext in externals},
        "comparison": comparison_info,
        "files": {},
    }
    for name in sorted(outputs):
        data = outputs[name]
        raw = data.encode("utf-8") if isinstance(data, str) else data
        manifest["files"][name] = hashlib.sha256(raw).hexdigest()
    outputs["manifest.json"] = json.dumps(manifest, indent=2, sort_keys=True) + "\n"

    out_dir = Path(config.output_dir)
    for name in sorted(outputs):
        write_atomic(out_dir / name, outputs[name])
    return RunResult(out_dir, sorted(outputs), manifest)


def _source_counts(records) -> dict[str, int]:
    tally: dict[str, int] = {}
    for r in records:
        tally[r.source] = tally.get(r.source, 0) + 1
    return dict(sorted(tally.items()))
