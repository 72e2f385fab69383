"""Command line entry point: ``altrank run | synth | rank``."""

from __future__ import annotations

import argparse
import io
import logging
import sys
from pathlib import Path

from .errors import AltrankError
from .ingest import SourceTaxonomy, load_taxonomy
from .pipeline import (SchemeComputer, SolverConfig, canonical_scheme, load_config,
                       ranking_csv, ranking_jsonl, read_mentions, run_pipeline, write_atomic)
from .synthetic import SyntheticSpec, load_spec, write_synthetic

log = logging.getLogger("altrank")


def _cmd_run(args) -> int:
    config = load_config(args.config)
    result = run_pipeline(config)
    print(f"wrote {len(result.files)} file(s) to {result.output_dir}")
    return 0


def _cmd_synth(args) -> int:
    spec = load_spec(args.spec) if args.spec else SyntheticSpec()
    out = Path(args.out)
    buf = io.StringIO()
    n = write_synthetic(spec, args.seed, buf)
    write_atomic(out, buf.getvalue())
    print(f"wrote {n} mention(s) to {out}")
    return 0


def _cmd_rank(args) -> int:
    records = read_mentions(Path(args.mentions), args.format)
    taxonomy = load_taxonomy(args.taxonomy) if args.taxonomy else SourceTaxonomy()
    solver = SolverConfig(damping=args.damping, tol=args.tol, max_iter=args.max_iter,
                          min_authors=args.min_authors)
    computer = SchemeComputer(records, taxonomy, solver)
    for label in args.scheme:
        rv = computer.compute(canonical_scheme(label))
        if args.output_format == "jsonl":
            sys.stdout.write(ranking_jsonl(rv))
        else:
            sys.stdout.write(ranking_csv(rv, header=label == args.scheme[0]))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="altrank",
                                     description="Rank journals from altmetric mentions.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the full pipeline from a TOML config")
    run.add_argument("--config", required=True)
    run.set_defaults(func=_cmd_run)

    synth = sub.add_parser("synth", help="write a synthetic mention corpus")
    synth.add_argument("--spec", help="TOML corpus spec (defaults if omitted)")
    synth.add_argument("--seed", type=int, required=True)
    synth.add_argument("--out", required=True)
    synth.set_defaults(func=_cmd_synth)

    rank = sub.add_parser("rank", help="print one or more scheme rankings")
    rank.add_argument("--mentions", required=True)
    rank.add_argument("--scheme", required=True, action="append",
                      help="scheme label, e.g. bc, qpr, sh@twitter (repeatable)")
    rank.add_argument("--format", choices=("csv", "jsonl"),
                      help="mention file format (default: from extension)")
    rank.add_argument("--output-format", choices=("csv", "jsonl"), default="csv")
    rank.add_argument("--taxonomy")
    rank.add_argument("--damping", type=float, default=0.85)
    rank.add_argument("--tol", type=float, default=1e-10)
    rank.add_argument("--max-iter", type=int, default=1000)
    rank.add_argument("--min-authors", type=int, default=1)
    rank.set_defaults(func=_cmd_rank)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except AltrankError as exc:
        print(f"altrank: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"altrank: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
