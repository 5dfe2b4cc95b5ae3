"""Command-line surface.

Commands: laplacian, ep, quotient, bound, dual, corpus. Exit codes:
0 ok, 2 parse error, 3 bad argument, 4 enumeration cap exceeded, 5 internal.
Identical configuration (seed included) produces byte-identical JSON output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import linalg
from .corpus import run_corpus
from .graphs import MatrixWeightedGraph, WeightPattern, build_input_matrix, build_laplacian
from .krylov import controllable_subspace, dual_pair, observability_matrix
from .netio import ParseError, parse_network
from .partitions import (
    InvalidPartitionError,
    NotEquitableError,
    Partition,
    coarsest_ep,
    quotient,
    quotient_laplacian,
    verify_equitable,
)
from .render import (
    block_to_json,
    dumps,
    ep_report_to_dict,
    format_block,
    format_block_matrix,
    matrix_to_json,
    partition_to_text,
    quotient_to_dict,
)
from .ssc import (
    DEFAULT_ENUMERATION_CAP,
    DEFAULT_SAMPLES,
    EnumerationCapError,
    estimate_ssc_dimension,
    invariant_node_report,
    reversal_check,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_BAD_ARGUMENT = 3
EXIT_CAP = 4
EXIT_INTERNAL = 5

BACKEND_ENV_VAR = "SSCKIT_BACKEND"


class WrongInputKind(ValueError):
    pass


@dataclass(frozen=True)
class AnalysisConfig:
    command: str
    input: str | None
    partition: str | None
    mode: str
    samples: int
    seed: int
    backend: str
    fmt: str
    cap: int

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("--samples must be >= 1")
        if self.cap < 1:
            raise ValueError("--cap must be >= 1")
        if self.backend not in linalg.RANK_BACKENDS:
            raise ValueError(f"--backend must be one of {linalg.RANK_BACKENDS}")


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; that slot belongs to parse errors here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_BAD_ARGUMENT, f"{self.prog}: error: {message}\n")


def build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--input", help="path to a network document")
    common.add_argument("--partition", help="JSON list of cells, e.g. '[[1],[2,3],[4]]'")
    common.add_argument("--mode", choices=["strict", "cancellative"], default="cancellative")
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--backend", choices=["exact", "float"],
                        default=os.environ.get(BACKEND_ENV_VAR, "exact"))
    common.add_argument("--format", dest="fmt", choices=["text", "json"], default="text")
    common.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP)

    parser = _Parser(prog="ssckit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("laplacian", parents=[common], help="print L and M for a concrete graph")
    sub.add_parser("ep", parents=[common],
                   help="verify a partition, or find the coarsest leader-protected EP")
    sub.add_parser("quotient", parents=[common], help="quotient graph and its Laplacian")
    sub.add_parser("bound", parents=[common], help="SSC upper bound and sampled dimensions")
    sub.add_parser("dual", parents=[common], help="dual pair, observability rank, edge reversal")
    sub.add_parser("corpus", parents=[common], help="run the bundled fixture checks")
    return parser


def _load_graph(cfg: AnalysisConfig) -> MatrixWeightedGraph:
    obj = _load_any(cfg)
    if not isinstance(obj, MatrixWeightedGraph):
        raise WrongInputKind("this command needs a concrete graph, not a weight pattern")
    return obj


def _load_pattern(cfg: AnalysisConfig) -> WeightPattern:
    obj = _load_any(cfg)
    if not isinstance(obj, WeightPattern):
        raise WrongInputKind(
            "this command needs a weight pattern "
            "(declare variables[] or omit edge weights)"
        )
    return obj


def _load_any(cfg: AnalysisConfig):
    if not cfg.input:
        raise WrongInputKind("--input is required for this command")
    try:
        text = open(cfg.input, encoding="utf-8").read()
    except OSError as exc:
        raise ParseError(f"cannot read {cfg.input}: {exc.strerror}") from None
    return parse_network(text)


def _parse_partition_flag(cfg: AnalysisConfig, n: int) -> Partition:
    try:
        cells = json.loads(cfg.partition)
    except json.JSONDecodeError as exc:
        raise InvalidPartitionError(f"--partition is not valid JSON: {exc}") from None
    if not isinstance(cells, list) or not all(isinstance(c, list) for c in cells):
        raise InvalidPartitionError("--partition must be a list of lists of node indices")
    for cell in cells:
        for v in cell:
            if not isinstance(v, int) or isinstance(v, bool):
                raise InvalidPartitionError(f"--partition entries must be integers, got {v!r}")
    from .partitions import partition_of

    return partition_of(cells, n)


def cmd_laplacian(cfg: AnalysisConfig) -> int:
    g = _load_graph(cfg)
    L = build_laplacian(g)
    M = build_input_matrix(g.leaders, g.n, g.d)
    if cfg.fmt == "json":
        sys.stdout.write(dumps({
            "n": g.n, "d": g.d, "directed": g.directed, "leaders": list(g.leaders),
            "laplacian": matrix_to_json(L),
            "input_matrix": matrix_to_json(M),
        }))
    else:
        print(f"Laplacian L ({L.nrows}x{L.ncols}):")
        print(format_block_matrix(L))
        print(f"\nInput matrix M ({M.nrows}x{M.ncols}):")
        print(format_block_matrix(M))
    return EXIT_OK


def cmd_ep(cfg: AnalysisConfig) -> int:
    g = _load_graph(cfg)
    if cfg.partition:
        pi = _parse_partition_flag(cfg, g.n)
        report = verify_equitable(g, pi)
        if cfg.fmt == "json":
            payload = {"partition": pi.to_lists()}
            payload.update(ep_report_to_dict(report))
            sys.stdout.write(dumps(payload))
        else:
            print(f"partition {partition_to_text(pi)}")
            print(f"equitable: {report.verdict}")
            for v in report.violations:
                print(
                    f"  cell {v.cell}: nodes {v.r} and {v.s} disagree into cell "
                    f"{v.target_cell}: {format_block(v.sum_r)} vs {format_block(v.sum_s)}"
                )
        return EXIT_OK
    pi = coarsest_ep(g, g.leaders)
    if cfg.fmt == "json":
        sys.stdout.write(dumps({"coarsest_ep": pi.to_lists(), "cells": pi.k}))
    else:
        print(f"coarsest leader-protected EP: {partition_to_text(pi)} ({pi.k} cells)")
    return EXIT_OK


def cmd_quotient(cfg: AnalysisConfig) -> int:
    g = _load_graph(cfg)
    pi = _parse_partition_flag(cfg, g.n) if cfg.partition else coarsest_ep(g, g.leaders)
    q = quotient(g, pi)
    Lq = quotient_laplacian(q)
    if cfg.fmt == "json":
        payload = {"partition": pi.to_lists()}
        payload.update(quotient_to_dict(q))
        payload["quotient_laplacian"] = matrix_to_json(Lq)
        sys.stdout.write(dumps(payload))
    else:
        print(f"partition {partition_to_text(pi)}")
        for (i, j), blk in sorted(q.adjacency.items()):
            print(f"  d(V{i}, V{j}) = {format_block(blk)}")
        print(f"quotient Laplacian ({Lq.nrows}x{Lq.ncols}):")
        print(format_block_matrix(Lq))
    return EXIT_OK


def cmd_bound(cfg: AnalysisConfig) -> int:
    pattern = _load_pattern(cfg)
    report = estimate_ssc_dimension(
        pattern,
        mode=cfg.mode,
        samples_per_system=cfg.samples,
        seed=cfg.seed,
        cap=cfg.cap,
        backend=cfg.backend,
    )
    summary = invariant_node_report(report)
    if cfg.fmt == "json":
        payload = report.to_dict()
        payload["interpretation"] = summary
        sys.stdout.write(dumps(payload))
    else:
        print(f"k_min = {report.k_min}, bound = {report.bound} of {report.state_dim}")
        print(f"witness partition: {partition_to_text(report.witness_partition)}")
        print(f"sampled minimum dimension: {report.ssc_estimate}")
        verdict = "unknown" if report.ssc_verdict is None else report.ssc_verdict
        print(f"strongly structurally controllable: {verdict}")
        for line in summary["summary"]:
            print(f"  {line}")
        if not report.certified:
            print("  (float backend: ranks are not certified)")
    return EXIT_OK


def cmd_dual(cfg: AnalysisConfig) -> int:
    g = _load_graph(cfg)
    L = build_laplacian(g)
    M = build_input_matrix(g.leaders, g.n, g.d)
    Lt, _ = dual_pair(L, M)
    self_dual = Lt.entries == L.entries
    obs_rank = linalg.rank(observability_matrix(L, M), cfg.backend)
    dual_dim = controllable_subspace(Lt, M, cfg.backend).dim
    rev = reversal_check(g)
    if cfg.fmt == "json":
        sys.stdout.write(dumps({
            "self_dual": self_dual,
            "observability_rank": obs_rank,
            "dual_controllable_dim": dual_dim,
            "state_dim": L.nrows,
            "reversal": {
                "holds": rev.holds,
                "mismatches": [
                    {"block_row": i, "block_col": j,
                     "reversed": block_to_json(a), "transposed": block_to_json(b)}
                    for (i, j, a, b) in rev.mismatches
                ],
            },
        }))
    else:
        print("self-dual (L = L^T): " + ("yes" if self_dual else "no"))
        print(f"observability rank of (L, M): {obs_rank} of {L.nrows}")
        print(f"controllable dimension of the dual pair (L^T, M): {dual_dim}")
        print(f"edge reversal realizes L^T: {rev.holds}")
        for (i, j, a, b) in rev.mismatches:
            print(f"  block ({i},{j}): reversed {format_block(a)} vs transposed {format_block(b)}")
    return EXIT_OK


def cmd_corpus(cfg: AnalysisConfig) -> int:
    results = run_corpus(samples=cfg.samples, seed=cfg.seed, backend=cfg.backend)
    if cfg.fmt == "json":
        sys.stdout.write(dumps({
            "results": [
                {"name": r.name, "passed": r.passed, "detail": r.detail}
                for r in results
            ],
            "passed": all(r.passed for r in results),
        }))
    else:
        for r in results:
            print(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}: {r.detail}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_INTERNAL


COMMANDS = {
    "laplacian": cmd_laplacian,
    "ep": cmd_ep,
    "quotient": cmd_quotient,
    "bound": cmd_bound,
    "dual": cmd_dual,
    "corpus": cmd_corpus,
}


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = AnalysisConfig(
            command=ns.command,
            input=ns.input,
            partition=ns.partition,
            mode=ns.mode,
            samples=ns.samples,
            seed=ns.seed,
            backend=ns.backend,
            fmt=ns.fmt,
            cap=ns.cap,
        )
        return COMMANDS[cfg.command](cfg)
    except ParseError as exc:
        print(f"ssckit: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except EnumerationCapError as exc:
        print(f"ssckit: {exc}; raise --cap to enumerate more followers", file=sys.stderr)
        return EXIT_CAP
    except (WrongInputKind, InvalidPartitionError, NotEquitableError, ValueError) as exc:
        print(f"ssckit: {exc}", file=sys.stderr)
        return EXIT_BAD_ARGUMENT
    except Exception as exc:  # anything else is an internal failure
        print(f"ssckit: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
