"""Partitions, equitable-partition verification and refinement, quotient graphs.

A partition is a list of disjoint nonempty cells covering 1..n, kept in
canonical form: cells ordered by smallest member, members ascending. A
partition is equitable when any two nodes of one cell have equal block
weight-sums into every cell; the quotient graph then carries those sums as
directed block weights, and its Laplacian satisfies the exact lift identity
L P = P L_q certified by verify_lift.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .graphs import (
    Block,
    BlockMatrix,
    MatrixWeightedGraph,
    block_is_zero,
    cell_degree,
)


class InvalidPartitionError(ValueError):
    pass


class NotEquitableError(ValueError):
    pass


def _canonical_cells(cells) -> tuple[tuple[int, ...], ...]:
    canon = tuple(sorted(tuple(sorted(set(int(v) for v in cell))) for cell in cells))
    return canon


@dataclass(frozen=True)
class Partition:
    """Cells in canonical order (sorted by least member, members ascending)."""

    cells: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        canon = _canonical_cells(self.cells)
        object.__setattr__(self, "cells", canon)
        seen: set[int] = set()
        for cell in canon:
            if not cell:
                raise InvalidPartitionError("empty cell")
            for v in cell:
                if v < 1:
                    raise InvalidPartitionError(f"node index {v} must be >= 1")
                if v in seen:
                    raise InvalidPartitionError(f"node {v} appears in two cells")
                seen.add(v)

    @property
    def k(self) -> int:
        return len(self.cells)

    def nodes(self) -> set[int]:
        return {v for cell in self.cells for v in cell}

    def covers(self, n: int) -> bool:
        return self.nodes() == set(range(1, n + 1))

    def cell_index(self, node: int) -> int:
        """1-based index of the cell containing ``node``."""
        for idx, cell in enumerate(self.cells, start=1):
            if node in cell:
                return idx
        raise InvalidPartitionError(f"node {node} not covered")

    def to_lists(self) -> list[list[int]]:
        return [list(cell) for cell in self.cells]


def partition_of(cells, n: int) -> Partition:
    """Validate and canonicalize cells as a partition of 1..n."""
    pi = Partition(tuple(tuple(c) for c in cells))
    if not pi.covers(n):
        missing = set(range(1, n + 1)) - pi.nodes()
        extra = pi.nodes() - set(range(1, n + 1))
        detail = []
        if missing:
            detail.append(f"missing nodes {sorted(missing)}")
        if extra:
            detail.append(f"unknown nodes {sorted(extra)}")
        raise InvalidPartitionError("not a partition of 1..%d (%s)" % (n, "; ".join(detail)))
    return pi


def characteristic_matrix(pi: Partition, n: int, d: int) -> BlockMatrix:
    """nd x kd block 0/I matrix with the identity at (node, its cell)."""
    pi = partition_of(pi.cells, n)
    k = pi.k
    rows = [[Fraction(0)] * (k * d) for _ in range(n * d)]
    for col, cell in enumerate(pi.cells):
        for v in cell:
            for p in range(d):
                rows[(v - 1) * d + p][col * d + p] = Fraction(1)
    return BlockMatrix(n, k, d, tuple(tuple(row) for row in rows))


@dataclass(frozen=True)
class EPViolation:
    cell: int          # 1-based index of the cell holding the unequal pair
    r: int
    s: int
    target_cell: int   # 1-based index of the cell the sums point into
    sum_r: Block
    sum_s: Block


@dataclass(frozen=True)
class EPReport:
    verdict: bool
    violations: tuple[EPViolation, ...]


def verify_equitable(
    g: MatrixWeightedGraph,
    pi: Partition,
    include_same_cell: bool = True,
    direction: str = "out",
) -> EPReport:
    """Check the equitable-partition condition, enumerating every violating tuple."""
    pi = partition_of(pi.cells, g.n)
    violations = []
    for ci, cell in enumerate(pi.cells, start=1):
        for r, s in itertools.combinations(cell, 2):
            for cj, target in enumerate(pi.cells, start=1):
                if not include_same_cell and cj == ci:
                    continue
                sum_r = cell_degree(g, r, target, direction)
                sum_s = cell_degree(g, s, target, direction)
                if sum_r != sum_s:
                    violations.append(EPViolation(ci, r, s, cj, sum_r, sum_s))
    return EPReport(not violations, tuple(violations))


def coarsest_ep(
    g: MatrixWeightedGraph,
    protected=(),
    direction: str = "out",
) -> Partition:
    """Coarsest equitable partition keeping each protected node in a singleton cell.

    Iterated splitting on the per-cell block-degree signature; the cell count
    strictly increases until stable, so at most n rounds run.
    """
    protected = sorted(set(int(v) for v in protected))
    for v in protected:
        if not 1 <= v <= g.n:
            raise ValueError(f"protected node {v} out of range 1..{g.n}")
    rest = [v for v in range(1, g.n + 1) if v not in protected]
    cells: list[tuple[int, ...]] = [(v,) for v in protected]
    if rest:
        cells.append(tuple(rest))

    while True:
        new_cells: list[tuple[int, ...]] = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            groups: dict[tuple, list[int]] = {}
            for v in cell:
                sig = tuple(cell_degree(g, v, other, direction) for other in cells)
                groups.setdefault(sig, []).append(v)
            if len(groups) == 1:
                new_cells.append(cell)
            else:
                changed = True
                for members in sorted(groups.values()):
                    new_cells.append(tuple(members))
        cells = new_cells
        if not changed:
            break
    return Partition(tuple(cells))


@dataclass(frozen=True)
class QuotientGraph:
    """Cells as nodes; directed block weights d(V_i, V_j); no self-loops."""

    cells: tuple[tuple[int, ...], ...]
    d: int
    adjacency: dict[tuple[int, int], Block]  # 1-based cell indices

    @property
    def k(self) -> int:
        return len(self.cells)


def quotient(g: MatrixWeightedGraph, pi: Partition) -> QuotientGraph:
    """Quotient graph over an equitable partition; refuses non-equitable input."""
    report = verify_equitable(g, pi)
    if not report.verdict:
        v = report.violations[0]
        raise NotEquitableError(
            f"partition is not equitable: nodes {v.r} and {v.s} of cell {v.cell} "
            f"have unequal sums into cell {v.target_cell}"
        )
    pi = partition_of(pi.cells, g.n)
    adjacency: dict[tuple[int, int], Block] = {}
    for i, cell_i in enumerate(pi.cells, start=1):
        rep = cell_i[0]
        for j, cell_j in enumerate(pi.cells, start=1):
            if i == j:
                continue
            w = cell_degree(g, rep, cell_j)
            if not block_is_zero(w):
                adjacency[(i, j)] = w
    return QuotientGraph(pi.cells, g.d, adjacency)


def quotient_laplacian(q: QuotientGraph) -> BlockMatrix:
    """Laplacian of the quotient: diagonal (i,i) sums d(V_i, V_j) over the other cells."""
    k, d = q.k, q.d
    rows = [[Fraction(0)] * (k * d) for _ in range(k * d)]
    for (i, j), blk in q.adjacency.items():
        for p in range(d):
            for r in range(d):
                rows[(i - 1) * d + p][(j - 1) * d + r] = -blk[p][r]
                rows[(i - 1) * d + p][(i - 1) * d + r] += blk[p][r]
    return BlockMatrix(k, k, d, tuple(tuple(row) for row in rows))


def verify_lift(L: BlockMatrix, P: BlockMatrix, Lq: BlockMatrix) -> bool:
    """Certify L P = P Lq exactly and that im(P) is L-invariant."""
    if L.d != P.d or P.d != Lq.d:
        raise ValueError("block dimension mismatch")
    if L.block_rows != L.block_cols or Lq.block_rows != Lq.block_cols:
        raise ValueError("L and Lq must be square")
    if L.block_cols != P.block_rows or P.block_cols != Lq.block_rows:
        raise ValueError("L, P, Lq are not conformable")
    LP = L @ P
    if LP.entries != (P @ Lq).entries:
        return False
    P_rows = P.to_lists()
    stacked = linalg.hstack(P_rows, LP.to_lists())
    return linalg.rank(stacked) == linalg.rank(P_rows)
