"""Controllable subspace of a pair (L, M) and the controllability/observability dual.

The subspace im(M) + L im(M) + L^2 im(M) + ... is built round by round and the
iteration stops at the first round where the rank stops growing (the span is
then L-invariant, so later powers add nothing). Ranks are exact by default;
the "float" backend trades certification for speed on larger exploratory runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .graphs import BlockMatrix


@dataclass(frozen=True)
class ControllableSubspace:
    """Basis columns (stored row-major, nd x dim) spanning <L|M>."""

    basis: tuple[tuple[Fraction, ...], ...]
    dim: int


def _check_pair(L: BlockMatrix, M: BlockMatrix):
    if L.block_rows != L.block_cols:
        raise ValueError("L must be square")
    if L.d != M.d or L.block_rows != M.block_rows:
        raise ValueError("L and M have mismatched dimensions")


def _float_basis_columns(cols: list[list[Fraction]]) -> list[int]:
    # greedy rank-increasing column pick with the SVD cutoff
    chosen: list[int] = []
    current = 0
    for idx in range(len(cols)):
        trial = np.array([[float(x) for x in cols[c]] for c in chosen + [idx]], dtype=float).T
        r = linalg._rank_float([list(row) for row in trial.tolist()])
        if r > current:
            chosen.append(idx)
            current = r
    return chosen


def controllable_subspace(L: BlockMatrix, M: BlockMatrix, backend: str = "exact") -> ControllableSubspace:
    """Minimal L-invariant subspace containing im(M), as a basis of Krylov columns."""
    _check_pair(L, M)
    nd = L.nrows
    L_rows = L.to_lists()
    frontier = M.to_lists()
    columns = [list(col) for col in zip(*frontier)]
    accumulated = [list(row) for row in frontier]  # nd x (#cols so far)
    current_rank = linalg.rank(accumulated, backend)
    rounds = 0
    while current_rank < nd and rounds < nd:
        frontier = linalg.mat_mul(L_rows, frontier)
        columns.extend(list(col) for col in zip(*frontier))
        accumulated = linalg.hstack(accumulated, frontier)
        new_rank = linalg.rank(accumulated, backend)
        rounds += 1
        if new_rank == current_rank:
            break
        current_rank = new_rank
    if backend == "exact":
        keep = linalg.independent_columns(accumulated)
    else:
        keep = _float_basis_columns(columns)
    basis_cols = [columns[c] for c in keep]
    basis_rows = tuple(tuple(col[r] for col in basis_cols) for r in range(nd))
    return ControllableSubspace(basis_rows, len(keep))


def is_controllable(L: BlockMatrix, M: BlockMatrix, backend: str = "exact") -> bool:
    """Kalman test: the pair is controllable iff the Krylov span fills all of R^{nd}."""
    return controllable_subspace(L, M, backend).dim == L.nrows


def observability_matrix(L: BlockMatrix, M: BlockMatrix, powers: int | None = None):
    """Row stack [M^T; M^T L; ...; M^T L^{p-1}] whose rank is the observability rank."""
    _check_pair(L, M)
    if powers is None:
        powers = L.nrows
    L_rows = L.to_lists()
    block = linalg.transpose(M.to_lists())
    rows = []
    for _ in range(powers):
        rows.extend(list(r) for r in block)
        block = linalg.mat_mul(block, L_rows)
    return rows


def dual_pair(L: BlockMatrix, M: BlockMatrix) -> tuple[BlockMatrix, BlockMatrix]:
    """(L^T, M): controllability of this pair is observability of (L, M)."""
    _check_pair(L, M)
    return L.transpose(), M


def shifted(L: BlockMatrix, alpha: Fraction) -> BlockMatrix:
    """L + alpha I; shares the controllable subspace of L for every alpha."""
    ent = tuple(
        tuple(x + alpha if r == c else x for c, x in enumerate(row))
        for r, row in enumerate(L.entries)
    )
    return BlockMatrix(L.block_rows, L.block_cols, L.d, ent)


def negated(L: BlockMatrix) -> BlockMatrix:
    ent = tuple(tuple(-x for x in row) for row in L.entries)
    return BlockMatrix(L.block_rows, L.block_cols, L.d, ent)


def spans_equal(basis_a, basis_b) -> bool:
    """Mutual-containment test by exact ranks of stacked bases (row-major inputs)."""
    a = [list(r) for r in basis_a]
    b = [list(r) for r in basis_b]
    if not a and not b:
        return True
    ra = linalg.rank(a)
    rb = linalg.rank(b)
    if ra != rb:
        return False
    return linalg.rank(linalg.hstack(a, b)) == ra
