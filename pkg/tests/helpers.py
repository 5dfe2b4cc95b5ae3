"""Shared builders and independent oracles for the test suite.

Oracles deliberately avoid the library's own code paths where they check one:
ranks go through sympy, partition enumeration through sympy's
multiset_partitions, and the materialized controllability matrix is built by
a plain power loop.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import sympy
from sympy.utilities.iterables import multiset_partitions

from ssckit.graphs import MatrixWeightedGraph, WeightPattern, block_is_zero
from ssckit.partitions import Partition, verify_equitable


def rand_block(rng: random.Random, d: int, lo=-4, hi=4):
    while True:
        blk = tuple(tuple(Fraction(rng.randint(lo, hi)) for _ in range(d)) for _ in range(d))
        if not block_is_zero(blk):
            return blk


def random_graph(
    rng: random.Random,
    n: int,
    d: int = 1,
    directed: bool = False,
    density: float = 0.5,
    leaders=None,
    symmetric_blocks: bool = False,
) -> MatrixWeightedGraph:
    edges = {}
    pairs = (
        itertools.permutations(range(1, n + 1), 2)
        if directed
        else itertools.combinations(range(1, n + 1), 2)
    )
    for (i, j) in pairs:
        if rng.random() < density:
            blk = rand_block(rng, d)
            if symmetric_blocks:
                blk = tuple(
                    tuple((blk[p][q] + blk[q][p]) / 2 for q in range(d)) for p in range(d)
                )
                if block_is_zero(blk):
                    blk = tuple(
                        tuple(Fraction(1 if p == q else 0) for q in range(d)) for p in range(d)
                    )
            edges[(i, j)] = blk
    if leaders is None:
        m = rng.randint(1, max(1, n - 1))
        leaders = sorted(rng.sample(range(1, n + 1), m))
    return MatrixWeightedGraph.create(n, d, edges, leaders, directed=directed)


def random_ep_lift(rng: random.Random, max_cells=4, max_cell_size=3, d_choices=(1, 2)):
    """Directed graph that admits a given partition as an EP by construction.

    Random block weights q_ij on a quotient skeleton are split, per node of
    cell i, into blocks over the nodes of cell j summing exactly to q_ij.
    Returns (graph, partition, quotient weights keyed by 1-based cell pair).
    """
    d = rng.choice(d_choices)
    k = rng.randint(2, max_cells)
    sizes = [rng.randint(1, max_cell_size) for _ in range(k)]
    n = sum(sizes)
    nodes = list(range(1, n + 1))
    rng.shuffle(nodes)
    cells = []
    pos = 0
    for s in sizes:
        cells.append(tuple(sorted(nodes[pos:pos + s])))
        pos += s
    cells.sort()  # canonical cell order, so quotient indices line up
    qweights = {}
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            if i != j and rng.random() < 0.6:
                qweights[(i, j)] = rand_block(rng, d)
    edges = {}
    zero = tuple(tuple(Fraction(0) for _ in range(d)) for _ in range(d))
    for (i, j), q in qweights.items():
        targets = cells[j - 1]
        for v in cells[i - 1]:
            remaining = q
            for idx, w in enumerate(targets):
                if idx == len(targets) - 1:
                    blk = remaining
                else:
                    blk = tuple(
                        tuple(Fraction(rng.randint(-2, 2)) for _ in range(d)) for _ in range(d)
                    )
                    remaining = tuple(
                        tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(remaining, blk)
                    )
                if blk != zero:
                    edges[(v, w)] = blk
    g = MatrixWeightedGraph.create(n, d, edges, leaders=[1], directed=True)
    return g, Partition(tuple(cells)), qweights


def materialized_ctrb(L, M, powers=None):
    """Rows of [M  L M  ...  L^{p-1} M], built by a direct power loop."""
    nd = L.nrows
    if powers is None:
        powers = nd
    Lr = [list(r) for r in L.entries]
    block = [list(r) for r in M.entries]
    cols = [list(col) for col in zip(*block)]
    for _ in range(powers - 1):
        block = [
            [sum((Lr[r][t] * block[t][c] for t in range(nd)), Fraction(0))
             for c in range(len(block[0]))]
            for r in range(nd)
        ]
        cols.extend(list(col) for col in zip(*block))
    return [[cols[c][r] for c in range(len(cols))] for r in range(nd)]


def sympy_rank(rows) -> int:
    if not rows or not rows[0]:
        return 0
    return sympy.Matrix([[sympy.Rational(x) for x in row] for row in rows]).rank()


def refines(p: Partition, q: Partition) -> bool:
    qcells = [set(c) for c in q.cells]
    return all(any(set(c) <= qc for qc in qcells) for c in p.cells)


def brute_force_coarsest(g: MatrixWeightedGraph, protected) -> Partition:
    """Coarsest protected-singleton EP by exhaustive partition search.

    Also certifies coarseness: the minimum cell count is attained once and
    every other candidate refines the winner.
    """
    protected = set(protected)
    candidates = []
    for parts in multiset_partitions(list(range(1, g.n + 1))):
        cells = [tuple(sorted(c)) for c in parts]
        if any(len(c) > 1 and protected & set(c) for c in cells):
            continue
        pi = Partition(tuple(cells))
        if verify_equitable(g, pi).verdict:
            candidates.append(pi)
    best = min(candidates, key=lambda p: (p.k, p.cells))
    assert sum(1 for p in candidates if p.k == best.k) == 1, "coarsest EP is not unique"
    assert all(refines(p, best) for p in candidates)
    return best


def oracle_feasible_partitions(pattern: WeightPattern, include_same_cell=True):
    """All-partitions symbolic oracle for EP feasibility over a pattern.

    Independent route: sympy symbols per edge entry, ALL same-cell pairs (not
    consecutive ones), sympy.linsolve, and an identical-vanishing test on the
    parametric solution. Returns the set of canonical cell tuples that are
    feasible.
    """
    d = pattern.d
    syms = {}
    for (i, j) in pattern.edges:
        syms[(i, j)] = sympy.Matrix(
            d, d, lambda p, q, i=i, j=j: sympy.Symbol(f"x_{i}_{j}_{p}_{q}")
        )

    def weight_expr(r, t):
        if pattern.directed:
            return syms.get((r, t))
        key = (min(r, t), max(r, t))
        m = syms.get(key)
        if m is None:
            return None
        if r > t and pattern.symmetry == "transpose":
            return m.T
        return m

    unknowns = [s for m in syms.values() for s in m]
    zero = sympy.zeros(d, d)
    base_eqs = []
    for c in pattern.constraints:
        kind = type(c).__name__
        if kind == "EqualConstraint":
            diff = syms[pattern.edge_of(c.left)] - syms[pattern.edge_of(c.right)]
            base_eqs.extend(list(diff))
        elif kind == "FixedConstraint":
            diff = syms[pattern.edge_of(c.var)] - sympy.Matrix(
                [[sympy.Rational(x) for x in row] for row in c.value]
            )
            base_eqs.extend(list(diff))

    feasible = set()
    followers = list(pattern.followers)
    fparts = multiset_partitions(followers) if followers else iter([[]])
    for parts in fparts:
        cells = tuple(sorted(
            [tuple(sorted(c)) for c in parts] + [(l,) for l in pattern.leaders]
        ))
        eqs = list(base_eqs)
        for cell in cells:
            for r, s in itertools.combinations(cell, 2):
                for target in cells:
                    if not include_same_cell and target == cell:
                        continue
                    sum_r = zero[:, :]
                    sum_s = zero[:, :]
                    for t in target:
                        wr = weight_expr(r, t)
                        ws = weight_expr(s, t)
                        if wr is not None:
                            sum_r = sum_r + wr
                        if ws is not None:
                            sum_s = sum_s + ws
                    eqs.extend(list(sum_r - sum_s))
        eqs = [e for e in eqs if e != 0]
        if eqs:
            sol = sympy.linsolve(eqs, unknowns)
            if sol is sympy.S.EmptySet:
                continue
            values = dict(zip(unknowns, next(iter(sol))))
        else:
            values = {u: u for u in unknowns}
        ok = True
        for m in syms.values():
            if all(sympy.expand(values[s]) == 0 for s in m):
                ok = False
                break
        if ok:
            feasible.add(cells)
    return feasible
