"""Matrix-weighted network model.

Nodes are 1-based. An undirected graph stores both directions of every edge,
tied together by the configured symmetry convention; a directed graph stores
exactly the declared arcs. Edge weights are d x d blocks of exact rationals,
and a stored edge never carries the all-zero block.

A :class:`WeightPattern` is the symbolic counterpart: the same topology with
one free d x d block per edge plus equality / fixed-value / sign constraints.
It is the object "for any choice of weight" quantifies over.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .linalg import as_fraction

Block = tuple[tuple[Fraction, ...], ...]
Edge = tuple[int, int]

SYMMETRY_CONVENTIONS = ("entrywise", "transpose", "none")


# ---------------------------------------------------------------------------
# blocks
# ---------------------------------------------------------------------------

def block_from(data, d: int | None = None) -> Block:
    """Normalize a nested sequence (or bare scalar) into a d x d Fraction block."""
    if isinstance(data, (int, str, float, Fraction)):
        data = [[data]]
    rows = tuple(tuple(as_fraction(x) for x in row) for row in data)
    if not rows or any(len(row) != len(rows) for row in rows):
        raise ValueError("weight block must be square")
    if d is not None and len(rows) != d:
        raise ValueError(f"weight block is {len(rows)}x{len(rows)}, expected {d}x{d}")
    return rows


def block_zeros(d: int) -> Block:
    return tuple(tuple(Fraction(0) for _ in range(d)) for _ in range(d))


def block_identity(d: int) -> Block:
    return tuple(tuple(Fraction(1 if i == j else 0) for j in range(d)) for i in range(d))


def block_add(a: Block, b: Block) -> Block:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def block_neg(a: Block) -> Block:
    return tuple(tuple(-x for x in row) for row in a)


def block_transpose(a: Block) -> Block:
    return tuple(zip(*a))


def block_is_zero(a: Block) -> bool:
    return all(x == 0 for row in a for x in row)


# ---------------------------------------------------------------------------
# block matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlockMatrix:
    """Dense rational matrix with a (block_rows x block_cols) grid of d x d blocks."""

    block_rows: int
    block_cols: int
    d: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.block_rows * self.d:
            raise ValueError("entry row count does not match block_rows * d")
        if any(len(row) != self.block_cols * self.d for row in self.entries):
            raise ValueError("entry column count does not match block_cols * d")

    @property
    def nrows(self) -> int:
        return self.block_rows * self.d

    @property
    def ncols(self) -> int:
        return self.block_cols * self.d

    @classmethod
    def from_rows(cls, rows, block_rows: int, block_cols: int, d: int) -> "BlockMatrix":
        ent = tuple(tuple(as_fraction(x) for x in row) for row in rows)
        return cls(block_rows, block_cols, d, ent)

    @classmethod
    def zeros(cls, block_rows: int, block_cols: int, d: int) -> "BlockMatrix":
        row = tuple(Fraction(0) for _ in range(block_cols * d))
        return cls(block_rows, block_cols, d, tuple(row for _ in range(block_rows * d)))

    @classmethod
    def identity(cls, block_count: int, d: int) -> "BlockMatrix":
        n = block_count * d
        ent = tuple(tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n))
        return cls(block_count, block_count, d, ent)

    def block(self, bi: int, bj: int) -> Block:
        """The d x d block at 0-based block position (bi, bj)."""
        if not (0 <= bi < self.block_rows and 0 <= bj < self.block_cols):
            raise ValueError(f"block index ({bi}, {bj}) out of range")
        return tuple(
            tuple(self.entries[bi * self.d + p][bj * self.d + q] for q in range(self.d))
            for p in range(self.d)
        )

    def to_lists(self) -> list[list[Fraction]]:
        return [list(row) for row in self.entries]

    def transpose(self) -> "BlockMatrix":
        return BlockMatrix(self.block_cols, self.block_rows, self.d, tuple(zip(*self.entries)))

    def __matmul__(self, other: "BlockMatrix") -> "BlockMatrix":
        if self.d != other.d or self.block_cols != other.block_rows:
            raise ValueError("block dimension mismatch in matrix product")
        bt = list(zip(*other.entries))
        ent = tuple(
            tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt)
            for row in self.entries
        )
        return BlockMatrix(self.block_rows, other.block_cols, self.d, ent)


# ---------------------------------------------------------------------------
# concrete graphs
# ---------------------------------------------------------------------------

def _validate_leaders(leaders: Iterable[int], n: int) -> tuple[int, ...]:
    leaders = tuple(int(l) for l in leaders)
    if not leaders:
        raise ValueError("leader set must be nonempty")
    if len(set(leaders)) != len(leaders):
        raise ValueError("leader set contains duplicates")
    for l in leaders:
        if not 1 <= l <= n:
            raise ValueError(f"leader index {l} out of range 1..{n}")
    return leaders


@dataclass(frozen=True)
class MatrixWeightedGraph:
    n: int
    d: int
    directed: bool
    adjacency: dict[Edge, Block]
    leaders: tuple[int, ...]
    symmetry: str = "entrywise"

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValueError("n and d must be positive")
        if self.directed:
            if self.symmetry != "none":
                raise ValueError("directed graphs use symmetry convention 'none'")
        elif self.symmetry not in ("entrywise", "transpose"):
            raise ValueError(f"unknown symmetry convention {self.symmetry!r}")
        _validate_leaders(self.leaders, self.n)
        for (i, j), blk in self.adjacency.items():
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"edge ({i},{j}) out of range 1..{self.n}")
            if i == j:
                raise ValueError(f"self-loop at node {i}")
            if len(blk) != self.d:
                raise ValueError(f"edge ({i},{j}) weight is not {self.d}x{self.d}")
            if block_is_zero(blk):
                raise ValueError(f"edge ({i},{j}) carries the all-zero weight")
        if not self.directed:
            for (i, j), blk in self.adjacency.items():
                mirror = self.adjacency.get((j, i))
                expected = blk if self.symmetry == "entrywise" else block_transpose(blk)
                if mirror is None:
                    raise ValueError(f"undirected edge ({i},{j}) is missing its mirror")
                if mirror != expected:
                    raise ValueError(
                        f"edges ({i},{j}) and ({j},{i}) violate the {self.symmetry} convention"
                    )

    @classmethod
    def create(
        cls,
        n: int,
        d: int,
        edges: Mapping[Edge, object],
        leaders: Iterable[int],
        directed: bool = False,
        symmetry: str | None = None,
    ) -> "MatrixWeightedGraph":
        """Build a graph from any block-like weights, mirroring undirected edges."""
        if symmetry is None:
            symmetry = "none" if directed else "entrywise"
        adjacency: dict[Edge, Block] = {}
        for (i, j), w in edges.items():
            adjacency[(int(i), int(j))] = block_from(w, d)
        if not directed:
            for (i, j), blk in list(adjacency.items()):
                if (j, i) not in adjacency:
                    adjacency[(j, i)] = blk if symmetry == "entrywise" else block_transpose(blk)
        return cls(n, d, directed, adjacency, tuple(leaders), symmetry)

    def out_neighbors(self, i: int) -> list[int]:
        return sorted(j for (a, j) in self.adjacency if a == i)

    def weight(self, i: int, j: int) -> Block | None:
        return self.adjacency.get((i, j))


def degree(g: MatrixWeightedGraph, i: int) -> Block:
    """Block sum of the weights from node i to its (out-)neighbors."""
    if not 1 <= i <= g.n:
        raise ValueError(f"node index {i} out of range 1..{g.n}")
    total = block_zeros(g.d)
    for (a, _), blk in g.adjacency.items():
        if a == i:
            total = block_add(total, blk)
    return total


def cell_degree(g: MatrixWeightedGraph, i: int, cell: Iterable[int], direction: str = "out") -> Block:
    """Block sum of the weights between node i and the nodes of ``cell``.

    ``direction="out"`` sums A_ij over j in the cell (the default used by the
    equitable-partition test); ``"in"`` sums A_ji instead, for dual analysis.
    """
    if not 1 <= i <= g.n:
        raise ValueError(f"node index {i} out of range 1..{g.n}")
    members = set(cell)
    for j in members:
        if not 1 <= j <= g.n:
            raise ValueError(f"node index {j} out of range 1..{g.n}")
    total = block_zeros(g.d)
    for j in members:
        blk = g.adjacency.get((i, j) if direction == "out" else (j, i))
        if blk is not None:
            total = block_add(total, blk)
    return total


def build_laplacian(g: MatrixWeightedGraph) -> BlockMatrix:
    """L = D - A with block diagonal D of (signed) degrees; block rows sum to zero."""
    n, d = g.n, g.d
    rows = [[Fraction(0)] * (n * d) for _ in range(n * d)]
    for i in range(1, n + 1):
        deg = degree(g, i)
        for p in range(d):
            for q in range(d):
                rows[(i - 1) * d + p][(i - 1) * d + q] = deg[p][q]
    for (i, j), blk in g.adjacency.items():
        for p in range(d):
            for q in range(d):
                rows[(i - 1) * d + p][(j - 1) * d + q] = -blk[p][q]
    return BlockMatrix(n, n, d, tuple(tuple(row) for row in rows))


def build_input_matrix(leaders: Iterable[int], n: int, d: int) -> BlockMatrix:
    """nd x md indicator matrix: the l-th block column is identity at leader l's block row."""
    leaders = _validate_leaders(leaders, n)
    m = len(leaders)
    rows = [[Fraction(0)] * (m * d) for _ in range(n * d)]
    for col, l in enumerate(leaders):
        for p in range(d):
            rows[(l - 1) * d + p][col * d + p] = Fraction(1)
    return BlockMatrix(n, m, d, tuple(tuple(row) for row in rows))


# ---------------------------------------------------------------------------
# weight patterns
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EqualConstraint:
    left: str
    right: str

    kind = "equal"


@dataclass(frozen=True)
class FixedConstraint:
    var: str
    value: Block

    kind = "fixed"


@dataclass(frozen=True)
class SignConstraint:
    var: str
    sign: str  # "+" all entries >= 0, "-" all entries <= 0

    kind = "sign"


Constraint = Union[EqualConstraint, FixedConstraint, SignConstraint]


def _constraint_sort_key(c: Constraint):
    if isinstance(c, EqualConstraint):
        return (0, c.left, c.right)
    if isinstance(c, FixedConstraint):
        return (1, c.var, "")
    return (2, c.var, c.sign)


@dataclass(frozen=True)
class WeightPattern:
    """Fixed topology with one symbolic d x d block per edge plus constraints."""

    n: int
    d: int
    directed: bool
    leaders: tuple[int, ...]
    edges: tuple[Edge, ...]
    variable_names: tuple[str, ...]
    constraints: tuple[Constraint, ...]
    symmetry: str = "entrywise"

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValueError("n and d must be positive")
        if self.directed:
            if self.symmetry != "none":
                raise ValueError("directed patterns use symmetry convention 'none'")
        elif self.symmetry not in ("entrywise", "transpose"):
            raise ValueError(f"unknown symmetry convention {self.symmetry!r}")
        _validate_leaders(self.leaders, self.n)
        seen: set[Edge] = set()
        for (i, j) in self.edges:
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"edge ({i},{j}) out of range 1..{self.n}")
            if i == j:
                raise ValueError(f"self-loop at node {i}")
            if not self.directed and i > j:
                raise ValueError(f"undirected pattern edge ({i},{j}) must be stored as ({j},{i})")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i},{j})")
            seen.add((i, j))
        if len(self.variable_names) != len(self.edges):
            raise ValueError("one variable name per edge required")
        if len(set(self.variable_names)) != len(self.variable_names):
            raise ValueError("variable names must be unique")
        names = set(self.variable_names)
        for c in self.constraints:
            if isinstance(c, EqualConstraint):
                missing = {c.left, c.right} - names
            elif isinstance(c, FixedConstraint):
                missing = {c.var} - names
                if len(c.value) != self.d:
                    raise ValueError(f"fixed value for {c.var} is not {self.d}x{self.d}")
                if block_is_zero(c.value):
                    raise ValueError(f"fixed value for {c.var} is the all-zero block")
            elif isinstance(c, SignConstraint):
                missing = {c.var} - names
                if c.sign not in ("+", "-"):
                    raise ValueError(f"sign constraint on {c.var} must be '+' or '-'")
            else:
                raise ValueError(f"unknown constraint {c!r}")
            if missing:
                raise ValueError(f"constraint references undeclared variable(s) {sorted(missing)}")

    @classmethod
    def create(
        cls,
        n: int,
        d: int,
        edges: Iterable[Edge],
        leaders: Iterable[int],
        directed: bool = False,
        symmetry: str | None = None,
        variable_names: Mapping[Edge, str] | None = None,
        constraints: Iterable[Constraint] = (),
    ) -> "WeightPattern":
        if symmetry is None:
            symmetry = "none" if directed else "entrywise"
        norm: list[Edge] = []
        for (i, j) in edges:
            i, j = int(i), int(j)
            if not directed and i > j:
                i, j = j, i
            norm.append((i, j))
        norm.sort()
        names = []
        given = dict(variable_names or {})
        if not directed:
            given = {((min(i, j), max(i, j))): v for (i, j), v in given.items()}
        for e in norm:
            names.append(given.get(e, f"w{e[0]}_{e[1]}"))
        cons = tuple(sorted(constraints, key=_constraint_sort_key))
        return cls(n, d, directed, tuple(leaders), tuple(norm), tuple(names), cons, symmetry)

    @property
    def followers(self) -> tuple[int, ...]:
        return tuple(v for v in range(1, self.n + 1) if v not in self.leaders)

    @property
    def unknown_count(self) -> int:
        return len(self.edges) * self.d * self.d

    def variable_index(self, name: str) -> int:
        try:
            return self.variable_names.index(name)
        except ValueError:
            raise ValueError(f"unknown variable {name!r}") from None

    def edge_of(self, name: str) -> Edge:
        return self.edges[self.variable_index(name)]

    def variable_column(self, name: str, p: int, q: int) -> int:
        """Unknown-vector column of entry (p, q) of a variable's block."""
        return self.variable_index(name) * self.d * self.d + p * self.d + q

    def entry_column(self, i: int, j: int, p: int, q: int) -> int | None:
        """Unknown-vector column storing A_ij[p][q], or None if (i, j) is not an edge.

        For undirected patterns the reverse orientation resolves to the same
        variable, with indices transposed under the 'transpose' convention.
        """
        if self.directed:
            if (i, j) not in self.edges:
                return None
            idx = self.edges.index((i, j))
            return idx * self.d * self.d + p * self.d + q
        key = (min(i, j), max(i, j))
        if key not in self.edges:
            return None
        idx = self.edges.index(key)
        if i > j and self.symmetry == "transpose":
            p, q = q, p
        return idx * self.d * self.d + p * self.d + q

    def sign_of(self, name: str) -> str | None:
        for c in self.constraints:
            if isinstance(c, SignConstraint) and c.var == name:
                return c.sign
        return None

    def materialize(self, assignment: Mapping[str, Block]) -> MatrixWeightedGraph:
        """Instantiate the pattern with concrete blocks, one per variable."""
        missing = set(self.variable_names) - set(assignment)
        if missing:
            raise ValueError(f"assignment missing variable(s) {sorted(missing)}")
        edges = {e: assignment[name] for e, name in zip(self.edges, self.variable_names)}
        return MatrixWeightedGraph.create(
            self.n, self.d, edges, self.leaders,
            directed=self.directed, symmetry=self.symmetry,
        )
