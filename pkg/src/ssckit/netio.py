"""Parsing and canonical serialization of network documents.

A document is a JSON object with fields ``n``, ``d``, ``directed``,
``leaders`` and ``edges``. Concrete graphs give every edge a ``weight``
(d x d array of integers or "p/q" strings); patterns declare ``variables``
and ``constraints`` instead. Undirected edges are listed once; the parser
materializes the mirror under the ``symmetry`` convention (default
"entrywise"). parse -> serialize -> parse is the identity on canonical form.
"""

from __future__ import annotations

import json
from .graphs import (
    Block,
    EqualConstraint,
    FixedConstraint,
    MatrixWeightedGraph,
    SignConstraint,
    WeightPattern,
    block_from,
)
from .linalg import fraction_to_json


class ParseError(ValueError):
    """Malformed or inconsistent network document; carries a location hint."""

    def __init__(self, message: str, location: str = "document"):
        super().__init__(f"{location}: {message}")
        self.location = location


def _require(doc: dict, key: str, types, location: str):
    if key not in doc:
        raise ParseError(f"missing field {key!r}", location)
    value = doc[key]
    if not isinstance(value, types):
        raise ParseError(f"field {key!r} has the wrong type", location)
    return value


def _parse_block(raw, d: int, location: str) -> Block:
    try:
        return block_from(raw, d)
    except (ValueError, TypeError) as exc:
        raise ParseError(str(exc), location) from None


def parse_network(text: str):
    """Parse a document into a MatrixWeightedGraph or WeightPattern."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")

    n = _require(doc, "n", int, "n")
    d = _require(doc, "d", int, "d")
    if isinstance(n, bool) or isinstance(d, bool) or n < 1 or d < 1:
        raise ParseError("n and d must be positive integers", "n")
    directed = doc.get("directed", False)
    if not isinstance(directed, bool):
        raise ParseError("field 'directed' must be a boolean", "directed")
    leaders = _require(doc, "leaders", list, "leaders")
    if not all(isinstance(l, int) and not isinstance(l, bool) for l in leaders):
        raise ParseError("leaders must be integers", "leaders")
    symmetry = doc.get("symmetry", "none" if directed else "entrywise")
    edges_raw = _require(doc, "edges", list, "edges")

    is_pattern = "variables" in doc or "constraints" in doc or any(
        isinstance(e, dict) and "weight" not in e for e in edges_raw
    )

    edges: list[tuple[int, int]] = []
    weights: dict[tuple[int, int], object] = {}
    for idx, e in enumerate(edges_raw):
        loc = f"edges[{idx}]"
        if not isinstance(e, dict):
            raise ParseError("edge must be an object", loc)
        try:
            i, j = int(e["i"]), int(e["j"])
        except (KeyError, TypeError, ValueError):
            raise ParseError("edge needs integer fields 'i' and 'j'", loc) from None
        if not (1 <= i <= n and 1 <= j <= n):
            raise ParseError(f"edge ({i},{j}) out of range 1..{n}", loc)
        if i == j:
            raise ParseError(f"self-loop at node {i}", loc)
        edges.append((i, j))
        if "weight" in e:
            weights[(i, j)] = e["weight"]

    if not is_pattern:
        adjacency = {}
        for idx, (key, raw) in enumerate(weights.items()):
            adjacency[key] = _parse_block(raw, d, f"edges[{edges.index(key)}].weight")
        try:
            return MatrixWeightedGraph.create(
                n, d, adjacency, leaders, directed=directed, symmetry=symmetry
            )
        except ValueError as exc:
            raise ParseError(str(exc)) from None

    # pattern: named variables, optional inline weights become fixed constraints
    var_names: dict[tuple[int, int], str] = {}
    for idx, v in enumerate(doc.get("variables", [])):
        loc = f"variables[{idx}]"
        if not isinstance(v, dict) or "edge" not in v or "name" not in v:
            raise ParseError("variable needs fields 'edge' and 'name'", loc)
        try:
            i, j = (int(x) for x in v["edge"])
        except (TypeError, ValueError):
            raise ParseError("variable edge must be a pair of integers", loc) from None
        if not directed:
            i, j = min(i, j), max(i, j)
        if (i, j) not in {(a, b) if directed else (min(a, b), max(a, b)) for a, b in edges}:
            raise ParseError(f"variable names undeclared edge ({i},{j})", loc)
        var_names[(i, j)] = str(v["name"])

    constraints = []
    for idx, c in enumerate(doc.get("constraints", [])):
        loc = f"constraints[{idx}]"
        if not isinstance(c, dict) or "kind" not in c or "args" not in c:
            raise ParseError("constraint needs fields 'kind' and 'args'", loc)
        kind, args = c["kind"], c["args"]
        if kind == "equal":
            if not (isinstance(args, list) and len(args) == 2):
                raise ParseError("equal constraint takes [left, right]", loc)
            left, right = sorted(str(a) for a in args)
            constraints.append(EqualConstraint(left, right))
        elif kind == "fixed":
            if not (isinstance(args, list) and len(args) == 2):
                raise ParseError("fixed constraint takes [var, value]", loc)
            constraints.append(FixedConstraint(str(args[0]), _parse_block(args[1], d, loc)))
        elif kind == "sign":
            if not (isinstance(args, list) and len(args) == 2):
                raise ParseError("sign constraint takes [var, '+'|'-']", loc)
            constraints.append(SignConstraint(str(args[0]), str(args[1])))
        else:
            raise ParseError(f"unknown constraint kind {kind!r}", loc)

    try:
        pattern = WeightPattern.create(
            n, d, edges, leaders,
            directed=directed, symmetry=symmetry,
            variable_names=var_names, constraints=constraints,
        )
    except ValueError as exc:
        raise ParseError(str(exc)) from None

    # an inline weight on a pattern edge is shorthand for a fixed constraint
    extra = []
    for (i, j), raw in weights.items():
        key = (i, j) if directed else (min(i, j), max(i, j))
        name = pattern.variable_names[pattern.edges.index(key)]
        extra.append(FixedConstraint(name, _parse_block(raw, d, "edges")))
    if extra:
        try:
            pattern = WeightPattern.create(
                n, d, pattern.edges, leaders,
                directed=directed, symmetry=symmetry,
                variable_names=dict(zip(pattern.edges, pattern.variable_names)),
                constraints=list(pattern.constraints) + extra,
            )
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    return pattern


def _block_to_json(blk: Block):
    return [[fraction_to_json(x) for x in row] for row in blk]


def serialize_network(obj) -> str:
    """Canonical JSON text for a graph or pattern (trailing newline included)."""
    if isinstance(obj, MatrixWeightedGraph):
        doc = {"n": obj.n, "d": obj.d, "directed": obj.directed}
        if not obj.directed:
            doc["symmetry"] = obj.symmetry
        doc["leaders"] = list(obj.leaders)
        if obj.directed:
            keys = sorted(obj.adjacency)
        else:
            keys = sorted({(min(i, j), max(i, j)) for (i, j) in obj.adjacency})
        doc["edges"] = [
            {"i": i, "j": j, "weight": _block_to_json(obj.adjacency[(i, j)])}
            for (i, j) in keys
        ]
        return json.dumps(doc, indent=2) + "\n"
    if isinstance(obj, WeightPattern):
        doc = {"n": obj.n, "d": obj.d, "directed": obj.directed}
        if not obj.directed:
            doc["symmetry"] = obj.symmetry
        doc["leaders"] = list(obj.leaders)
        doc["edges"] = [{"i": i, "j": j} for (i, j) in obj.edges]
        doc["variables"] = [
            {"edge": [i, j], "name": name}
            for (i, j), name in zip(obj.edges, obj.variable_names)
        ]
        cons = []
        for c in obj.constraints:
            if isinstance(c, EqualConstraint):
                cons.append({"kind": "equal", "args": [c.left, c.right]})
            elif isinstance(c, FixedConstraint):
                cons.append({"kind": "fixed", "args": [c.var, _block_to_json(c.value)]})
            else:
                cons.append({"kind": "sign", "args": [c.var, c.sign]})
        doc["constraints"] = cons
        return json.dumps(doc, indent=2) + "\n"
    raise TypeError(f"cannot serialize {type(obj).__name__}")
