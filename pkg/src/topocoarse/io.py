"""Reading and writing graphs and diagrams.

JSON documents look like::

    {"dim": 2,
     "nodes": [{"id": "a", "pos": [0.0, 0.0]}, ...],
     "edges": [{"u": "a", "v": "b", "weight": 2.5}, ...]}

``weight`` is optional but must be on every edge or on none. The CSV
edge-list format is a pair of files: nodes ``id,x,y[,z]`` and edges
``u,v[,weight]``, each with a header row.
"""

from __future__ import annotations

import csv
import json
import logging
from pathlib import Path

import numpy as np

from topocoarse.graph import GraphValidationError, SpatialGraph, validate
from topocoarse.persistence import PersistenceDiagram

log = logging.getLogger(__name__)


class GraphParseError(ValueError):
    def __init__(self, message: str, path=None, line: int | None = None):
        where = str(path) if path is not None else "<input>"
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {message}")
        self.line = line


def _assemble(ids, positions, raw_edges, path) -> SpatialGraph:
    """Map ids to 0..n-1, merge reversed duplicates, then validate."""
    index = {}
    for i, node_id in enumerate(ids):
        if node_id in index:
            raise GraphValidationError([f"duplicate node id {node_id!r}"])
        index[node_id] = i
    has_w = [w is not None for _, _, w, _ in raw_edges]
    if any(has_w) and not all(has_w):
        missing = next(line for (_, _, w, line) in raw_edges if w is None)
        raise GraphParseError("weight present on some edges only", path, missing)
    edges, weights = [], []
    seen = {}
    for u, v, w, line in raw_edges:
        for end in (u, v):
            if end not in index:
                raise GraphParseError(f"edge refers to unknown node {end!r}", path, line)
        a, b = index[u], index[v]
        rev = seen.get((b, a))
        if rev is not None and a != b:
            if weights and weights[rev] != w:
                raise GraphValidationError([f"conflicting weights for ({u!r}, {v!r}) in each direction"])
            log.warning("edge (%r, %r) given in both directions; treating as one undirected edge", u, v)
            continue
        seen.setdefault((a, b), len(edges))
        edges.append((a, b))
        if w is not None:
            weights.append(w)
    g = SpatialGraph(
        np.asarray(positions, dtype=np.float64).reshape(len(ids), -1),
        np.asarray(edges, dtype=np.int64).reshape(-1, 2),
        np.asarray(weights, dtype=np.float64) if weights else None,
        ids=ids,
    )
    violations = validate(g)
    if violations:
        raise GraphValidationError(violations)
    return g


def _number(x, path, line, what):
    if isinstance(x, bool) or not isinstance(x, (int, float, str)):
        raise GraphParseError(f"{what} is not a number: {x!r}", path, line)
    try:
        return float(x)
    except ValueError:
        raise GraphParseError(f"{what} is not a number: {x!r}", path, line) from None


def loads_json(text: str, path=None) -> SpatialGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(exc.msg, path, exc.lineno) from None
    if not isinstance(doc, dict) or "nodes" not in doc or "edges" not in doc:
        raise GraphParseError("expected an object with 'nodes' and 'edges'", path)
    dim = doc.get("dim")
    ids, positions = [], []
    for i, node in enumerate(doc["nodes"]):
        if not isinstance(node, dict) or "pos" not in node:
            raise GraphParseError(f"node #{i} needs 'id' and 'pos'", path)
        pos = [_number(x, path, None, f"coordinate of node #{i}") for x in node["pos"]]
        if dim is None:
            dim = len(pos)
        if len(pos) != dim:
            raise GraphParseError(f"node #{i} has {len(pos)} coordinates, expected {dim}", path)
        ids.append(node.get("id", i))
        positions.append(pos)
    if not ids:
        raise GraphValidationError(["graph has no nodes"])
    raw = []
    for i, e in enumerate(doc["edges"]):
        if not isinstance(e, dict) or "u" not in e or "v" not in e:
            raise GraphParseError(f"edge #{i} needs 'u' and 'v'", path)
        w = e.get("weight")
        raw.append((e["u"], e["v"], None if w is None else _number(w, path, None, f"weight of edge #{i}"), None))
    return _assemble(ids, positions, raw, path)


def dumps_json(g: SpatialGraph) -> str:
    ids = list(g.node_ids)
    nodes = [{"id": _plain(i), "pos": [float(x) for x in p]} for i, p in zip(ids, g.positions.tolist())]
    edges = []
    for k, (u, v) in enumerate(g.edges.tolist()):
        e = {"u": _plain(ids[u]), "v": _plain(ids[v])}
        if g.custom_weights is not None:
            e["weight"] = float(g.custom_weights[k])
        edges.append(e)
    return json.dumps({"dim": g.dim, "nodes": nodes, "edges": edges}, indent=1) + "\n"


def _plain(x):
    if isinstance(x, np.integer):
        return int(x)
    return x


def _read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise GraphParseError("empty file", path, 1)
    header = [h.strip() for h in rows[0]]
    body = [(i, [c.strip() for c in r]) for i, r in enumerate(rows[1:], start=2) if r and not r[0].startswith("#")]
    return header, body


def _coerce_ids(values):
    try:
        return [int(v) for v in values]
    except ValueError:
        return list(values)


def load_csv(nodes_path, edges_path) -> SpatialGraph:
    header, body = _read_csv(nodes_path)
    if len(header) < 2 or header[0] != "id":
        raise GraphParseError("nodes header must be id,x,y[,z]", nodes_path, 1)
    p = len(header) - 1
    raw_ids, positions = [], []
    for line, row in body:
        if len(row) != p + 1:
            raise GraphParseError(f"expected {p + 1} fields, got {len(row)}", nodes_path, line)
        raw_ids.append(row[0])
        positions.append([_number(x, nodes_path, line, "coordinate") for x in row[1:]])
    if not raw_ids:
        raise GraphValidationError(["graph has no nodes"])
    ids = _coerce_ids(raw_ids)
    id_of = dict(zip(raw_ids, ids))

    header, body = _read_csv(edges_path)
    if header[:2] != ["u", "v"] or len(header) > 3:
        raise GraphParseError("edges header must be u,v[,weight]", edges_path, 1)
    weighted = len(header) == 3
    raw = []
    for line, row in body:
        if len(row) != len(header):
            raise GraphParseError(f"expected {len(header)} fields, got {len(row)}", edges_path, line)
        w = _number(row[2], edges_path, line, "weight") if weighted else None
        raw.append((id_of.get(row[0], row[0]), id_of.get(row[1], row[1]), w, line))
    return _assemble(ids, positions, raw, edges_path)


def save_csv(g: SpatialGraph, nodes_path, edges_path) -> None:
    ids = list(g.node_ids)
    axes = ["x", "y", "z"] if g.dim <= 3 else [f"x{i}" for i in range(g.dim)]
    with open(nodes_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id"] + axes[: g.dim])
        for i, p in zip(ids, g.positions.tolist()):
            w.writerow([i] + [repr(float(x)) for x in p])
    with open(edges_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["u", "v"] + (["weight"] if g.custom_weights is not None else []))
        for k, (u, v) in enumerate(g.edges.tolist()):
            extra = [repr(float(g.custom_weights[k]))] if g.custom_weights is not None else []
            w.writerow([ids[u], ids[v]] + extra)


def load_graph(path, fmt: str | None = None, edges_path=None) -> SpatialGraph:
    """Load a graph from JSON, or from a nodes CSV plus an edges CSV."""
    path = Path(path)
    if fmt is None:
        fmt = "csv-edgelist" if path.suffix.lower() == ".csv" else "json"
    if fmt == "json":
        return loads_json(path.read_text(), path)
    if fmt == "csv-edgelist":
        if edges_path is None:
            raise GraphParseError("csv-edgelist format needs an edges file", path)
        return load_csv(path, edges_path)
    raise ValueError(f"unknown graph format {fmt!r}")


def save_graph(g: SpatialGraph, path) -> None:
    Path(path).write_text(dumps_json(g))


def load_diagram(path) -> PersistenceDiagram:
    return PersistenceDiagram.from_csv(Path(path).read_text())


def save_diagram(pd: PersistenceDiagram, path) -> None:
    Path(path).write_text(pd.to_csv())
