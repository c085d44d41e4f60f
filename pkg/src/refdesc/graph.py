"""Immutable directed labeled graph with a name table.

The graph is the shared domain of discourse: N nodes with dense integer
ids, a small label alphabet, and a set of directed (source, label,
target) arc triples.  Absence of an arc acts as an implicit pseudo-label
during shape evaluation but is never stored.

The name table maps name strings to weighted candidate node sets and
partitions nodes into a DESCRIBED group (the things messages talk
about) and a DESCRIPTOR group (the things descriptions are built from).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import DuplicateArc, InvalidArc

DESCRIBED = "DESCRIBED"
DESCRIPTOR = "DESCRIPTOR"

_WEIGHT_TOL = 1e-9


class Graph:
    """Directed labeled graph, immutable after construction.

    Adjacency is stored per label as arrays of frozen out/in neighbor
    sets, so `has_arc` and neighbor queries are O(1) and the object is
    safe to share across concurrent readers.
    """

    __slots__ = ("node_count", "labels", "arc_count", "metadata", "_out", "_in", "_label_index")

    def __init__(self, node_count: int, labels: Sequence[str],
                 out_adj: list[list[frozenset[int]]],
                 in_adj: list[list[frozenset[int]]],
                 arc_count: int, metadata: dict):
        self.node_count = node_count
        self.labels = tuple(labels)
        self._label_index = {lab: i for i, lab in enumerate(self.labels)}
        self._out = out_adj
        self._in = in_adj
        self.arc_count = arc_count
        self.metadata = dict(metadata)

    def has_arc(self, source: int, label: int, target: int) -> bool:
        return target in self._out[label][source]

    def out_neighbors(self, node: int, label: int = 0) -> frozenset[int]:
        return self._out[label][node]

    def in_neighbors(self, node: int, label: int = 0) -> frozenset[int]:
        return self._in[label][node]

    def label_id(self, label: str) -> int:
        return self._label_index[label]

    def arcs(self) -> Iterator[tuple[int, int, int]]:
        """All arc triples in (source, label, target) sorted order."""
        for src in range(self.node_count):
            for lab in range(len(self.labels)):
                for dst in sorted(self._out[lab][src]):
                    yield (src, lab, dst)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return (f"Graph(n={self.node_count}, labels={list(self.labels)}, "
                f"arcs={self.arc_count}, meta={self.metadata.get('kind')})")


@dataclass(frozen=True)
class GraphStats:
    average_degree: float   # mean out-degree
    arc_density: float      # arcs / (N * (N - 1)), per ordered pair
    entropy_rate: float     # bits per adjacency entry


@dataclass(frozen=True)
class NameTable:
    """Weighted name -> candidate-node mapping plus the two node groups.

    Per-name weights are strictly positive and sum to 1.  A node carries
    at most one name; tables built by `assign_names` cover every node
    exactly once.
    """

    entries: dict[str, tuple[tuple[int, float], ...]]
    described: frozenset[int] = field(default_factory=frozenset)
    descriptor: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        seen: set[int] = set()
        for name, cands in self.entries.items():
            if not cands:
                raise ValueError(f"name {name!r} has no candidates")
            total = 0.0
            for node, w in cands:
                if w <= 0.0:
                    raise ValueError(f"name {name!r}: weight for node {node} not positive")
                if node in seen:
                    raise ValueError(f"node {node} carries more than one name")
                seen.add(node)
                total += w
            if abs(total - 1.0) > _WEIGHT_TOL:
                raise ValueError(f"name {name!r}: weights sum to {total}, not 1")

    def lookup(self, name: str) -> list[tuple[int, float]]:
        """Weighted candidates for a name; empty list if unknown."""
        return list(self.entries.get(name, ()))

    def name_of(self, node: int) -> str | None:
        for name, cands in self.entries.items():
            for nid, _ in cands:
                if nid == node:
                    return name
        return None

    def group_of(self, node: int) -> str | None:
        if node in self.described:
            return DESCRIBED
        if node in self.descriptor:
            return DESCRIPTOR
        return None


def lookup_name(table: NameTable, name: str) -> list[tuple[int, float]]:
    return table.lookup(name)


def build_graph(node_count: int, labels: Sequence[str],
                arcs: Iterable[tuple[int, str | int, int]],
                metadata: dict | None = None) -> Graph:
    """Construct a graph from explicit arc triples.

    Label entries may be given as label strings or as alphabet indices.
    Raises InvalidArc for out-of-range ids/labels and DuplicateArc for
    repeated triples.
    """
    if node_count < 1:
        raise InvalidArc(f"node_count must be >= 1, got {node_count}")
    labels = tuple(labels)
    label_index = {lab: i for i, lab in enumerate(labels)}
    out: list[list[set[int]]] = [[set() for _ in range(node_count)] for _ in labels]
    inn: list[list[set[int]]] = [[set() for _ in range(node_count)] for _ in labels]
    count = 0
    for src, lab, dst in arcs:
        if isinstance(lab, str):
            if lab not in label_index:
                raise InvalidArc(f"unknown label {lab!r}")
            lab = label_index[lab]
        if not (0 <= lab < len(labels)):
            raise InvalidArc(f"label index {lab} out of range")
        if not (0 <= src < node_count) or not (0 <= dst < node_count):
            raise InvalidArc(f"arc ({src},{lab},{dst}) references node outside [0,{node_count})")
        if dst in out[lab][src]:
            raise DuplicateArc(f"arc ({src},{lab},{dst}) given twice")
        out[lab][src].add(dst)
        inn[lab][dst].add(src)
        count += 1
    meta = {"kind": "manual"}
    if metadata:
        meta.update(metadata)
    return Graph(node_count, labels,
                 [[frozenset(s) for s in per_label] for per_label in out],
                 [[frozenset(s) for s in per_label] for per_label in inn],
                 count, meta)


def _categorical_entropy(probs: Sequence[float]) -> float:
    return -sum(p * math.log2(p) for p in probs if p > 0.0)


def graph_stats(graph: Graph) -> GraphStats:
    n = graph.node_count
    pairs = n * (n - 1)
    avg_degree = graph.arc_count / n
    density = graph.arc_count / pairs if pairs else 0.0
    # Adjacency-entry entropy over label states plus the absence state.
    # For a single label this is the binary entropy of the arc density.
    if pairs:
        label_densities = []
        for lab in range(len(graph.labels)):
            c = sum(len(graph._out[lab][u]) for u in range(n))
            label_densities.append(c / pairs)
        states = label_densities + [max(0.0, 1.0 - sum(label_densities))]
        entropy = _categorical_entropy(states)
    else:
        entropy = 0.0
    return GraphStats(average_degree=avg_degree, arc_density=density, entropy_rate=entropy)


# ---------------------------------------------------------------------------
# JSON interchange
#
# {"n": int, "labels": [str], "arcs": [[src, label_index, dst], ...],
#  "names": {name: [[node, weight], ...]},
#  "groups": {"described": [ids], "descriptor": [ids]}, "meta": {...}}
# Arcs sorted (src, label, dst) ascending for byte-stable output.
# ---------------------------------------------------------------------------

def to_json_dict(graph: Graph, names: NameTable | None = None) -> dict:
    names = names or NameTable(entries={})
    return {
        "n": graph.node_count,
        "labels": list(graph.labels),
        "arcs": [[s, l, t] for s, l, t in graph.arcs()],
        "names": {name: [[node, weight] for node, weight in cands]
                  for name, cands in sorted(names.entries.items())},
        "groups": {"described": sorted(names.described),
                   "descriptor": sorted(names.descriptor)},
        "meta": graph.metadata,
    }


def from_json_dict(doc: dict) -> tuple[Graph, NameTable]:
    graph = build_graph(doc["n"], doc["labels"],
                        [(s, l, t) for s, l, t in doc["arcs"]],
                        metadata=doc.get("meta") or {})
    names = NameTable(
        entries={name: tuple((int(n), float(w)) for n, w in cands)
                 for name, cands in doc.get("names", {}).items()},
        described=frozenset(doc.get("groups", {}).get("described", ())),
        descriptor=frozenset(doc.get("groups", {}).get("descriptor", ())),
    )
    return graph, names


def save_graph(path: str, graph: Graph, names: NameTable | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_json_dict(graph, names), fh)
        fh.write("\n")


def load_graph(path: str) -> tuple[Graph, NameTable]:
    with open(path, encoding="utf-8") as fh:
        return from_json_dict(json.load(fh))
