"""Seeded random-graph generators and ambiguity-controlled name assignment.

Three graph families:

* ERDOS_RENYI -- every ordered pair (u, v), u != v, carries an arc
  independently with probability p.
* BIPARTITE -- two equal sides; only cross-side ordered pairs are
  sampled, each direction independently with probability p.
* CLUSTERED -- disjoint equal-size ER(p) blocks, then a fixed number of
  random cross-cluster ordered pairs, each linked with probability p.

Name assignment splits nodes into DESCRIBED / DESCRIPTOR groups and
batches each group into name-groups whose sizes realize a target
average ambiguity (bits of entropy per name draw).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidConfig
from .graph import Graph, NameTable
from .rng import substream

AMBIGUITY_TOL = 0.05  # bits; realized group ambiguity must sit this close to target


class GraphKind(str, Enum):
    ERDOS_RENYI = "er"
    BIPARTITE = "bipartite"
    CLUSTERED = "clustered"


@dataclass(frozen=True)
class GeneratorConfig:
    kind: GraphKind
    node_count: int
    arc_probability: float
    cluster_count: int = 10
    inter_cluster_pairs: int | None = None  # defaults to node_count
    seed: int = 0

    def validate(self) -> None:
        if self.node_count < 1:
            raise InvalidConfig("node_count must be >= 1")
        if not (0.0 < self.arc_probability < 1.0):
            raise InvalidConfig(f"arc_probability must be in (0,1), got {self.arc_probability}")
        if self.kind == GraphKind.BIPARTITE and self.node_count % 2 != 0:
            raise InvalidConfig("bipartite graphs need an even node count")
        if self.kind == GraphKind.CLUSTERED:
            if self.cluster_count < 1 or self.node_count % self.cluster_count != 0:
                raise InvalidConfig("cluster_count must divide node_count")
            if self.inter_cluster_pairs is not None and self.inter_cluster_pairs < 0:
                raise InvalidConfig("inter_cluster_pairs must be >= 0")


@dataclass(frozen=True)
class NamingConfig:
    described_nodes_per_name: float = 1.0   # ambiguity target A_x = log2(this)
    descriptor_nodes_per_name: float = 1.0  # ambiguity target A_d = log2(this)
    described_fraction: float = 0.5
    seed: int = 0

    def validate(self) -> None:
        if self.described_nodes_per_name < 1.0 or self.descriptor_nodes_per_name < 1.0:
            raise InvalidConfig("nodes-per-name targets must be >= 1")
        if not (0.0 < self.described_fraction <= 1.0):
            raise InvalidConfig("described_fraction must be in (0, 1]")


def _graph_from_mask(mask: np.ndarray, metadata: dict) -> Graph:
    n = mask.shape[0]
    np.fill_diagonal(mask, False)
    out = [frozenset(np.flatnonzero(mask[u]).tolist()) for u in range(n)]
    inn = [frozenset(np.flatnonzero(mask[:, v]).tolist()) for v in range(n)]
    count = int(mask.sum())
    return Graph(n, ("L",), [out], [inn], count, metadata)


def generate_graph(config: GeneratorConfig) -> Graph:
    """Sample a graph; deterministic for a given (config, seed)."""
    config.validate()
    n, p = config.node_count, config.arc_probability
    rng = substream(config.seed, "graph", config.kind.value)
    meta = {"kind": config.kind.value, "p": p, "seed": config.seed}

    if config.kind == GraphKind.ERDOS_RENYI:
        mask = rng.random((n, n)) < p

    elif config.kind == GraphKind.BIPARTITE:
        half = n // 2
        mask = np.zeros((n, n), dtype=bool)
        mask[:half, half:] = rng.random((half, n - half)) < p
        mask[half:, :half] = rng.random((n - half, half)) < p
        meta["sides"] = [[0, half], [half, n]]

    else:  # CLUSTERED
        k = config.cluster_count
        size = n // k
        pairs = config.inter_cluster_pairs if config.inter_cluster_pairs is not None else n
        mask = np.zeros((n, n), dtype=bool)
        for c in range(k):
            lo = c * size
            mask[lo:lo + size, lo:lo + size] = rng.random((size, size)) < p
        linked = 0
        drawn = 0
        while drawn < pairs and k > 1:
            u = int(rng.integers(n))
            v = int(rng.integers(n))
            if u // size == v // size:
                continue  # redraw: cross-cluster pairs only
            drawn += 1
            if rng.random() < p:
                mask[u, v] = True
                linked += 1
        meta.update({"clusters": k, "inter_cluster_pairs": pairs,
                     "inter_cluster_links": linked})

    return _graph_from_mask(mask, meta)


def _name_group_sizes(n: int, nodes_per_name: float) -> list[int]:
    """Partition n nodes into name-group sizes realizing the ambiguity target.

    The target is A = log2(nodes_per_name) bits of node-weighted mean
    ambiguity (a node in a size-m group contributes log2(m)).  Integer
    targets use uniform groups; fractional ones mix sizes k and k+1 so
    the draw-weighted mean of log2(size) matches A.
    """
    if n == 0:
        return []
    target = math.log2(nodes_per_name)
    if target > math.log2(n):
        raise InvalidConfig(f"ambiguity target log2({nodes_per_name}) exceeds log2 of group size {n}")
    k = max(1, math.floor(nodes_per_name))
    if float(k) == nodes_per_name:
        sizes = [k] * (n // k)
        if n % k:
            sizes.append(n % k)
        mean = sum(s * math.log2(s) for s in sizes if s > 1) / n
        if abs(mean - target) > AMBIGUITY_TOL:
            raise InvalidConfig(
                f"cannot realize ambiguity log2({nodes_per_name}) over {n} nodes "
                f"(best error {abs(mean - target):.3f} bits)")
        return sizes

    # Mix sizes k and k+1: fraction of nodes in (k+1)-groups solving
    # f*log2(k+1) + (1-f)*log2(k) = target.
    f = (target - math.log2(k)) / (math.log2(k + 1) - math.log2(k))

    def realized(c_big: int) -> tuple[list[int], float]:
        big_nodes = c_big * (k + 1)
        rest = n - big_nodes
        sizes = [k + 1] * c_big + [k] * (rest // k)
        if rest % k:
            sizes.append(rest % k)
        mean = sum(s * math.log2(s) for s in sizes if s > 1) / n
        return sizes, abs(mean - target)

    best_c = round(f * n / (k + 1))
    best_sizes, best_err = None, math.inf
    for c in range(max(0, best_c - 2), min(n // (k + 1), best_c + 2) + 1):
        sizes, err = realized(c)
        if err < best_err:
            best_sizes, best_err = sizes, err
    if best_err > AMBIGUITY_TOL:
        raise InvalidConfig(
            f"cannot realize ambiguity log2({nodes_per_name}) over {n} nodes "
            f"(best error {best_err:.3f} bits)")
    return best_sizes


def _assign_group(node_ids: np.ndarray, nodes_per_name: float, prefix: str) -> dict[str, tuple]:
    sizes = _name_group_sizes(len(node_ids), nodes_per_name)
    entries: dict[str, tuple] = {}
    pos = 0
    for i, size in enumerate(sizes):
        members = node_ids[pos:pos + size]
        pos += size
        w = 1.0 / size
        entries[f"{prefix}{i}"] = tuple((int(m), w) for m in members)
    return entries


def assign_names(graph: Graph, config: NamingConfig) -> NameTable:
    """Partition nodes into groups and assign ambiguity-controlled names.

    Deterministic given config.seed.  Within each name, weights are
    uniform.  BIPARTITE graphs split along their sides; otherwise the
    DESCRIBED group takes described_fraction of a seeded shuffle.
    """
    config.validate()
    n = graph.node_count
    rng = substream(config.seed, "names")

    if graph.metadata.get("kind") == GraphKind.BIPARTITE.value and "sides" in graph.metadata:
        (a0, a1), (b0, b1) = graph.metadata["sides"]
        described_ids = np.arange(a0, a1)
        descriptor_ids = np.arange(b0, b1)
        described_ids = rng.permutation(described_ids)
        descriptor_ids = rng.permutation(descriptor_ids)
    else:
        order = rng.permutation(n)
        n_described = max(1, round(config.described_fraction * n))
        described_ids = order[:n_described]
        descriptor_ids = order[n_described:]

    entries = _assign_group(described_ids, config.described_nodes_per_name, "x")
    entries.update(_assign_group(descriptor_ids, config.descriptor_nodes_per_name, "d"))
    return NameTable(entries=entries,
                     described=frozenset(int(i) for i in described_ids),
                     descriptor=frozenset(int(i) for i in descriptor_ids))


def realized_ambiguity(names: NameTable, group: frozenset[int]) -> float:
    """Node-weighted mean name ambiguity over a node group, in bits."""
    if not group:
        return 0.0
    total = 0.0
    covered = 0
    for cands in names.entries.values():
        members = [nid for nid, _ in cands if nid in group]
        if not members:
            continue
        a = math.log2(len(cands)) if len(cands) > 1 else 0.0
        total += a * len(members)
        covered += len(members)
    return total / covered if covered else 0.0
