"""Construction, search, and decoding of identifying descriptions.

A description anchors a target slot to D descriptor slots through
directed arcs.  Flat descriptions use only target->descriptor arcs and
decode by independent per-slot lookups; deep (and block-restricted
intermediate) descriptions add arcs among the descriptors and decode by
backtracking joint binding, i.e. subgraph matching.  Arc absence is a
first-class constraint: an ABSENT entry requires that no arc exist.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (BudgetExceeded, NoNeighbors, NotEnoughNodes,
                     NoUniqueDescription)
from .graph import Graph, NameTable
from .rng import derive_seed, substream

ABSENT = None  # label value marking a required-absent arc

FLAT = "flat"
INTERMEDIATE = "intermediate"
DEEP = "deep"

RANDOM = "random"
SALIENT = "salient"

DEFAULT_DECODE_BUDGET = 10_000_000
MAX_REPORTED_CANDIDATES = 16


@dataclass(frozen=True)
class Description:
    """An anchored subgraph pattern identifying one target node.

    slots holds one name per descriptor slot, or None for a variable
    (nameless) slot.  target_arcs are (label-or-ABSENT, slot) pairs from
    the target; inter_arcs are (slot, label-or-ABSENT, slot) among
    descriptors.  ground_truth keeps the sender-side binding.
    """

    target_name: str | None
    slots: tuple[str | None, ...]
    target_arcs: tuple[tuple[int | None, int], ...]
    inter_arcs: tuple[tuple[int, int | None, int], ...] = ()
    shape_class: str = FLAT
    b: float = 0.0
    ground_truth: tuple[int, tuple[int, ...]] | None = None
    salience_bits: float | None = None

    def __post_init__(self):
        d = len(self.slots)
        for _, j in self.target_arcs:
            if not (0 <= j < d):
                raise ValueError(f"target arc references slot {j} outside 0..{d - 1}")
        for i, _, j in self.inter_arcs:
            if not (0 <= i < d and 0 <= j < d) or i == j:
                raise ValueError(f"bad inter arc ({i},{j})")
        if self.shape_class == FLAT and self.inter_arcs:
            raise ValueError("flat descriptions cannot carry inter-descriptor arcs")

    @property
    def descriptor_count(self) -> int:
        return len(self.slots)

    @property
    def arc_count(self) -> int:
        return len(self.target_arcs) + len(self.inter_arcs)

    def to_json_dict(self) -> dict:
        return {
            "target": {"name": self.target_name},
            "slots": [{"name": s} if s is not None else {"var": True} for s in self.slots],
            "arcs": [["T", lab if lab is not None else "ABSENT", j]
                     for lab, j in self.target_arcs],
            "inter": [[i, lab if lab is not None else "ABSENT", j]
                      for i, lab, j in self.inter_arcs],
            "shape": self.shape_class,
            "b": self.b,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "Description":
        def lab(x):
            return None if x == "ABSENT" else int(x)
        return cls(
            target_name=doc["target"].get("name"),
            slots=tuple(s.get("name") if "name" in s else None for s in doc["slots"]),
            target_arcs=tuple((lab(l), int(j)) for _, l, j in doc["arcs"]),
            inter_arcs=tuple((int(i), lab(l), int(j)) for i, l, j in doc.get("inter", ())),
            shape_class=doc.get("shape", FLAT),
            b=float(doc.get("b", 0.0)),
        )


@dataclass(frozen=True)
class ResolutionResult:
    status: str  # "UNIQUE" | "AMBIGUOUS" | "NONE"
    target: int | None = None
    bindings: tuple[int | None, ...] | None = None  # per-slot witness nodes
    candidates: tuple[int, ...] = ()
    match_count: int | None = None  # populated only by counting decodes
    work: int = 0
    reason: str | None = None


def descriptor_pool(graph: Graph, names: NameTable | None, target: int) -> list[int]:
    """Nodes eligible as descriptors for the given target.

    When the name table defines a non-empty DESCRIPTOR group, only that
    group is used (the ambiguity-controlled experiment setup); otherwise
    every non-target node qualifies.
    """
    if names is not None and names.descriptor:
        return sorted(names.descriptor - {target})
    return [v for v in range(graph.node_count) if v != target]


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def _names_for(names: NameTable | None, nodes: Sequence[int]) -> tuple[str | None, ...]:
    if names is None:
        return tuple(None for _ in nodes)
    reverse = _reverse_name_map(names)
    return tuple(reverse.get(v) for v in nodes)


# Keep at most one table hot; sweeps reuse a single table.  The strong
# reference to the table is what keeps the identity check sound (a freed
# table's address could otherwise be reused by a new one).
_reverse_cache: list = [None, None]


def _reverse_name_map(names: NameTable) -> dict[int, str]:
    if _reverse_cache[0] is not names:
        _reverse_cache[0] = names
        _reverse_cache[1] = {nid: name for name, cands in names.entries.items()
                             for nid, _ in cands}
    return _reverse_cache[1]


def _inter_arcs_for(graph: Graph, chosen: Sequence[int], shape: str,
                    b: float | None, rng) -> tuple[tuple[int, int | None, int], ...]:
    d = len(chosen)
    if shape == FLAT or d < 2:
        return ()
    index = {v: i for i, v in enumerate(chosen)}
    if shape == INTERMEDIATE:
        block = max(2, round(2 * (b if b else 1.0)))
        blocks = [set(range(lo, min(lo + block, d))) for lo in range(0, d, block)]
        in_same_block = {}
        for blk in blocks:
            for i in blk:
                in_same_block[i] = blk
    arcs = []
    for i, u in enumerate(chosen):
        for v in graph.out_neighbors(u, 0):
            j = index.get(v)
            if j is None:
                continue
            if shape == INTERMEDIATE and j not in in_same_block[i]:
                continue
            arcs.append((i, 0, j))
    cap = math.floor(d * d / 2) if shape == DEEP else math.ceil((b or 1.0) * d)
    if len(arcs) > cap:
        keep = rng.choice(len(arcs), size=cap, replace=False)
        arcs = [arcs[k] for k in sorted(keep)]
    return tuple(sorted(arcs))


def sample_candidate_description(graph: Graph, names: NameTable | None, target: int,
                                 D: int, shape: str = FLAT, strategy: str = SALIENT,
                                 seed: int = 0, b: float | None = None) -> Description:
    """Draw one candidate description of the target.

    RANDOM draws descriptors uniformly from the eligible pool and records
    the actual present/ABSENT relation from the target to each.  SALIENT
    draws among the target's out-neighbors (present arcs carry the most
    information in sparse graphs); deep shapes may expand through the
    out-neighborhood when the direct neighbors run out, and copy the
    actual inter-descriptor arcs from the graph.
    """
    if D < 1:
        raise NotEnoughNodes("description size must be >= 1")
    rng = substream(seed, "sample", target, D)
    pool = descriptor_pool(graph, names, target)
    if len(pool) < D:
        raise NotEnoughNodes(f"only {len(pool)} eligible descriptors, need {D}")

    if strategy == RANDOM:
        chosen = [int(v) for v in rng.choice(pool, size=D, replace=False)]
        target_arcs = tuple((0 if graph.has_arc(target, 0, v) else ABSENT, j)
                            for j, v in enumerate(chosen))
    else:
        pool_set = set(pool)
        direct = sorted(graph.out_neighbors(target, 0) & pool_set)
        if not direct:
            raise NoNeighbors(f"target {target} has no usable out-arcs")
        chosen: list[int] = []
        taken: set[int] = set()
        # direct neighbors carry a present target arc each; the two-hop
        # closure is a fallback for deep shapes when they run out
        closure: set[int] = set()
        while len(chosen) < D:
            avail = [v for v in direct if v not in taken]
            if not avail and shape != FLAT:
                avail = sorted(closure - taken)
            if not avail:
                if shape == FLAT:
                    raise NotEnoughNodes(f"target {target} has only {len(chosen)} usable neighbors")
                raise NotEnoughNodes(f"neighborhood closure of target {target} exhausted at {len(chosen)}")
            v = int(avail[int(rng.integers(len(avail)))])
            chosen.append(v)
            taken.add(v)
            if shape != FLAT:
                closure |= graph.out_neighbors(v, 0) & pool_set
        target_arcs = tuple((0, j) for j, v in enumerate(chosen)
                            if graph.has_arc(target, 0, v))

    inter = _inter_arcs_for(graph, chosen, shape, b, rng)
    d = len(chosen)
    return Description(
        target_name=_names_for(names, [target])[0] if names is not None else None,
        slots=_names_for(names, chosen),
        target_arcs=target_arcs,
        inter_arcs=inter,
        shape_class=shape,
        b=len(inter) / d if d else 0.0,
        ground_truth=(target, tuple(chosen)),
    )


# ---------------------------------------------------------------------------
# Decoding
# ---------------------------------------------------------------------------

class _Work:
    __slots__ = ("count", "budget")

    def __init__(self, budget: int):
        self.count = 0
        self.budget = budget

    def spend(self, units: int = 1) -> None:
        self.count += units
        if self.count > self.budget:
            raise BudgetExceeded(f"decode budget of {self.budget} candidate checks exhausted")


def _slot_candidates(desc: Description, names: NameTable | None,
                     n: int) -> list[frozenset[int] | None] | str:
    """Per-slot name candidate sets; None means unrestricted (variable).

    Returns an error string if a named slot uses a name unknown to the
    receiver.
    """
    sets: list[frozenset[int] | None] = []
    for s in desc.slots:
        if s is None:
            sets.append(None)
        else:
            cands = names.lookup(s) if names is not None else []
            if not cands:
                return f"descriptor name {s!r} unknown to receiver"
            sets.append(frozenset(nid for nid, _ in cands))
    return sets


def _absent_ok(graph: Graph, u: int, v: int) -> bool:
    # absence means: no arc of any label from u to v
    return all(v not in graph.out_neighbors(u, lab) for lab in range(len(graph.labels)))


def _flat_matches(graph: Graph, y: int, target_arcs, slot_sets, work: _Work) -> bool:
    n = graph.node_count
    for lab, j in target_arcs:
        cs = slot_sets[j]
        work.spend()
        if lab is not None:
            outs = graph.out_neighbors(y, lab)
            if cs is None:
                if not outs:
                    return False
            elif outs.isdisjoint(cs):
                return False
        else:
            if cs is None:
                # some non-target node with no arc from y must exist
                if len(graph.out_neighbors(y, 0)) >= n - 1:
                    return False
            elif not any(z != y and _absent_ok(graph, y, z) for z in cs):
                return False
    return True


def _flat_witness(graph: Graph, y: int, desc: Description, slot_sets) -> tuple[int | None, ...]:
    witness: list[int | None] = [None] * len(desc.slots)
    for lab, j in desc.target_arcs:
        cs = slot_sets[j]
        universe = sorted(cs) if cs is not None else range(graph.node_count)
        for z in universe:
            if z == y:
                continue
            ok = graph.has_arc(y, lab, z) if lab is not None else _absent_ok(graph, y, z)
            if ok:
                witness[j] = z
                break
    return tuple(witness)


def _order_slots(desc: Description) -> list[int]:
    """Bind most-constrained slots first: present target arcs, then slots
    reachable through present inter arcs from already-ordered slots."""
    d = len(desc.slots)
    present_target = {j for lab, j in desc.target_arcs if lab is not None}
    links: dict[int, set[int]] = {j: set() for j in range(d)}
    for i, lab, j in desc.inter_arcs:
        if lab is not None:
            links[i].add(j)
            links[j].add(i)
    order: list[int] = []
    placed: set[int] = set()
    while len(order) < d:
        best, best_key = None, None
        for j in range(d):
            if j in placed:
                continue
            key = (j in present_target, len(links[j] & placed), desc.slots[j] is not None, -j)
            if best_key is None or key > best_key:
                best, best_key = j, key
        order.append(best)
        placed.add(best)
    return order


class _DeepPlan:
    """Per-description decode structures shared across target candidates."""

    __slots__ = ("d", "order", "target_con", "inter_con")

    def __init__(self, desc: Description):
        self.d = len(desc.slots)
        self.order = _order_slots(desc)
        self.target_con: dict[int, list[int | None]] = {}
        for lab, j in desc.target_arcs:
            self.target_con.setdefault(j, []).append(lab)
        self.inter_con: dict[int, list[tuple[int, int | None, bool]]] = \
            {j: [] for j in range(self.d)}
        for i, lab, j in desc.inter_arcs:
            self.inter_con[j].append((i, lab, False))  # arc i -> j: constraint on j given i
            self.inter_con[i].append((j, lab, True))   # arc i -> j: constraint on i given j


def _deep_satisfiable(graph: Graph, y: int, plan: _DeepPlan, slot_sets,
                      work: _Work) -> tuple[int | None, ...] | None:
    """Find one injective binding of all slots consistent with every arc,
    or None.  Backtracking with present-arc candidate propagation."""
    d = len(plan.order)
    target_con, inter_con, order = plan.target_con, plan.inter_con, plan.order
    binding: list[int | None] = [None] * d
    used: set[int] = {y}

    def candidates_for(j: int) -> Iterable[int]:
        pools: list[frozenset[int]] = []
        for lab in target_con.get(j, ()):
            if lab is not None:
                pools.append(graph.out_neighbors(y, lab))
        for other, lab, outgoing in inter_con[j]:
            z = binding[other]
            if z is None or lab is None:
                continue
            pools.append(graph.in_neighbors(z, lab) if outgoing else graph.out_neighbors(z, lab))
        if slot_sets[j] is not None:
            pools.append(slot_sets[j])
        if not pools:
            return range(graph.node_count)
        base = frozenset.intersection(*pools) if len(pools) > 1 else pools[0]
        return sorted(base)

    def consistent(j: int, z: int) -> bool:
        if z in used:
            return False
        if slot_sets[j] is not None and z not in slot_sets[j]:
            return False
        for lab in target_con.get(j, ()):
            ok = graph.has_arc(y, lab, z) if lab is not None else _absent_ok(graph, y, z)
            if not ok:
                return False
        for other, lab, outgoing in inter_con[j]:
            w = binding[other]
            if w is None:
                continue
            u, v = (z, w) if outgoing else (w, z)
            ok = graph.has_arc(u, lab, v) if lab is not None else _absent_ok(graph, u, v)
            if not ok:
                return False
        return True

    def assign(idx: int) -> bool:
        if idx == d:
            return True
        j = order[idx]
        for z in candidates_for(j):
            work.spend()
            if not consistent(j, z):
                continue
            binding[j] = z
            used.add(z)
            if assign(idx + 1):
                return True
            used.discard(z)
            binding[j] = None
        return False

    if assign(0):
        return tuple(binding)
    return None


def decode(desc: Description, graph: Graph, names: NameTable | None,
           budget: int = DEFAULT_DECODE_BUDGET, count_all: bool = False) -> ResolutionResult:
    """Resolve a description against a receiver view.

    Returns UNIQUE with the resolved target and witness bindings when
    exactly one target binding satisfies the description (descriptor
    binding multiplicity does not break uniqueness), AMBIGUOUS with a
    capped candidate list otherwise, and NONE when nothing matches or a
    referenced name is unknown.  With count_all=True every candidate is
    checked and match_count is populated (used by the privacy audit).
    Raises BudgetExceeded rather than misreporting a timeout as
    ambiguity.
    """
    work = _Work(budget)
    slot_sets = _slot_candidates(desc, names, graph.node_count)
    if isinstance(slot_sets, str):
        return ResolutionResult(status="NONE", reason=slot_sets, work=work.count)

    if desc.target_name is None:
        target_candidates: Iterable[int] = range(graph.node_count)
    else:
        cands = names.lookup(desc.target_name) if names is not None else []
        if not cands:
            return ResolutionResult(status="NONE", work=work.count,
                                    reason=f"target name {desc.target_name!r} unknown to receiver")
        target_candidates = sorted(nid for nid, _ in cands)

    deep = bool(desc.inter_arcs) or desc.shape_class in (DEEP, INTERMEDIATE)
    plan = _DeepPlan(desc) if deep else None

    survivors: list[int] = []
    survivor_binding: tuple[int | None, ...] | None = None
    for y in target_candidates:
        if deep:
            found = _deep_satisfiable(graph, y, plan, slot_sets, work)
            matched = found is not None
        else:
            matched = _flat_matches(graph, y, desc.target_arcs, slot_sets, work)
            found = None
        if matched:
            survivors.append(y)
            if len(survivors) == 1:
                survivor_binding = found
            if not count_all and len(survivors) >= 2:
                return ResolutionResult(status="AMBIGUOUS", work=work.count,
                                        candidates=tuple(survivors))

    if not survivors:
        return ResolutionResult(status="NONE", work=work.count, reason="no node satisfies the description")
    if len(survivors) == 1:
        y = survivors[0]
        if survivor_binding is None:
            survivor_binding = _flat_witness(graph, y, desc, slot_sets)
        return ResolutionResult(status="UNIQUE", target=y, bindings=survivor_binding,
                                work=work.count, match_count=1 if count_all else None)
    return ResolutionResult(status="AMBIGUOUS", work=work.count,
                            candidates=tuple(survivors[:MAX_REPORTED_CANDIDATES]),
                            match_count=len(survivors) if count_all else None)


# ---------------------------------------------------------------------------
# Search
# ---------------------------------------------------------------------------

def default_ensemble_size(node_count: int) -> int:
    # candidate budget proportional to log N
    return max(1, math.ceil(3 * math.log2(max(2, node_count))))


def find_shortest_unique(graph: Graph, names: NameTable | None, target: int,
                         shape: str = FLAT, S: int | None = None, max_D: int = 64,
                         seed: int = 0, budget: int = DEFAULT_DECODE_BUDGET) -> Description:
    """Smallest-D unique description found by salient ensemble search.

    For each D = 1, 2, ... up to S deduplicated salient candidates are
    drawn and decoded; the first UNIQUE one (lowest descriptor-id tuple
    among that level's draws) is returned with its salience recorded.
    """
    if S is None:
        S = default_ensemble_size(graph.node_count)
    max_D = min(max_D, graph.node_count - 1)
    for D in range(1, max_D + 1):
        seen: set[tuple[int, ...]] = set()
        level: list[tuple[tuple[int, ...], Description]] = []
        for k in range(S):
            try:
                cand = sample_candidate_description(
                    graph, names, target, D, shape=shape, strategy=SALIENT,
                    seed=derive_seed(seed, "cand", D, k))
            except NoNeighbors as exc:
                raise NoUniqueDescription(str(exc)) from exc
            except NotEnoughNodes as exc:
                if D == 1:
                    raise NoUniqueDescription(str(exc)) from exc
                # neighborhood exhausted; larger D cannot help either
                raise NoUniqueDescription(str(exc)) from exc
            key = tuple(sorted(cand.ground_truth[1]))
            if key in seen:
                continue
            seen.add(key)
            level.append((key, cand))
        for _, cand in sorted(level, key=lambda kv: kv[0]):
            result = decode(cand, graph, names, budget=budget)
            if result.status == "UNIQUE":
                from .measures import description_salience  # lazy: avoid import cycle
                try:
                    est = description_salience(cand, graph, seed=derive_seed(seed, "salience", D))
                    sal = est.total_bits
                except Exception:
                    sal = None
                return dataclasses.replace(cand, salience_bits=sal)
    raise NoUniqueDescription(f"no unique description of size <= {max_D} for node {target}")


def construct_landmark(graph: Graph, names: NameTable | None, targets: Sequence[int],
                       D: int, landmarks: Sequence[int] | None = None,
                       seed: int = 0) -> list[Description]:
    """Describe every target through one shared set of D landmark nodes.

    No uniqueness search is performed; each description records the
    actual present/ABSENT relation of its target to the landmarks.
    """
    if landmarks is None:
        pool = sorted(names.descriptor) if names is not None and names.descriptor \
            else list(range(graph.node_count))
        if len(pool) < D:
            raise NotEnoughNodes(f"only {len(pool)} landmark candidates, need {D}")
        rng = substream(seed, "landmarks")
        landmarks = sorted(int(v) for v in rng.choice(pool, size=D, replace=False))
    else:
        landmarks = list(landmarks)
    slot_names = _names_for(names, landmarks)
    out = []
    for t in targets:
        arcs = tuple((0 if graph.has_arc(t, 0, v) else ABSENT, j)
                     for j, v in enumerate(landmarks) if v != t)
        out.append(Description(
            target_name=_names_for(names, [t])[0] if names is not None else None,
            slots=slot_names, target_arcs=arcs, shape_class=FLAT,
            ground_truth=(t, tuple(landmarks))))
    return out


def construct_structural(graph: Graph, target: int, S: int | None = None,
                         max_D: int = 64, seed: int = 0) -> Description:
    """Purely structural identification: no names at all, deep shape,
    every slot variable; decoding is plain subgraph isomorphism."""
    return find_shortest_unique(graph, None, target, shape=DEEP, S=S,
                                max_D=max_D, seed=seed)
