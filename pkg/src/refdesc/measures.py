"""Information measures over names, descriptions, and graph views.

Quantities in bits throughout:

* name ambiguity: entropy of the node distribution behind one name.
* description salience: information content of a description's arc
  configuration holding for a random non-target node.
* ensemble salience rate F = (1/D_bar) sum_i -q_i log2 p_i over the
  distinct shapes of a candidate ensemble.
* shared salience M: the same sum discounted by how often and how
  predictably each shape survives the transfer to a diverging receiver
  view.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (EmptyEnsemble, EmptyInput, NodeSetMismatch,
                     UnboundDescriptor, UnknownName)
from .graph import Graph, NameTable
from .descriptions import Description
from .rng import substream

ANALYTIC = "ANALYTIC"
MONTE_CARLO = "MONTE_CARLO"

DEFAULT_SAMPLES = 10_000

# Shape: canonical arc-configuration encoding.  Target arcs come first
# as ("T", label-or-None, slot), then inter arcs as (i, label-or-None,
# j), each block sorted, so equal configurations encode identically.
Shape = tuple


def _arc_key(arc):
    # ABSENT (None) labels sort before any label index
    return tuple(-1 if x is None else x for x in arc[1:]) if arc[0] == "T" \
        else tuple(-1 if x is None else x for x in arc)


def shape_of(desc: Description) -> Shape:
    return (tuple(sorted((("T", lab, j) for lab, j in desc.target_arcs), key=_arc_key)),
            tuple(sorted(desc.inter_arcs, key=_arc_key)))


# ---------------------------------------------------------------------------
# Ambiguity
# ---------------------------------------------------------------------------

def name_ambiguity(table: NameTable, name: str) -> float:
    """Entropy in bits of the weighted candidate set behind a name."""
    cands = table.lookup(name)
    if not cands:
        raise UnknownName(f"name {name!r} not in table")
    return -sum(w * math.log2(w) for _, w in cands)


@dataclass(frozen=True)
class AmbiguityReport:
    rate_bits: float        # mean per-name ambiguity
    interpretations: float  # 2^(D * rate): typical-set size of joint readings

    def __float__(self) -> float:
        return self.rate_bits


def ambiguity_rate(table: NameTable, names: list[str]) -> AmbiguityReport:
    """Mean ambiguity of a name sequence and its interpretation count."""
    if not names:
        raise EmptyInput("ambiguity rate over an empty name list is undefined")
    rate = sum(name_ambiguity(table, n) for n in names) / len(names)
    return AmbiguityReport(rate_bits=rate, interpretations=2.0 ** (len(names) * rate))


# ---------------------------------------------------------------------------
# Salience of a single bound description
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SalienceEstimate:
    rate: float                  # bits per arc
    total: float                 # bits for the whole configuration
    method: str                  # ANALYTIC | MONTE_CARLO
    sample_count: int = 0
    std_error: float = 0.0
    floored: bool = False        # true when a zero estimate was floored

    @property
    def total_bits(self) -> float:
        return self.total


def _er_probability(graph: Graph) -> float | None:
    if graph.metadata.get("kind") == "er" and "p" in graph.metadata:
        return float(graph.metadata["p"])
    return None


def _candidate_matches(graph: Graph, desc: Description, nodes) -> int:
    """How many sampled nodes stand in desc's target-arc shape to the
    ground-truth descriptor nodes."""
    target, bound = desc.ground_truth
    hits = 0
    for y in nodes:
        ok = True
        for lab, j in desc.target_arcs:
            z = bound[j]
            if lab is not None:
                if not graph.has_arc(y, lab, z):
                    ok = False
                    break
            elif any(z in graph.out_neighbors(y, l) for l in range(len(graph.labels))):
                ok = False
                break
        hits += ok
    return hits


def description_salience(desc: Description, graph: Graph,
                         samples: int = DEFAULT_SAMPLES, seed: int = 0,
                         method: str | None = None) -> SalienceEstimate:
    """Information content of the description's shape holding for a
    uniformly random non-target node, against the bound descriptors.

    Analytic (independent-arc product of p / 1-p factors) when the graph
    carries uniform-arc-probability metadata, Monte Carlo otherwise.
    Zero Monte Carlo estimates are floored at 1/(10*samples) and
    flagged.
    """
    if desc.ground_truth is None:
        raise UnboundDescriptor("description salience needs bound descriptor nodes")
    p = _er_probability(graph)
    if method is None:
        method = ANALYTIC if p is not None else MONTE_CARLO

    arcs = max(1, desc.arc_count)
    if method == ANALYTIC:
        if p is None:
            raise UnboundDescriptor("analytic salience requires uniform arc-probability metadata")
        total = sum(-math.log2(p if lab is not None else 1.0 - p)
                    for lab, _ in desc.target_arcs)
        return SalienceEstimate(rate=total / arcs, total=total, method=ANALYTIC)

    target = desc.ground_truth[0]
    rng = substream(seed, "salience-mc", target)
    pool = [v for v in range(graph.node_count) if v != target]
    draws = rng.choice(pool, size=samples, replace=True)
    hits = _candidate_matches(graph, desc, (int(v) for v in draws))
    floored = hits == 0
    p_hat = max(hits, 0.1) / samples
    total = -math.log2(p_hat)
    q = hits / samples
    std_error = (math.sqrt(q * (1.0 - q) / samples) / (p_hat * math.log(2))
                 if 0 < hits < samples else 0.0)
    return SalienceEstimate(rate=total / arcs, total=total, method=MONTE_CARLO,
                            sample_count=samples, std_error=std_error, floored=floored)


# ---------------------------------------------------------------------------
# Ensembles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Ensemble:
    """Candidate descriptions summarized by shape frequencies q_i and
    shape priors p_i (probability of the shape holding for a random
    non-target node)."""

    descriptions: tuple[Description, ...] = ()
    shape_freq: dict[Shape, float] = field(default_factory=dict)
    shape_prior: dict[Shape, float] = field(default_factory=dict)
    mean_arc_count: float = 1.0
    method: str = ANALYTIC
    sample_count: int = 0

    @property
    def size(self) -> int:
        return len(self.descriptions)


def build_ensemble(descriptions: list[Description], graph: Graph,
                   samples: int = DEFAULT_SAMPLES, seed: int = 0) -> Ensemble:
    """Summarize bound descriptions into shape frequencies and priors."""
    if not descriptions:
        raise EmptyEnsemble("cannot build an ensemble from zero descriptions")
    counts: dict[Shape, int] = {}
    first: dict[Shape, Description] = {}
    for d in descriptions:
        s = shape_of(d)
        counts[s] = counts.get(s, 0) + 1
        first.setdefault(s, d)
    n = len(descriptions)
    freq = {s: c / n for s, c in counts.items()}
    prior: dict[Shape, float] = {}
    method = ANALYTIC if _er_probability(graph) is not None else MONTE_CARLO
    for s, rep in first.items():
        est = description_salience(rep, graph, samples=samples, seed=seed, method=method)
        prior[s] = 2.0 ** (-est.total)
    mean_arcs = sum(d.arc_count for d in descriptions) / n
    return Ensemble(descriptions=tuple(descriptions), shape_freq=freq,
                    shape_prior=prior, mean_arc_count=mean_arcs, method=method,
                    sample_count=samples if method == MONTE_CARLO else 0)


def ensemble_salience_rate(ensemble: Ensemble) -> SalienceEstimate:
    """Salience rate F = (1/D_bar) sum_i -q_i log2 p_i."""
    if not ensemble.shape_freq:
        raise EmptyEnsemble("salience rate of an empty ensemble is undefined")
    total = 0.0
    for s, q in ensemble.shape_freq.items():
        p = ensemble.shape_prior.get(s)
        if p is None or not (0.0 < p <= 1.0):
            raise EmptyEnsemble(f"missing or invalid prior for shape {s!r}")
        total += -q * math.log2(p)
    rate = total / ensemble.mean_arc_count
    return SalienceEstimate(rate=rate, total=total, method=ensemble.method,
                            sample_count=ensemble.sample_count)


def er_salience_rate(p: float) -> float:
    """Best per-arc salience available in a uniform-arc-probability
    graph: pick the rarer of arc presence and absence."""
    return max(-math.log2(p), -math.log2(1.0 - p))


# ---------------------------------------------------------------------------
# Shared salience across diverging views
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SharedSalienceReport:
    shared_rate: float                      # bits per arc (M)
    sender_rate: float                      # bits per arc
    agreement: dict[Shape, float]           # Q(receiver shape = sender shape)
    arc_agreement: dict[str, float]         # per-arc-state view agreement


def _receiver_shape(graph: Graph, desc: Description) -> Shape:
    """The shape the description's ground-truth binding actually forms
    in the given view."""
    target, bound = desc.ground_truth
    t_arcs = []
    for lab, j in desc.target_arcs:
        ref = lab if lab is not None else 0
        t_arcs.append(("T", ref if graph.has_arc(target, ref, bound[j]) else None, j))
    i_arcs = []
    for i, lab, j in desc.inter_arcs:
        ref = lab if lab is not None else 0
        i_arcs.append((i, ref if graph.has_arc(bound[i], ref, bound[j]) else None, j))
    return (tuple(sorted(t_arcs, key=_arc_key)), tuple(sorted(i_arcs, key=_arc_key)))


def _arc_state_agreement(sender: Graph, receiver: Graph, samples: int,
                         rng) -> dict[str, float]:
    """P(receiver agrees | sender state), estimated from sampled sender
    arcs and non-arcs."""
    arcs = list(sender.arcs())
    if len(arcs) > samples:
        idx = rng.choice(len(arcs), size=samples, replace=False)
        arcs = [arcs[int(i)] for i in idx]
    present = (sum(receiver.has_arc(s, l, t) for s, l, t in arcs) / len(arcs)
               if arcs else 1.0)
    n = sender.node_count
    absent_hits = 0
    absent_draws = 0
    while absent_draws < samples:
        u = int(rng.integers(n))
        v = int(rng.integers(n))
        if u == v or any(v in sender.out_neighbors(u, l) for l in range(len(sender.labels))):
            continue
        absent_draws += 1
        if not any(v in receiver.out_neighbors(u, l) for l in range(len(receiver.labels))):
            absent_hits += 1
    absent = absent_hits / absent_draws if absent_draws else 1.0
    return {"present": present, "absent": absent}


def shared_salience(sender: Graph, receiver: Graph, ensemble: Ensemble,
                    samples: int = DEFAULT_SAMPLES, seed: int = 0) -> SharedSalienceReport:
    """Salience that survives the transfer from sender view to receiver
    view: each shape's -q log2(P(x) P(y|x)) term is weighted by the
    empirical chance Q(y|x) that the shape still holds for the receiver.
    """
    if sender.node_count != receiver.node_count:
        raise NodeSetMismatch(
            f"sender has {sender.node_count} nodes, receiver {receiver.node_count}")
    if not ensemble.descriptions:
        raise EmptyEnsemble("shared salience needs the ensemble's descriptions")

    rng = substream(seed, "shared-salience")
    arc_agree = _arc_state_agreement(sender, receiver, samples, rng)
    floor = 1.0 / (10.0 * samples)

    survived: dict[Shape, int] = {}
    counts: dict[Shape, int] = {}
    for d in ensemble.descriptions:
        s = shape_of(d)
        counts[s] = counts.get(s, 0) + 1
        if _receiver_shape(receiver, d) == s:
            survived[s] = survived.get(s, 0) + 1

    sender_total = 0.0
    shared_total = 0.0
    agreement: dict[Shape, float] = {}
    for s, q in ensemble.shape_freq.items():
        p_x = ensemble.shape_prior[s]
        sender_total += -q * math.log2(p_x)
        q_yx = survived.get(s, 0) / counts.get(s, 1)
        agreement[s] = q_yx
        if q_yx == 0.0:
            continue
        p_yx = 1.0
        t_arcs, i_arcs = s
        for _, lab, _ in t_arcs:
            p_yx *= arc_agree["present"] if lab is not None else arc_agree["absent"]
        for _, lab, _ in i_arcs:
            p_yx *= arc_agree["present"] if lab is not None else arc_agree["absent"]
        shared_total += -q * q_yx * math.log2(max(p_x * p_yx, floor))

    d_bar = ensemble.mean_arc_count
    return SharedSalienceReport(shared_rate=shared_total / d_bar,
                                sender_rate=sender_total / d_bar,
                                agreement=agreement, arc_agreement=arc_agree)
