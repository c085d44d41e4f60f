"""Closed-form predictors for identifying-description sizes.

Every predictor divides the information needed to pin down the target
(its name ambiguity, plus log2 N when the description must also locate
itself among all nodes) by the net information each descriptor supplies
(its salience minus the ambiguity of its own name).  Infeasibility
(non-positive denominator, or a size at or beyond N) is reported in the
Prediction, never raised or returned as infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InfeasibleBound, InvalidInput

BASIC = "BASIC"
FLAT = "FLAT"
DEEP = "DEEP"
STRUCTURAL = "STRUCTURAL"
FLAT_LANDMARK = "FLAT_LANDMARK"
DEEP_LANDMARK = "DEEP_LANDMARK"
RANDOM_LANDMARK = "RANDOM_LANDMARK"

MODES = (BASIC, FLAT, DEEP, STRUCTURAL, FLAT_LANDMARK, DEEP_LANDMARK, RANDOM_LANDMARK)

UNIQUE_NAMES = "UNIQUE_NAMES"
SELF_DESCRIBING = "SELF_DESCRIBING"


@dataclass(frozen=True)
class PredictorInput:
    node_count: int
    described_ambiguity: float = 0.0      # A_x, bits
    descriptor_ambiguity: float = 0.0     # A_d, bits
    salience_rate: float = 1.0            # F, bits per arc
    inter_arc_ratio: float | None = None  # b; None = unconstrained / unknown
    ensemble_size: int = 1                # S
    failure_prob: float = 0.5             # epsilon
    anonymity_k: int = 2                  # K
    entropy_rate: float | None = None     # H_g, bits per adjacency entry

    def validate(self) -> None:
        if self.node_count < 2:
            raise InvalidInput("node_count must be >= 2")
        log_n = math.log2(self.node_count)
        for label, value in (("described_ambiguity", self.described_ambiguity),
                             ("descriptor_ambiguity", self.descriptor_ambiguity),
                             ("salience_rate", self.salience_rate)):
            if value < 0.0:
                raise InvalidInput(f"{label} must be >= 0, got {value}")
        if self.described_ambiguity > log_n + 1e-9 or self.descriptor_ambiguity > log_n + 1e-9:
            raise InvalidInput("ambiguity cannot exceed log2(node_count)")
        if self.inter_arc_ratio is not None and self.inter_arc_ratio < 0.0:
            raise InvalidInput("inter_arc_ratio must be >= 0")
        if self.ensemble_size < 1:
            raise InvalidInput("ensemble_size must be >= 1")
        if not (0.0 < self.failure_prob < 1.0):
            raise InvalidInput("failure_prob must be in (0, 1)")


@dataclass(frozen=True)
class Prediction:
    mode: str
    D: float                    # expected descriptor-node count
    L: float                    # expected arc count
    feasible: bool
    notes: tuple[str, ...] = ()


def _prediction(mode: str, numerator: float, denominator: float, n: int,
                b: float, notes: list[str]) -> Prediction:
    if denominator <= 0.0:
        notes.append("per-descriptor information does not exceed descriptor ambiguity")
        return Prediction(mode=mode, D=float("nan"), L=float("nan"),
                          feasible=False, notes=tuple(notes))
    d = numerator / denominator
    feasible = 0.0 < d < n
    if d >= n:
        notes.append("predicted size reaches the whole domain; reference impossible")
    if mode in (DEEP, DEEP_LANDMARK):
        arcs = d * (b + 1.0)
    elif mode == STRUCTURAL:
        arcs = d * d / 2.0
    else:
        arcs = d
    return Prediction(mode=mode, D=d, L=arcs, feasible=feasible, notes=tuple(notes))


def predict_description_size(mode: str, inp: PredictorInput) -> Prediction:
    """Expected descriptor count for each description regime.

    BASIC nets out descriptor ambiguity against the inter-arc support
    b*F; FLAT has no inter arcs; DEEP counts (b+1) arcs per descriptor,
    or falls back to the low-ambiguity shortcut A_x/F when no inter-arc
    ratio is supplied and A_d < A_x/2.  Landmark modes add log2 N to the
    numerator because the description must locate the target among all
    nodes, not just within its name group.
    """
    if mode not in MODES:
        raise InvalidInput(f"unknown prediction mode {mode!r}")
    inp.validate()
    n = inp.node_count
    a_x, a_d, f = inp.described_ambiguity, inp.descriptor_ambiguity, inp.salience_rate
    log_n = math.log2(n)
    notes: list[str] = []
    b = inp.inter_arc_ratio

    if mode == BASIC:
        bb = b if b is not None else 0.0
        return _prediction(mode, a_x, f - max(0.0, a_d - bb * f), n, bb, notes)
    if mode == FLAT:
        return _prediction(mode, a_x, f - a_d, n, 0.0, notes)
    if mode == DEEP:
        # The shortcut regime covers few, cheap descriptors whose own
        # ambiguity is resolved by inter arcs essentially for free; it
        # only applies when the caller leaves b unconstrained.
        if b is None:
            if a_d < a_x / 2.0:
                notes.append("low-descriptor-ambiguity shortcut D = A_x/F")
                if f > 0.0 and a_d / f >= (a_x / f) / 2.0:
                    notes.append("shortcut self-consistency A_d/F < D/2 not met")
                return _prediction(mode, a_x, f, n, 1.0, notes)
            notes.append("no inter-arc ratio supplied; assuming b = 1")
            b = 1.0
        if a_x / 2.0 <= a_d < 2.0 * a_x:
            notes.append("shortcut applicability ambiguous between A_d < A_x/2 and A_d < 2A_x; full formula used")
        return _prediction(mode, a_x, (b + 1.0) * f - a_d, n, b, notes)
    if mode == STRUCTURAL:
        return _prediction(mode, 2.0 * log_n, f, n, 0.0, notes)
    if mode == FLAT_LANDMARK:
        return _prediction(mode, log_n + a_x, f - a_d, n, 0.0, notes)
    if mode == DEEP_LANDMARK:
        bb = b if b is not None else 1.0
        if b is None:
            notes.append("no inter-arc ratio supplied; assuming b = 1")
        return _prediction(mode, log_n + a_x, (bb + 1.0) * f - a_d, n, bb, notes)
    # RANDOM_LANDMARK: arcs are arbitrary statements, worth H_g each
    if inp.entropy_rate is None or inp.entropy_rate <= 0.0:
        raise InvalidInput("RANDOM_LANDMARK requires a positive entropy_rate")
    return _prediction(mode, log_n + a_x, inp.entropy_rate - a_d, n, 0.0, notes)


def min_required_salience(a_x: float, epsilon: float, s: int) -> float:
    """Per-description salience needed so that an S-candidate search
    fails to find a unique description with probability at most epsilon."""
    if not (0.0 < epsilon <= 1.0):
        raise InvalidInput("epsilon must be in (0, 1]")
    if s < 1:
        raise InvalidInput("ensemble size must be >= 1")
    if a_x < 0.0:
        raise InvalidInput("ambiguity must be >= 0")
    return a_x - math.log2(epsilon) / s


def unique_probability(delta: float, s: int) -> float:
    """Chance an S-candidate search finds a unique description when the
    description carries delta bits of slack per candidate (negative
    delta = deficit)."""
    if s < 1:
        raise InvalidInput("ensemble size must be >= 1")
    return min(1.0, 2.0 ** (delta * s))


def kanonymity_max_size(n: int, k: int, f: float, a_d: float) -> float:
    """Largest description size keeping the target hidden among K nodes."""
    if n < 2 or k < 1 or k > n:
        raise InvalidInput("need 2 <= K' domain and 1 <= K <= N")
    if f <= a_d:
        raise InfeasibleBound(
            f"salience rate {f} does not exceed descriptor ambiguity {a_d}")
    return (math.log2(n) - math.log2(k)) / (f - a_d)


def self_describing_size(a: float, f: float, n: int) -> tuple[float, float]:
    """(minimum size at which a message's internal arcs resolve its own
    names, size guaranteeing it for any ambiguity)."""
    if f <= 0.0:
        raise InvalidInput("salience rate must be positive")
    if a < 0.0 or n < 2:
        raise InvalidInput("need ambiguity >= 0 and N >= 2")
    return 2.0 * a / f, math.log2(n) / f


def overhead_factor(mode: str, n: int, h_g: float | None, w: int) -> tuple[float, float]:
    """(total bits, overhead vs unique names) to communicate a
    W-node message under each reference scheme."""
    if n < 2 or w < 1:
        raise InvalidInput("need N >= 2 and W >= 1")
    base = w * math.log2(n)
    if mode == UNIQUE_NAMES:
        return base, 1.0
    if mode == RANDOM_LANDMARK:
        return 2.0 * base, 2.0
    if mode == STRUCTURAL:
        if h_g is None or h_g <= 0.0:
            raise InvalidInput("structural overhead requires a positive entropy rate")
        factor = 2.0 * math.log2(n) / h_g
        return base * factor, factor
    if mode == SELF_DESCRIBING:
        return base, 1.0  # amortized: the message doubles as its own key
    raise InvalidInput(f"unknown overhead mode {mode!r}")


def shared_decode_bound(a_x: float, m: float) -> float:
    """Description size when only M bits/arc of salience are shared."""
    if m <= 0.0:
        raise InvalidInput("shared salience must be positive for communication")
    if a_x < 0.0:
        raise InvalidInput("ambiguity must be >= 0")
    return a_x / m
