"""Experiment harness: predicted-vs-observed description-size sweeps,
a brute-force search oracle, and a k-anonymity audit.

A sweep fixes one generator/naming family, varies a single parameter
(arc probability or nodes-per-name), and for each value measures the
shortest unique description of sampled described nodes across several
graph instances, alongside the matching analytic prediction.  Output is
a CSV row per sweep value, byte-deterministic for a given master seed.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import itertools
import math
try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib
from dataclasses import dataclass, field

import numpy as np

from . import descriptions as de
from . import theory
from .errors import (BudgetExceeded, ConfigError, GraphTooLarge, NoNeighbors,
                     NotEnoughNodes, NoUniqueDescription)
from .generators import (GeneratorConfig, GraphKind, NamingConfig,
                         assign_names, generate_graph, realized_ambiguity)
from .graph import Graph, NameTable, graph_stats
from .measures import er_salience_rate
from .rng import derive_seed, substream

SALIENCE = "SALIENCE"
DESCRIBED_AMBIGUITY = "DESCRIBED_AMBIGUITY"
DESCRIPTOR_AMBIGUITY = "DESCRIPTOR_AMBIGUITY"
SWEEP_VARIABLES = (SALIENCE, DESCRIBED_AMBIGUITY, DESCRIPTOR_AMBIGUITY)

CSV_COLUMNS = ("graph_kind", "N", "p", "F_analytic", "A_x_target", "A_x_realized",
               "A_d_target", "A_d_realized", "mode", "b_mean", "S", "predicted_D",
               "observed_mean_D", "observed_std_D", "observed_mean_L",
               "nodes_measured", "failures", "seed")

_DEEP_MODES = (theory.DEEP, theory.DEEP_LANDMARK)


@dataclass(frozen=True)
class ExperimentConfig:
    graph: GeneratorConfig
    naming: NamingConfig
    mode: str
    sweep_variable: str
    sweep_values: tuple[float, ...]
    instances: int = 10
    nodes_per_instance: int = 100
    ensemble_budget: int | None = None
    master_seed: int = 0
    output_path: str | None = None

    def validate(self) -> None:
        if self.mode not in theory.MODES:
            raise ConfigError(f"unknown prediction mode {self.mode!r}")
        if self.sweep_variable not in SWEEP_VARIABLES:
            raise ConfigError(f"unknown sweep variable {self.sweep_variable!r}")
        if not self.sweep_values:
            raise ConfigError("sweep_values must be non-empty")
        if self.instances < 1 or self.nodes_per_instance < 1:
            raise ConfigError("instances and nodes_per_instance must be >= 1")
        if self.ensemble_budget is not None and self.ensemble_budget < 1:
            raise ConfigError("ensemble_budget must be >= 1")
        try:
            self.graph.validate()
            self.naming.validate()
        except Exception as exc:
            raise ConfigError(str(exc)) from exc


@dataclass(frozen=True)
class SweepRow:
    graph_kind: str
    N: int
    p: float
    F_analytic: float
    A_x_target: float
    A_x_realized: float
    A_d_target: float
    A_d_realized: float
    mode: str
    b_mean: float
    S: int
    predicted_D: float
    observed_mean_D: float
    observed_std_D: float
    observed_mean_L: float
    nodes_measured: int
    failures: int
    seed: int


def _shape_for_mode(mode: str) -> str:
    return de.DEEP if mode in _DEEP_MODES else de.FLAT


def _sweep_point(config: ExperimentConfig, value: float) -> tuple[GeneratorConfig, NamingConfig]:
    gcfg, ncfg = config.graph, config.naming
    if config.sweep_variable == SALIENCE:
        gcfg = dataclasses.replace(gcfg, arc_probability=float(value))
    elif config.sweep_variable == DESCRIBED_AMBIGUITY:
        ncfg = dataclasses.replace(ncfg, described_nodes_per_name=float(value))
    else:
        ncfg = dataclasses.replace(ncfg, descriptor_nodes_per_name=float(value))
    return gcfg, ncfg


def run_sweep(config: ExperimentConfig) -> list[SweepRow]:
    """Measure shortest unique descriptions across the sweep.

    For each value: `instances` independent graph instances, names
    assigned, `nodes_per_instance` described targets sampled per
    instance, shortest unique description searched per target.  Search
    failures (no unique description, exhausted budget) are counted, not
    fatal.  Fully deterministic given master_seed.
    """
    config.validate()
    shape = _shape_for_mode(config.mode)
    master = config.master_seed
    rows = []
    for vi, value in enumerate(sorted(config.sweep_values)):
        gcfg, ncfg = _sweep_point(config, value)
        s_budget = config.ensemble_budget or de.default_ensemble_size(gcfg.node_count)
        sizes: list[int] = []
        arcs: list[int] = []
        b_values: list[float] = []
        a_x_sum = a_d_sum = 0.0
        failures = 0
        for inst in range(config.instances):
            g = generate_graph(dataclasses.replace(
                gcfg, seed=derive_seed(master, "graph", vi, inst)))
            names = assign_names(g, dataclasses.replace(
                ncfg, seed=derive_seed(master, "names", vi, inst)))
            a_x_sum += realized_ambiguity(names, names.described)
            a_d_sum += realized_ambiguity(names, names.descriptor)
            pool = sorted(names.described)
            rng = substream(master, "targets", vi, inst)
            targets = rng.choice(pool, size=config.nodes_per_instance,
                                 replace=len(pool) < config.nodes_per_instance)
            for ti, target in enumerate(int(t) for t in targets):
                try:
                    desc = de.find_shortest_unique(
                        g, names, target, shape=shape, S=s_budget,
                        seed=derive_seed(master, "trial", vi, inst, ti))
                except (NoUniqueDescription, NoNeighbors, NotEnoughNodes, BudgetExceeded):
                    failures += 1
                    continue
                sizes.append(desc.descriptor_count)
                arcs.append(desc.arc_count)
                b_values.append(desc.b)
        a_x = a_x_sum / config.instances
        a_d = a_d_sum / config.instances
        p = gcfg.arc_probability
        f_analytic = -math.log2(p)
        b_mean = float(np.mean(b_values)) if b_values else 0.0
        pred = theory.predict_description_size(config.mode, theory.PredictorInput(
            node_count=gcfg.node_count, described_ambiguity=a_x,
            descriptor_ambiguity=a_d, salience_rate=f_analytic,
            inter_arc_ratio=b_mean if config.mode in _DEEP_MODES else None,
            ensemble_size=s_budget,
            entropy_rate=graph_stats(generate_graph(dataclasses.replace(
                gcfg, seed=derive_seed(master, "graph", vi, 0)))).entropy_rate
            if config.mode == theory.RANDOM_LANDMARK else None))
        rows.append(SweepRow(
            graph_kind=gcfg.kind.value, N=gcfg.node_count, p=p,
            F_analytic=f_analytic,
            A_x_target=math.log2(ncfg.described_nodes_per_name),
            A_x_realized=a_x,
            A_d_target=math.log2(ncfg.descriptor_nodes_per_name),
            A_d_realized=a_d,
            mode=config.mode, b_mean=b_mean, S=s_budget,
            predicted_D=pred.D,
            observed_mean_D=float(np.mean(sizes)) if sizes else float("nan"),
            observed_std_D=float(np.std(sizes)) if sizes else float("nan"),
            observed_mean_L=float(np.mean(arcs)) if arcs else float("nan"),
            nodes_measured=len(sizes), failures=failures,
            seed=derive_seed(master, "row", vi)))
    return rows


def _format_cell(value) -> str:
    if isinstance(value, float):
        return format(value, ".6g")
    return str(value)


def rows_to_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_format_cell(getattr(row, col)) for col in CSV_COLUMNS])
    return buf.getvalue()


def write_csv(rows: list[SweepRow], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(rows_to_csv(rows))


def load_experiment_config(path: str) -> ExperimentConfig:
    """Read an ExperimentConfig from a TOML file with [graph], [naming],
    and [sweep] sections."""
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    try:
        g = doc.get("graph", {})
        n = doc.get("naming", {})
        s = doc.get("sweep", {})
        return ExperimentConfig(
            graph=GeneratorConfig(
                kind=GraphKind(g.get("kind", "er")),
                node_count=int(g.get("node_count", 1000)),
                arc_probability=float(g.get("arc_probability", 0.01)),
                cluster_count=int(g.get("cluster_count", 10)),
                inter_cluster_pairs=g.get("inter_cluster_pairs")),
            naming=NamingConfig(
                described_nodes_per_name=float(n.get("described_nodes_per_name", 1.0)),
                descriptor_nodes_per_name=float(n.get("descriptor_nodes_per_name", 1.0)),
                described_fraction=float(n.get("described_fraction", 0.5))),
            mode=s.get("mode", theory.FLAT),
            sweep_variable=s.get("variable", SALIENCE),
            sweep_values=tuple(float(v) for v in s.get("values", ())),
            instances=int(s.get("instances", 10)),
            nodes_per_instance=int(s.get("nodes_per_instance", 100)),
            ensemble_budget=s.get("ensemble_budget"),
            master_seed=int(s.get("master_seed", 0)),
            output_path=s.get("output_path"))
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"bad experiment config {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

MAX_ORACLE_NODES = 30


def brute_force_shortest(graph: Graph, names: NameTable | None, target: int,
                         shape: str = de.FLAT) -> de.Description:
    """Exhaustive minimum-size unique description over the same
    candidate space the sampler draws from (present-arc descriptors,
    with actual inter arcs for deep shapes).  Small graphs only."""
    if graph.node_count > MAX_ORACLE_NODES:
        raise GraphTooLarge(
            f"oracle limited to {MAX_ORACLE_NODES} nodes, got {graph.node_count}")
    pool = de.descriptor_pool(graph, names, target)
    if shape == de.FLAT:
        reachable = sorted(graph.out_neighbors(target, 0) & set(pool))
    else:
        # out-neighbor closure within the pool, as the deep sampler explores
        reachable: list[int] = []
        frontier = sorted(graph.out_neighbors(target, 0) & set(pool))
        seen = set()
        while frontier:
            v = frontier.pop(0)
            if v in seen:
                continue
            seen.add(v)
            reachable.append(v)
            frontier.extend(sorted(graph.out_neighbors(v, 0) & set(pool) - seen))
        reachable.sort()
    target_name = de._names_for(names, [target])[0] if names is not None else None
    for d in range(1, len(reachable) + 1):
        for combo in itertools.combinations(reachable, d):
            target_arcs = tuple((0, j) for j, v in enumerate(combo)
                                if graph.has_arc(target, 0, v))
            if shape == de.FLAT:
                if len(target_arcs) < d:
                    continue  # flat space: every descriptor a direct neighbor
                inter = ()
            else:
                if not target_arcs:
                    continue
                index = {v: i for i, v in enumerate(combo)}
                inter = tuple(sorted(
                    (i, 0, index[w]) for i, v in enumerate(combo)
                    for w in graph.out_neighbors(v, 0) if w in index))
            cand = de.Description(
                target_name=target_name, slots=de._names_for(names, combo),
                target_arcs=target_arcs, inter_arcs=inter,
                shape_class=shape if shape != de.FLAT else de.FLAT,
                b=len(inter) / d, ground_truth=(target, tuple(combo)))
            if de.decode(cand, graph, names).status == "UNIQUE":
                return cand
    raise NoUniqueDescription(f"no unique description exists for node {target}")


# ---------------------------------------------------------------------------
# k-anonymity audit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AuditReport:
    k: int
    match_counts: tuple[int, ...]
    flagged: tuple[int, ...]      # indices of descriptions matching < K nodes
    mean_size: float
    size_bound: float | None      # largest size keeping K-anonymity plausible
    batch_flagged: bool


def kanonymity_audit(descriptions: list[de.Description], graph: Graph,
                     names: NameTable | None, k: int) -> AuditReport:
    """Count, for each description, how many candidate targets match it;
    flag those identifying fewer than K.  A batch whose mean size
    reaches the analytic K-anonymity bound is flagged as a whole."""
    counts = []
    flagged = []
    for idx, desc in enumerate(descriptions):
        result = de.decode(desc, graph, names, count_all=True)
        m = result.match_count if result.match_count is not None else 0
        counts.append(m)
        if m < k:
            flagged.append(idx)
    mean_size = (sum(d.descriptor_count for d in descriptions) / len(descriptions)
                 if descriptions else 0.0)
    p = graph.metadata.get("p")
    bound = None
    batch_flagged = False
    if p is not None and descriptions:
        a_d = realized_ambiguity(names, names.descriptor) if names is not None else 0.0
        try:
            bound = theory.kanonymity_max_size(graph.node_count, k,
                                               er_salience_rate(float(p)), a_d)
            batch_flagged = mean_size >= bound
        except Exception:
            bound = None
    return AuditReport(k=k, match_counts=tuple(counts), flagged=tuple(flagged),
                       mean_size=mean_size, size_bound=bound,
                       batch_flagged=batch_flagged)
