"""Command-line interface.

Every randomized command takes an explicit --seed so runs are
reproducible by construction; there is no hidden entropy source.
"""

from __future__ import annotations

import dataclasses
import json
import math
import sys

import click

from . import descriptions as de
from . import harness, theory
from .errors import RefdescError
from .generators import (GeneratorConfig, GraphKind, NamingConfig,
                         assign_names, generate_graph, realized_ambiguity)
from .graph import graph_stats, load_graph, save_graph, to_json_dict
from .measures import (ambiguity_rate, build_ensemble, description_salience,
                       ensemble_salience_rate, name_ambiguity, shared_salience)


@click.group()
def main() -> None:
    """Toolkit for identifying references through graph descriptions."""


def _fail(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


@main.command()
@click.option("--kind", type=click.Choice([k.value for k in GraphKind]), default="er")
@click.option("--nodes", "-n", type=int, required=True)
@click.option("--p", type=float, required=True, help="arc probability")
@click.option("--clusters", type=int, default=10)
@click.option("--seed", type=int, required=True)
@click.option("--out", type=click.Path(), required=True)
def generate(kind, nodes, p, clusters, seed, out):
    """Sample a random graph and write it as JSON."""
    try:
        g = generate_graph(GeneratorConfig(kind=GraphKind(kind), node_count=nodes,
                                           arc_probability=p, cluster_count=clusters,
                                           seed=seed))
        save_graph(out, g)
    except RefdescError as exc:
        _fail(exc)
    click.echo(f"wrote {out}: {g.node_count} nodes, {g.arc_count} arcs")


@main.command()
@click.option("--graph", "graph_path", type=click.Path(exists=True), required=True)
@click.option("--described-per-name", type=float, default=1.0)
@click.option("--descriptor-per-name", type=float, default=1.0)
@click.option("--described-fraction", type=float, default=0.5)
@click.option("--seed", type=int, required=True)
@click.option("--out", type=click.Path(), required=True)
def names(graph_path, described_per_name, descriptor_per_name, described_fraction,
          seed, out):
    """Assign ambiguity-controlled names and write graph + names JSON."""
    try:
        g, _ = load_graph(graph_path)
        table = assign_names(g, NamingConfig(
            described_nodes_per_name=described_per_name,
            descriptor_nodes_per_name=descriptor_per_name,
            described_fraction=described_fraction, seed=seed))
        save_graph(out, g, table)
    except RefdescError as exc:
        _fail(exc)
    click.echo(f"wrote {out}: A_x={realized_ambiguity(table, table.described):.4f} "
               f"A_d={realized_ambiguity(table, table.descriptor):.4f}")


@main.command()
@click.option("--graph", "graph_path", type=click.Path(exists=True), required=True)
@click.option("--receiver", "receiver_path", type=click.Path(exists=True), default=None,
              help="diverging receiver view for shared salience")
@click.option("--samples", type=int, default=200, help="salient descriptions to draw")
@click.option("--seed", type=int, required=True)
def measure(graph_path, receiver_path, samples, seed):
    """Print ambiguity, entropy rate, and salience measures as JSON."""
    try:
        g, table = load_graph(graph_path)
        stats = graph_stats(g)
        report: dict = {
            "entropy_rate": stats.entropy_rate,
            "arc_density": stats.arc_density,
            "ambiguities": {name: name_ambiguity(table, name)
                            for name in sorted(table.entries)},
        }
        if table.described:
            report["described_ambiguity"] = realized_ambiguity(table, table.described)
            report["descriptor_ambiguity"] = realized_ambiguity(table, table.descriptor)
        described = sorted(table.described) or list(range(g.node_count))
        from .rng import substream
        rng = substream(seed, "measure-targets")
        descs = []
        for i in range(samples):
            t = int(described[int(rng.integers(len(described)))])
            try:
                descs.append(de.sample_candidate_description(
                    g, table if table.entries else None, t, 1,
                    strategy=de.SALIENT, seed=seed + i))
            except RefdescError:
                continue
        if descs:
            ens = build_ensemble(descs, g, seed=seed)
            report["salience_rate"] = ensemble_salience_rate(ens).rate
            if receiver_path:
                recv, _ = load_graph(receiver_path)
                shared = shared_salience(g, recv, ens, seed=seed)
                report["shared_salience"] = {"shared_rate": shared.shared_rate,
                                             "sender_rate": shared.sender_rate}
        click.echo(json.dumps(report, indent=2, sort_keys=True))
    except RefdescError as exc:
        _fail(exc)


@main.command()
@click.option("--graph", "graph_path", type=click.Path(exists=True), required=True)
@click.option("--target", type=int, required=True)
@click.option("--shape", type=click.Choice([de.FLAT, de.INTERMEDIATE, de.DEEP]),
              default=de.FLAT)
@click.option("--ensemble-size", "-s", type=int, default=None)
@click.option("--budget", type=int, default=de.DEFAULT_DECODE_BUDGET)
@click.option("--seed", type=int, required=True)
@click.option("--out", type=click.Path(), default=None)
def describe(graph_path, target, shape, ensemble_size, budget, seed, out):
    """Find the shortest unique description of a target node."""
    try:
        g, table = load_graph(graph_path)
        desc = de.find_shortest_unique(g, table if table.entries else None, target,
                                       shape=shape, S=ensemble_size, seed=seed,
                                       budget=budget)
    except RefdescError as exc:
        _fail(exc)
    doc = desc.to_json_dict()
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
        click.echo(f"wrote {out}: D={desc.descriptor_count} L={desc.arc_count}")
    else:
        click.echo(json.dumps(doc, indent=2))


@main.command()
@click.option("--graph", "graph_path", type=click.Path(exists=True), required=True)
@click.option("--description-file", type=click.Path(exists=True), required=True)
@click.option("--budget", type=int, default=de.DEFAULT_DECODE_BUDGET)
def decode(graph_path, description_file, budget):
    """Resolve a description JSON file against a graph."""
    try:
        g, table = load_graph(graph_path)
        with open(description_file, encoding="utf-8") as fh:
            desc = de.Description.from_json_dict(json.load(fh))
        result = de.decode(desc, g, table if table.entries else None, budget=budget)
    except RefdescError as exc:
        _fail(exc)
    click.echo(json.dumps({"status": result.status, "target": result.target,
                           "candidates": list(result.candidates),
                           "work": result.work, "reason": result.reason}, indent=2))


@main.command()
@click.option("--mode", type=click.Choice(theory.MODES), required=True)
@click.option("--nodes", "-n", type=int, required=True)
@click.option("--ax", type=float, default=0.0, help="described ambiguity, bits")
@click.option("--ad", type=float, default=0.0, help="descriptor ambiguity, bits")
@click.option("--f", "salience", type=float, default=1.0, help="salience rate, bits/arc")
@click.option("--b", type=float, default=None, help="inter-arc ratio")
@click.option("--hg", type=float, default=None, help="graph entropy rate, bits")
def predict(mode, nodes, ax, ad, salience, b, hg):
    """Print the analytic description-size prediction as JSON."""
    try:
        pred = theory.predict_description_size(mode, theory.PredictorInput(
            node_count=nodes, described_ambiguity=ax, descriptor_ambiguity=ad,
            salience_rate=salience, inter_arc_ratio=b, entropy_rate=hg))
    except RefdescError as exc:
        _fail(exc)
    click.echo(json.dumps(dataclasses.asdict(pred), indent=2))


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--kind", type=click.Choice([k.value for k in GraphKind]), default="er")
@click.option("--nodes", "-n", type=int, default=1000)
@click.option("--p", type=float, default=0.01)
@click.option("--mode", type=click.Choice(theory.MODES), default=theory.FLAT)
@click.option("--variable", type=click.Choice(harness.SWEEP_VARIABLES),
              default=harness.SALIENCE)
@click.option("--values", type=str, default=None, help="comma-separated sweep values")
@click.option("--described-per-name", type=float, default=1.0)
@click.option("--descriptor-per-name", type=float, default=1.0)
@click.option("--instances", type=int, default=10)
@click.option("--nodes-per-instance", type=int, default=100)
@click.option("--ensemble-size", "-s", type=int, default=None)
@click.option("--seed", type=int, required=True)
@click.option("--out", type=click.Path(), required=True)
def sweep(config_path, kind, nodes, p, mode, variable, values, described_per_name,
          descriptor_per_name, instances, nodes_per_instance, ensemble_size,
          seed, out):
    """Run a parameter sweep and write one CSV row per sweep value."""
    try:
        if config_path:
            cfg = harness.load_experiment_config(config_path)
            cfg = dataclasses.replace(cfg, master_seed=seed, output_path=out)
        else:
            if not values:
                raise harness.ConfigError("--values required without --config")
            cfg = harness.ExperimentConfig(
                graph=GeneratorConfig(kind=GraphKind(kind), node_count=nodes,
                                      arc_probability=p),
                naming=NamingConfig(described_nodes_per_name=described_per_name,
                                    descriptor_nodes_per_name=descriptor_per_name),
                mode=mode, sweep_variable=variable,
                sweep_values=tuple(float(v) for v in values.split(",")),
                instances=instances, nodes_per_instance=nodes_per_instance,
                ensemble_budget=ensemble_size, master_seed=seed, output_path=out)
        rows = harness.run_sweep(cfg)
        harness.write_csv(rows, out)
    except RefdescError as exc:
        _fail(exc)
    click.echo(f"wrote {out}: {len(rows)} rows")


@main.command()
@click.option("--graph", "graph_path", type=click.Path(exists=True), required=True)
@click.option("--k", type=int, required=True)
@click.option("--samples", type=int, default=100, help="random descriptions to audit")
@click.option("--size", "-d", type=int, default=1, help="descriptors per description")
@click.option("--seed", type=int, required=True)
def audit(graph_path, k, samples, size, seed):
    """Audit random descriptions for K-anonymity and print a report."""
    try:
        g, table = load_graph(graph_path)
        names_or_none = table if table.entries else None
        described = sorted(table.described) or list(range(g.node_count))
        from .rng import substream
        rng = substream(seed, "audit-targets")
        descs = []
        for i in range(samples):
            t = int(described[int(rng.integers(len(described)))])
            descs.append(de.sample_candidate_description(
                g, names_or_none, t, size, strategy=de.RANDOM, seed=seed + i))
        report = harness.kanonymity_audit(descs, g, names_or_none, k)
    except RefdescError as exc:
        _fail(exc)
    click.echo(json.dumps({
        "k": report.k,
        "descriptions": len(report.match_counts),
        "flagged": list(report.flagged),
        "flagged_fraction": len(report.flagged) / max(1, len(report.match_counts)),
        "mean_size": report.mean_size,
        "size_bound": report.size_bound,
        "batch_flagged": report.batch_flagged}, indent=2))


if __name__ == "__main__":
    main()
