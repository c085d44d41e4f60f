import dataclasses
import math

import numpy as np
import pytest

from refdesc import descriptions as de
from refdesc.errors import (EmptyEnsemble, EmptyInput, NodeSetMismatch,
                            UnboundDescriptor, UnknownName)
from refdesc.generators import GeneratorConfig, GraphKind, generate_graph
from refdesc.graph import Graph, NameTable, build_graph, graph_stats
from refdesc.measures import (ANALYTIC, MONTE_CARLO, Ensemble, ambiguity_rate,
                              build_ensemble, description_salience,
                              ensemble_salience_rate, er_salience_rate,
                              name_ambiguity, shape_of, shared_salience)
from refdesc.rng import substream


def er(n=500, p=0.01, seed=0):
    return generate_graph(GeneratorConfig(kind=GraphKind.ERDOS_RENYI,
                                          node_count=n, arc_probability=p, seed=seed))


def uniform_table(k, start=0):
    return NameTable(entries={"x": tuple((start + i, 1.0 / k) for i in range(k))})


class TestNameAmbiguity:
    def test_singleton_zero(self):
        t = NameTable(entries={"a": ((0, 1.0),)})
        assert name_ambiguity(t, "a") == 0.0

    def test_uniform_100(self):
        assert name_ambiguity(uniform_table(100), "x") == pytest.approx(
            math.log2(100), abs=1e-9)

    def test_weighted(self):
        t = NameTable(entries={"a": ((0, 0.5), (1, 0.25), (2, 0.25))})
        assert name_ambiguity(t, "a") == pytest.approx(1.5, abs=1e-9)

    def test_unknown(self):
        with pytest.raises(UnknownName):
            name_ambiguity(uniform_table(2), "nope")

    def test_maximal_iff_uniform_over_all(self):
        n = 16
        assert name_ambiguity(uniform_table(n), "x") == pytest.approx(math.log2(n))
        skew = NameTable(entries={"x": tuple(
            (i, 0.9 if i == 0 else 0.1 / (n - 1)) for i in range(n))})
        assert name_ambiguity(skew, "x") < math.log2(n)


class TestAmbiguityRate:
    def test_unique_names(self):
        t = NameTable(entries={"a": ((0, 1.0),), "b": ((1, 1.0),)})
        rep = ambiguity_rate(t, ["a", "b"])
        assert rep.rate_bits == 0.0
        assert rep.interpretations == 1.0

    def test_three_log4_names(self):
        t = NameTable(entries={f"n{i}": tuple((4 * i + j, 0.25) for j in range(4))
                               for i in range(3)})
        rep = ambiguity_rate(t, ["n0", "n1", "n2"])
        assert rep.rate_bits == pytest.approx(2.0)
        assert rep.interpretations == pytest.approx(64.0)

    def test_empty(self):
        with pytest.raises(EmptyInput):
            ambiguity_rate(uniform_table(2), [])


class TestDescriptionSalience:
    def present_arc_desc(self, g, target=None):
        if target is None:
            target = next(u for u in range(g.node_count) if g.out_neighbors(u))
        z = sorted(g.out_neighbors(target))[0]
        return de.Description(target_name=None, slots=(None,),
                              target_arcs=((0, 0),), ground_truth=(target, (z,)))

    def test_single_present_arc_er_001(self):
        g = er(p=0.01, seed=1)
        est = description_salience(self.present_arc_desc(g), g)
        assert est.method == ANALYTIC
        assert est.total == pytest.approx(-math.log2(0.01), abs=1e-9)
        assert est.rate == est.total

    def test_single_absent_arc_er_05(self):
        g = er(p=0.5, seed=1)
        target = 0
        z = next(v for v in range(1, g.node_count) if not g.has_arc(0, 0, v))
        d = de.Description(target_name=None, slots=(None,),
                           target_arcs=((None, 0),), ground_truth=(target, (z,)))
        assert description_salience(d, g).total == pytest.approx(1.0, abs=1e-9)

    def test_three_present_arcs_analytic(self):
        g = er(p=0.1, seed=2)
        target = next(u for u in range(g.node_count) if len(g.out_neighbors(u)) >= 3)
        zs = tuple(sorted(g.out_neighbors(target))[:3])
        d = de.Description(target_name=None, slots=(None,) * 3,
                           target_arcs=((0, 0), (0, 1), (0, 2)),
                           ground_truth=(target, zs))
        est = description_salience(d, g)
        assert est.total == pytest.approx(3 * -math.log2(0.1), abs=1e-6)

    def test_two_present_arcs_monte_carlo_matches_analytic(self):
        # large enough that the shape has many matching nodes to count
        g = er(n=2000, p=0.1, seed=2)
        target = next(u for u in range(g.node_count) if len(g.out_neighbors(u)) >= 2)
        zs = tuple(sorted(g.out_neighbors(target))[:2])
        d = de.Description(target_name=None, slots=(None,) * 2,
                           target_arcs=((0, 0), (0, 1)),
                           ground_truth=(target, zs))
        est = description_salience(d, g)
        mc = description_salience(d, g, method=MONTE_CARLO, seed=12)
        assert mc.total == pytest.approx(est.total, rel=0.25)
        assert mc.sample_count == 10_000
        assert mc.std_error > 0

    def test_unbound_rejected(self):
        g = er(seed=1)
        d = de.Description(target_name=None, slots=(None,), target_arcs=((0, 0),))
        with pytest.raises(UnboundDescriptor):
            description_salience(d, g)

    def test_zero_estimate_floored_and_flagged(self):
        # target's arc goes to a node nobody else points at
        g = build_graph(50, ["L"], [(0, 0, 1)], metadata={"kind": "manual"})
        d = de.Description(target_name=None, slots=(None,),
                           target_arcs=((0, 0),), ground_truth=(0, (1,)))
        est = description_salience(d, g, samples=1000, seed=3)
        assert est.method == MONTE_CARLO
        assert est.floored
        assert est.total == pytest.approx(-math.log2(0.1 / 1000))

    def test_mc_rate_uses_arc_count(self):
        g = er(p=0.1, seed=2)
        target = next(u for u in range(g.node_count) if len(g.out_neighbors(u)) >= 2)
        zs = tuple(sorted(g.out_neighbors(target))[:2])
        d = de.Description(target_name=None, slots=(None,) * 2,
                           target_arcs=((0, 0), (0, 1)), ground_truth=(target, zs))
        est = description_salience(d, g)
        assert est.rate == pytest.approx(est.total / 2)


class TestEnsembleSalienceRate:
    def test_single_shape_arithmetic(self):
        ens = Ensemble(shape_freq={"s": 1.0}, shape_prior={"s": 0.01},
                       mean_arc_count=1.0)
        assert ensemble_salience_rate(ens).rate == pytest.approx(-math.log2(0.01))

    def test_two_shape_arithmetic(self):
        ens = Ensemble(shape_freq={"a": 0.5, "b": 0.5},
                       shape_prior={"a": 2.0 ** -4, "b": 2.0 ** -6},
                       mean_arc_count=1.0)
        assert ensemble_salience_rate(ens).rate == pytest.approx(5.0)

    def test_empty(self):
        with pytest.raises(EmptyEnsemble):
            ensemble_salience_rate(Ensemble())

    def test_salient_single_arc_ensemble_er(self):
        g = er(n=1000, p=0.01, seed=4)
        descs = []
        for t in range(0, 300):
            try:
                descs.append(de.sample_candidate_description(
                    g, None, t, 1, strategy=de.SALIENT, seed=t))
            except Exception:
                continue
        ens = build_ensemble(descs, g)
        assert ensemble_salience_rate(ens).rate == pytest.approx(-math.log2(0.01))

    def test_random_arc_ensemble_matches_entropy_rate(self):
        g = er(n=1000, p=0.1, seed=4)
        rng = substream(5, "targets")
        descs = [de.sample_candidate_description(g, None, int(rng.integers(1000)),
                                                 4, strategy=de.RANDOM, seed=i)
                 for i in range(400)]
        ens = build_ensemble(descs, g)
        h_g = graph_stats(g).entropy_rate
        assert ensemble_salience_rate(ens).rate == pytest.approx(h_g, rel=0.10)

    def test_er_salience_rate_prefers_rarer_state(self):
        assert er_salience_rate(0.01) == pytest.approx(-math.log2(0.01))
        assert er_salience_rate(0.9) == pytest.approx(-math.log2(0.1))
        assert er_salience_rate(0.5) == pytest.approx(1.0)


def _flip_view(g, rate, seed):
    rng = substream(seed, "flip")
    n = g.node_count
    out = [set(g.out_neighbors(u, 0)) for u in range(n)]
    mask = rng.random((n, n)) < rate
    np.fill_diagonal(mask, False)
    for u in range(n):
        for v in np.flatnonzero(mask[u]):
            v = int(v)
            if v in out[u]:
                out[u].discard(v)
            else:
                out[u].add(v)
    inn = [set() for _ in range(n)]
    for u in range(n):
        for v in out[u]:
            inn[v].add(u)
    return Graph(n, ("L",), [[frozenset(s) for s in out]],
                 [[frozenset(s) for s in inn]],
                 sum(len(s) for s in out), dict(g.metadata))


@pytest.fixture(scope="module")
def setup():
    g = er(n=300, p=0.01, seed=3)
    descs = []
    for i in range(300):
        try:
            descs.append(de.sample_candidate_description(
                g, None, i % 300, 1, strategy=de.SALIENT, seed=i))
        except Exception:
            continue
    return g, build_ensemble(descs, g)


class TestSharedSalience:
    def test_identical_views(self, setup):
        g, ens = setup
        rep = shared_salience(g, g, ens, samples=2000, seed=1)
        assert rep.shared_rate == pytest.approx(rep.sender_rate, abs=1e-9)
        assert rep.sender_rate == pytest.approx(ensemble_salience_rate(ens).rate)

    def test_independent_views_near_zero(self, setup):
        g, ens = setup
        other = er(n=300, p=0.01, seed=99)
        rep = shared_salience(g, other, ens, samples=2000, seed=1)
        assert rep.shared_rate < 0.2

    def test_monotone_in_flip_rate(self, setup):
        g, ens = setup
        rates = []
        for flip in (0.0, 0.1, 0.3):
            rep = shared_salience(g, _flip_view(g, flip, 7), ens,
                                  samples=2000, seed=1)
            assert 0.0 <= rep.shared_rate <= rep.sender_rate + 0.05
            rates.append(rep.shared_rate)
        assert rates[0] > rates[1] > rates[2] > 0.2

    def test_node_set_mismatch(self, setup):
        g, ens = setup
        with pytest.raises(NodeSetMismatch):
            shared_salience(g, er(n=100, seed=1), ens)


class TestShape:
    def test_equal_configurations_encode_identically(self):
        a = de.Description(target_name=None, slots=(None, None),
                           target_arcs=((0, 1), (0, 0)), ground_truth=(0, (1, 2)))
        b = de.Description(target_name=None, slots=(None, None),
                           target_arcs=((0, 0), (0, 1)), ground_truth=(5, (7, 9)))
        assert shape_of(a) == shape_of(b)

    def test_absent_differs_from_present(self):
        a = de.Description(target_name=None, slots=(None,), target_arcs=((0, 0),))
        b = de.Description(target_name=None, slots=(None,), target_arcs=((None, 0),))
        assert shape_of(a) != shape_of(b)
