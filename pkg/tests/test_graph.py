import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from refdesc.errors import DuplicateArc, InvalidArc
from refdesc.graph import (NameTable, build_graph, from_json_dict, graph_stats,
                           load_graph, lookup_name, save_graph, to_json_dict)


def path_graph():
    return build_graph(3, ["L"], [(0, 0, 1), (1, 0, 2)])


class TestBuildGraph:
    def test_adjacency(self):
        g = path_graph()
        assert g.has_arc(0, 0, 1)
        assert not g.has_arc(1, 0, 0)
        assert g.out_neighbors(1) == frozenset({2})
        assert g.in_neighbors(2) == frozenset({1})
        assert g.arc_count == 2

    def test_arcs_sorted(self):
        g = build_graph(3, ["L"], [(2, 0, 0), (0, 0, 2), (0, 0, 1)])
        assert list(g.arcs()) == [(0, 0, 1), (0, 0, 2), (2, 0, 0)]

    def test_label_strings(self):
        g = build_graph(2, ["a", "b"], [(0, "b", 1)])
        assert g.has_arc(0, 1, 1)
        assert g.label_id("b") == 1

    def test_invalid_node(self):
        with pytest.raises(InvalidArc):
            build_graph(2, ["L"], [(0, 0, 5)])

    def test_invalid_label(self):
        with pytest.raises(InvalidArc):
            build_graph(2, ["L"], [(0, "nope", 1)])

    def test_duplicate_arc(self):
        with pytest.raises(DuplicateArc):
            build_graph(2, ["L"], [(0, 0, 1), (0, 0, 1)])


class TestGraphStats:
    def test_path_density(self):
        stats = graph_stats(path_graph())
        assert stats.arc_density == pytest.approx(2 / 6)
        assert stats.average_degree == pytest.approx(2 / 3)

    def test_entropy_is_binary_entropy_of_density(self):
        stats = graph_stats(path_graph())
        q = 2 / 6
        expected = -q * math.log2(q) - (1 - q) * math.log2(1 - q)
        assert stats.entropy_rate == pytest.approx(expected)

    def test_empty_graph(self):
        g = build_graph(4, ["L"], [])
        assert graph_stats(g).entropy_rate == 0.0


class TestNameTable:
    def test_lookup_and_groups(self):
        t = NameTable(entries={"a": ((0, 0.5), (1, 0.5)), "b": ((2, 1.0),)},
                      described=frozenset({0, 1}), descriptor=frozenset({2}))
        assert t.lookup("a") == [(0, 0.5), (1, 0.5)]
        assert lookup_name(t, "missing") == []
        assert t.name_of(2) == "b"
        assert t.name_of(9) is None
        assert t.group_of(0) == "DESCRIBED"
        assert t.group_of(2) == "DESCRIPTOR"
        assert t.group_of(9) is None

    def test_weights_must_sum_to_one(self):
        with pytest.raises(ValueError):
            NameTable(entries={"a": ((0, 0.5), (1, 0.4))})

    def test_nonpositive_weight_rejected(self):
        with pytest.raises(ValueError):
            NameTable(entries={"a": ((0, 1.0), (1, 0.0))})

    def test_node_with_two_names_rejected(self):
        with pytest.raises(ValueError):
            NameTable(entries={"a": ((0, 1.0),), "b": ((0, 1.0),)})


class TestJsonInterchange:
    def test_round_trip(self, tmp_path):
        g = path_graph()
        t = NameTable(entries={"a": ((0, 1.0),), "b": ((1, 0.5), (2, 0.5))},
                      described=frozenset({1, 2}), descriptor=frozenset({0}))
        path = tmp_path / "g.json"
        save_graph(str(path), g, t)
        g2, t2 = load_graph(str(path))
        assert list(g2.arcs()) == list(g.arcs())
        assert g2.node_count == g.node_count
        assert t2.entries == {"a": ((0, 1.0),), "b": ((1, 0.5), (2, 0.5))}
        assert t2.described == t.described

    def test_schema_fields(self):
        doc = to_json_dict(path_graph())
        assert set(doc) == {"n", "labels", "arcs", "names", "groups", "meta"}
        assert doc["arcs"] == [[0, 0, 1], [1, 0, 2]]

    def test_json_dict_round_trip_equals(self):
        doc = to_json_dict(path_graph())
        g2, _ = from_json_dict(json.loads(json.dumps(doc)))
        assert to_json_dict(g2)["arcs"] == doc["arcs"]


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**32))
def test_random_graph_json_round_trip(n, seed):
    import numpy as np
    rng = np.random.default_rng(seed)
    arcs = {(int(rng.integers(n)), 0, int(rng.integers(n))) for _ in range(n)}
    arcs = [(u, l, v) for u, l, v in arcs if u != v]
    g = build_graph(n, ["L"], arcs)
    g2, _ = from_json_dict(to_json_dict(g))
    assert list(g2.arcs()) == list(g.arcs())
