"""Graph and labeling core: construction, cut fraction, components, I/O."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mucca.errors import (
    DuplicateEdgeError,
    EmptyGraphError,
    MalformedLineError,
    NonPositiveWeightError,
    SelfLoopError,
)
from mucca.graph import (
    PartialLabeling,
    connected_components,
    dump_edge_list,
    dump_labels,
    from_edge_list,
    parse_edge_list,
    parse_labels,
    weighted_cut_fraction,
)


class TestFromEdgeList:
    def test_smallest_graph(self):
        g = from_edge_list([(0, 1, 1.0)])
        assert g.n == 2
        assert g.num_edges == 1

    def test_symmetry_duplicate_rejected(self):
        with pytest.raises(DuplicateEdgeError):
            from_edge_list([(0, 1, 1.0), (1, 0, 2.0)])

    def test_zero_weight_rejected(self):
        with pytest.raises(NonPositiveWeightError):
            from_edge_list([(0, 1, 0.0)])

    def test_negative_weight_rejected(self):
        with pytest.raises(NonPositiveWeightError):
            from_edge_list([(0, 1, -3.0)])

    def test_nan_weight_rejected(self):
        with pytest.raises(NonPositiveWeightError):
            from_edge_list([(0, 1, float("nan"))])

    def test_self_loop_rejected(self):
        with pytest.raises(SelfLoopError):
            from_edge_list([(0, 0, 1.0)])

    def test_n_is_one_plus_max_id(self):
        g = from_edge_list([(0, 5, 1.0)])
        assert g.n == 6

    def test_adjacency_symmetric(self):
        g = from_edge_list([(0, 1, 2.0), (1, 2, 3.0)])
        for u in range(g.n):
            nbrs, ws, _ = g.neighbors(u)
            for v, w in zip(nbrs, ws):
                back, back_w, _ = g.neighbors(int(v))
                assert w in back_w[back == u]

    def test_error_names_the_offending_edge(self):
        with pytest.raises(SelfLoopError, match="edge 1"):
            from_edge_list([(0, 1, 1.0), (2, 2, 1.0)])


class TestCutFraction:
    def path3(self):
        return from_edge_list([(0, 1, 1.0), (1, 2, 1.0)])

    def test_uniform_labeling(self):
        assert weighted_cut_fraction(self.path3(), [0, 0, 0]) == 0.0

    def test_one_cut_edge_of_two(self):
        assert weighted_cut_fraction(self.path3(), [0, 0, 1]) == 0.5

    def test_triangle_against_enumeration(self):
        # oracle: recompute the ratio for every 2-coloring by direct summation
        edges = [(0, 1, 1.0), (1, 2, 2.0), (0, 2, 3.0)]
        g = from_edge_list(edges)
        for labels in itertools.product([0, 1], repeat=3):
            cut = sum(w for u, v, w in edges if labels[u] != labels[v])
            assert weighted_cut_fraction(g, list(labels)) == \
                pytest.approx(cut / 6.0)

    def test_empty_graph_rejected(self):
        g = from_edge_list([], n=3)
        with pytest.raises(EmptyGraphError):
            weighted_cut_fraction(g, [0, 0, 0])

    @given(st.integers(0, 10 ** 6))
    @settings(max_examples=25, deadline=None)
    def test_constant_labeling_is_zero(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 12))
        triples = [(i, int(rng.integers(0, i)), float(rng.uniform(0.1, 2)))
                   for i in range(1, n)]
        g = from_edge_list(triples, n=n)
        assert weighted_cut_fraction(g, [1] * n) == 0.0

    @given(st.integers(0, 10 ** 6))
    @settings(max_examples=25, deadline=None)
    def test_invariant_under_class_permutation(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 12))
        triples = [(i, int(rng.integers(0, i)), float(rng.uniform(0.1, 2)))
                   for i in range(1, n)]
        g = from_edge_list(triples, n=n)
        y = rng.integers(0, 3, size=n)
        perm = rng.permutation(3)
        assert weighted_cut_fraction(g, y) == \
            pytest.approx(weighted_cut_fraction(g, perm[y]))


class TestComponents:
    def test_edgeless(self):
        g = from_edge_list([], n=3)
        comps = connected_components(g)
        assert [set(c) for c in comps] == [{0}, {1}, {2}]

    def test_path(self):
        g = from_edge_list([(0, 1, 1.0), (1, 2, 1.0)])
        assert [set(c) for c in connected_components(g)] == [{0, 1, 2}]

    def test_two_pairs(self):
        g = from_edge_list([(0, 1, 1.0), (2, 3, 1.0)])
        assert [set(c) for c in connected_components(g)] == [{0, 1}, {2, 3}]


class TestEdgeListFormat:
    def test_round_trip_identity_up_to_order(self):
        g = from_edge_list([(0, 1, 0.5), (1, 2, 2.25), (0, 3, 1.0)])
        g2 = parse_edge_list(dump_edge_list(g).splitlines())
        assert g2.n == g.n
        assert sorted(g.edges()) == sorted(g2.edges())

    def test_comments_and_blanks_skipped(self):
        g = parse_edge_list(["# header", "", "0 1 1.5  # tail comment"])
        assert g.num_edges == 1
        assert g.edge_w[0] == 1.5

    def test_malformed_line_names_line_number(self):
        with pytest.raises(MalformedLineError, match="line 2"):
            parse_edge_list(["0 1 1.0", "0 1"])

    def test_duplicate_reports_source_line(self):
        with pytest.raises(DuplicateEdgeError, match="line 3"):
            parse_edge_list(["0 1 1.0", "# x", "1 0 1.0"])


class TestPartialLabeling:
    def test_class_range_enforced(self):
        with pytest.raises(ValueError):
            PartialLabeling([0, 3, -1], num_classes=2)

    def test_none_means_unrevealed(self):
        y = PartialLabeling([None, 1, None], num_classes=2)
        assert y.num_revealed == 1
        assert list(y.revealed_nodes) == [1]

    def test_plurality_ties_to_smallest(self):
        y = PartialLabeling([0, 1, 0, 1, -1], num_classes=3)
        assert y.plurality_class() == 0

    def test_labels_are_immutable(self):
        y = PartialLabeling([0, -1], num_classes=2)
        with pytest.raises(ValueError):
            y.labels[0] = 1


class TestLabelsFormat:
    def test_round_trip(self):
        y = PartialLabeling([0, -1, 2, -1], num_classes=3)
        y2 = parse_labels(dump_labels(y).splitlines(), 4, num_classes=3)
        assert np.array_equal(y.labels, y2.labels)

    def test_absent_nodes_unrevealed(self):
        y = parse_labels(["0 1"], 3)
        assert y.num_revealed == 1

    def test_duplicate_node_rejected(self):
        with pytest.raises(MalformedLineError, match="line 2"):
            parse_labels(["0 1", "0 0"], 2)

    def test_out_of_range_node_rejected(self):
        with pytest.raises(MalformedLineError):
            parse_labels(["5 0"], 3)
