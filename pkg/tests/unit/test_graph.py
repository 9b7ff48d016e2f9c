"""Test labeled graphs, families and the structural predicates."""

import pytest

from graphcx.core.errors import FamilyError, MalformedGraphError
from graphcx.core.graph import (
    FamilyTag,
    LabeledDiGraph,
    ParityRules,
    count_sources,
    count_targets,
    degree,
    has_passing_vertex,
    invert,
    is_acyclic,
    is_admissible,
    is_connected,
    loop_order,
    slice_degree,
)
from graphcx.core.types import FamilyKind, Parity

pytestmark = pytest.mark.unit


class TestLabeledDiGraph:
    """Construction invariants and serialization."""

    def test_tadpole_rejected(self):
        with pytest.raises(MalformedGraphError, match="tadpole"):
            LabeledDiGraph(2, ((0, 0),))

    def test_edge_out_of_range_rejected(self):
        with pytest.raises(MalformedGraphError):
            LabeledDiGraph(2, ((0, 2),))

    def test_hair_out_of_range_rejected(self):
        with pytest.raises(MalformedGraphError):
            LabeledDiGraph(2, ((0, 1),), (3,))

    def test_empty_vertex_set_rejected(self):
        with pytest.raises(MalformedGraphError):
            LabeledDiGraph(0)

    def test_counts(self, hairy_triangle):
        assert (hairy_triangle.v, hairy_triangle.e, hairy_triangle.s) == (3, 3, 3)
        assert hairy_triangle.valence(0) == 3

    def test_json_round_trip(self, hairy_triangle):
        assert LabeledDiGraph.from_json(hairy_triangle.to_json()) == hairy_triangle

    def test_invalid_json_raises(self):
        with pytest.raises(MalformedGraphError):
            LabeledDiGraph.from_json("{not json")
        with pytest.raises(MalformedGraphError):
            LabeledDiGraph.from_json('{"edges": []}')

    def test_relabeled_moves_edges_and_hairs(self):
        g = LabeledDiGraph(3, ((0, 1), (1, 2)), (0,))
        h = g.relabeled([2, 1, 0], edge_order=[1, 0])
        assert h.edges == ((1, 0), (2, 1))
        assert h.hairs == (2,)


class TestFamilies:
    """Family tags and parity rules."""

    def test_hairy_needs_hair_count(self):
        with pytest.raises(FamilyError):
            FamilyTag(FamilyKind.HAIRY, 2)

    def test_sourced_needs_positive_source_count(self):
        with pytest.raises(FamilyError):
            FamilyTag(FamilyKind.SOURCED, 1, 0)

    def test_hairy_allows_zero_hairs(self):
        assert FamilyTag(FamilyKind.HAIRY, 1, 0).s == 0

    def test_with_s(self):
        tag = FamilyTag(FamilyKind.ORIENTED, 1)
        assert tag.with_s(2) == FamilyTag(FamilyKind.ORIENTED, 1, 2)

    @pytest.mark.parametrize(
        "n,hairy,odd_vertices,odd_edges,flip",
        [
            (0, False, False, True, False),
            (1, False, True, False, False),
            (2, True, False, True, False),
            (1, True, True, False, True),
        ],
    )
    def test_parity_rules(self, n, hairy, odd_vertices, odd_edges, flip):
        rules = ParityRules(n, hairy)
        assert rules.odd_vertices is odd_vertices
        assert rules.odd_edges is odd_edges
        assert rules.flip_sign is flip
        assert rules.odd_hairs is hairy


    @pytest.mark.parametrize("n,parity", [(-1, Parity.ODD), (0, Parity.EVEN), (3, Parity.ODD), (4, Parity.EVEN)])
    def test_signs_follow_the_parity_of_n(self, n, parity):
        rules = ParityRules(n)
        assert rules.n_parity is parity
        assert rules.odd_vertices is (parity is Parity.ODD)
        assert rules.odd_edges is (parity is Parity.EVEN)

class TestAdmissibility:
    """Valence rules and family predicates."""

    def test_parallel_pair_is_oriented(self, double_edge_graph):
        assert is_admissible(double_edge_graph, FamilyTag(FamilyKind.ORIENTED, 1))

    def test_directed_cycle_is_not_oriented(self):
        cycle = LabeledDiGraph(3, ((0, 1), (1, 2), (2, 0)))
        assert not is_admissible(cycle, FamilyTag(FamilyKind.ORIENTED, 1))
        assert not is_acyclic(cycle)

    def test_cycle_with_passing_vertices_is_not_directed(self):
        cycle = LabeledDiGraph(3, ((0, 1), (1, 2), (2, 0)))
        assert has_passing_vertex(cycle)
        assert not is_admissible(cycle, FamilyTag(FamilyKind.DIRECTED, 1))

    def test_triangle_with_one_hair_is_not_hairy_admissible(self):
        g = LabeledDiGraph(3, ((0, 1), (1, 2), (2, 0)), (0,))
        assert not is_admissible(g, FamilyTag(FamilyKind.HAIRY, 0, 1))

    def test_triangle_with_three_hairs_is_hairy_admissible(self, hairy_triangle):
        assert is_admissible(hairy_triangle, FamilyTag(FamilyKind.HAIRY, 0, 3))
        assert not is_admissible(hairy_triangle, FamilyTag(FamilyKind.HAIRY, 0, 2))

    def test_hairs_not_allowed_outside_hairy_family(self, hairy_triangle):
        assert not is_admissible(hairy_triangle, FamilyTag(FamilyKind.DIRECTED, 0))

    def test_fixed_source_count(self, crossing_graph):
        assert is_admissible(crossing_graph, FamilyTag(FamilyKind.ORIENTED, 1, 2))
        assert not is_admissible(crossing_graph, FamilyTag(FamilyKind.ORIENTED, 1, 1))

    def test_disconnected_graph_rejected(self):
        g = LabeledDiGraph(4, ((0, 1), (0, 1), (2, 3), (2, 3)))
        assert not is_connected(g)
        assert not is_admissible(g, FamilyTag(FamilyKind.ORIENTED, 1))


class TestDegrees:
    """Degree and loop order bookkeeping."""

    def test_theta_degree(self, theta_graph):
        assert degree(theta_graph, FamilyTag(FamilyKind.ORIENTED, 1)) == -1

    def test_hairy_degree_formula(self):
        assert slice_degree(FamilyTag(FamilyKind.HAIRY, 0, 1), 4, 4, 1) == -5

    def test_single_vertex_degree_is_zero(self):
        for n in range(3):
            assert degree(LabeledDiGraph(1), FamilyTag(FamilyKind.DIRECTED, n)) == 0

    def test_loop_orders(self, theta_graph):
        assert loop_order(theta_graph) == 1
        assert loop_order(LabeledDiGraph(4, ((0, 1), (1, 2), (2, 3)))) == -1
        assert loop_order(LabeledDiGraph(3, ((0, 1), (1, 2), (0, 2)))) == 0

    def test_contraction_shape_raises_degree_by_one(self):
        for n in range(3):
            tag = FamilyTag(FamilyKind.ORIENTED, n)
            assert slice_degree(tag, 3, 4) + 1 == slice_degree(tag, 2, 3)


class TestSourcesAndTargets:
    """Source and target counts and edge reversal."""

    def test_theta_counts(self, theta_graph):
        assert count_sources(theta_graph) == 1
        assert count_targets(theta_graph) == 1
        assert is_acyclic(theta_graph)

    def test_cycle_has_no_sources(self):
        assert count_sources(LabeledDiGraph(3, ((0, 1), (1, 2), (2, 0)))) == 0

    def test_invert_exchanges_sources_and_targets(self):
        g = LabeledDiGraph(4, ((0, 1), (0, 2), (1, 3), (2, 3), (0, 3)))
        inv = invert(g)
        assert count_sources(inv) == count_targets(g)
        assert count_targets(inv) == count_sources(g)
        assert invert(inv) == g

    def test_invert_preserves_admissibility(self, crossing_graph):
        tag = FamilyTag(FamilyKind.ORIENTED, 1)
        assert is_admissible(invert(crossing_graph), tag) == is_admissible(crossing_graph, tag)
