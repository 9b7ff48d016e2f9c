"""Test signed canonical forms, zero classes and linear combinations."""

from fractions import Fraction

import pytest

from graphcx.core.canonical import LinearCombination, automorphism_signs, canonicalize
from graphcx.core.graph import LabeledDiGraph, ParityRules
from graphcx.utils.permutations import cycles_of, perm_sign, sorting_sign

pytestmark = pytest.mark.unit


@pytest.fixture
def transitive_triangle():
    """0 -> 1 -> 2 plus 0 -> 2; the only automorphism is the identity."""
    return LabeledDiGraph(3, ((0, 1), (1, 2), (0, 2)))


class TestPermutationSigns:
    """Parity helpers."""

    def test_perm_sign(self):
        assert perm_sign([0, 1, 2]) == 1
        assert perm_sign([1, 0, 2]) == -1
        assert perm_sign([1, 2, 0]) == 1
        assert perm_sign([]) == 1

    def test_sorting_sign(self):
        assert sorting_sign([1, 2, 3]) == 1
        assert sorting_sign([2, 1, 3]) == -1
        assert sorting_sign([(1, 2), (0, 1)]) == -1

    def test_cycles_include_fixed_points(self):
        assert sorted(cycles_of([1, 0, 2])) == [(0, 1), (2,)]


class TestCanonicalize:
    """Canonical representatives and the sign of the relabeling."""

    def test_edge_reordering_flips_sign_when_edges_are_odd(self, transitive_triangle):
        rules = ParityRules(0)
        swapped = transitive_triangle.relabeled([0, 1, 2], edge_order=[1, 0, 2])

        a = canonicalize(transitive_triangle, rules)
        b = canonicalize(swapped, rules)

        assert not a.is_zero and not b.is_zero
        assert a.graph == b.graph
        assert a.coeff == -b.coeff

    def test_edge_reordering_is_free_when_edges_are_even(self, transitive_triangle):
        rules = ParityRules(1)
        swapped = transitive_triangle.relabeled([0, 1, 2], edge_order=[1, 0, 2])
        assert canonicalize(transitive_triangle, rules) == canonicalize(swapped, rules)

    def test_vertex_transposition_flips_sign_when_vertices_are_odd(self, transitive_triangle):
        rules = ParityRules(1)
        relabeled = transitive_triangle.relabeled([1, 0, 2])

        a = canonicalize(transitive_triangle, rules)
        b = canonicalize(relabeled, rules)

        assert a.graph == b.graph
        assert a.coeff == -b.coeff

    @pytest.mark.parametrize("n", [0, 1, 2])
    def test_canonical_graph_is_a_fixed_point(self, transitive_triangle, n):
        rules = ParityRules(n)
        first = canonicalize(transitive_triangle, rules)
        second = canonicalize(first.graph, rules)
        assert second.graph == first.graph
        assert second.coeff == Fraction(1)

    def test_canonical_edges_are_sorted(self, crossing_graph):
        term = canonicalize(crossing_graph, ParityRules(2))
        assert list(term.graph.edges) == sorted(term.graph.edges)


class TestZeroClasses:
    """Sign-reversing automorphisms kill a class."""

    def test_parallel_odd_edges_vanish(self, double_edge_graph):
        assert canonicalize(double_edge_graph, ParityRules(0)).is_zero
        assert automorphism_signs(double_edge_graph, ParityRules(0)) == {1, -1}

    def test_parallel_even_edges_survive(self, double_edge_graph):
        assert not canonicalize(double_edge_graph, ParityRules(1)).is_zero
        assert automorphism_signs(double_edge_graph, ParityRules(1)) == {1}

    def test_swapping_odd_sources_vanishes(self, crossing_graph):
        # vertices 0 and 1 are exchanged by an automorphism that fixes every other vertex
        assert canonicalize(crossing_graph, ParityRules(1)).is_zero

    def test_two_hairs_on_one_vertex_vanish(self):
        g = LabeledDiGraph(2, ((0, 1), (0, 1), (0, 1)), (0, 0))
        assert canonicalize(g, ParityRules(1, hairy=True)).is_zero

    def test_rigid_graph_has_trivial_signs(self, transitive_triangle):
        for n in range(3):
            assert automorphism_signs(transitive_triangle, ParityRules(n)) == {1}


class TestLinearCombination:
    """Formal sums drop zero coefficients."""

    def test_add_cancels(self):
        combo = LinearCombination()
        combo.add("a", 2)
        combo.add("a", -2)
        assert combo.is_zero()

    def test_add_term_skips_zero_terms(self, double_edge_graph):
        combo = LinearCombination()
        combo.add_term(canonicalize(double_edge_graph, ParityRules(0)))
        assert combo.is_zero()

    def test_arithmetic(self):
        a = LinearCombination({"x": Fraction(1), "y": Fraction(2)})
        b = LinearCombination({"y": Fraction(2)})
        assert a - b == {"x": Fraction(1)}
        assert (a + b)["y"] == Fraction(4)
        assert a.scaled(Fraction(1, 2)) == {"x": Fraction(1, 2), "y": Fraction(1)}
        assert a.scaled(0).is_zero()
