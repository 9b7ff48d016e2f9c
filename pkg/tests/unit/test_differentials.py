"""Test edge contraction, hair deletion, vertex splitting and their matrices."""

import pytest

from graphcx.complexes.differentials import (
    apply_d,
    apply_d0,
    apply_h,
    apply_split,
    apply_to_combo,
    contract_edge,
    d_destination,
    differential_d,
    differential_d0,
    differential_h,
    differential_split,
)
from graphcx.complexes.generation import generate_basis
from graphcx.core.canonical import canonicalize
from graphcx.core.errors import FamilyError, MalformedGraphError
from graphcx.core.graph import FamilyTag, LabeledDiGraph
from graphcx.core.types import FamilyKind

pytestmark = pytest.mark.unit


@pytest.fixture
def fan_graph():
    """0 -> 1, 0 -> 2 and 1 => 2; contracting 0 -> 1 gives the theta graph."""
    return LabeledDiGraph(3, ((0, 1), (0, 2), (1, 2), (1, 2)))


class TestContraction:
    """Single contraction terms."""

    def test_parallel_edge_contraction_vanishes(self, theta_graph, oriented_n1):
        assert contract_edge(theta_graph, 0, oriented_n1).is_zero

    def test_contraction_creating_a_cycle_vanishes(self, fan_graph, oriented_n1):
        assert contract_edge(fan_graph, 1, oriented_n1).is_zero

    def test_edge_index_out_of_range(self, theta_graph, oriented_n1):
        with pytest.raises(MalformedGraphError):
            contract_edge(theta_graph, 3, oriented_n1)

    def test_apply_d_on_fan(self, fan_graph, theta_graph, oriented_n1):
        result = apply_d(fan_graph, oriented_n1)
        theta = canonicalize(theta_graph, oriented_n1.rules).graph
        assert list(result) == [theta]
        assert abs(result[theta]) == 1

    def test_d_destination_forgets_sources(self):
        assert d_destination(FamilyTag(FamilyKind.ORIENTED, 1, 2)).s is None
        hairy = FamilyTag(FamilyKind.HAIRY, 1, 2)
        assert d_destination(hairy) == hairy

    def test_hairy_triangle_is_closed(self, hairy_triangle):
        family = FamilyTag(FamilyKind.HAIRY, 0, 3)
        assert apply_d(hairy_triangle, family).is_zero()
        assert apply_h(hairy_triangle, family).is_zero()


class TestFamilyGuards:
    """Operators refuse families they are not defined on."""

    def test_d0_needs_fixed_sources(self, fan_graph, oriented_n1):
        with pytest.raises(FamilyError):
            apply_d0(fan_graph, oriented_n1)

    def test_h_needs_hairs(self, fan_graph, oriented_n1):
        with pytest.raises(FamilyError):
            apply_h(fan_graph, oriented_n1)

    def test_split_needs_oriented_slice(self):
        src = generate_basis(FamilyTag(FamilyKind.HAIRY, 1, 2), 2, 3)
        with pytest.raises(FamilyError):
            differential_split(src)


class TestSquares:
    """The differentials square to zero on small slices."""

    @pytest.mark.parametrize("n", [1, 2])
    def test_d_squared(self, n):
        src = generate_basis(FamilyTag(FamilyKind.ORIENTED, n), 4, 6)
        first, mid = differential_d(src)
        second, _ = differential_d(mid)
        assert (second @ first).is_zero()

    def test_d0_squared(self):
        src = generate_basis(FamilyTag(FamilyKind.ORIENTED, 1, 1), 4, 6)
        first, mid = differential_d0(src)
        second, _ = differential_d0(mid)
        assert (second @ first).is_zero()

    @pytest.mark.parametrize("n", [0, 1])
    def test_d_and_h_anticommute(self, n):
        src = generate_basis(FamilyTag(FamilyKind.HAIRY, n, 3), 3, 4)
        h_first, after_h = differential_h(src)
        d_after_h, _ = differential_d(after_h)
        d_first, after_d = differential_d(src)
        h_after_d, _ = differential_h(after_d)
        assert (d_after_h @ h_first + h_after_d @ d_first).is_zero()

    def test_d_squared_on_combinations(self, oriented_n1):
        for g in generate_basis(oriented_n1, 4, 6).basis:
            once = apply_d(g, oriented_n1)
            assert apply_to_combo(lambda x: apply_d(x, oriented_n1), once).is_zero()

    def test_contraction_raises_degree(self, oriented_n1):
        src = generate_basis(oriented_n1, 4, 6)
        _, dst = differential_d(src)
        assert dst.degree == src.degree + 1


class TestSplitting:
    """Vertex splitting on oriented graphs."""

    def test_split_terms_are_one_vertex_larger(self, double_edge_graph, oriented_n1):
        for g in apply_split(double_edge_graph, oriented_n1):
            assert (g.v, g.e) == (3, 3)

    def test_split_matrix_shape(self, oriented_n1):
        src = generate_basis(oriented_n1, 2, 2)
        matrix, dst = differential_split(src)
        assert matrix.shape == (len(dst), 1)
        assert (dst.v, dst.e) == (3, 3)
