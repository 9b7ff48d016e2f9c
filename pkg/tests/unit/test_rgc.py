"""Test ribbon graph generation and the ribbon differentials."""

import pytest

from graphcx.core.errors import BudgetExceededError, GenerationError
from graphcx.linalg.homology import homology_dims
from graphcx.ribbon.complex import (
    _all_classes,
    assemble_ribbon,
    boundary_chords,
    brute_force_ribbon_classes,
    delta1_matrix,
    delta_matrix,
    insert_chord,
    insert_pendant,
    rgc_basis,
    rgc_delta,
    rgc_delta1,
    rgc_differential,
    ribbon_slice,
    slices_at_genus,
    vertex_splits,
)
from graphcx.ribbon.ribbon import RibbonCombo, canonicalize_ribbon, genus

pytestmark = pytest.mark.unit


def _apply_twice(op, r) -> RibbonCombo:
    out = RibbonCombo()
    for s, coeff in op(r).items():
        out.extend(op(s), coeff)
    return out


class TestLocalMoves:
    """Chords, pendants and vertex splits."""

    def test_pendant_on_edge(self, edge_ribbon):
        r = insert_pendant(edge_ribbon, 0)
        assert (r.k, r.n_vertices(), r.n_boundaries()) == (2, 3, 1)

    def test_chord_across_the_edge_boundary(self, edge_ribbon):
        r = insert_chord(edge_ribbon, 0, 1)
        assert (r.k, r.n_vertices(), r.n_boundaries()) == (2, 2, 2)
        assert genus(r) == 0

    def test_loop_chord(self, edge_ribbon):
        r = insert_chord(edge_ribbon, 0, 0)
        assert (r.n_vertices(), r.n_boundaries()) == (2, 2)

    def test_splits_keep_genus_and_add_a_vertex(self, loop_ribbon):
        splits = list(vertex_splits(loop_ribbon))
        assert splits
        for r in splits:
            assert r.n_vertices() == 2
            assert r.n_boundaries() == loop_ribbon.n_boundaries()
            assert genus(r) == 0

    def test_chords_add_a_boundary(self, edge_ribbon):
        for r in boundary_chords(edge_ribbon):
            assert r.n_boundaries() == 2
            assert r.n_vertices() == 2


class TestGeneration:
    """Connected ribbon graphs by edge count."""

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_growth_matches_brute_force(self, k):
        assert set(_all_classes(k)) == brute_force_ribbon_classes(k)

    def test_one_edge(self, edge_ribbon, loop_ribbon):
        basis = rgc_basis(1)
        assert len(basis) == 2
        assert rgc_basis(1, n=2) == [canonicalize_ribbon(edge_ribbon).graph]
        assert rgc_basis(1, n=1) == [canonicalize_ribbon(loop_ribbon).graph]

    def test_zero_classes_are_dropped(self):
        for r in rgc_basis(2):
            assert not canonicalize_ribbon(r).is_zero

    def test_genus_filter(self):
        assert all(genus(r) == 1 for r in rgc_basis(3, g=1))
        assert rgc_basis(2, g=1) == []

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            rgc_basis(7)

    def test_slices(self):
        assert [(sl.n, sl.m) for sl in slices_at_genus(0, 1)] == [(1, 2), (2, 1)]
        assert ribbon_slice(1, 2, 1).header() == {
            "family": "ribbon", "k": 1, "n": 2, "m": 1, "genus": 0, "size": 1
        }
        assert len(ribbon_slice(0, 1, 1)) == 0


class TestDifferential:
    """delta and Delta1 square to zero and anticommute."""

    @pytest.mark.parametrize("k", [1, 2])
    def test_squares(self, k):
        for r in rgc_basis(k):
            assert _apply_twice(rgc_delta, r).is_zero()
            assert _apply_twice(rgc_delta1, r).is_zero()
            assert _apply_twice(rgc_differential, r).is_zero()

    def test_matrix_shapes(self):
        src = ribbon_slice(1, 1, 2)
        matrix, dst = delta_matrix(src)
        assert (dst.k, dst.n, dst.m) == (2, 2, 2)
        assert matrix.shape == (len(dst), 1)
        matrix, dst = delta1_matrix(src)
        assert (dst.k, dst.n, dst.m) == (2, 1, 3)

    def test_assembled_window_is_a_complex(self):
        window = assemble_ribbon(0, (1, 3))
        window.validate()
        assert window.closed_below
        assert window.dims[1] == 2
        summary = homology_dims(window, exact=True)
        assert [r.degree for r in summary.records] == [1, 2, 3]

    def test_unknown_differential(self):
        with pytest.raises(GenerationError):
            assemble_ribbon(0, (1, 2), "boundary")
