"""Test the forest map, its transpose and the chain map identities on small graphs."""

import pytest

from graphcx.complexes.differentials import apply_d, apply_h
from graphcx.complexes.generation import generate_basis
from graphcx.core.canonical import canonicalize
from graphcx.core.errors import GenerationError, MalformedGraphError
from graphcx.core.graph import (
    FamilyTag,
    LabeledDiGraph,
    count_sources,
    is_admissible,
    slice_degree,
)
from graphcx.core.types import FamilyKind
from graphcx.forest.forests import Forest, spanning_forests
from graphcx.forest.phi import (
    ARROW_PART,
    CYCLE_PART,
    DOUBLE_PART,
    G_map,
    chain_map_defect,
    contraction_parts,
    fixed_source_defect,
    forest_model,
    g_matrix,
    phi,
    phi_combo,
    phi_expanded,
    phi_matrix,
    phi_target_slice,
    target_family,
)
from graphcx.linalg.sparse import SparseRationalMatrix
from graphcx.pipeline.verify import pairing_mismatch, transpose_consistency

pytestmark = pytest.mark.unit

K4_EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


@pytest.fixture
def k4_one_hair():
    return LabeledDiGraph(4, K4_EDGES, (0,))


@pytest.fixture
def triangle_slice():
    return generate_basis(FamilyTag(FamilyKind.HAIRY, 0, 3), 3, 3)


class TestForestModel:
    """The labeled oriented graph built from a hairy graph and a forest."""

    def test_fully_haired_triangle_gives_the_hexagon(self, hairy_triangle):
        model = forest_model(hairy_triangle, Forest(frozenset()), 0)
        assert (model.graph.v, model.graph.e) == (6, 6)
        assert count_sources(model.graph) == 3
        assert model.sign == -1
        assert {part for part, _ in model.origins} == {DOUBLE_PART}

    @pytest.mark.parametrize("n", [0, 1])
    def test_model_shape(self, k4_one_hair, n):
        for forest in spanning_forests(k4_one_hair):
            model = forest_model(k4_one_hair, forest, n)
            assert (model.graph.v, model.graph.e) == (7, 9)
            assert len(model.origins) == 9
            assert sum(1 for part, _ in model.origins if part == ARROW_PART) == 3
            assert is_admissible(model.graph, target_family(n, 1))

    def test_not_a_forest(self, k4_one_hair):
        with pytest.raises(MalformedGraphError):
            forest_model(k4_one_hair, Forest(frozenset({0, 1})), 0)
        with pytest.raises(MalformedGraphError):
            forest_model(k4_one_hair, Forest(frozenset({0, 1, 3})), 0)


class TestPhi:
    """Phi on graphs and slices."""

    @pytest.mark.parametrize("n", [0, 1])
    def test_terms_live_in_the_target_slice(self, k4_one_hair, n):
        family = target_family(n, 1)
        for o in phi_expanded(k4_one_hair, n):
            assert (o.v, o.e) == (7, 9)
            assert is_admissible(o, family)

    def test_degree_goes_up_by_one(self):
        for n in range(3):
            for v, e, s in [(4, 6, 1), (3, 3, 3), (6, 9, 2)]:
                hairy = slice_degree(FamilyTag(FamilyKind.HAIRY, n, s), v, e, s)
                oriented = slice_degree(target_family(n, s), e + s, 2 * e - v + s)
                assert oriented == hairy + 1

    def test_triangle_maps_to_plus_or_minus_the_hexagon(self, triangle_slice):
        assert len(triangle_slice) == 1
        dst = phi_target_slice(triangle_slice)
        assert (dst.v, dst.e, dst.family.s) == (6, 6, 3)
        matrix = phi_matrix(triangle_slice, dst)
        assert matrix.nnz == 1
        assert abs(matrix.entries[0][2]) == 1

    def test_skeleton_form(self, hairy_triangle):
        result = phi(hairy_triangle, 0)
        assert len(result) == 1
        (sk,) = result
        assert (sk.v, sk.n_crossed) == (3, 3)

    def test_phi_is_linear(self, k4_one_hair):
        doubled = phi_combo({k4_one_hair: 2}, 0)
        assert doubled == phi_expanded(k4_one_hair, 0).scaled(2)

    def test_wrong_target_rejected(self, triangle_slice):
        wrong = generate_basis(target_family(0, 3), 5, 5)
        with pytest.raises(GenerationError):
            phi_matrix(triangle_slice, wrong)
        with pytest.raises(GenerationError):
            phi_matrix(triangle_slice, triangle_slice)


class TestTranspose:
    """G is the transpose of Phi."""

    def test_g_matrix_is_the_transpose(self, triangle_slice):
        dst = phi_target_slice(triangle_slice)
        assert g_matrix(dst, triangle_slice) == phi_matrix(triangle_slice, dst).T

    def test_g_vanishes_when_the_skeleton_has_a_tadpole(self, double_edge_graph):
        assert G_map(double_edge_graph, 1).is_zero

    def test_g_does_not_go_through_phi(self, mocker, hairy_triangle):
        mocker.patch("graphcx.forest.phi.phi_expanded", side_effect=AssertionError("Phi summed"))
        mocker.patch("graphcx.forest.phi.spanning_forests", side_effect=AssertionError("forests enumerated"))
        image = forest_model(hairy_triangle, Forest(frozenset()), 0).graph
        term = G_map(image, 1)
        assert not term.is_zero
        assert term.graph == canonicalize(hairy_triangle, FamilyTag(FamilyKind.HAIRY, 0, 3).rules).graph

    def test_signs_agree_with_phi_on_k4(self, k4_one_hair):
        k4 = canonicalize(k4_one_hair, FamilyTag(FamilyKind.HAIRY, 0, 1).rules)
        assert not k4.is_zero
        image = phi_expanded(k4.graph, 0)
        assert len(image) > 0
        for o, coeff in image.items():
            term = G_map(o, 1)
            assert term.graph == k4.graph
            assert (term.coeff > 0) == (coeff > 0)
            assert abs(coeff) % abs(term.coeff) == 0

    def test_k4_slice_pairs_with_its_image(self):
        src = generate_basis(FamilyTag(FamilyKind.HAIRY, 0, 1), 4, 6)
        dst = phi_target_slice(src)
        assert pairing_mismatch(g_matrix(dst, src), phi_matrix(src, dst).T) is None

    def test_wrong_count_of_bivalent_targets_gives_zero(self):
        # one bivalent target where e - v + s = 2
        o = LabeledDiGraph(4, ((0, 1), (0, 2), (1, 2), (1, 3), (2, 3)))
        assert G_map(o, 1).is_zero

    @pytest.mark.parametrize("v,e", [(3, 3), (4, 4), (4, 5), (5, 6)])
    def test_g_nonzero_exactly_when_the_count_holds(self, v, e):
        for o in generate_basis(FamilyTag(FamilyKind.ORIENTED, 1), v, e).basis:
            assert transpose_consistency(o, 1) is None, o.to_json()


class TestPairingMismatch:
    """Entry-wise comparison of G with the transpose of Phi."""

    def test_equal_matrices_match(self):
        m = SparseRationalMatrix.from_dense([[1, 0], [0, -1]])
        assert pairing_mismatch(m, m) is None

    def test_orbit_multiples_match(self):
        g = SparseRationalMatrix.from_dense([[1, 0], [0, -1]])
        phi_t = SparseRationalMatrix.from_dense([[3, 0], [0, -2]])
        assert pairing_mismatch(g, phi_t) is None

    def test_flipped_sign_is_reported(self):
        g = SparseRationalMatrix.from_dense([[1, 0], [0, -1]])
        phi_t = SparseRationalMatrix.from_dense([[1, 0], [0, 1]])
        assert pairing_mismatch(g, phi_t) == (1, 1)

    def test_support_difference_is_reported(self):
        g = SparseRationalMatrix.from_dense([[1, 0], [0, 0]])
        phi_t = SparseRationalMatrix.from_dense([[1, 2], [0, 0]])
        assert pairing_mismatch(g, phi_t) == (0, 1)
        assert pairing_mismatch(phi_t, g) == (0, 1)

    def test_shape_difference_is_reported(self):
        assert pairing_mismatch(SparseRationalMatrix.zeros(1, 2), SparseRationalMatrix.zeros(2, 1)) == (-1, -1)


class TestChainMapIdentities:
    """Phi intertwines d + h with d, and d with d0."""

    @pytest.mark.parametrize("n", [0, 1])
    def test_chain_map_on_k4(self, k4_one_hair, n):
        assert chain_map_defect(k4_one_hair, n).is_zero()

    @pytest.mark.parametrize("n", [0, 1])
    def test_fixed_source_chain_map_on_k4(self, k4_one_hair, n):
        assert fixed_source_defect(k4_one_hair, n).is_zero()

    @pytest.mark.parametrize("n", [0, 1])
    def test_cycle_part_vanishes(self, k4_one_hair, n):
        assert contraction_parts(k4_one_hair, n)[CYCLE_PART].is_zero()

    @pytest.mark.parametrize("n", [0, 1])
    def test_arrow_part_is_phi_of_d(self, k4_one_hair, n):
        hairy = FamilyTag(FamilyKind.HAIRY, n, 1)
        parts = contraction_parts(k4_one_hair, n)
        assert parts[ARROW_PART] == phi_combo(apply_d(k4_one_hair, hairy), n)
        assert parts[DOUBLE_PART] == phi_combo(apply_h(k4_one_hair, hairy), n)

    @pytest.mark.slow
    def test_chain_map_on_hairy_basis(self):
        for n in (0, 1):
            for g in generate_basis(FamilyTag(FamilyKind.HAIRY, n, 2), 4, 5).basis:
                assert chain_map_defect(g, n).is_zero()
