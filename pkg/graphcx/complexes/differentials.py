"""
Edge contraction d, its source-preserving part d0, hair deletion h, and the
vertex splitting used on the dual side of oriented graphs.

Sign conventions. Contracting edge a = (t, h) merges h into t; the other
vertices keep their relative order and the remaining edges and hairs keep
theirs. The term carries (-1)^h when vertices are odd and (-1)^a when edges
are odd. Deleting hair i carries (-1)^(e+i) when edges are odd and
(-1)^(v+i) when vertices are odd, i.e. hairs are ordered after the other odd
objects.
"""

import itertools
from collections.abc import Callable

from graphcx.complexes.generation import generate_basis
from graphcx.complexes.slices import ComplexSlice
from graphcx.core.canonical import CanonicalTerm, LinearCombination, canonicalize
from graphcx.core.errors import FamilyError, MalformedGraphError
from graphcx.core.graph import FamilyTag, LabeledDiGraph, count_targets, is_admissible
from graphcx.core.types import FamilyKind
from graphcx.linalg.sparse import SparseRationalMatrix
from graphcx.utils.logger import logger


def d_destination(family: FamilyTag) -> FamilyTag:
    """Family receiving d: source counts are not preserved by contraction."""
    if family.kind in (FamilyKind.ORIENTED, FamilyKind.SOURCED):
        return family.with_s(None)
    return family


def _require_fixed_sources(family: FamilyTag) -> None:
    if family.kind not in (FamilyKind.ORIENTED, FamilyKind.SOURCED) or family.s is None:
        raise FamilyError(f"d0 needs an oriented or sourced family with fixed s, got {family}")


def _require_hairy(family: FamilyTag) -> None:
    if not family.hairy or not family.s:
        raise FamilyError(f"h needs a hairy family with s >= 1, got {family}")


# ─────────────────────────────────────────────────────────────────────────────
# Single terms
# ─────────────────────────────────────────────────────────────────────────────

def contract_edge(g: LabeledDiGraph, a: int, family: FamilyTag,
                  dst_family: FamilyTag | None = None) -> CanonicalTerm:
    """
    Canonical term of g with edge a contracted.

    Zero when a tadpole appears or the result is not admissible in
    ``dst_family`` (passing vertex, directed cycle, lost source), or when the
    result is a zero class.
    """
    if not 0 <= a < g.e:
        raise MalformedGraphError(f"edge index {a} out of range for a graph with {g.e} edges")
    rules = family.rules
    dst_family = dst_family or d_destination(family)
    t, h = g.edges[a]

    for i, (x, y) in enumerate(g.edges):
        if i != a and {x, y} == {t, h}:
            return CanonicalTerm.zero()

    vertex_map = [x if x < h else x - 1 for x in range(g.v)]
    vertex_map[h] = vertex_map[t]
    contracted = LabeledDiGraph(
        g.v - 1,
        tuple((vertex_map[x], vertex_map[y]) for i, (x, y) in enumerate(g.edges) if i != a),
        tuple(vertex_map[x] for x in g.hairs),
    )
    if not is_admissible(contracted, dst_family):
        return CanonicalTerm.zero()

    sign = (-1) ** h if rules.odd_vertices else (-1) ** a
    return canonicalize(contracted, rules).scaled(sign)


def delete_hair(g: LabeledDiGraph, i: int, family: FamilyTag) -> CanonicalTerm:
    """Canonical term of g with hair i removed; zero for the last hair or a vertex left 2-valent."""
    if not 0 <= i < g.s:
        raise MalformedGraphError(f"hair index {i} out of range for a graph with {g.s} hairs")
    if g.s == 1 or g.valence(g.hairs[i]) - 1 < 3:
        return CanonicalTerm.zero()
    rules = family.rules
    reduced = LabeledDiGraph(g.v, g.edges, g.hairs[:i] + g.hairs[i + 1:])
    sign = (-1) ** (g.e + i) if rules.odd_edges else (-1) ** (g.v + i)
    return canonicalize(reduced, rules).scaled(sign)


def split_vertex_terms(g: LabeledDiGraph, x: int, family: FamilyTag,
                       keep_targets: bool = False) -> LinearCombination:
    """
    All splittings of vertex x of an oriented graph.

    The new vertex gets the last label and a subset of x's edge ends; the new
    edge x -> new is appended last with coefficient +1. Only admissible
    results are kept; with ``keep_targets`` also only those with as many
    targets as g.
    """
    rules = family.rules
    dst_family = family.with_s(None) if family.kind is not FamilyKind.HAIRY else family
    u = g.v
    ends = [(i, 0) for i, (t, _) in enumerate(g.edges) if t == x]
    ends += [(i, 1) for i, (_, h) in enumerate(g.edges) if h == x]
    n_targets = count_targets(g)

    combo = LinearCombination()
    for r in range(len(ends) + 1):
        for moved in itertools.combinations(ends, r):
            edges = [list(edge) for edge in g.edges]
            for i, side in moved:
                edges[i][side] = u
            edges.append([x, u])
            split = LabeledDiGraph(g.v + 1, tuple(tuple(edge) for edge in edges))
            if not is_admissible(split, dst_family):
                continue
            if keep_targets and count_targets(split) != n_targets:
                continue
            combo.add_term(canonicalize(split, rules))
    return combo


# ─────────────────────────────────────────────────────────────────────────────
# Operators on graphs
# ─────────────────────────────────────────────────────────────────────────────

def apply_d(g: LabeledDiGraph, family: FamilyTag) -> LinearCombination:
    dst_family = d_destination(family)
    combo = LinearCombination()
    for a in range(g.e):
        combo.add_term(contract_edge(g, a, family, dst_family))
    return combo


def apply_d0(g: LabeledDiGraph, family: FamilyTag) -> LinearCombination:
    _require_fixed_sources(family)
    combo = LinearCombination()
    for a in range(g.e):
        combo.add_term(contract_edge(g, a, family, family))
    return combo


def apply_h(g: LabeledDiGraph, family: FamilyTag) -> LinearCombination:
    _require_hairy(family)
    combo = LinearCombination()
    for i in range(g.s):
        combo.add_term(delete_hair(g, i, family))
    return combo


def apply_split(g: LabeledDiGraph, family: FamilyTag, keep_targets: bool = False) -> LinearCombination:
    combo = LinearCombination()
    for x in range(g.v):
        combo.extend(split_vertex_terms(g, x, family, keep_targets))
    return combo


def apply_to_combo(op: Callable[[LabeledDiGraph], LinearCombination],
                   combo: LinearCombination) -> LinearCombination:
    """Extend a graph operator linearly."""
    out = LinearCombination()
    for g, coeff in combo.items():
        out.extend(op(g), coeff)
    return out


# ─────────────────────────────────────────────────────────────────────────────
# Matrices between slices
# ─────────────────────────────────────────────────────────────────────────────

def operator_matrix(src: ComplexSlice, dst: ComplexSlice,
                    op: Callable[[LabeledDiGraph], LinearCombination]) -> SparseRationalMatrix:
    """Column j is the expansion of op(src.basis[j]) in dst's basis."""
    columns = [dst.coordinates(op(g)) for g in src.basis]
    return SparseRationalMatrix.from_columns(len(dst), columns)


SliceKey = tuple[FamilyTag, int, int]
BasisSource = Callable[[FamilyTag, int, int], ComplexSlice]

SLICE_OPERATORS = ("d", "d0", "h")


def destination(name: str, family: FamilyTag, v: int, e: int) -> SliceKey:
    """Slice receiving the named operator out of (family, v, e)."""
    if name == "d":
        return d_destination(family), v - 1, e - 1
    if name == "d0":
        _require_fixed_sources(family)
        return family, v - 1, e - 1
    if name == "h":
        _require_hairy(family)
        return family.with_s(family.s - 1), v, e
    raise FamilyError(f"unknown operator {name!r}, expected one of {SLICE_OPERATORS}")


def graph_operator(name: str, family: FamilyTag) -> Callable[[LabeledDiGraph], LinearCombination]:
    apply = {"d": apply_d, "d0": apply_d0, "h": apply_h}[name]
    return lambda g: apply(g, family)


def differential(name: str, src: ComplexSlice,
                 basis_of: BasisSource = generate_basis) -> tuple[SparseRationalMatrix, ComplexSlice]:
    """Matrix of the named operator out of src, with its target slice from ``basis_of``."""
    dst = basis_of(*destination(name, src.family, src.v, src.e))
    matrix = operator_matrix(src, dst, graph_operator(name, src.family))
    logger.debug(f"[Diff] {name} {src.header()} -> {len(dst)} nnz={matrix.nnz}")
    return matrix, dst


def differential_d(src: ComplexSlice) -> tuple[SparseRationalMatrix, ComplexSlice]:
    return differential("d", src)


def differential_d0(src: ComplexSlice) -> tuple[SparseRationalMatrix, ComplexSlice]:
    return differential("d0", src)


def differential_h(src: ComplexSlice) -> tuple[SparseRationalMatrix, ComplexSlice]:
    return differential("h", src)


def differential_split(src: ComplexSlice, keep_targets: bool = False) -> tuple[SparseRationalMatrix, ComplexSlice]:
    """Vertex splitting on an oriented slice, into the (v+1, e+1) slice with any source count."""
    if src.family.kind is not FamilyKind.ORIENTED:
        raise FamilyError(f"vertex splitting is implemented for oriented graphs, got {src.family}")
    dst = generate_basis(src.family.with_s(None), src.v + 1, src.e + 1)
    return operator_matrix(src, dst, lambda g: apply_split(g, src.family, keep_targets)), dst
