"""
The map F from oriented graphs at n = 1 to ribbon graphs.

After an incoming leg is attached to each source and an outgoing leg to
each target, every vertex must have (in, out) = (2, 1) or (1, 2); otherwise
F vanishes. A (2, 1) vertex becomes the edge graph, its two vertices taking
the incoming edges and its boundary the outgoing one. A (1, 2) vertex becomes
the loop graph, its vertex taking the incoming edge and its two boundaries
the outgoing ones. Vertex x of the oriented graph becomes ribbon edge x
(flags 2x, 2x + 1). The pieces are then glued along the oriented edges, the
boundary of the tail grafted into the vertex of the head, one vertex at a
time in a topological order.
"""

from fractions import Fraction

import networkx as nx

from graphcx.complexes.differentials import apply_split
from graphcx.complexes.slices import ComplexSlice
from graphcx.core.canonical import LinearCombination
from graphcx.core.errors import FamilyError, MalformedGraphError
from graphcx.core.graph import FamilyTag, LabeledDiGraph, count_sources, count_targets
from graphcx.core.types import FamilyKind
from graphcx.linalg.sparse import SparseRationalMatrix
from graphcx.ribbon.complex import RibbonSlice, rgc_delta, rgc_delta1
from graphcx.ribbon.prop import graft_all
from graphcx.ribbon.ribbon import RibbonCombo, RibbonGraph

F_SOURCE_N = 1
BRACKET, COBRACKET = (2, 1), (1, 2)


def vertex_arities(g: LabeledDiGraph) -> list[tuple[int, int]]:
    """(in, out) of every vertex once sources and targets have their legs."""
    return [
        (g.in_degrees[x] + (g.in_degrees[x] == 0), g.out_degrees[x] + (g.out_degrees[x] == 0))
        for x in range(g.v)
    ]


def is_trivalent(g: LabeledDiGraph) -> bool:
    return g.v > 0 and all(a in (BRACKET, COBRACKET) for a in vertex_arities(g))


def topological_order(g: LabeledDiGraph) -> list[int]:
    dag = nx.DiGraph()
    dag.add_nodes_from(range(g.v))
    dag.add_edges_from(g.edges)
    return list(nx.lexicographical_topological_sort(dag))


def _check_order(g: LabeledDiGraph, order: list[int]) -> None:
    if sorted(order) != list(range(g.v)):
        raise MalformedGraphError(f"{order} is not an ordering of the {g.v} vertices")
    position = {x: i for i, x in enumerate(order)}
    for t, h in g.edges:
        if position[t] > position[h]:
            raise MalformedGraphError(f"{order} is not a topological order: edge ({t}, {h})")


def _pieces(g: LabeledDiGraph) -> tuple[RibbonGraph, dict[int, int], dict[int, int]]:
    """
    Disjoint union of the generator images.

    Returns the union and, per oriented edge, a flag of the vertex it enters
    (head side) and a flag of the boundary it leaves from (tail side).
    """
    sigma = list(range(2 * g.v))
    into: dict[int, int] = {}
    out_of: dict[int, int] = {}
    arities = vertex_arities(g)
    for x in range(g.v):
        a, b = 2 * x, 2 * x + 1
        in_edges = [i for i, (_, h) in enumerate(g.edges) if h == x]
        out_edges = [i for i, (t, _) in enumerate(g.edges) if t == x]
        if arities[x] == BRACKET:
            # edge graph: vertices {a}, {b}; one boundary (a b)
            for i, flag in zip(in_edges, (a, b), strict=False):
                into[i] = flag
            for i in out_edges:
                out_of[i] = a
        else:
            # loop graph: vertex (a b); boundaries (a), (b)
            sigma[a], sigma[b] = b, a
            for i in in_edges:
                into[i] = a
            for i, flag in zip(out_edges, (a, b), strict=False):
                out_of[i] = flag
    return RibbonGraph(tuple(sigma)), into, out_of


def F_map(g: LabeledDiGraph, order: list[int] | None = None) -> RibbonCombo:
    """
    F of an oriented graph at n = 1 as a combination of canonical ribbon graphs.

    Any topological order gives the same result; ``order`` picks one.

    Raises:
        MalformedGraphError: ``order`` is not a topological order of g.
    """
    if not is_trivalent(g):
        return RibbonCombo()
    if order is None:
        order = topological_order(g)
    else:
        _check_order(g, list(order))

    union, into, out_of = _pieces(g)
    layer = [union]
    for y in order:
        for i, (_, h) in enumerate(g.edges):
            if h != y:
                continue
            layer = [grafted for r in layer for grafted in graft_all(r, into[i], out_of[i])]

    out = RibbonCombo()
    for r in layer:
        out.add_ribbon(r)
    return out


def F_combo(combo: LinearCombination) -> RibbonCombo:
    out = RibbonCombo()
    for g, coeff in combo.items():
        out.extend(F_map(g), coeff)
    return out


def F_shape(g: LabeledDiGraph) -> tuple[int, int, int]:
    """(edges, vertices, boundaries) of every term of F(g)."""
    return g.v, count_sources(g), count_targets(g)


def f_matrix(src: ComplexSlice, dst: RibbonSlice) -> SparseRationalMatrix:
    """Matrix of F from an oriented slice at n = 1 into one ribbon slice; other shapes map to zero there."""
    if src.family.kind is not FamilyKind.ORIENTED or src.n != F_SOURCE_N:
        raise FamilyError(f"F is defined on oriented graphs at n = {F_SOURCE_N}, got {src.header()}")
    columns = []
    for g in src.basis:
        if F_shape(g) != (dst.k, dst.n, dst.m):
            columns.append({})
            continue
        columns.append(dst.coordinates(F_map(g)))
    return SparseRationalMatrix.from_columns(len(dst), columns)


# ─────────────────────────────────────────────────────────────────────────────
# Compatibility with the differentials
# ─────────────────────────────────────────────────────────────────────────────

def F_chain_sides(g: LabeledDiGraph, graded: bool = False) -> tuple[RibbonCombo, RibbonCombo]:
    """
    Both sides of the chain map identity at g: F applied to the vertex
    splitting of g, and delta + Delta1 applied to F(g). With ``graded`` the
    splitting keeps the number of targets and only delta is applied.
    """
    family = FamilyTag(FamilyKind.ORIENTED, F_SOURCE_N)
    lhs = F_combo(apply_split(g, family, keep_targets=graded))
    image = F_map(g)
    rhs = RibbonCombo()
    for r, coeff in image.items():
        rhs.extend(rgc_delta(r), coeff)
        if not graded:
            rhs.extend(rgc_delta1(r), coeff)
    return lhs, rhs


def compare_up_to_sign(lhs: LinearCombination, rhs: LinearCombination) -> int | None:
    """1 if equal, -1 if opposite, 0 if both vanish, None otherwise."""
    if lhs == rhs:
        return 0 if not lhs else 1
    if lhs == rhs.scaled(Fraction(-1)):
        return -1
    return None
