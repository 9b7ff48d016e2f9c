"""
Grafting of ribbon graphs: a boundary of one graph is plugged into a vertex
of another, its corners receiving the flags of the vertex in consecutive
blocks that respect both cyclic orders.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from graphcx.core.canonical import LinearCombination
from graphcx.core.errors import RibbonError
from graphcx.ribbon.ribbon import RibbonGraph, canonicalize_ribbon, disjoint_union, iota


@dataclass(frozen=True)
class OrderedPartition:
    """``blocks[i]`` is the ordered block inserted into the corner after ``boundary[i]``."""
    boundary: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]

    def block_of(self, corner: int) -> tuple[int, ...]:
        return self.blocks[self.boundary.index(corner)]


def _weak_compositions(total: int, parts: int):
    """Tuples of ``parts`` nonnegative integers summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        sizes = []
        for bar in bars:
            sizes.append(bar - prev - 1)
            prev = bar
        sizes.append(total + parts - 1 - prev - 1)
        yield tuple(sizes)


def ordered_partitions(boundary: tuple[int, ...], vertex: tuple[int, ...]) -> list[OrderedPartition]:
    """
    All ordered partitions of the vertex cycle over the corners of the boundary.

    Reading the blocks along the boundary must give the vertex's cyclic order,
    so a partition is a rotation of the vertex cycle cut into |boundary|
    consecutive (possibly empty) pieces: r * C(r + q - 1, q - 1) of them for
    r flags at the vertex and q corners.
    """
    if set(boundary) & set(vertex):
        raise RibbonError("boundary and vertex must be disjoint")
    q, r = len(boundary), len(vertex)
    if r == 0:
        return [OrderedPartition(tuple(boundary), tuple(() for _ in boundary))]
    out = []
    for start in range(r):
        rotated = vertex[start:] + vertex[:start]
        for sizes in _weak_compositions(r, q):
            blocks, pos = [], 0
            for size in sizes:
                blocks.append(tuple(rotated[pos:pos + size]))
                pos += size
            out.append(OrderedPartition(tuple(boundary), tuple(blocks)))
    return out


def count_ordered_partitions(q: int, r: int) -> int:
    return 1 if r == 0 else r * comb(r + q - 1, q - 1)


def brute_force_ordered_partitions(boundary: tuple[int, ...], vertex: tuple[int, ...]) -> set[tuple]:
    """Oracle: every map vertex -> corners with every starting point, kept when the blocks read back the cycle."""
    q, r = len(boundary), len(vertex)
    found = set()
    if r == 0:
        return {tuple(() for _ in boundary)}
    for assignment in itertools.product(range(q), repeat=r):
        for start in range(r):
            rotated = vertex[start:] + vertex[:start]
            blocks = [[] for _ in range(q)]
            for f in rotated:
                blocks[assignment[vertex.index(f)]].append(f)
            concatenated = [f for block in blocks for f in block]
            if concatenated == list(rotated):
                found.add(tuple(tuple(block) for block in blocks))
    return found


def graft(r: RibbonGraph, vertex: tuple[int, ...], boundary: tuple[int, ...],
          partition: OrderedPartition) -> RibbonGraph:
    """
    Plug ``vertex`` into ``boundary`` along ``partition``.

    Flags outside both keep their successor. A corner j whose block is
    nonempty now continues into the block, and the block's last flag continues
    into the old successor of j. Labels are carried by their representative
    flags; the labels of the consumed vertex and boundary are dropped.
    """
    if set(vertex) & set(boundary):
        raise RibbonError("cannot graft a vertex into a boundary it touches")
    sigma = list(r.sigma)
    for j, block in zip(partition.boundary, partition.blocks, strict=True):
        if not block:
            continue
        sigma[j] = block[0]
        for a, b in zip(block, block[1:], strict=False):
            sigma[a] = b
        sigma[block[-1]] = r.sigma[j]

    if not r.labeled:
        return RibbonGraph(tuple(sigma))
    vset, bset = set(vertex), set(boundary)
    vlabels = tuple(f for f in r.vlabels if f not in vset)
    blabels = tuple(f for f in r.blabels if f not in bset)
    return RibbonGraph(tuple(sigma), vlabels, blabels)


def corner_cycle(r: RibbonGraph, f: int) -> tuple[int, ...]:
    """
    Corners of the boundary through ``f`` in gluing order.

    This walks the boundary against sigma^-1 o iota, so that blocks read in
    this order reconnect every boundary through the grafted vertex with
    itself and exactly one boundary (the consumed one) disappears.
    """
    out = [f]
    g = iota(r.sigma[f])
    while g != f:
        out.append(g)
        g = iota(r.sigma[g])
    return tuple(out)


def graft_all(r: RibbonGraph, vertex_rep: int, boundary_rep: int) -> list[RibbonGraph]:
    """Every grafting of the vertex through ``vertex_rep`` into the boundary through ``boundary_rep``."""
    vertex = r.vertex_of(vertex_rep)
    corners = corner_cycle(r, boundary_rep)
    return [graft(r, vertex, corners, p) for p in ordered_partitions(corners, vertex)]


def _combo_key(r: RibbonGraph, coeff: Fraction) -> tuple[RibbonGraph | None, Fraction]:
    if not r.is_connected():
        return r, coeff
    term = canonicalize_ribbon(r)
    if term.is_zero:
        return None, Fraction(0)
    return term.graph, coeff * term.coeff


def prop_compose(first: LinearCombination, second: LinearCombination, k: int) -> LinearCombination:
    """
    Compose labeled ribbon graphs: the last k boundaries of each graph of
    ``first`` go into the first k vertices of each graph of ``second``.

    The result has the vertices of the first graph followed by the remaining
    vertices of the second, and the remaining boundaries of the first
    followed by the boundaries of the second; its edges are those of the
    first graph followed by those of the second. Connected results are
    canonical, disconnected ones (k = 0) are kept as they are.
    """
    out = LinearCombination()
    for g1, c1 in first.items():
        for g2, c2 in second.items():
            if not (g1.labeled and g2.labeled):
                raise RibbonError("composition needs labeled ribbon graphs")
            m1, n2 = len(g1.blabels), len(g2.vlabels)
            if not 0 <= k <= min(m1, n2):
                raise RibbonError(f"cannot compose {k} boundaries of {m1} into {n2} vertices")
            union = disjoint_union(g1, g2)
            shift = len(g1.sigma)
            pairs = [(g1.blabels[m1 - k + i], g2.vlabels[i] + shift) for i in range(k)]

            layer = [union]
            for boundary_rep, vertex_rep in pairs:
                layer = [grafted for r in layer for grafted in graft_all(r, vertex_rep, boundary_rep)]

            for r in layer:
                ordered = RibbonGraph(
                    r.sigma,
                    g1.vlabels + tuple(f + shift for f in g2.vlabels[k:]),
                    g1.blabels[: m1 - k] + tuple(f + shift for f in g2.blabels),
                )
                key, coeff = _combo_key(ordered, c1 * c2)
                if key is not None:
                    out.add(key, coeff)
    return out
