"""
Spanning forests of hairy graphs and the two neighbouring forest families.

A spanning forest contains every vertex, has no cycle (parallel edges count
as a cycle) and each of its components carries exactly one hair. Equivalently
it is a spanning tree of the graph in which all hair vertices are identified,
which is how it is enumerated here.
"""

from dataclasses import dataclass
from itertools import combinations

import networkx as nx

from graphcx.core.graph import LabeledDiGraph


@dataclass(frozen=True)
class Forest:
    edges: frozenset[int]

    def to_list(self) -> list[int]:
        return sorted(self.edges)


@dataclass(frozen=True)
class DoubleHairForest:
    """v - s + 1 edges, acyclic, one component with two hairs (j, k) joined by ``path``."""
    edges: frozenset[int]
    hairs: tuple[int, int]
    path: frozenset[int]


@dataclass(frozen=True)
class CycledForest:
    """v - s + 1 edges, one component with a single cycle, every component with one hair."""
    edges: frozenset[int]
    cycle: frozenset[int]


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[ry] = rx
        return True

    def copy(self) -> "_UnionFind":
        clone = _UnionFind(0)
        clone.parent = list(self.parent)
        return clone


def _has_distinct_hairs(g: LabeledDiGraph) -> bool:
    return g.s >= 1 and len(set(g.hairs)) == g.s


def spanning_forests(g: LabeledDiGraph) -> list[Forest]:
    """All spanning forests of g, in lexicographic order of their edge sets."""
    if not _has_distinct_hairs(g):
        return []
    # vertex g.v stands for all hair vertices glued together
    root = g.v
    glue = [root if x in set(g.hairs) else x for x in range(g.v)]
    needed = g.v - g.s
    forests: list[Forest] = []

    def rec(i: int, uf: _UnionFind, chosen: list[int]):
        if len(chosen) == needed:
            forests.append(Forest(frozenset(chosen)))
            return
        if g.e - i < needed - len(chosen):
            return
        t, h = g.edges[i]
        a, b = glue[t], glue[h]
        if uf.find(a) != uf.find(b):
            with_edge = uf.copy()
            with_edge.union(a, b)
            rec(i + 1, with_edge, chosen + [i])
        rec(i + 1, uf, chosen)

    rec(0, _UnionFind(g.v + 1), [])
    return sorted(forests, key=Forest.to_list)


def _subgraph(g: LabeledDiGraph, edges) -> nx.MultiGraph:
    sub = nx.MultiGraph()
    sub.add_nodes_from(range(g.v))
    for i in edges:
        t, h = g.edges[i]
        sub.add_edge(t, h, key=i)
    return sub


def _hairs_per_component(g: LabeledDiGraph, sub: nx.MultiGraph) -> list[tuple[set[int], list[int]]]:
    out = []
    for comp in nx.connected_components(sub):
        out.append((comp, [j for j, x in enumerate(g.hairs) if x in comp]))
    return out


def _tree_path(g: LabeledDiGraph, sub: nx.MultiGraph, x: int, y: int) -> frozenset[int]:
    nodes = nx.shortest_path(sub, x, y)
    path = set()
    for p, q in zip(nodes, nodes[1:], strict=False):
        path.add(next(iter(sub.get_edge_data(p, q))))
    return frozenset(path)


def _cycle_of(g: LabeledDiGraph, edges: frozenset[int]) -> frozenset[int]:
    """Edges of the unique cycle in a unicyclic edge set: strip leaves until none remain."""
    remaining = set(edges)
    while True:
        degree: dict[int, int] = {}
        for i in remaining:
            for x in g.edges[i]:
                degree[x] = degree.get(x, 0) + 1
        leaves = {i for i in remaining if any(degree[x] == 1 for x in g.edges[i])}
        if not leaves:
            return frozenset(remaining)
        remaining -= leaves


def cycle_edges(g: LabeledDiGraph, forest: Forest) -> list[int]:
    """Edges outside the forest closing a cycle inside one component."""
    sub = _subgraph(g, forest.edges)
    comp_of = {x: idx for idx, comp in enumerate(nx.connected_components(sub)) for x in comp}
    return [i for i in range(g.e) if i not in forest.edges and comp_of[g.edges[i][0]] == comp_of[g.edges[i][1]]]


def double_edges(g: LabeledDiGraph, forest: Forest) -> list[int]:
    """Edges outside the forest joining two different components."""
    sub = _subgraph(g, forest.edges)
    comp_of = {x: idx for idx, comp in enumerate(nx.connected_components(sub)) for x in comp}
    return [i for i in range(g.e) if i not in forest.edges and comp_of[g.edges[i][0]] != comp_of[g.edges[i][1]]]


def double_hair_forests(g: LabeledDiGraph) -> list[DoubleHairForest]:
    """Forests obtained by adding to a spanning forest an edge between two components."""
    found: dict[frozenset[int], DoubleHairForest] = {}
    for forest in spanning_forests(g):
        for a in double_edges(g, forest):
            edges = forest.edges | {a}
            if edges in found:
                continue
            sub = _subgraph(g, edges)
            for _, hairs in _hairs_per_component(g, sub):
                if len(hairs) == 2:
                    j, k = hairs
                    path = _tree_path(g, sub, g.hairs[j], g.hairs[k])
                    found[edges] = DoubleHairForest(edges, (j, k), path)
    return sorted(found.values(), key=lambda f: sorted(f.edges))


def cycled_forests(g: LabeledDiGraph) -> list[CycledForest]:
    """Forests obtained by adding to a spanning forest an edge inside one component."""
    found: dict[frozenset[int], CycledForest] = {}
    for forest in spanning_forests(g):
        for a in cycle_edges(g, forest):
            edges = forest.edges | {a}
            if edges not in found:
                found[edges] = CycledForest(edges, _cycle_of(g, edges))
    return sorted(found.values(), key=lambda f: sorted(f.edges))


# ─────────────────────────────────────────────────────────────────────────────
# Subset oracles
# ─────────────────────────────────────────────────────────────────────────────

def _edge_subsets(g: LabeledDiGraph, size: int):
    if size < 0:
        return
    yield from (frozenset(c) for c in combinations(range(g.e), size))


def _is_forest(g: LabeledDiGraph, sub: nx.MultiGraph, n_edges: int) -> bool:
    return n_edges == g.v - nx.number_connected_components(sub)


def brute_force_spanning_forests(g: LabeledDiGraph) -> list[Forest]:
    out = []
    for edges in _edge_subsets(g, g.v - g.s):
        sub = _subgraph(g, edges)
        if not _is_forest(g, sub, len(edges)):
            continue
        if all(len(hairs) == 1 for _, hairs in _hairs_per_component(g, sub)):
            out.append(Forest(edges))
    return sorted(out, key=Forest.to_list)


def brute_force_double_hair_forests(g: LabeledDiGraph) -> list[frozenset[int]]:
    out = []
    for edges in _edge_subsets(g, g.v - g.s + 1):
        sub = _subgraph(g, edges)
        if not _is_forest(g, sub, len(edges)):
            continue
        counts = sorted(len(hairs) for _, hairs in _hairs_per_component(g, sub))
        if counts and counts[-1] == 2 and all(c == 1 for c in counts[:-1]):
            out.append(edges)
    return sorted(out, key=sorted)


def brute_force_cycled_forests(g: LabeledDiGraph) -> list[frozenset[int]]:
    out = []
    for edges in _edge_subsets(g, g.v - g.s + 1):
        sub = _subgraph(g, edges)
        # exactly one independent cycle overall
        if len(edges) != g.v - nx.number_connected_components(sub) + 1:
            continue
        if all(len(hairs) == 1 for _, hairs in _hairs_per_component(g, sub)):
            out.append(edges)
    return sorted(out, key=sorted)
