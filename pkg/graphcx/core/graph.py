"""
Labeled directed multigraphs with hairs, graph families and their parity rules.

A graph has vertices 0..v-1, an ordered tuple of (tail, head) edges and an
ordered tuple of hair positions (hair i sits on vertex hairs[i]). The order of
edges and hairs is part of the data: it is what the orientation signs of the
complexes are measured against.
"""

import json
from dataclasses import dataclass, replace
from functools import cached_property

import networkx as nx

from graphcx.core.errors import FamilyError, MalformedGraphError
from graphcx.core.types import FamilyKind, Parity


@dataclass(frozen=True)
class LabeledDiGraph:
    v: int
    edges: tuple[tuple[int, int], ...] = ()
    hairs: tuple[int, ...] = ()

    def __post_init__(self):
        edges = tuple((int(t), int(h)) for t, h in self.edges)
        hairs = tuple(int(x) for x in self.hairs)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "hairs", hairs)
        if self.v < 1:
            raise MalformedGraphError(f"graph needs at least one vertex, got v={self.v}")
        for t, h in edges:
            if t == h:
                raise MalformedGraphError(f"tadpole at vertex {t}")
            if not (0 <= t < self.v and 0 <= h < self.v):
                raise MalformedGraphError(f"edge ({t}, {h}) out of range for v={self.v}")
        for x in hairs:
            if not 0 <= x < self.v:
                raise MalformedGraphError(f"hair on vertex {x} out of range for v={self.v}")

    @property
    def e(self) -> int:
        return len(self.edges)

    @property
    def s(self) -> int:
        return len(self.hairs)

    @cached_property
    def in_degrees(self) -> tuple[int, ...]:
        deg = [0] * self.v
        for _, h in self.edges:
            deg[h] += 1
        return tuple(deg)

    @cached_property
    def out_degrees(self) -> tuple[int, ...]:
        deg = [0] * self.v
        for t, _ in self.edges:
            deg[t] += 1
        return tuple(deg)

    @cached_property
    def hair_counts(self) -> tuple[int, ...]:
        counts = [0] * self.v
        for x in self.hairs:
            counts[x] += 1
        return tuple(counts)

    def valence(self, x: int) -> int:
        """Number of edge ends plus hairs at vertex x."""
        return self.in_degrees[x] + self.out_degrees[x] + self.hair_counts[x]

    def to_networkx(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(range(self.v))
        for i, (t, h) in enumerate(self.edges):
            graph.add_edge(t, h, key=i)
        return graph

    def to_dict(self) -> dict:
        return {"v": self.v, "edges": [list(e) for e in self.edges], "hairs": list(self.hairs)}

    def to_json(self) -> str:
        """Canonical JSON (the cache key when the graph is in canonical labeling)."""
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "LabeledDiGraph":
        try:
            return cls(v=data["v"], edges=tuple(tuple(e) for e in data.get("edges", [])),
                       hairs=tuple(data.get("hairs", [])))
        except (KeyError, TypeError, ValueError) as e:
            raise MalformedGraphError(f"cannot read graph from {data!r}: {e}") from e

    @classmethod
    def from_json(cls, text: str) -> "LabeledDiGraph":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise MalformedGraphError(f"invalid graph JSON: {e}") from e
        return cls.from_dict(data)

    def relabeled(self, vertex_map: list[int], edge_order: list[int] | None = None,
                  hair_order: list[int] | None = None) -> "LabeledDiGraph":
        """Apply a vertex relabeling; ``edge_order[i]`` is the old index of the new i-th edge."""
        edge_order = edge_order if edge_order is not None else list(range(self.e))
        hair_order = hair_order if hair_order is not None else list(range(self.s))
        edges = tuple((vertex_map[self.edges[i][0]], vertex_map[self.edges[i][1]]) for i in edge_order)
        hairs = tuple(vertex_map[self.hairs[i]] for i in hair_order)
        return LabeledDiGraph(self.v, edges, hairs)


@dataclass(frozen=True)
class ParityRules:
    """
    Which objects of a graph are odd for a given degree parameter n.

    Non-hairy: odd n makes vertices odd, even n makes edges odd.
    Hairy: hairs are always odd; additionally edges (even n) or vertices
    together with an edge-reversal sign (odd n).
    """

    n: int
    hairy: bool = False

    @property
    def n_parity(self) -> Parity:
        return Parity.of(self.n)

    @property
    def odd_vertices(self) -> bool:
        return self.n_parity is Parity.ODD

    @property
    def odd_edges(self) -> bool:
        return self.n_parity is Parity.EVEN

    @property
    def odd_hairs(self) -> bool:
        return self.hairy

    @property
    def flip_sign(self) -> bool:
        """Reversing a hairy edge costs a sign."""
        return self.hairy and self.n_parity is Parity.ODD


@dataclass(frozen=True)
class FamilyTag:
    """
    A graph family at degree parameter n.

    For ORIENTED and SOURCED, ``s`` optionally pins the number of sources
    (None means any positive number). For HAIRY, ``s`` is the hair count.
    """

    kind: FamilyKind
    n: int
    s: int | None = None

    def __post_init__(self):
        if self.kind is FamilyKind.HAIRY and self.s is None:
            raise FamilyError("hairy family needs a hair count s")
        if self.s is None or self.kind is FamilyKind.DIRECTED:
            return
        # s = 0 is allowed for hairy slices only, as the target of h on one-hair graphs
        if self.s < (0 if self.hairy else 1):
            raise FamilyError(f"{self.kind.value} family cannot have s={self.s}")

    @property
    def hairy(self) -> bool:
        return self.kind is FamilyKind.HAIRY

    @property
    def rules(self) -> ParityRules:
        return ParityRules(n=self.n, hairy=self.hairy)

    def with_s(self, s: int | None) -> "FamilyTag":
        return replace(self, s=s)

    @property
    def label(self) -> str:
        return self.kind.value


# ─────────────────────────────────────────────────────────────────────────────
# Structural predicates
# ─────────────────────────────────────────────────────────────────────────────

def is_connected(g: LabeledDiGraph) -> bool:
    return nx.is_weakly_connected(g.to_networkx())


def is_acyclic(g: LabeledDiGraph) -> bool:
    return nx.is_directed_acyclic_graph(g.to_networkx())


def count_sources(g: LabeledDiGraph) -> int:
    return sum(1 for x in range(g.v) if g.in_degrees[x] == 0)


def count_targets(g: LabeledDiGraph) -> int:
    return sum(1 for x in range(g.v) if g.out_degrees[x] == 0)


def sources(g: LabeledDiGraph) -> list[int]:
    return [x for x in range(g.v) if g.in_degrees[x] == 0]


def has_passing_vertex(g: LabeledDiGraph) -> bool:
    """A 2-valent vertex with one incoming and one outgoing edge (hairs excluded)."""
    return any(
        g.in_degrees[x] == 1 and g.out_degrees[x] == 1 and g.hair_counts[x] == 0
        for x in range(g.v)
    )


def invert(g: LabeledDiGraph) -> LabeledDiGraph:
    """Reverse every edge; exchanges sources and targets."""
    return LabeledDiGraph(g.v, tuple((h, t) for t, h in g.edges), g.hairs)


def loop_order(g: LabeledDiGraph) -> int:
    return g.e - g.v


def slice_degree(family: FamilyTag, v: int, e: int, s: int = 0) -> int:
    """Degree of any graph with the given counts in the family."""
    n = family.n
    d = n - v * n - (1 - n) * e
    if family.hairy:
        d -= s
    return d


def degree(g: LabeledDiGraph, family: FamilyTag) -> int:
    return slice_degree(family, g.v, g.e, g.s)


def is_admissible(g: LabeledDiGraph, family: FamilyTag) -> bool:
    """Valence rule, connectivity and the family predicate."""
    if not is_connected(g):
        return False

    if family.hairy:
        if family.s is not None and g.s != family.s:
            return False
        return all(g.valence(x) >= 3 for x in range(g.v))

    if g.s:
        return False
    if any(g.valence(x) < 2 for x in range(g.v)) or has_passing_vertex(g):
        return False

    if family.kind is FamilyKind.ORIENTED:
        if not is_acyclic(g):
            return False
        return family.s is None or count_sources(g) == family.s
    if family.kind is FamilyKind.SOURCED:
        n_sources = count_sources(g)
        return n_sources >= 1 if family.s is None else n_sources == family.s
    return True
