"""
Skeleton graphs: oriented graphs with their bivalent targets folded into typed edges.

An ARROW edge (t, h) is an ordinary edge t -> h. A CROSSED edge (x, y) stands
for x -> w <- y through a bivalent target w. Expanding puts the new targets
after the ordinary vertices, in the order of the crossed edges, and replaces
each crossed edge in place by its two arrows (x -> w first).
"""

import json
from dataclasses import dataclass
from fractions import Fraction

from graphcx.core.canonical import canonicalize
from graphcx.core.errors import MalformedGraphError
from graphcx.core.graph import FamilyTag, LabeledDiGraph, ParityRules, slice_degree, sources
from graphcx.core.types import EdgeType, FamilyKind

TypedEdge = tuple[int, int, EdgeType]


@dataclass(frozen=True)
class SkeletonGraph:
    v: int
    typed_edges: tuple[TypedEdge, ...] = ()

    def __post_init__(self):
        edges = tuple((int(t), int(h), EdgeType(kind)) for t, h, kind in self.typed_edges)
        object.__setattr__(self, "typed_edges", edges)
        for t, h, _ in edges:
            if t == h:
                raise MalformedGraphError(f"tadpole at skeleton vertex {t}")
            if not (0 <= t < self.v and 0 <= h < self.v):
                raise MalformedGraphError(f"skeleton edge ({t}, {h}) out of range for v={self.v}")

    @property
    def n_crossed(self) -> int:
        return sum(1 for *_, kind in self.typed_edges if kind is EdgeType.CROSSED)

    def to_dict(self) -> dict:
        return {
            "v": self.v,
            "edges": [[t, h] for t, h, _ in self.typed_edges],
            "etype": [kind.value for *_, kind in self.typed_edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "SkeletonGraph":
        try:
            edges = tuple((t, h, EdgeType(k)) for (t, h), k in zip(data["edges"], data["etype"], strict=True))
            return cls(v=data["v"], typed_edges=edges)
        except (KeyError, TypeError, ValueError) as e:
            raise MalformedGraphError(f"cannot read skeleton graph from {data!r}: {e}") from e


@dataclass(frozen=True)
class SkeletonTerm:
    skeleton: SkeletonGraph | None
    coeff: Fraction
    is_zero: bool = False


def kappa_expand(sk: SkeletonGraph) -> LabeledDiGraph:
    """Replace every crossed edge by two arrows into a fresh bivalent target."""
    edges = []
    mid = sk.v
    for t, h, kind in sk.typed_edges:
        if kind is EdgeType.ARROW:
            edges.append((t, h))
        else:
            edges.append((t, mid))
            edges.append((h, mid))
            mid += 1
    return LabeledDiGraph(mid, tuple(edges))


def bivalent_targets(g: LabeledDiGraph) -> list[int]:
    return [x for x in range(g.v) if g.out_degrees[x] == 0 and g.in_degrees[x] == 2 and g.hair_counts[x] == 0]


def kappa(g: LabeledDiGraph) -> SkeletonGraph:
    """
    Fold each bivalent target back into a crossed edge.

    The crossed edge takes the position of the first of its two arrows; the
    remaining vertices keep their relative order.

    Raises:
        MalformedGraphError: a bivalent target fed twice by the same vertex.
    """
    mids = set(bivalent_targets(g))
    keep = [x for x in range(g.v) if x not in mids]
    relabel = {x: i for i, x in enumerate(keep)}

    feeders: dict[int, list[int]] = {w: [] for w in mids}
    for t, h in g.edges:
        if h in mids:
            feeders[h].append(t)

    typed: list[TypedEdge] = []
    emitted = set()
    for t, h in g.edges:
        if h not in mids:
            typed.append((relabel[t], relabel[h], EdgeType.ARROW))
            continue
        if h in emitted:
            continue
        emitted.add(h)
        x, y = feeders[h]
        if x == y:
            raise MalformedGraphError(f"bivalent target {h} has both edges from vertex {x}")
        typed.append((relabel[x], relabel[y], EdgeType.CROSSED))
    return SkeletonGraph(len(keep), tuple(typed))


def canonicalize_skeleton(sk: SkeletonGraph, n: int) -> SkeletonTerm:
    """Canonical skeleton through the expanded oriented graph, whose parity rules carry the signs."""
    term = canonicalize(kappa_expand(sk), ParityRules(n))
    return SkeletonTerm(kappa(term.graph), term.coeff, term.is_zero)


def skeleton_degree(sk: SkeletonGraph, n: int) -> int:
    """Degree in the oriented complex at parameter n: arrows weigh n-1, crossed edges n-2."""
    expanded = kappa_expand(sk)
    return slice_degree(FamilyTag(FamilyKind.ORIENTED, n), expanded.v, expanded.e)


def hairy_skeleton(g: LabeledDiGraph) -> LabeledDiGraph | None:
    """
    Hair on every source, bivalent targets contracted into plain edges.

    Edges of the result: the ordinary edges first in their order, then one
    edge per bivalent target in vertex order. Hairs sit on the sources in
    increasing label. Returns None when a bivalent target is fed twice by one
    vertex (the contraction would be a tadpole).
    """
    mids = bivalent_targets(g)
    mid_set = set(mids)
    keep = [x for x in range(g.v) if x not in mid_set]
    relabel = {x: i for i, x in enumerate(keep)}

    feeders: dict[int, list[int]] = {w: [] for w in mids}
    edges = []
    for t, h in g.edges:
        if h in mid_set:
            feeders[h].append(t)
        else:
            edges.append((relabel[t], relabel[h]))
    for w in mids:
        x, y = feeders[w]
        if x == y:
            return None
        edges.append((relabel[x], relabel[y]))
    hairs = tuple(relabel[x] for x in sources(g))
    return LabeledDiGraph(len(keep), tuple(edges), hairs)
