"""
Ribbon graphs as permutations of flags.

Edge i owns the flags 2i and 2i + 1, so the involution pairing the two ends
of an edge is f -> f ^ 1 and only the cyclic orders at the vertices, sigma,
is stored (as an image array). Vertices are the cycles of sigma, boundaries
the cycles of sigma^-1 o iota. The corner following flag f at its vertex
lies on the boundary of f.

Vertex and boundary labels, when present, are given by one representative
flag per labeled orbit.
"""

import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from graphcx.core.canonical import LinearCombination
from graphcx.core.errors import RibbonError
from graphcx.utils.permutations import cycles_of, perm_sign


def iota(f: int) -> int:
    return f ^ 1


@dataclass(frozen=True)
class RibbonGraph:
    sigma: tuple[int, ...]
    vlabels: tuple[int, ...] | None = None
    blabels: tuple[int, ...] | None = None

    def __post_init__(self):
        sigma = tuple(int(x) for x in self.sigma)
        object.__setattr__(self, "sigma", sigma)
        if len(sigma) % 2 or sorted(sigma) != list(range(len(sigma))):
            raise RibbonError(f"sigma {sigma} is not a permutation of an even number of flags")
        if self.vlabels is not None:
            object.__setattr__(self, "vlabels", tuple(self.vlabels))
            self._check_labels(self.vlabels, self.vertices(), "vertex")
        if self.blabels is not None:
            object.__setattr__(self, "blabels", tuple(self.blabels))
            self._check_labels(self.blabels, self.boundaries(), "boundary")

    @staticmethod
    def _check_labels(reps: tuple[int, ...], orbits: list[tuple[int, ...]], what: str) -> None:
        owner = {f: i for i, orbit in enumerate(orbits) for f in orbit}
        try:
            hit = [owner[f] for f in reps]
        except KeyError as e:
            raise RibbonError(f"{what} label refers to unknown flag {e}") from None
        if len(set(hit)) != len(hit) or len(hit) != len(orbits):
            raise RibbonError(f"{what} labels {reps} are not a bijection onto the {len(orbits)} orbits")

    # ── structure ─────────────────────────────────────────────────────────────

    @property
    def k(self) -> int:
        return len(self.sigma) // 2

    @property
    def labeled(self) -> bool:
        return self.vlabels is not None

    def sigma_inverse(self) -> tuple[int, ...]:
        inv = [0] * len(self.sigma)
        for f, g in enumerate(self.sigma):
            inv[g] = f
        return tuple(inv)

    def beta(self) -> tuple[int, ...]:
        """sigma^-1 o iota as an image array."""
        inv = self.sigma_inverse()
        return tuple(inv[iota(f)] for f in range(len(self.sigma)))

    def vertices(self) -> list[tuple[int, ...]]:
        return cycles_of(self.sigma)

    def boundaries(self) -> list[tuple[int, ...]]:
        return cycles_of(self.beta())

    def vertex_of(self, f: int) -> tuple[int, ...]:
        return _orbit(self.sigma, f)

    def boundary_of(self, f: int) -> tuple[int, ...]:
        return _orbit(self.beta(), f)

    def n_vertices(self) -> int:
        return len(self.vertices())

    def n_boundaries(self) -> int:
        return len(self.boundaries())

    def is_connected(self) -> bool:
        return _traversal(self.sigma, 0) is not None if self.sigma else True

    def to_dict(self) -> dict:
        data: dict = {"k": self.k, "sigma": list(self.sigma)}
        if self.labeled:
            data["vlabels"] = [list(_orbit(self.sigma, f)) for f in self.vlabels]
            data["blabels"] = [list(_orbit(self.beta(), f)) for f in self.blabels]
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "RibbonGraph":
        try:
            vlabels = [orbit[0] for orbit in data["vlabels"]] if "vlabels" in data else None
            blabels = [orbit[0] for orbit in data["blabels"]] if "blabels" in data else None
            return cls(tuple(data["sigma"]), vlabels, blabels)
        except (KeyError, TypeError, IndexError) as e:
            raise RibbonError(f"cannot read ribbon graph from {data!r}: {e}") from e

    def unlabeled(self) -> "RibbonGraph":
        return RibbonGraph(self.sigma)


def _orbit(perm: tuple[int, ...], f: int) -> tuple[int, ...]:
    out = [f]
    g = perm[f]
    while g != f:
        out.append(g)
        g = perm[g]
    return tuple(out)


def genus(r: RibbonGraph) -> int:
    """
    Genus of a connected ribbon graph from V - E + B = 2 - 2g.

    Raises:
        RibbonError: disconnected graph or odd Euler characteristic.
    """
    if not r.is_connected():
        raise RibbonError("genus is only defined for connected ribbon graphs")
    two_g = 2 - r.n_vertices() + r.k - r.n_boundaries()
    if two_g % 2 or two_g < 0:
        raise RibbonError(f"malformed ribbon graph: 2g = {two_g}")
    return two_g // 2


# ─────────────────────────────────────────────────────────────────────────────
# Canonical forms
# ─────────────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class RibbonTerm:
    graph: RibbonGraph | None
    coeff: Fraction
    is_zero: bool = False


def _traversal(sigma: tuple[int, ...], start: int) -> list[int] | None:
    """
    Renumber flags by a breadth-first walk from ``start``.

    An edge gets the next free index when one of its flags is first met; that
    flag becomes 2i and its partner 2i + 1. Returns old -> new, or None when
    the walk does not reach every flag.
    """
    new = [-1] * len(sigma)
    count = 0
    queue: deque[int] = deque()

    def visit(f: int) -> None:
        nonlocal count
        if new[f] >= 0:
            return
        new[f] = 2 * count
        new[iota(f)] = 2 * count + 1
        count += 1
        queue.append(f)
        queue.append(iota(f))

    visit(start)
    while queue:
        f = queue.popleft()
        g = sigma[f]
        while g != f:
            visit(g)
            g = sigma[g]
    if 2 * count != len(sigma):
        return None
    return new


def _edge_sign(new: list[int]) -> int:
    """sgn of the induced permutation of edges; reversing an edge costs nothing."""
    return perm_sign([new[2 * i] // 2 for i in range(len(new) // 2)])


def _certificate(r: RibbonGraph, new: list[int]):
    sigma = [0] * len(new)
    for f, g in enumerate(r.sigma):
        sigma[new[f]] = new[g]
    sigma = tuple(sigma)
    if not r.labeled:
        return sigma, None, None
    relabeled = RibbonGraph(sigma)
    vreps = tuple(min(relabeled.vertex_of(new[f])) for f in r.vlabels)
    breps = tuple(min(relabeled.boundary_of(new[f])) for f in r.blabels)
    return sigma, vreps, breps


@lru_cache(maxsize=None)
def canonicalize_ribbon(r: RibbonGraph) -> RibbonTerm:
    """
    Canonical representative under relabeling of edges and edge reversal.

    Edge permutations carry their sign; the class is zero when two renumberings
    reach the least certificate with opposite signs. Labels, if any, are part of
    the certificate and carry no sign.

    Raises:
        RibbonError: disconnected input.
    """
    if r.k == 0:
        return RibbonTerm(r, Fraction(1))
    best = None
    signs: set[int] = set()
    for start in range(len(r.sigma)):
        new = _traversal(r.sigma, start)
        if new is None:
            raise RibbonError("canonical forms are only defined for connected ribbon graphs")
        cert = _certificate(r, new)
        sign = _edge_sign(new)
        if best is None or cert < best:
            best, signs = cert, {sign}
        elif cert == best:
            signs.add(sign)
    sigma, vreps, breps = best
    graph = RibbonGraph(sigma, vreps, breps)
    if len(signs) > 1:
        return RibbonTerm(graph, Fraction(0), True)
    # sign of the relabeling r -> canonical
    return RibbonTerm(graph, Fraction(next(iter(signs))))


def ribbon_automorphism_signs(r: RibbonGraph) -> set[int]:
    term = canonicalize_ribbon(r)
    return {1, -1} if term.is_zero else {1}


class RibbonCombo(LinearCombination):
    """Linear combination of canonical ribbon graphs."""

    def add_ribbon(self, r: RibbonGraph, coeff: Fraction | int = 1) -> None:
        term = canonicalize_ribbon(r)
        if not term.is_zero:
            self.add(term.graph, term.coeff * coeff)


# ─────────────────────────────────────────────────────────────────────────────
# Small constructors
# ─────────────────────────────────────────────────────────────────────────────

def edge_graph() -> RibbonGraph:
    """One edge between two univalent vertices: one boundary."""
    return RibbonGraph((0, 1))


def loop_graph() -> RibbonGraph:
    """One edge closing a loop at a bivalent vertex: two boundaries."""
    return RibbonGraph((1, 0))


def disjoint_union(a: RibbonGraph, b: RibbonGraph) -> RibbonGraph:
    """Flags of b shifted after those of a; labels concatenated when both are labeled."""
    shift = len(a.sigma)
    sigma = a.sigma + tuple(g + shift for g in b.sigma)
    if a.labeled and b.labeled:
        return RibbonGraph(
            sigma,
            a.vlabels + tuple(f + shift for f in b.vlabels),
            a.blabels + tuple(f + shift for f in b.blabels),
        )
    return RibbonGraph(sigma)
