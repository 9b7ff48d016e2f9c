"""
Signed canonical forms of labeled graphs.

The canonical labeling is found by individualization-refinement: vertices
are colored by local invariants, colors are refined until equitable, and
whenever a color class has several members each of them is individualized
in turn. Every leaf of that search is a candidate labeling; the labeling
with the lexicographically least certificate wins. Leaves sharing the least
certificate differ by an automorphism, which is how sign-reversing
automorphisms (and hence zero classes) are detected.
"""

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from graphcx.core.graph import LabeledDiGraph, ParityRules
from graphcx.utils.permutations import perm_sign, sorting_sign

# Edge kinds for the refinement signature
_UNDIRECTED, _OUT, _IN = 0, 1, 2


@dataclass(frozen=True)
class CanonicalTerm:
    """
    A canonical graph with the coefficient picked up on the way there.

    ``graph`` is None only for terms killed by a local rule (tadpole, passing
    vertex, ...) before any graph could be formed.
    """
    graph: LabeledDiGraph | None
    coeff: Fraction
    is_zero: bool = False

    @classmethod
    def zero(cls) -> "CanonicalTerm":
        return cls(None, Fraction(0), True)

    def scaled(self, factor: Fraction | int) -> "CanonicalTerm":
        return CanonicalTerm(self.graph, self.coeff * factor, self.is_zero)


def _incidence(g: LabeledDiGraph, hairy: bool) -> list[list[tuple[int, int]]]:
    inc: list[list[tuple[int, int]]] = [[] for _ in range(g.v)]
    for t, h in g.edges:
        if hairy:
            inc[t].append((_UNDIRECTED, h))
            inc[h].append((_UNDIRECTED, t))
        else:
            inc[t].append((_OUT, h))
            inc[h].append((_IN, t))
    return inc


def _dense_ranks(keys: list) -> list[int]:
    ranking = {key: i for i, key in enumerate(sorted(set(keys)))}
    return [ranking[key] for key in keys]


def _refine(colors: list[int], inc: list[list[tuple[int, int]]]) -> list[int]:
    """Refine a coloring until it is equitable."""
    n_cells = len(set(colors))
    while True:
        signatures = [
            (colors[x], tuple(sorted((kind, colors[y]) for kind, y in inc[x])))
            for x in range(len(colors))
        ]
        refined = _dense_ranks(signatures)
        n_refined = len(set(refined))
        if n_refined == n_cells:
            return refined
        colors, n_cells = refined, n_refined


def _leaves(g: LabeledDiGraph, hairy: bool) -> list[list[int]]:
    """All discrete colorings reachable by individualization-refinement."""
    inc = _incidence(g, hairy)
    if hairy:
        initial = [(len(inc[x]), g.hair_counts[x]) for x in range(g.v)]
    else:
        initial = [(g.in_degrees[x], g.out_degrees[x]) for x in range(g.v)]
    start = _refine(_dense_ranks(initial), inc)

    leaves = []
    stack = [start]
    while stack:
        colors = stack.pop()
        counts = Counter(colors)
        target = min((c for c, k in counts.items() if k > 1), default=None)
        if target is None:
            leaves.append(colors)
            continue
        for x in range(g.v):
            if colors[x] != target:
                continue
            split = _dense_ranks([(colors[y], 0 if y == x else 1) for y in range(g.v)])
            stack.append(_refine(split, inc))
    return leaves


def _apply(g: LabeledDiGraph, perm: list[int], rules: ParityRules):
    """Relabel by ``perm`` (old vertex -> new label); return certificate and sign."""
    sign = perm_sign(perm) if rules.odd_vertices else 1

    mapped = []
    flips = 0
    for t, h in g.edges:
        a, b = perm[t], perm[h]
        if rules.hairy and a > b:
            a, b = b, a
            flips += 1
        mapped.append((a, b))
    if rules.odd_edges:
        sign *= sorting_sign(mapped)
    if rules.flip_sign and flips % 2:
        sign = -sign

    hairs = [perm[x] for x in g.hairs]
    if rules.odd_hairs:
        sign *= sorting_sign(hairs)

    certificate = (tuple(sorted(mapped)), tuple(sorted(hairs)))
    return certificate, sign


def _forced_zero(g: LabeledDiGraph, rules: ParityRules) -> bool:
    """Zero classes visible without any vertex permutation: swapped parallel edges or hairs."""
    if rules.odd_edges:
        keys = [(min(t, h), max(t, h)) if rules.hairy else (t, h) for t, h in g.edges]
        if len(set(keys)) < len(keys):
            return True
    if rules.odd_hairs and len(set(g.hairs)) < len(g.hairs):
        return True
    return False


@lru_cache(maxsize=None)
def _search(g: LabeledDiGraph, rules: ParityRules):
    forced_zero = _forced_zero(g, rules)
    best = None
    signs: set[int] = set()
    for perm in _leaves(g, rules.hairy):
        certificate, sign = _apply(g, perm, rules)
        if best is None or certificate < best:
            best, signs = certificate, {sign}
        elif certificate == best:
            signs.add(sign)
    return best, signs, forced_zero


def canonicalize(g: LabeledDiGraph, rules: ParityRules) -> CanonicalTerm:
    """
    Canonical representative of g's isomorphism class.

    Returns the canonical graph, the sign of the relabeling g -> canonical
    graph, and whether the class is killed by a sign-reversing automorphism.
    """
    (edges, hairs), signs, forced_zero = _search(g, rules)
    canonical = LabeledDiGraph(g.v, edges, hairs)
    is_zero = forced_zero or len(signs) > 1
    sign = 1 if is_zero else next(iter(signs))
    return CanonicalTerm(canonical, Fraction(sign), is_zero)


def automorphism_signs(g: LabeledDiGraph, rules: ParityRules) -> set[int]:
    """Signs realized by automorphisms of g under the parity rules."""
    _, signs, forced_zero = _search(g, rules)
    if forced_zero or len(signs) > 1:
        return {1, -1}
    return {1}


# ─────────────────────────────────────────────────────────────────────────────
# Linear combinations of canonical objects
# ─────────────────────────────────────────────────────────────────────────────

class LinearCombination(dict):
    """Finite formal sum: canonical object -> nonzero rational coefficient."""

    def add(self, key, coeff: Fraction | int) -> None:
        if not coeff:
            return
        total = self.get(key, 0) + coeff
        if total:
            self[key] = Fraction(total)
        else:
            self.pop(key, None)

    def add_term(self, term: CanonicalTerm, scale: Fraction | int = 1) -> None:
        if term.is_zero:
            return
        self.add(term.graph, term.coeff * scale)

    def extend(self, other: "LinearCombination", scale: Fraction | int = 1) -> None:
        for key, coeff in other.items():
            self.add(key, coeff * scale)

    def scaled(self, factor: Fraction | int) -> "LinearCombination":
        out = LinearCombination()
        out.extend(self, factor)
        return out

    def __sub__(self, other: "LinearCombination") -> "LinearCombination":
        out = LinearCombination(self)
        out.extend(other, -1)
        return out

    def __add__(self, other: "LinearCombination") -> "LinearCombination":
        out = LinearCombination(self)
        out.extend(other)
        return out

    def is_zero(self) -> bool:
        return not self
