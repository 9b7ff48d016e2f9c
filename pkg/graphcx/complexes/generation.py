"""
Basis generation for the graph complexes.

Generation runs in two stages. First the undirected connected multigraph
shapes with v vertices and e edges are enumerated up to isomorphism, with
vertex degrees forced to be nonincreasing so that each shape is reached
from few labelings. Then every shape is decorated with edge directions
(non-hairy families) or hair positions (hairy family), filtered by
admissibility and canonicalized under the family's parity rules.
"""

import itertools
from functools import lru_cache

import networkx as nx

from graphcx.complexes.slices import ComplexSlice
from graphcx.config import get_settings
from graphcx.core.canonical import canonicalize
from graphcx.core.errors import BudgetExceededError
from graphcx.core.graph import FamilyTag, LabeledDiGraph, ParityRules, is_admissible
from graphcx.utils.logger import logger
from graphcx.utils.resources import check_memory_budget

# Rules used only to compare undirected shapes (edge flips and order ignored by the certificate)
SHAPE_RULES = ParityRules(n=1, hairy=True)

_MEMORY_CHECK_EVERY = 5000

Pair = tuple[int, int]


# ─────────────────────────────────────────────────────────────────────────────
# Undirected shapes
# ─────────────────────────────────────────────────────────────────────────────

def _multiset_shapes(v: int, e: int, min_degree: int, max_multiplicity: int):
    """Yield edge multisets (as pair -> multiplicity) with nonincreasing vertex degrees."""
    pairs = [(i, j) for i in range(v) for j in range(i + 1, v)]
    # index of the last pair whose smaller endpoint is i: after it deg[i] is final
    row_end = {}
    for idx, (i, _) in enumerate(pairs):
        row_end[i] = idx

    deg = [0] * v
    chosen: dict[Pair, int] = {}

    def feasible(idx: int, remaining: int) -> bool:
        first_open = pairs[idx][0] if idx < len(pairs) else v
        deficit = sum(max(0, min_degree - deg[k]) for k in range(first_open, v))
        return deficit <= 2 * remaining

    def row_ok(i: int) -> bool:
        return deg[i] >= min_degree and (i == 0 or deg[i] <= deg[i - 1])

    def rec(idx: int, remaining: int):
        if idx == len(pairs):
            if remaining == 0 and all(row_ok(k) for k in range(v) if k not in row_end):
                yield dict(chosen)
            return
        if not feasible(idx, remaining):
            return
        i, j = pairs[idx]
        for m in range(min(max_multiplicity, remaining) + 1):
            deg[i] += m
            deg[j] += m
            if i > 0 and deg[i] > deg[i - 1]:
                deg[i] -= m
                deg[j] -= m
                break
            if m:
                chosen[(i, j)] = m
            if row_end[i] != idx or row_ok(i):
                yield from rec(idx + 1, remaining - m)
            chosen.pop((i, j), None)
            deg[i] -= m
            deg[j] -= m

    if v == 1:
        if e == 0 and min_degree <= 0:
            yield {}
        return
    yield from rec(0, e)


@lru_cache(maxsize=None)
def connected_multigraphs(v: int, e: int, min_degree: int = 2,
                          max_multiplicity: int | None = None) -> tuple[tuple[Pair, ...], ...]:
    """
    Connected loopless multigraphs on v vertices with e edges, one per isomorphism class.

    Each shape is a sorted tuple of (i, j) pairs with i < j, repeated by multiplicity.
    """
    max_multiplicity = e if max_multiplicity is None else max_multiplicity
    seen = set()
    shapes = []
    for count, chosen in enumerate(_multiset_shapes(v, e, min_degree, max_multiplicity)):
        if count and count % _MEMORY_CHECK_EVERY == 0:
            check_memory_budget(f"shape enumeration v={v} e={e}")
        edges = tuple(p for p, m in sorted(chosen.items()) for _ in range(m))
        shape_graph = nx.MultiGraph()
        shape_graph.add_nodes_from(range(v))
        shape_graph.add_edges_from(edges)
        if not nx.is_connected(shape_graph):
            continue
        g = LabeledDiGraph(v, edges)
        key = canonicalize(g, SHAPE_RULES).graph
        if key in seen:
            continue
        seen.add(key)
        shapes.append(edges)
    return tuple(shapes)


# ─────────────────────────────────────────────────────────────────────────────
# Decorations
# ─────────────────────────────────────────────────────────────────────────────

def _directions(shape: tuple[Pair, ...], odd_edges: bool):
    """All ways to direct the edges of a shape, grouped by parallel class."""
    groups: dict[Pair, int] = {}
    for p in shape:
        groups[p] = groups.get(p, 0) + 1
    options = []
    for (i, j), m in groups.items():
        choices = []
        for forward in range(m + 1):
            backward = m - forward
            # two parallel same-direction edges are a zero class for odd edges
            if odd_edges and (forward > 1 or backward > 1):
                continue
            choices.append(((i, j),) * forward + ((j, i),) * backward)
        options.append(choices)
    for combo in itertools.product(*options):
        yield tuple(edge for block in combo for edge in block)


def _hair_placements(v: int, s: int):
    # two hairs on one vertex always form a zero class
    return itertools.combinations(range(v), s)


def _decorations(shape: tuple[Pair, ...], v: int, family: FamilyTag):
    rules = family.rules
    if family.hairy:
        for hairs in _hair_placements(v, family.s or 0):
            yield LabeledDiGraph(v, shape, hairs)
    else:
        for edges in _directions(shape, rules.odd_edges):
            yield LabeledDiGraph(v, edges)


def _check_budget(v: int, e: int) -> None:
    settings = get_settings()
    if v > settings.vmax or e > settings.emax:
        raise BudgetExceededError(
            f"slice v={v}, e={e} exceeds the generation budget (vmax={settings.vmax}, emax={settings.emax})"
        )


def _shape_parameters(family: FamilyTag) -> tuple[int, int | None]:
    rules = family.rules
    if family.hairy:
        return 2, (1 if rules.odd_edges else None)
    return 2, (2 if rules.odd_edges else None)


@lru_cache(maxsize=None)
def generate_basis(family: FamilyTag, v: int, e: int) -> ComplexSlice:
    """
    Basis of the (family, v, e) slice; the hair or source count comes from ``family.s``.

    Raises:
        BudgetExceededError: v or e above the configured caps.
    """
    if v < 1 or e < 0:
        return ComplexSlice.empty(family, v, e)
    _check_budget(v, e)

    min_degree, max_mult = _shape_parameters(family)
    found: set[LabeledDiGraph] = set()
    for shape in connected_multigraphs(v, e, min_degree, max_mult):
        for g in _decorations(shape, v, family):
            if not is_admissible(g, family):
                continue
            term = canonicalize(g, family.rules)
            if not term.is_zero:
                found.add(term.graph)

    basis = tuple(sorted(found, key=LabeledDiGraph.to_json))
    logger.debug(f"[Generate] {family.label} n={family.n} s={family.s} v={v} e={e}: {len(basis)} generators")
    return ComplexSlice(family, v, e, basis)


def brute_force_basis(family: FamilyTag, v: int, e: int) -> ComplexSlice:
    """
    Filter every labeled graph with v vertices and e edges; test oracle for v <= 4.
    """
    ordered_pairs = [(t, h) for t in range(v) for h in range(v) if t != h]
    hair_sets = itertools.combinations_with_replacement(range(v), family.s or 0) if family.hairy else [()]
    hair_sets = list(hair_sets)
    found: set[LabeledDiGraph] = set()
    for edges in itertools.combinations_with_replacement(ordered_pairs, e):
        for hairs in hair_sets:
            g = LabeledDiGraph(v, edges, hairs)
            if not is_admissible(g, family):
                continue
            term = canonicalize(g, family.rules)
            if not term.is_zero:
                found.add(term.graph)
    return ComplexSlice(family, v, e, tuple(sorted(found, key=LabeledDiGraph.to_json)))
