"""
The forest map from hairy graphs at parameter n to oriented graphs at n + 1,
and its transpose G.

For a spanning forest tau of a hairy graph, the oriented graph Phi_tau
directs every forest edge away from the hair of its component and replaces
every other edge c = (x, y) by x -> w_c <- y through a new bivalent target.
The hairs disappear and their vertices become the sources. Phi sums these
over all spanning forests.

Orientation of the model, n even (vertices of the target are odd): the
vertex reached by forest edge i gets label i, the target w_c gets label c
and the vertex of hair j gets label e + j, so the odd edges and hairs of the
hairy graph become the odd vertices of the target; the term carries (-1)^s.

Orientation of the model, n odd (edges of the target are odd): vertices keep
their labels and the targets w_c follow in the order of c. The edge list is
the forest edge above each non-root vertex, by increasing vertex, followed by
x -> w_c, y -> w_c per crossed edge c = (x, y). The sign is that of the
reordering (vertices, hairs) -> (non-roots, root_0, hair_0, root_1, hair_1, ...)
times -1 for each forest edge stored towards its root.
"""

from collections import deque
from dataclasses import dataclass

from graphcx.complexes.differentials import apply_d, apply_h, contract_edge
from graphcx.complexes.generation import generate_basis
from graphcx.complexes.slices import ComplexSlice
from graphcx.core.canonical import CanonicalTerm, LinearCombination, canonicalize
from graphcx.core.errors import GenerationError, MalformedGraphError
from graphcx.core.graph import FamilyTag, LabeledDiGraph, ParityRules, is_admissible
from graphcx.core.types import FamilyKind
from graphcx.forest.forests import Forest, cycle_edges, spanning_forests
from graphcx.forest.skeleton import SkeletonTerm, bivalent_targets, hairy_skeleton, kappa
from graphcx.linalg.sparse import SparseRationalMatrix
from graphcx.utils.permutations import perm_sign

ARROW_PART, CYCLE_PART, DOUBLE_PART = "arrow", "cycle", "double"


@dataclass(frozen=True)
class ForestModel:
    """The labeled oriented graph of (g, tau) before canonicalization."""
    graph: LabeledDiGraph
    sign: int
    # per model edge: (part, index of the hairy edge it comes from)
    origins: tuple[tuple[str, int], ...]


def target_family(n: int, s: int | None = None) -> FamilyTag:
    """Oriented family receiving the forest map of hairy graphs at parameter n."""
    return FamilyTag(FamilyKind.ORIENTED, n + 1, s)


def _root_forest(g: LabeledDiGraph, forest: Forest) -> dict[int, tuple[int, int]]:
    """parent[x] = (parent vertex, forest edge) for every non-root vertex."""
    if len(set(g.hairs)) != g.s or g.s == 0 or len(forest.edges) != g.v - g.s:
        raise MalformedGraphError(f"{forest.to_list()} is not a spanning forest of {g.to_json()}")
    adjacency: dict[int, list[tuple[int, int]]] = {x: [] for x in range(g.v)}
    for i in forest.edges:
        t, h = g.edges[i]
        adjacency[t].append((h, i))
        adjacency[h].append((t, i))

    parent: dict[int, tuple[int, int]] = {}
    seen = set(g.hairs)
    queue = deque(g.hairs)
    while queue:
        x = queue.popleft()
        for y, i in sorted(adjacency[x]):
            if y in seen:
                if parent.get(x, (None, None))[1] != i:
                    raise MalformedGraphError(f"forest {forest.to_list()} has a cycle or joins two hairs")
                continue
            seen.add(y)
            parent[y] = (x, i)
            queue.append(y)
    if len(seen) != g.v:
        raise MalformedGraphError(f"forest {forest.to_list()} does not span {g.to_json()}")
    return parent


def forest_model(g: LabeledDiGraph, forest: Forest, n: int) -> ForestModel:
    parent = _root_forest(g, forest)
    crossed = [c for c in range(g.e) if c not in forest.edges]
    cross_part = set(cycle_edges(g, forest))

    def part(c: int) -> str:
        return CYCLE_PART if c in cross_part else DOUBLE_PART

    if n % 2 == 0:
        label = {child: i for child, (_, i) in parent.items()}
        child_of = {i: child for child, (_, i) in parent.items()}
        for j, x in enumerate(g.hairs):
            label[x] = g.e + j
        edges, origins = [], []
        for i in range(g.e):
            if i in forest.edges:
                child = child_of[i]
                edges.append((label[parent[child][0]], i))
                origins.append((ARROW_PART, i))
            else:
                x, y = g.edges[i]
                edges += [(label[x], i), (label[y], i)]
                origins += [(part(i), i), (part(i), i)]
        sign = (-1) ** g.s
        model = LabeledDiGraph(g.e + g.s, tuple(edges))
        return ForestModel(model, sign, tuple(origins))

    edges, origins = [], []
    toward_root = 0
    for x in sorted(parent):
        p, i = parent[x]
        edges.append((p, x))
        origins.append((ARROW_PART, i))
        if g.edges[i] == (x, p):
            toward_root += 1
    for k, c in enumerate(crossed):
        x, y = g.edges[c]
        w = g.v + k
        edges += [(x, w), (y, w)]
        origins += [(part(c), c), (part(c), c)]

    order = [("v", x) for x in range(g.v)] + [("h", j) for j in range(g.s)]
    target = [("v", x) for x in sorted(parent)]
    for j, x in enumerate(g.hairs):
        target += [("v", x), ("h", j)]
    position = {item: idx for idx, item in enumerate(order)}
    epsilon = perm_sign([position[item] for item in target])

    model = LabeledDiGraph(g.v + len(crossed), tuple(edges))
    return ForestModel(model, epsilon * (-1) ** toward_root, tuple(origins))


# ─────────────────────────────────────────────────────────────────────────────
# Phi
# ─────────────────────────────────────────────────────────────────────────────

def phi_tau_expanded(g: LabeledDiGraph, forest: Forest, n: int) -> CanonicalTerm:
    """Phi_tau(g) as a canonical oriented graph at parameter n + 1."""
    model = forest_model(g, forest, n)
    return canonicalize(model.graph, ParityRules(n + 1)).scaled(model.sign)


def phi_tau(g: LabeledDiGraph, forest: Forest, n: int) -> SkeletonTerm:
    """Phi_tau(g) in skeleton form: forest edges as arrows, the others crossed."""
    term = phi_tau_expanded(g, forest, n)
    return SkeletonTerm(kappa(term.graph), term.coeff, term.is_zero)


def phi_expanded(g: LabeledDiGraph, n: int) -> LinearCombination:
    combo = LinearCombination()
    for forest in spanning_forests(g):
        combo.add_term(phi_tau_expanded(g, forest, n))
    return combo


def phi(g: LabeledDiGraph, n: int) -> LinearCombination:
    """Phi(g) as a combination of canonical skeleton graphs."""
    return LinearCombination({kappa(o): c for o, c in phi_expanded(g, n).items()})


def phi_combo(combo: LinearCombination, n: int) -> LinearCombination:
    out = LinearCombination()
    for g, coeff in combo.items():
        out.extend(phi_expanded(g, n), coeff)
    return out


def phi_target_slice(src: ComplexSlice) -> ComplexSlice:
    """Oriented slice holding Phi of a hairy slice: e + s vertices, 2e - v + s edges, s sources."""
    return generate_basis(target_family(src.n, src.s), src.e + src.s, 2 * src.e - src.v + src.s)


def phi_matrix(src: ComplexSlice, dst: ComplexSlice) -> SparseRationalMatrix:
    if not src.family.hairy or dst.family.kind is not FamilyKind.ORIENTED or dst.n != src.n + 1:
        raise GenerationError(f"no forest map from {src.header()} to {dst.header()}")
    if (dst.v, dst.e) != (src.e + src.s, 2 * src.e - src.v + src.s):
        raise GenerationError(f"dimension mismatch: {src.header()} does not map into {dst.header()}")
    columns = [dst.coordinates(phi_expanded(g, src.n)) for g in src.basis]
    return SparseRationalMatrix.from_columns(len(dst), columns)


def phi_slice_map(a: ComplexSlice, b: ComplexSlice) -> SparseRationalMatrix | None:
    """Slice map for window assembly; None where the forest map has no component."""
    if (b.v, b.e) != (a.e + a.s, 2 * a.e - a.v + a.s):
        return None
    if b.family.s is not None and b.family.s != a.s:
        return None
    return phi_matrix(a, b)


# ─────────────────────────────────────────────────────────────────────────────
# G, the transpose of Phi
# ─────────────────────────────────────────────────────────────────────────────

def G_map(g: LabeledDiGraph, n: int) -> CanonicalTerm:
    """
    G of an oriented graph at parameter n (the hairy side is at n - 1).

    G(g) is hs(g) when g has exactly e - v + s bivalent targets, counted on
    hs(g). The sign is the pairing sign of g against Phi_tau(hs(g)), where tau
    is the set of ordinary edges of g; when that single forest image is not g
    itself the result is zero.
    """
    term = canonicalize(g, ParityRules(n))
    if term.is_zero:
        return CanonicalTerm.zero()
    o = term.graph
    gamma = hairy_skeleton(o)
    if gamma is None or gamma.s == 0:
        return CanonicalTerm.zero()
    crossed = len(bivalent_targets(o))
    if crossed != gamma.e - gamma.v + gamma.s:
        return CanonicalTerm.zero()
    hairy_family = FamilyTag(FamilyKind.HAIRY, n - 1, gamma.s)
    if not is_admissible(gamma, hairy_family):
        return CanonicalTerm.zero()
    hairy_term = canonicalize(gamma, hairy_family.rules)
    if hairy_term.is_zero:
        return CanonicalTerm.zero()

    # hs lists the ordinary edges first
    ordinary = Forest(frozenset(range(gamma.e - crossed)))
    try:
        image = phi_tau_expanded(gamma, ordinary, n - 1)
    except MalformedGraphError:
        return CanonicalTerm.zero()
    if image.is_zero or image.graph != o:
        return CanonicalTerm.zero()
    return CanonicalTerm(hairy_term.graph, image.coeff * hairy_term.coeff * term.coeff)


def g_matrix(src: ComplexSlice, dst: ComplexSlice) -> SparseRationalMatrix:
    """Matrix of G from an oriented slice to a hairy slice."""
    columns = []
    for g in src.basis:
        term = G_map(g, src.n)
        columns.append({} if term.is_zero or term.graph not in dst else {dst.index[term.graph]: term.coeff})
    return SparseRationalMatrix.from_columns(len(dst), columns)


# ─────────────────────────────────────────────────────────────────────────────
# Splitting d Phi(g) by the origin of the contracted edge
# ─────────────────────────────────────────────────────────────────────────────

def contraction_parts(g: LabeledDiGraph, n: int) -> dict[str, LinearCombination]:
    """
    d applied to Phi(g), split by where the contracted model edge comes from:
    a forest edge, an edge closing a cycle in its component, or an edge
    joining two components.
    """
    family = target_family(n)
    parts = {ARROW_PART: LinearCombination(), CYCLE_PART: LinearCombination(), DOUBLE_PART: LinearCombination()}
    for forest in spanning_forests(g):
        model = forest_model(g, forest, n)
        for a, (kind, _) in enumerate(model.origins):
            parts[kind].add_term(contract_edge(model.graph, a, family), model.sign)
    return parts


def chain_map_defect(g: LabeledDiGraph, n: int) -> LinearCombination:
    """Phi((d + h) g) - d Phi(g); zero exactly when the chain map identity holds at g."""
    hairy = FamilyTag(FamilyKind.HAIRY, n, g.s)
    lhs = phi_combo(apply_d(g, hairy) + apply_h(g, hairy), n)
    rhs = LinearCombination()
    for part in contraction_parts(g, n).values():
        rhs.extend(part)
    return lhs - rhs


def fixed_source_defect(g: LabeledDiGraph, n: int) -> LinearCombination:
    """Phi(d g) - d0 Phi(g)."""
    hairy = FamilyTag(FamilyKind.HAIRY, n, g.s)
    lhs = phi_combo(apply_d(g, hairy), n)
    fixed = target_family(n, g.s)
    rhs = LinearCombination()
    for o, coeff in phi_expanded(g, n).items():
        for a in range(o.e):
            rhs.add_term(contract_edge(o, a, fixed, fixed), coeff)
    return lhs - rhs
