"""
The ribbon graph complex.

Generators are connected unlabeled ribbon graphs with their edges ordered up
to sign, so a graph sits in degree k (its edge count). The differential is
delta + Delta1: delta splits a vertex into two joined by a new edge, keeping
the cyclic order; Delta1 adds a chord between two distinct corners of one
boundary. New edges always come last. Both raise k by one and keep the genus;
delta adds a vertex, Delta1 a boundary.
"""

import itertools
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from graphcx.config import get_settings
from graphcx.core.errors import BudgetExceededError, GenerationError
from graphcx.linalg.homology import ChainComplexWindow
from graphcx.linalg.sparse import SparseRationalMatrix, block_matrix
from graphcx.ribbon.ribbon import (
    RibbonCombo,
    RibbonGraph,
    canonicalize_ribbon,
    edge_graph,
    genus,
    loop_graph,
)
from graphcx.utils.logger import logger
from graphcx.utils.resources import check_memory_budget

RIBBON_DIFFERENTIALS = ("delta", "delta1", "delta+delta1")

_MEMORY_CHECK_EVERY = 500


@dataclass(frozen=True)
class RibbonSlice:
    """Canonical ribbon graphs with k edges, n vertices and m boundaries."""

    k: int
    n: int
    m: int
    basis: tuple[RibbonGraph, ...] = ()
    index: dict[RibbonGraph, int] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.index and self.basis:
            object.__setattr__(self, "index", {r: i for i, r in enumerate(self.basis)})

    @property
    def degree(self) -> int:
        return self.k

    @property
    def genus(self) -> int:
        return (2 - self.n + self.k - self.m) // 2

    def __len__(self) -> int:
        return len(self.basis)

    def __contains__(self, r: RibbonGraph) -> bool:
        return r in self.index

    def coordinates(self, combo: RibbonCombo) -> dict[int, Fraction]:
        try:
            return {self.index[r]: c for r, c in combo.items()}
        except KeyError as e:
            raise GenerationError(f"{e.args[0].to_json()} is not a basis element of {self.header()}") from None

    def header(self) -> dict:
        return {"family": "ribbon", "k": self.k, "n": self.n, "m": self.m, "genus": self.genus, "size": len(self)}


# ─────────────────────────────────────────────────────────────────────────────
# Local moves
# ─────────────────────────────────────────────────────────────────────────────

def insert_chord(r: RibbonGraph, a: int, b: int) -> RibbonGraph:
    """New edge from the corner after flag a to the corner after flag b (a == b: a loop enclosing nothing)."""
    k = r.k
    x, y = 2 * k, 2 * k + 1
    sigma = list(r.sigma) + [0, 0]
    if a == b:
        sigma[a], sigma[x], sigma[y] = x, y, r.sigma[a]
    else:
        sigma[a], sigma[x] = x, r.sigma[a]
        sigma[b], sigma[y] = y, r.sigma[b]
    return RibbonGraph(tuple(sigma))


def insert_pendant(r: RibbonGraph, a: int) -> RibbonGraph:
    """New edge from the corner after flag a to a new univalent vertex."""
    k = r.k
    x, y = 2 * k, 2 * k + 1
    sigma = list(r.sigma) + [0, 0]
    sigma[a], sigma[x], sigma[y] = x, r.sigma[a], y
    return RibbonGraph(tuple(sigma))


def vertex_splits(r: RibbonGraph):
    """
    Yield every ribbon graph obtained by splitting one vertex into two arcs,
    each keeping at least one old flag, joined by the new edge.
    """
    k = r.k
    x, y = 2 * k, 2 * k + 1
    for cycle in r.vertices():
        d = len(cycle)
        for i in range(d):
            for j in range(i + 1, d):
                first = list(cycle[i + 1: j + 1]) + [x]
                second = list(cycle[j + 1:]) + list(cycle[: i + 1]) + [y]
                sigma = list(r.sigma) + [0, 0]
                for part in (first, second):
                    for p, q in zip(part, part[1:] + part[:1], strict=True):
                        sigma[p] = q
                yield RibbonGraph(tuple(sigma))


def boundary_chords(r: RibbonGraph):
    """Yield every ribbon graph obtained by a chord between two distinct corners of one boundary."""
    for boundary in r.boundaries():
        for i, a in enumerate(boundary):
            for b in boundary[i + 1:]:
                yield insert_chord(r, a, b)


def rgc_delta(r: RibbonGraph) -> RibbonCombo:
    out = RibbonCombo()
    for split in vertex_splits(r):
        out.add_ribbon(split)
    return out


def rgc_delta1(r: RibbonGraph) -> RibbonCombo:
    out = RibbonCombo()
    for chord in boundary_chords(r):
        out.add_ribbon(chord)
    return out


def rgc_differential(r: RibbonGraph) -> RibbonCombo:
    out = rgc_delta(r)
    out.extend(rgc_delta1(r))
    return out


# ─────────────────────────────────────────────────────────────────────────────
# Generation
# ─────────────────────────────────────────────────────────────────────────────

@lru_cache(maxsize=None)
def _all_classes(k: int) -> frozenset[RibbonGraph]:
    """Canonical forms of all connected ribbon graphs with k edges, zero classes included."""
    if k == 1:
        return frozenset(canonicalize_ribbon(r).graph for r in (edge_graph(), loop_graph()))
    found: set[RibbonGraph] = set()
    for count, smaller in enumerate(_all_classes(k - 1), start=1):
        flags = range(2 * smaller.k)
        candidates = [insert_pendant(smaller, a) for a in flags]
        candidates += [insert_chord(smaller, a, b) for a in flags for b in flags if a <= b]
        for r in candidates:
            found.add(canonicalize_ribbon(r).graph)
        if count % _MEMORY_CHECK_EVERY == 0:
            check_memory_budget(f"ribbon generation k={k}")
    logger.debug(f"[Ribbon] k={k}: {len(found)} classes")
    return frozenset(found)


def _check_budget(k: int) -> None:
    limit = get_settings().ribbon_emax
    if k > limit:
        raise BudgetExceededError(f"ribbon slice k={k} exceeds the generation budget (ribbon_emax={limit})")


def rgc_basis(k: int, n: int | None = None, m: int | None = None, g: int | None = None) -> list[RibbonGraph]:
    """
    Nonzero canonical ribbon graphs with k edges, optionally filtered by
    vertex count n, boundary count m and genus g. Sorted by JSON form.

    Raises:
        BudgetExceededError: k above the configured ribbon edge cap.
    """
    if k < 1:
        return []
    _check_budget(k)
    out = []
    for r in _all_classes(k):
        if canonicalize_ribbon(r).is_zero:
            continue
        if n is not None and r.n_vertices() != n:
            continue
        if m is not None and r.n_boundaries() != m:
            continue
        if g is not None and genus(r) != g:
            continue
        out.append(r)
    return sorted(out, key=RibbonGraph.to_json)


@lru_cache(maxsize=None)
def ribbon_slice(k: int, n: int, m: int) -> RibbonSlice:
    if k < 1 or n < 1 or m < 1:
        return RibbonSlice(k, n, m)
    return RibbonSlice(k, n, m, tuple(rgc_basis(k, n, m)))


def brute_force_ribbon_classes(k: int) -> set[RibbonGraph]:
    """Oracle: canonical forms of every connected sigma on 2k flags, zero classes included."""
    found = set()
    for sigma in itertools.permutations(range(2 * k)):
        r = RibbonGraph(sigma)
        if r.is_connected():
            found.add(canonicalize_ribbon(r).graph)
    return found


# ─────────────────────────────────────────────────────────────────────────────
# Matrices and windows
# ─────────────────────────────────────────────────────────────────────────────

def ribbon_operator_matrix(src: RibbonSlice, dst: RibbonSlice, op) -> SparseRationalMatrix:
    columns = [dst.coordinates(op(r)) for r in src.basis]
    return SparseRationalMatrix.from_columns(len(dst), columns)


def delta_matrix(src: RibbonSlice) -> tuple[SparseRationalMatrix, RibbonSlice]:
    dst = ribbon_slice(src.k + 1, src.n + 1, src.m)
    return ribbon_operator_matrix(src, dst, rgc_delta), dst


def delta1_matrix(src: RibbonSlice) -> tuple[SparseRationalMatrix, RibbonSlice]:
    dst = ribbon_slice(src.k + 1, src.n, src.m + 1)
    return ribbon_operator_matrix(src, dst, rgc_delta1), dst


RibbonSliceSource = Callable[[int, int, int], RibbonSlice]


def slices_at_genus(g: int, k: int, slice_of: RibbonSliceSource = ribbon_slice) -> list[RibbonSlice]:
    """Slices of degree k and genus g: n + m = 2 - 2g + k."""
    total = 2 - 2 * g + k
    return [slice_of(k, n, total - n) for n in range(1, total)]


def assemble_ribbon(g: int, window: tuple[int, int], differential: str = "delta+delta1",
                    slice_of: RibbonSliceSource = ribbon_slice) -> ChainComplexWindow:
    """
    The ribbon complex at genus g over degrees (edge counts) window[0]..window[1].

    ``slice_of`` supplies the bases, e.g. a SliceCache's ``ribbon_basis``.
    """
    if differential not in RIBBON_DIFFERENTIALS:
        raise GenerationError(f"unknown ribbon differential {differential!r}, expected one of {RIBBON_DIFFERENTIALS}")
    lo, hi = max(window[0], 1), window[1]
    if hi < lo:
        return ChainComplexWindow(lo, lo - 1, {})
    blocks = {k: slices_at_genus(g, k, slice_of) for k in range(lo, hi + 1)}
    dims = {k: sum(len(sl) for sl in blocks[k]) for k in blocks}

    ops = []
    if differential in ("delta", "delta+delta1"):
        ops.append(delta_matrix)
    if differential in ("delta1", "delta+delta1"):
        ops.append(delta1_matrix)

    differentials = {}
    for k in range(lo, hi):
        dst_index = {(sl.n, sl.m): j for j, sl in enumerate(blocks[k + 1])}
        parts = {}
        for i, src in enumerate(blocks[k]):
            for op in ops:
                matrix, dst = op(src)
                j = dst_index.get((dst.n, dst.m))
                if j is None:
                    continue
                parts[(j, i)] = parts[(j, i)] + matrix if (j, i) in parts else matrix
        differentials[k] = block_matrix([len(sl) for sl in blocks[k + 1]], [len(sl) for sl in blocks[k]], parts)

    logger.info(f"[Ribbon] genus {g} {differential} degrees {lo}..{hi}: dims {dims}")
    return ChainComplexWindow(lo, hi, dims, differentials, blocks, closed_below=window[0] <= 1)
