"""
Total complexes at fixed loop order, assembled over a degree window.

At loop order b = e - v the degree of a slice depends only on v (and s for
hairy graphs), so each degree is a finite direct sum of slices and the
differential is one block matrix per degree. Bases and blocks are fetched
through a SliceCache when one is given and fanned out over the worker pool.
"""

from collections.abc import Callable, Iterable
from functools import partial
from typing import TYPE_CHECKING

from graphcx.complexes.differentials import differential
from graphcx.complexes.generation import generate_basis
from graphcx.complexes.slices import ComplexSlice
from graphcx.core.errors import FamilyError, GenerationError
from graphcx.core.graph import FamilyTag
from graphcx.core.types import FamilyKind
from graphcx.linalg.homology import ChainComplexWindow
from graphcx.linalg.sparse import SparseRationalMatrix, block_matrix
from graphcx.pipeline.jobs import run_parallel
from graphcx.utils.logger import logger

if TYPE_CHECKING:
    from graphcx.storage.cache import SliceCache

DIFFERENTIALS = ("d", "d0", "d+h")

SliceMap = Callable[[ComplexSlice, ComplexSlice], SparseRationalMatrix | None]


def _vertex_count(family: FamilyTag, b: int, k: int, s: int) -> int:
    """v of the slice in degree k at loop order b (s counts hairs, 0 otherwise)."""
    n = family.n
    return n - (1 - n) * b - k - (s if family.hairy else 0)


def _families(family: FamilyTag, differential_name: str, s_values: Iterable[int] | None) -> list[FamilyTag]:
    if differential_name == "d+h":
        if not family.hairy:
            raise FamilyError("d+h needs the hairy family")
        return [family.with_s(s) for s in (s_values or [family.s])]
    if differential_name == "d0" and (
        family.kind not in (FamilyKind.ORIENTED, FamilyKind.SOURCED) or family.s is None
    ):
        raise FamilyError("d0 needs an oriented or sourced family with fixed s")
    if differential_name == "d" and family.kind in (FamilyKind.ORIENTED, FamilyKind.SOURCED):
        return [family.with_s(None)]
    return [family]


def _slice_keys(families: list[FamilyTag], b: int, k: int) -> list[tuple[FamilyTag, int, int]]:
    keys = []
    for fam in families:
        v = _vertex_count(fam, b, k, fam.s or 0)
        if v < 1 or v + b < 0:
            continue
        keys.append((fam, v, v + b))
    return keys


def _load_slice(store: "SliceCache | None", key: tuple[FamilyTag, int, int]) -> ComplexSlice:
    return store.basis(*key) if store is not None else generate_basis(*key)


def slices_in_degree(families: list[FamilyTag], b: int, k: int, store: "SliceCache | None" = None,
                     jobs: int = 1) -> list[ComplexSlice]:
    return list(run_parallel(partial(_load_slice, store), _slice_keys(families, b, k), jobs))


def hairy_degree_range(family: FamilyTag, b: int, s_values: Iterable[int]) -> tuple[int, int]:
    """Degrees where hairy slices at loop order b can be nonzero (trivalence gives v <= 2b + s)."""
    n = family.n
    c = n - (1 - n) * b
    s_values = list(s_values)
    return c - 2 * b - 2 * max(s_values), c - 1 - min(s_values)


def _slice_key(sl: ComplexSlice) -> tuple:
    return sl.family, sl.v, sl.e


def _operator_names(src: ComplexSlice, differential_name: str) -> list[str]:
    if differential_name != "d+h":
        return [differential_name]
    if src.family.s and src.family.s > 1:
        return ["d", "h"]
    return ["d"]


def _operator_block(store: "SliceCache | None",
                    item: tuple[str, ComplexSlice]) -> tuple[SparseRationalMatrix, ComplexSlice]:
    name, src = item
    return store.differential(name, src) if store is not None else differential(name, src)


def assemble_total(family: FamilyTag, b: int, window: tuple[int, int], differential_name: str = "d",
                   s_values: Iterable[int] | None = None, store: "SliceCache | None" = None,
                   jobs: int = 1) -> ChainComplexWindow:
    """
    The total complex at loop order b restricted to degrees window[0]..window[1].

    Args:
        family: Family; for "d0" its s is the fixed source count.
        b: Loop order e - v.
        window: Inclusive degree range.
        differential_name: "d", "d0" or "d+h" (hairy, summed over ``s_values``).
        s_values: Hair counts for "d+h".
        store: Cache for bases and operator matrices; None computes in memory.
        jobs: Worker processes for slices and blocks.
    """
    if differential_name not in DIFFERENTIALS:
        raise FamilyError(f"unknown differential {differential_name!r}, expected one of {DIFFERENTIALS}")
    lo, hi = window
    families = _families(family, differential_name, s_values)
    if hi < lo:
        return ChainComplexWindow(lo, lo - 1, {})

    blocks = {k: slices_in_degree(families, b, k, store, jobs) for k in range(lo, hi + 1)}
    dims = {k: sum(len(sl) for sl in blocks[k]) for k in blocks}

    items = [
        (k, i, name, src)
        for k in range(lo, hi)
        for i, src in enumerate(blocks[k])
        for name in _operator_names(src, differential_name)
    ]
    results = run_parallel(partial(_operator_block, store), [(name, src) for _, _, name, src in items], jobs)
    parts: dict[int, dict] = {k: {} for k in range(lo, hi)}
    for (k, i, _, _), (matrix, dst) in zip(items, results, strict=True):
        dst_index = {_slice_key(sl): j for j, sl in enumerate(blocks[k + 1])}
        j = dst_index.get(_slice_key(dst))
        if j is None:
            if matrix.is_zero():
                continue
            raise GenerationError(f"{dst.header()} is missing from degree {k + 1} of the window")
        parts[k][(j, i)] = parts[k][(j, i)] + matrix if (j, i) in parts[k] else matrix

    differentials = {
        k: block_matrix([len(sl) for sl in blocks[k + 1]], [len(sl) for sl in blocks[k]], parts[k])
        for k in range(lo, hi)
    }

    closed_above = all(_vertex_count(f, b, hi + 1, f.s or 0) < 1 for f in families)
    closed_below = family.hairy and all(
        _vertex_count(f, b, lo - 1, f.s or 0) > 2 * b + (f.s or 0) for f in families
    )
    logger.info(f"[Total] {family.label} n={family.n} b={b} {differential_name} degrees {lo}..{hi}: dims {dims}")
    return ChainComplexWindow(lo, hi, dims, differentials, blocks, closed_below, closed_above)


def assemble_map(src: ChainComplexWindow, dst: ChainComplexWindow, shift: int,
                 slice_map: SliceMap) -> dict[int, SparseRationalMatrix]:
    """
    Block maps between two assembled windows.

    ``slice_map(a, b)`` returns the matrix from slice a to slice b, or None
    when the map has no component there.
    """
    maps = {}
    for k in src.degrees:
        if k + shift not in dst.blocks:
            continue
        parts = {}
        for i, a in enumerate(src.blocks.get(k, [])):
            for j, b in enumerate(dst.blocks[k + shift]):
                matrix = slice_map(a, b)
                if matrix is not None and not matrix.is_zero():
                    parts[(j, i)] = matrix
        maps[k] = block_matrix(
            [len(sl) for sl in dst.blocks[k + shift]], [len(sl) for sl in src.blocks.get(k, [])], parts
        )
    return maps


def projection_matrix(src: ComplexSlice, dst: ComplexSlice) -> SparseRationalMatrix:
    """Restriction of sourced graphs to the acyclic ones: identity on shared generators, zero elsewhere."""
    columns = [{dst.index[g]: 1} if g in dst else {} for g in src.basis]
    return SparseRationalMatrix.from_columns(len(dst), columns)


def projection_slice_map(a: ComplexSlice, b: ComplexSlice) -> SparseRationalMatrix | None:
    if (a.v, a.e) != (b.v, b.e) or a.family.s != b.family.s:
        return None
    return projection_matrix(a, b)
