"""
Exact checks behind ``graphcx verify``.

Every check walks a grid of slices, stops at the first counterexample and
returns a CheckResult; nothing here raises on a failed identity so the CLI
can report it and choose the exit code.
"""

import random
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from graphcx.complexes.differentials import apply_d, apply_d0, apply_h, apply_to_combo, d_destination
from graphcx.complexes.generation import generate_basis
from graphcx.complexes.total import (
    assemble_map,
    assemble_total,
    hairy_degree_range,
    projection_slice_map,
)
from graphcx.core.canonical import LinearCombination, canonicalize
from graphcx.core.errors import VerificationError
from graphcx.core.graph import FamilyTag, LabeledDiGraph, count_sources, degree, is_admissible
from graphcx.core.types import FamilyKind
from graphcx.forest.forests import (
    brute_force_cycled_forests,
    brute_force_double_hair_forests,
    brute_force_spanning_forests,
    cycled_forests,
    double_hair_forests,
    spanning_forests,
)
from graphcx.forest.phi import (
    ARROW_PART,
    CYCLE_PART,
    DOUBLE_PART,
    G_map,
    chain_map_defect,
    contraction_parts,
    fixed_source_defect,
    g_matrix,
    phi_combo,
    phi_expanded,
    phi_matrix,
    phi_slice_map,
    phi_tau_expanded,
    phi_target_slice,
    target_family,
)
from graphcx.forest.skeleton import bivalent_targets, hairy_skeleton
from graphcx.linalg.homology import ChainComplexWindow, QuasiIsoReport, homology_dims, verify_quasi_iso
from graphcx.linalg.sparse import SparseRationalMatrix
from graphcx.pipeline.jobs import JobSpec, run_parallel
from graphcx.ribbon.complex import rgc_basis, rgc_delta, rgc_delta1
from graphcx.ribbon.fmap import F_chain_sides, F_map, compare_up_to_sign, is_trivalent
from graphcx.ribbon.ribbon import RibbonCombo, RibbonGraph
from graphcx.storage.cache import SliceCache
from graphcx.utils.logger import logger

VERIFY_TARGETS = (
    "d2",
    "chainmap-phi",
    "chainmap-F",
    "quasi-iso-phi",
    "quasi-iso-p",
    "rgc-d2",
    "lemma-identities",
)

Slice = tuple[FamilyTag, int, int]

# largest edge count whose ribbon generators are checked
RGC_CHECK_KMAX = 4


@dataclass
class CheckResult:
    name: str
    ok: bool = True
    checked: int = 0
    details: dict[str, Any] = field(default_factory=dict)
    counterexample: dict[str, Any] | None = None

    def fail(self, **counterexample: Any) -> "CheckResult":
        self.ok = False
        self.counterexample = counterexample
        logger.warning(f"[Verify] {self.name} failed: {counterexample}")
        return self

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "checked": self.checked,
            "details": self.details,
            "counterexample": self.counterexample,
        }


def _then(first: Callable[[LabeledDiGraph], LinearCombination],
          second: Callable[[LabeledDiGraph], LinearCombination]) -> Callable[[LabeledDiGraph], LinearCombination]:
    return lambda g: apply_to_combo(second, first(g))


# ─────────────────────────────────────────────────────────────────────────────
# Squares of differentials
# ─────────────────────────────────────────────────────────────────────────────

def square_identities(tag: FamilyTag) -> dict[str, Callable[[LabeledDiGraph], LinearCombination]]:
    """Operators that must vanish on every generator of the family."""
    d = lambda g: apply_d(g, tag)  # noqa: E731
    ops = {"d^2": _then(d, lambda g: apply_d(g, d_destination(tag)))}
    if tag.kind in (FamilyKind.ORIENTED, FamilyKind.SOURCED) and tag.s is not None:
        d0 = lambda g: apply_d0(g, tag)  # noqa: E731
        ops["d0^2"] = _then(d0, d0)
    if tag.hairy and tag.s and tag.s >= 1:
        lower = tag.with_s(tag.s - 1)
        h = lambda g: apply_h(g, tag)  # noqa: E731
        if tag.s >= 2:
            ops["h^2"] = _then(h, lambda g: apply_h(g, lower))

        def anticommutator(g: LabeledDiGraph) -> LinearCombination:
            dh = apply_to_combo(lambda x: apply_d(x, lower), h(g))
            hd = apply_to_combo(lambda x: apply_h(x, tag), d(g))
            return dh + hd

        ops["dh+hd"] = anticommutator
    return ops


def d_squared_slice(item: Slice) -> dict | None:
    """First failing identity on one slice, or None."""
    tag, v, e = item
    sl = generate_basis(tag, v, e)
    ops = square_identities(tag)
    for g in sl.basis:
        for name, op in ops.items():
            residue = op(g)
            if not residue.is_zero():
                return {"identity": name, "family": tag.label, "n": tag.n, "s": tag.s, "graph": g.to_dict()}
    return None


def verify_d2(spec: JobSpec) -> CheckResult:
    result = CheckResult("d2")
    grid = spec.slice_grid()
    if spec.kind in (FamilyKind.ORIENTED, FamilyKind.SOURCED):
        grid += [(tag.with_s(s), v, e) for tag, v, e in grid for s in range(1, spec.smax + 1)]
    for item, failure in zip(grid, run_parallel(d_squared_slice, grid, spec.jobs), strict=True):
        if failure is not None:
            return result.fail(**failure)
        result.checked += len(generate_basis(*item))
    return result


# ─────────────────────────────────────────────────────────────────────────────
# Forest map
# ─────────────────────────────────────────────────────────────────────────────

def _hairy_grid(spec: JobSpec) -> list[Slice]:
    if spec.kind is not FamilyKind.HAIRY:
        spec = JobSpec(spec.command, FamilyKind.HAIRY.value, spec.n, spec.vmax, spec.emax, spec.smax)
    return spec.slice_grid()


def verify_chainmap_phi(spec: JobSpec) -> CheckResult:
    """Phi((d + h) g) = d Phi(g), Phi(d g) = d0 Phi(g) and the degree shift on every hairy generator."""
    result = CheckResult("chainmap-phi")
    for tag, v, e in _hairy_grid(spec):
        for g in generate_basis(tag, v, e).basis:
            result.checked += 1
            if not chain_map_defect(g, tag.n).is_zero():
                return result.fail(identity="Phi(d+h) = d Phi", n=tag.n, graph=g.to_dict())
            if not fixed_source_defect(g, tag.n).is_zero():
                return result.fail(identity="Phi d = d0 Phi", n=tag.n, graph=g.to_dict())
            for o in phi_expanded(g, tag.n):
                if degree(o, target_family(tag.n)) != degree(g, tag) + 1:
                    return result.fail(identity="deg Phi = deg + 1", n=tag.n, graph=g.to_dict())
    return result


def lemma_identities_slice(tag: FamilyTag, v: int, e: int) -> dict | None:
    """Split d Phi(g) by edge origin and compare each part; check the forest enumerations."""
    for g in generate_basis(tag, v, e).basis:
        n = tag.n
        parts = contraction_parts(g, n)
        if not parts[CYCLE_PART].is_zero():
            return {"identity": "cycle part vanishes", "graph": g.to_dict()}
        if parts[ARROW_PART] != phi_combo(apply_d(g, tag), n):
            return {"identity": "arrow part = Phi(d g)", "graph": g.to_dict()}
        if parts[DOUBLE_PART] != phi_combo(apply_h(g, tag), n):
            return {"identity": "double part = Phi(h g)", "graph": g.to_dict()}
        if set(spanning_forests(g)) != set(brute_force_spanning_forests(g)):
            return {"identity": "spanning forests", "graph": g.to_dict()}
        if {f.edges for f in double_hair_forests(g)} != set(brute_force_double_hair_forests(g)):
            return {"identity": "double-hair forests", "graph": g.to_dict()}
        if {f.edges for f in cycled_forests(g)} != set(brute_force_cycled_forests(g)):
            return {"identity": "cycled forests", "graph": g.to_dict()}
    return None


def transpose_consistency(o: LabeledDiGraph, n: int) -> dict | None:
    """
    G(o) != 0 exactly when o has e - v + s bivalent targets and hs(o) is a
    nonzero hairy graph, and that count holds exactly when o is the image of
    its hairy skeleton under some spanning forest.
    """
    s = count_sources(o)
    expected = o.e - o.v + s
    count = len(bivalent_targets(o))
    term = G_map(o, n)
    if not term.is_zero and count != expected:
        return {"identity": "G != 0 => bivalent targets", "graph": o.to_dict()}
    gamma = hairy_skeleton(o)
    if count == expected and _nonzero_skeleton(gamma, n - 1) and term.is_zero:
        return {"identity": "bivalent targets => G != 0", "graph": o.to_dict()}
    reachable = False
    if gamma is not None:
        images = {phi_tau_expanded(gamma, f, n - 1).graph for f in spanning_forests(gamma)}
        reachable = o in images
    if (count == expected and gamma is not None) != reachable:
        return {"identity": "bivalent targets <=> forest image", "graph": o.to_dict()}
    return None


def _nonzero_skeleton(gamma: LabeledDiGraph | None, n: int) -> bool:
    if gamma is None or gamma.s == 0:
        return False
    family = FamilyTag(FamilyKind.HAIRY, n, gamma.s)
    return is_admissible(gamma, family) and not canonicalize(gamma, family.rules).is_zero


def pairing_mismatch(g_mat: SparseRationalMatrix, phi_t: SparseRationalMatrix) -> tuple[int, int] | None:
    """
    First entry where the matrix of G and the transposed matrix of Phi disagree.

    Both must have the same support and signs. An entry of Phi may be a
    positive integer multiple of the G entry: the forests of hs(o) swapped by
    its automorphisms all give o with the same sign.
    """
    if g_mat.shape != phi_t.shape:
        return (-1, -1)
    keys = {(r, c) for r, c, _ in g_mat.entries} | {(r, c) for r, c, _ in phi_t.entries}
    for key in sorted(keys):
        ratio = phi_t[key] / g_mat[key] if g_mat[key] else Fraction(0)
        if ratio <= 0 or ratio.denominator != 1:
            return key
    return None


def verify_lemma_identities(spec: JobSpec) -> CheckResult:
    result = CheckResult("lemma-identities")
    for tag, v, e in _hairy_grid(spec):
        failure = lemma_identities_slice(tag, v, e)
        if failure is not None:
            return result.fail(**failure)
        src = generate_basis(tag, v, e)
        result.checked += len(src)
        if not src.basis:
            continue
        dst = phi_target_slice(src)
        mismatch = pairing_mismatch(g_matrix(dst, src), phi_matrix(src, dst).transpose())
        if mismatch is not None:
            return result.fail(
                identity="matrix of G = transpose of Phi", family=tag.label, v=v, e=e, s=tag.s, entry=list(mismatch)
            )

    oriented_n = spec.n + 1
    for v in range(1, spec.vmax + 1):
        for e in range(max(v - 1, 0), spec.emax + 1):
            for o in generate_basis(FamilyTag(FamilyKind.ORIENTED, oriented_n), v, e).basis:
                failure = transpose_consistency(o, oriented_n)
                if failure is not None:
                    return result.fail(**failure)
                result.checked += 1
    return result


# ─────────────────────────────────────────────────────────────────────────────
# Quasi-isomorphisms
# ─────────────────────────────────────────────────────────────────────────────

def _report_details(report: QuasiIsoReport, src: ChainComplexWindow, dst: ChainComplexWindow) -> dict:
    return {
        "records": [r.to_dict() for r in report.records],
        "euler_src": src.euler_characteristic(),
        "euler_dst": dst.euler_characteristic(),
    }


def _check_duality(window: ChainComplexWindow, exact: bool) -> bool:
    """Homology of the dual complex matches degree-wise after negation."""
    ours = homology_dims(window, exact, check=False)
    dual = homology_dims(window.dual(), exact, check=False)
    return all(dual.homology(-k) == ours.homology(k) for k in window.degrees)


def _quasi_iso(name: str, maps, src: ChainComplexWindow, dst: ChainComplexWindow, shift: int,
               exact: bool, result: CheckResult) -> bool:
    try:
        report = verify_quasi_iso(maps, src, dst, shift, exact)
    except VerificationError as e:
        result.fail(identity=f"{name}: chain map", message=e.message, where=e.counterexample)
        return False
    result.details[name] = _report_details(report, src, dst)
    result.checked += len(report.records)
    failure = report.first_failure()
    if failure is not None:
        result.fail(identity=f"{name}: homology", record=failure.to_dict())
        return False
    for w in (src, dst):
        if not _check_duality(w, exact):
            result.fail(identity=f"{name}: duality")
            return False
        summary = homology_dims(w, exact, check=False)
        if w.closed_below and w.closed_above and summary.euler_characteristic() != w.euler_characteristic():
            result.fail(identity=f"{name}: Euler characteristic")
            return False
    return True


def target_window(lo: int, hi: int, shift: int) -> tuple[int, int]:
    """
    Destination degrees for a source window lo..hi under a map of degree shift.

    One extra degree on each side keeps every image degree away from the
    open ends of the destination window.
    """
    return lo + shift - 1, hi + shift + 1


def slice_store(spec: JobSpec) -> SliceCache | None:
    return SliceCache(spec.cache) if spec.cache is not None else None


def _loop_orders(spec: JobSpec) -> list[int]:
    """Loop orders whose trivalent hairy graphs fit in the vertex and edge bounds."""
    if spec.loop is not None:
        return [spec.loop]
    return [b for b in range(0, spec.emax + 1) if 2 * b + spec.smax <= spec.vmax and 3 * b + spec.smax <= spec.emax]


def verify_quasi_iso_phi(spec: JobSpec) -> CheckResult:
    """
    Per hair count s: (hairy, d) against (oriented with s sources, d0), and
    on the total complex (hairy, d + h) against (oriented, d), both through Phi.
    """
    result = CheckResult("quasi-iso-phi")
    store = slice_store(spec)
    n = spec.n
    loops = _loop_orders(spec)
    s_values = list(range(1, spec.smax + 1))
    for b in loops:
        for s in s_values:
            hairy = FamilyTag(FamilyKind.HAIRY, n, s)
            lo, hi = spec.window or hairy_degree_range(hairy, b, [s])
            src = assemble_total(hairy, b, (lo, hi), "d", store=store, jobs=spec.jobs)
            dst = assemble_total(target_family(n, s), b, target_window(lo, hi, 1), "d0",
                                 store=store, jobs=spec.jobs)
            maps = assemble_map(src, dst, 1, phi_slice_map)
            if not _quasi_iso(f"b={b} s={s} fixed sources", maps, src, dst, 1, spec.exact, result):
                return result

        hairy = FamilyTag(FamilyKind.HAIRY, n, s_values[0])
        lo, hi = spec.window or hairy_degree_range(hairy, b, s_values)
        src = assemble_total(hairy, b, (lo, hi), "d+h", s_values, store=store, jobs=spec.jobs)
        dst = assemble_total(target_family(n), b, target_window(lo, hi, 1), "d", store=store, jobs=spec.jobs)
        maps = assemble_map(src, dst, 1, phi_slice_map)
        if not _quasi_iso(f"b={b} total", maps, src, dst, 1, spec.exact, result):
            return result
    return result


def verify_quasi_iso_p(spec: JobSpec) -> CheckResult:
    """The projection from sourced to oriented graphs with s sources and d0."""
    result = CheckResult("quasi-iso-p")
    store = slice_store(spec)
    n = spec.n
    loops = _loop_orders(spec)
    for b in loops:
        for s in range(1, spec.smax + 1):
            top = n - (1 - n) * b - 1
            # the destination reaches one degree lower, i.e. one more vertex
            lo, hi = spec.window or (top - spec.vmax + 2, top)
            src = assemble_total(FamilyTag(FamilyKind.SOURCED, n, s), b, (lo, hi), "d0",
                                 store=store, jobs=spec.jobs)
            dst = assemble_total(FamilyTag(FamilyKind.ORIENTED, n, s), b, target_window(lo, hi, 0), "d0",
                                 store=store, jobs=spec.jobs)
            maps = assemble_map(src, dst, 0, projection_slice_map)
            if not _quasi_iso(f"b={b} s={s}", maps, src, dst, 0, spec.exact, result):
                return result
    return result


# ─────────────────────────────────────────────────────────────────────────────
# Ribbon graphs
# ─────────────────────────────────────────────────────────────────────────────

def _ribbon_apply(op: Callable[[RibbonGraph], RibbonCombo], combo: RibbonCombo) -> RibbonCombo:
    out = RibbonCombo()
    for r, coeff in combo.items():
        out.extend(op(r), coeff)
    return out


def ribbon_square_identities(r: RibbonGraph) -> dict[str, RibbonCombo]:
    delta, delta1 = rgc_delta(r), rgc_delta1(r)
    return {
        "delta^2": _ribbon_apply(rgc_delta, delta),
        "delta1^2": _ribbon_apply(rgc_delta1, delta1),
        "delta delta1 + delta1 delta": _ribbon_apply(rgc_delta, delta1) + _ribbon_apply(rgc_delta1, delta),
    }


def verify_rgc_d2(spec: JobSpec) -> CheckResult:
    result = CheckResult("rgc-d2")
    for k in range(1, min(spec.emax - 1, RGC_CHECK_KMAX) + 1):
        for r in rgc_basis(k):
            for name, residue in ribbon_square_identities(r).items():
                if not residue.is_zero():
                    return result.fail(identity=name, ribbon=r.to_dict())
            result.checked += 1
    return result


def random_topological_orders(g: LabeledDiGraph, rng: random.Random, count: int) -> list[list[int]]:
    """Random topological orders: repeatedly pick a random vertex with no remaining in-edges."""
    orders = []
    for _ in range(count):
        indegree = list(g.in_degrees)
        ready = [x for x in range(g.v) if indegree[x] == 0]
        order = []
        while ready:
            x = ready.pop(rng.randrange(len(ready)))
            order.append(x)
            for t, h in g.edges:
                if t == x:
                    indegree[h] -= 1
                    if indegree[h] == 0:
                        ready.append(h)
        orders.append(order)
    return orders


def verify_chainmap_F(spec: JobSpec) -> CheckResult:
    """
    F against the vertex splitting on oriented graphs at n = 1: the full
    identity with delta + Delta1 and the graded one with delta, each exact or
    up to one global sign, and independence of the topological order.
    """
    result = CheckResult("chainmap-F")
    rng = random.Random(spec.seed)
    tag = FamilyTag(FamilyKind.ORIENTED, 1)
    signs: dict[str, set[int]] = {"full": set(), "graded": set()}
    for v in range(1, spec.vmax + 1):
        for e in range(max(v - 1, 0), spec.emax + 1):
            for g in generate_basis(tag, v, e).basis:
                result.checked += 1
                if is_trivalent(g):
                    reference = F_map(g)
                    for order in random_topological_orders(g, rng, 3):
                        if F_map(g, order) != reference:
                            return result.fail(identity="order independence", graph=g.to_dict(), order=order)
                for mode, graded in (("full", False), ("graded", True)):
                    lhs, rhs = F_chain_sides(g, graded)
                    sign = compare_up_to_sign(lhs, rhs)
                    if sign is None:
                        return result.fail(identity=f"F chain map ({mode})", graph=g.to_dict())
                    if sign:
                        signs[mode].add(sign)
    for mode, seen in signs.items():
        if len(seen) > 1:
            return result.fail(identity=f"F chain map ({mode}): inconsistent global sign")
        result.details[mode] = "exact" if seen in ({1}, set()) else "up to a global sign"
    return result


CHECKS: dict[str, Callable[[JobSpec], CheckResult]] = {
    "d2": verify_d2,
    "chainmap-phi": verify_chainmap_phi,
    "chainmap-F": verify_chainmap_F,
    "quasi-iso-phi": verify_quasi_iso_phi,
    "quasi-iso-p": verify_quasi_iso_p,
    "rgc-d2": verify_rgc_d2,
    "lemma-identities": verify_lemma_identities,
}


def run_check(target: str, spec: JobSpec) -> CheckResult:
    logger.info(f"[Verify] {target} family={spec.family} n={spec.n} vmax={spec.vmax} emax={spec.emax}")
    result = CHECKS[target](spec)
    logger.info(f"[Verify] {target}: {'pass' if result.ok else 'FAIL'} after {result.checked} checks")
    return result
