"""
graphcx command-line interface.

Exit codes: 0 success, 1 a verification found a counterexample, 2 usage,
malformed input or unsupported family, 3 budget exceeded.
"""

import json
import sys
from collections.abc import Callable
from functools import partial, wraps
from pathlib import Path
from typing import Any

import click
from rich.console import Console
from rich.table import Table

from graphcx.complexes.differentials import differential
from graphcx.complexes.generation import generate_basis
from graphcx.complexes.total import DIFFERENTIALS, assemble_total, hairy_degree_range
from graphcx.config import get_settings
from graphcx.core.errors import (
    BudgetExceededError,
    FamilyError,
    GraphComplexError,
    MalformedGraphError,
)
from graphcx.core.graph import FamilyTag, LabeledDiGraph, is_acyclic, is_admissible, slice_degree
from graphcx.core.types import FamilyKind
from graphcx.forest.phi import phi as phi_skeletons
from graphcx.forest.phi import phi_expanded, target_family
from graphcx.linalg.homology import ChainComplexWindow, homology_dims
from graphcx.linalg.rank import rank
from graphcx.pipeline.jobs import FAMILY_NAMES, RIBBON, JobSpec, run_parallel
from graphcx.pipeline.verify import VERIFY_TARGETS, run_check
from graphcx.ribbon.complex import RIBBON_DIFFERENTIALS, assemble_ribbon, ribbon_slice
from graphcx.ribbon.fmap import F_SOURCE_N, F_map
from graphcx.storage.cache import SliceCache, write_atomic
from graphcx.utils.hashing import generate_file_digest
from graphcx.utils.logger import logger, set_level

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

console = Console()


def _default_emax(family: str, emax: int | None) -> int:
    if emax is not None:
        return emax
    return min(get_settings().ribbon_emax, 4) if family == RIBBON else min(get_settings().emax, 8)


def _parse_window(raw: str | None) -> tuple[int, int] | None:
    if raw is None:
        return None
    try:
        lo, hi = (int(part) for part in raw.split(":"))
    except ValueError:
        raise click.BadParameter(f"expected lo:hi, got {raw!r}", param_hint="--degree-window") from None
    if hi < lo:
        raise click.BadParameter(f"empty window {raw!r}", param_hint="--degree-window")
    return lo, hi


def _exit_on_errors(fn: Callable[..., int | None]) -> Callable[..., None]:
    """Run a command body and turn library errors into exit codes."""

    @wraps(fn)
    def wrapper(*args: Any, **kwargs: Any) -> None:
        try:
            code = fn(*args, **kwargs) or EXIT_OK
        except BudgetExceededError as e:
            console.print(f"[red]budget exceeded:[/red] {e.message}")
            code = EXIT_BUDGET
        except (MalformedGraphError, FamilyError) as e:
            console.print(f"[red]error:[/red] {e.message}")
            code = EXIT_USAGE
        except GraphComplexError as e:
            console.print(f"[red]failed:[/red] {e.message}")
            code = EXIT_FAILED
        sys.exit(code)

    return wrapper


def _write_out(out: Path | None, payload: Any) -> None:
    if out is not None:
        write_atomic(out, json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n")
        logger.info(f"[CLI] wrote {out}")


def _read_graphs(path: Path) -> list[LabeledDiGraph]:
    graphs = []
    for number, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            graphs.append(LabeledDiGraph.from_json(line))
        except (json.JSONDecodeError, KeyError, TypeError) as e:
            raise MalformedGraphError(f"{path}:{number}: not a graph ({e})") from e
    return graphs


def _combo_rows(combo: dict) -> list[tuple[str, str]]:
    return sorted((str(coeff), g.to_json()) for g, coeff in combo.items())


def _print_combo(title: str, combo: dict) -> None:
    table = Table(title=title)
    table.add_column("coeff", justify="right")
    table.add_column("graph")
    for coeff, text in _combo_rows(combo):
        table.add_row(coeff, text)
    console.print(table if combo else f"{title}: 0")


# Shared options
def _bound_options(fn: Callable) -> Callable:
    settings = get_settings()
    options = [
        click.option("--family", type=click.Choice(FAMILY_NAMES), default=FamilyKind.HAIRY.value, show_default=True),
        click.option("--n", "n", type=int, default=2, show_default=True, help="Degree parameter."),
        click.option("--vmax", type=int, default=min(settings.vmax, 6), show_default=True),
        click.option("--emax", type=int, default=None, help="Largest edge count (default 8, 4 for ribbon graphs)."),
        click.option("--smax", type=int, default=3, show_default=True, help="Largest hair or source count."),
        click.option("--cache", type=click.Path(path_type=Path), default=None, help="Cache directory."),
        click.option("--jobs", type=int, default=settings.jobs, show_default=True),
        click.option("--out", type=click.Path(path_type=Path), default=None, help="Write a JSON report here."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


@click.group()
@click.option("--verbose", is_flag=True, help="Log at DEBUG level.")
def main(verbose: bool) -> None:
    """Graph complexes, the forest map Phi and the ribbon map F."""
    if verbose:
        set_level("DEBUG")


# ─────────────────────────────────────────────────────────────────────────────
# gen / diff
# ─────────────────────────────────────────────────────────────────────────────

def _gen_graph_slice(store: SliceCache, key: tuple[FamilyTag, int, int]) -> dict:
    sl = store.basis(*key)
    return {**sl.header(), "sha256": generate_file_digest(store.slice_path(*key, "basis.jsonl"))}


def _gen_ribbon_slice(store: SliceCache, key: tuple[int, int, int]) -> dict | None:
    k, vertices, boundaries = key
    if (2 - vertices + k - boundaries) % 2 or 2 - vertices + k - boundaries < 0:
        return None
    sl = store.ribbon_basis(k, vertices, boundaries)
    return {**sl.header(), "sha256": generate_file_digest(store.ribbon_path(k, vertices, boundaries, "basis.jsonl"))}


@main.command()
@_bound_options
@click.option("--v", "v_only", type=int, default=None, help="Single slice: vertex count (edge count for ribbon).")
@click.option("--e", "e_only", type=int, default=None, help="Single slice: edge count.")
@_exit_on_errors
def gen(family: str, n: int, vmax: int, emax: int, smax: int, cache: Path | None, jobs: int,
        out: Path | None, v_only: int | None, e_only: int | None) -> int:
    """Generate slice bases and store them in the cache."""
    emax = _default_emax(family, emax)
    spec = JobSpec("gen", family, n, vmax, emax, smax, cache=cache, jobs=jobs, out=out)
    store = SliceCache(cache or get_settings().cache_dir)

    table = Table(title=f"{family} bases")
    if family == RIBBON:
        columns = ("k", "n", "m", "genus", "size")
        ks = [v_only] if v_only is not None else range(1, emax + 1)
        keys = [(k, vertices, boundaries) for k in ks for vertices in range(1, k + 2) for boundaries in range(1, k + 2)]
        rows = [row for row in run_parallel(partial(_gen_ribbon_slice, store), keys, jobs) if row is not None]
    else:
        columns = ("family", "v", "e", "s", "degree", "size")
        grid = spec.slice_grid()
        if v_only is not None or e_only is not None:
            grid = [(t, v, e) for t, v, e in grid if v_only in (None, v) and e_only in (None, e)]
            if not grid and v_only is not None and e_only is not None:
                grid = [(t, v_only, e_only) for t in spec.tags()]
        rows = list(run_parallel(partial(_gen_graph_slice, store), grid, jobs))
    for col in columns:
        table.add_column(col, justify="right")
    for row in rows:
        table.add_row(*(str(row[c]) for c in columns))
    console.print(table)
    _write_out(out, rows)
    return EXIT_OK



@main.command()
@_bound_options
@click.option("--v", "v", type=int, required=True)
@click.option("--e", "e", type=int, required=True)
@click.option("--s", "s", type=int, default=None, help="Hair count, or pinned source count.")
@_exit_on_errors
def diff(family: str, n: int, vmax: int, emax: int, smax: int, cache: Path | None, jobs: int,
         out: Path | None, v: int, e: int, s: int | None) -> int:
    """Matrices of the differentials out of one slice, with their ranks."""
    emax = _default_emax(family, emax)
    JobSpec("diff", family, n, vmax, emax, smax, cache=cache, jobs=jobs, out=out)
    if family == RIBBON:
        raise FamilyError("use `homology --family ribbon` for the ribbon complex")
    tag = FamilyTag(FamilyKind(family), n, s if s is not None else (1 if family == FamilyKind.HAIRY.value else None))
    store = SliceCache(cache) if cache is not None else None
    src = store.basis(tag, v, e) if store is not None else generate_basis(tag, v, e)
    ops = ["d"]
    if tag.s is not None and tag.kind in (FamilyKind.ORIENTED, FamilyKind.SOURCED):
        ops.append("d0")
    if tag.hairy and tag.s >= 1:
        ops.append("h")

    table = Table(title=f"differentials out of {tag.label} n={n} v={v} e={e} s={tag.s}")
    for col in ("operator", "target", "shape", "nnz", "rank"):
        table.add_column(col)
    report = {"source": src.header(), "operators": []}
    for name in ops:
        matrix, dst = store.differential(name, src) if store is not None else differential(name, src)
        r = rank(matrix, get_settings().exact)
        table.add_row(name, json.dumps(dst.header()), f"{matrix.rows}x{matrix.cols}", str(matrix.nnz), str(r))
        report["operators"].append({"name": name, "target": dst.header(), "nnz": matrix.nnz, "rank": r})
    console.print(table)
    _write_out(out, report)
    return EXIT_OK


# ─────────────────────────────────────────────────────────────────────────────
# homology
# ─────────────────────────────────────────────────────────────────────────────

def _graph_window(family: str, n: int, smax: int, loop: int, window: tuple[int, int] | None,
                  differential_name: str, store: SliceCache | None = None, jobs: int = 1) -> ChainComplexWindow:
    kind = FamilyKind(family)
    if kind is FamilyKind.HAIRY:
        s_values = list(range(1, smax + 1))
        tag = FamilyTag(kind, n, 1 if differential_name == "d+h" else smax)
        if differential_name != "d+h":
            s_values = [smax]
        lo, hi = window or hairy_degree_range(tag, loop, s_values)
        return assemble_total(tag, loop, (lo, hi), differential_name, s_values, store=store, jobs=jobs)
    tag = FamilyTag(kind, n, smax if differential_name == "d0" else None)
    if window is None:
        top = n - (1 - n) * loop - 1
        window = (top - get_settings().vmax + 1, top)
    return assemble_total(tag, loop, window, differential_name, store=store, jobs=jobs)


@main.command()
@_bound_options
@click.option("--loop", type=int, required=True, help="Loop order e - v (genus for ribbon graphs).")
@click.option("--degree-window", "degree_window", default=None, help="Inclusive degrees lo:hi.")
@click.option("--differential", type=click.Choice(DIFFERENTIALS + RIBBON_DIFFERENTIALS), default=None,
              help="d, d0 (sources pinned to --smax), d+h; ribbon: delta, delta1, delta+delta1.")
@click.option("--exact/--modular", default=get_settings().exact, show_default=True,
              help="Exact rational ranks or the two-prime modular shadow.")
@_exit_on_errors
def homology(family: str, n: int, vmax: int, emax: int, smax: int, cache: Path | None, jobs: int,
             out: Path | None, loop: int, degree_window: str | None, differential: str | None, exact: bool) -> int:
    """Homology dimensions of a total complex over a degree window."""
    emax = _default_emax(family, emax)
    JobSpec("homology", family, n, vmax, emax, smax, loop=loop, cache=cache, exact=exact, jobs=jobs, out=out)
    window = _parse_window(degree_window)
    store = SliceCache(cache) if cache is not None else None
    if family == RIBBON:
        differential = differential or "delta+delta1"
        if differential not in RIBBON_DIFFERENTIALS:
            raise FamilyError(f"ribbon graphs take one of {RIBBON_DIFFERENTIALS}")
        slice_of = store.ribbon_basis if store is not None else ribbon_slice
        complex_window = assemble_ribbon(loop, window or (1, emax), differential, slice_of=slice_of)
    else:
        differential = differential or ("d+h" if family == FamilyKind.HAIRY.value else "d")
        if differential not in DIFFERENTIALS:
            raise FamilyError(f"{family} graphs take one of {DIFFERENTIALS}")
        complex_window = _graph_window(family, n, smax, loop, window, differential, store, jobs)

    summary = homology_dims(complex_window, exact)
    table = Table(title=f"H({family}, {differential}) n={n} loop={loop}")
    for col in ("degree", "dim", "kernel", "image_in", "homology", "bound"):
        table.add_column(col, justify="right")
    for row in summary.to_dict():
        table.add_row(*(str(row[c]) for c in ("degree", "dim", "kernel", "image_in", "homology", "bound")))
    console.print(table)
    console.print(f"Euler characteristic of the window: {complex_window.euler_characteristic()}")
    _write_out(out, {"family": family, "n": n, "loop": loop, "differential": differential,
                     "records": summary.to_dict()})
    return EXIT_OK


# ─────────────────────────────────────────────────────────────────────────────
# verify
# ─────────────────────────────────────────────────────────────────────────────

@main.command()
@click.argument("target", type=click.Choice(VERIFY_TARGETS))
@_bound_options
@click.option("--loop", type=int, default=None)
@click.option("--degree-window", "degree_window", default=None)
@click.option("--exact/--modular", default=get_settings().exact, show_default=True)
@click.option("--seed", type=int, default=get_settings().seed, show_default=True)
@_exit_on_errors
def verify(target: str, family: str, n: int, vmax: int, emax: int, smax: int, cache: Path | None, jobs: int,
           out: Path | None, loop: int | None, degree_window: str | None, exact: bool, seed: int) -> int:
    """Run one exact check; exit 1 with a counterexample when it fails."""
    emax = _default_emax(family, emax)
    spec = JobSpec("verify", family, n, vmax, emax, smax, loop=loop, window=_parse_window(degree_window),
                   cache=cache, exact=exact, jobs=jobs, seed=seed, out=out)
    result = run_check(target, spec)

    table = Table(title=f"verify {target}")
    table.add_column("check")
    table.add_column("result")
    table.add_column("checked", justify="right")
    table.add_row(target, "[green]pass[/green]" if result.ok else "[red]FAIL[/red]", str(result.checked))
    console.print(table)
    for key, value in result.details.items():
        if isinstance(value, dict) and "records" in value:
            console.print(f"{key}: euler {value['euler_src']} vs {value['euler_dst']}, "
                          f"{sum(r['status'] == 'iso' for r in value['records'])} degrees iso")
        else:
            console.print(f"{key}: {value}")
    if result.counterexample is not None:
        console.print_json(json.dumps(result.counterexample, default=str))
    _write_out(out, result.to_dict())
    return EXIT_OK if result.ok else EXIT_FAILED


# ─────────────────────────────────────────────────────────────────────────────
# phi / fmap on single graphs
# ─────────────────────────────────────────────────────────────────────────────

@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--n", "n", type=int, default=2, show_default=True, help="Parameter of the hairy graphs.")
@click.option("--skeleton", is_flag=True, help="Print images as skeleton graphs with typed edges.")
@click.option("--out", type=click.Path(path_type=Path), default=None)
@_exit_on_errors
def phi(file: Path, n: int, skeleton: bool, out: Path | None) -> int:
    """Apply the forest map to each hairy graph in FILE (one JSON graph per line)."""
    report = []
    for g in _read_graphs(file):
        family = FamilyTag(FamilyKind.HAIRY, n, g.s)
        if not is_admissible(g, family):
            raise MalformedGraphError(f"{g.to_json()} is not an admissible hairy graph")
        image = phi_skeletons(g, n) if skeleton else phi_expanded(g, n)
        target = target_family(n)
        _print_combo(f"Phi({g.to_json()}) in degree {slice_degree(target, g.e + g.s, 2 * g.e - g.v + g.s)}",
                     image)
        report.append({"graph": g.to_dict(), "image": [[c, t] for c, t in _combo_rows(image)]})
    _write_out(out, report)
    return EXIT_OK


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--out", type=click.Path(path_type=Path), default=None)
@_exit_on_errors
def fmap(file: Path, out: Path | None) -> int:
    """Apply F to each oriented graph (n = 1) in FILE (one JSON graph per line)."""
    report = []
    for g in _read_graphs(file):
        if g.s or not is_acyclic(g):
            raise MalformedGraphError(f"{g.to_json()} is not an oriented graph")
        image = F_map(g)
        _print_combo(f"F({g.to_json()}) at n={F_SOURCE_N}", image)
        report.append({"graph": g.to_dict(), "image": [[c, t] for c, t in _combo_rows(image)]})
    _write_out(out, report)
    return EXIT_OK


if __name__ == "__main__":
    main()
