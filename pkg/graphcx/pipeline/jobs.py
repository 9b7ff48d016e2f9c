"""
Job specifications shared by the command-line front end and the checks.
"""

from collections.abc import Callable, Iterable, Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, TypeVar

from graphcx.config import EDGE_HARD_CAP, RIBBON_EDGE_HARD_CAP, VERTEX_HARD_CAP
from graphcx.core.errors import BudgetExceededError, FamilyError
from graphcx.core.graph import FamilyTag
from graphcx.core.types import FamilyKind

RIBBON = "ribbon"
FAMILY_NAMES = tuple(kind.value for kind in FamilyKind) + (RIBBON,)

T = TypeVar("T")


@dataclass(frozen=True)
class JobSpec:
    command: str
    family: str
    n: int
    vmax: int
    emax: int
    smax: int = 3
    loop: int | None = None
    window: tuple[int, int] | None = None
    cache: Path | None = None
    exact: bool = False
    jobs: int = 1
    seed: int = 0
    out: Path | None = None
    extra: dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.family not in FAMILY_NAMES:
            raise FamilyError(f"unknown family {self.family!r}, expected one of {FAMILY_NAMES}")
        if self.vmax < 1 or self.emax < 0 or self.smax < 0 or self.jobs < 1:
            raise FamilyError("bounds must be positive")
        edge_cap = RIBBON_EDGE_HARD_CAP if self.family == RIBBON else EDGE_HARD_CAP
        if self.vmax > VERTEX_HARD_CAP or self.emax > edge_cap:
            raise BudgetExceededError(
                f"vmax={self.vmax}, emax={self.emax} exceed the hard caps ({VERTEX_HARD_CAP}, {edge_cap})"
            )

    @property
    def kind(self) -> FamilyKind:
        if self.family == RIBBON:
            raise FamilyError("the ribbon family has no graph family tag")
        return FamilyKind(self.family)

    def tags(self) -> list[FamilyTag]:
        """Family tags covered by the job: one per hair count for hairy graphs."""
        if self.kind is FamilyKind.HAIRY:
            return [FamilyTag(FamilyKind.HAIRY, self.n, s) for s in range(1, self.smax + 1)]
        return [FamilyTag(self.kind, self.n)]

    def slice_grid(self) -> list[tuple[FamilyTag, int, int]]:
        """Every (family, v, e) with v <= vmax, e <= emax that can hold a connected graph."""
        return [
            (tag, v, e)
            for tag in self.tags()
            for v in range(1, self.vmax + 1)
            for e in range(max(v - 1, 0), self.emax + 1)
        ]


def run_parallel(fn: Callable[[T], Any], items: Iterable[T], jobs: int = 1) -> Iterator[Any]:
    """Map fn over items in order, in a process pool when jobs > 1."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        yield from map(fn, items)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(fn, items)
