"""
Homology of finite windows of complexes, quasi-isomorphism checks and mapping cones.

Differentials raise degree: ``differentials[k]`` maps degree k to k+1, so
dim H_k = dim C_k - rank d_k - rank d_{k-1}.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from graphcx.core.errors import VerificationError
from graphcx.linalg.rank import kernel_basis, rank
from graphcx.linalg.sparse import SparseRationalMatrix, block_matrix, hstack
from graphcx.utils.logger import logger


@dataclass
class ChainComplexWindow:
    """
    Consecutive degrees lo..hi of a complex with the differentials between them.

    ``closed_below``/``closed_above`` state that the complex really vanishes
    outside the window on that side, so the end degree is exact.
    """

    lo: int
    hi: int
    dims: dict[int, int]
    differentials: dict[int, SparseRationalMatrix] = field(default_factory=dict)
    blocks: dict[int, list] = field(default_factory=dict)
    closed_below: bool = False
    closed_above: bool = False

    def __post_init__(self):
        for k in self.degrees:
            self.dims.setdefault(k, 0)
        for k in self.degrees[:-1]:
            d = self.differentials.get(k)
            if d is None:
                self.differentials[k] = SparseRationalMatrix.zeros(self.dims[k + 1], self.dims[k])
            elif d.shape != (self.dims[k + 1], self.dims[k]):
                raise ValueError(f"d_{k} has shape {d.shape}, expected {(self.dims[k + 1], self.dims[k])}")

    @property
    def degrees(self) -> list[int]:
        return list(range(self.lo, self.hi + 1))

    def d(self, k: int) -> SparseRationalMatrix | None:
        return self.differentials.get(k)

    def is_boundary(self, k: int) -> bool:
        return (k == self.lo and not self.closed_below) or (k == self.hi and not self.closed_above)

    def validate(self) -> None:
        """Raise VerificationError unless every d_{k+1} d_k vanishes."""
        for k in self.degrees[:-2]:
            product = self.differentials[k + 1] @ self.differentials[k]
            if not product.is_zero():
                r, c, x = product.entries[0]
                raise VerificationError(
                    f"d^2 != 0 from degree {k}: entry ({r}, {c}) = {x}",
                    counterexample={"degree": k, "column": c},
                )

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * self.dims[k] for k in self.degrees)

    def dual(self) -> "ChainComplexWindow":
        """The dual complex: degree k becomes -k and differentials are transposed."""
        return ChainComplexWindow(
            lo=-self.hi,
            hi=-self.lo,
            dims={-k: n for k, n in self.dims.items()},
            differentials={-k - 1: d.transpose() for k, d in self.differentials.items()},
            closed_below=self.closed_above,
            closed_above=self.closed_below,
        )


@dataclass(frozen=True)
class DegreeHomology:
    degree: int
    dim: int
    rank_out: int
    rank_in: int
    is_bound: bool

    @property
    def kernel(self) -> int:
        return self.dim - self.rank_out

    @property
    def homology(self) -> int:
        return self.dim - self.rank_out - self.rank_in


@dataclass
class HomologySummary:
    records: list[DegreeHomology]

    def homology(self, k: int) -> int:
        return self.by_degree()[k].homology

    def by_degree(self) -> dict[int, DegreeHomology]:
        return {r.degree: r for r in self.records}

    def interior(self) -> list[DegreeHomology]:
        return [r for r in self.records if not r.is_bound]

    def euler_characteristic(self) -> int:
        return sum((-1) ** r.degree * r.homology for r in self.records)

    def to_dict(self) -> list[dict]:
        return [
            {
                "degree": r.degree,
                "dim": r.dim,
                "kernel": r.kernel,
                "image_in": r.rank_in,
                "homology": r.homology,
                "bound": r.is_bound,
            }
            for r in self.records
        ]


def homology_dims(window: ChainComplexWindow, exact: bool | None = None,
                  check: bool = True) -> HomologySummary:
    """
    Per-degree homology dimensions.

    Raises:
        VerificationError: d^2 != 0 (with check=True).
    """
    if check:
        window.validate()
    ranks = {k: rank(d, exact) for k, d in window.differentials.items()}
    records = [
        DegreeHomology(
            degree=k,
            dim=window.dims[k],
            rank_out=ranks.get(k, 0),
            rank_in=ranks.get(k - 1, 0),
            is_bound=window.is_boundary(k),
        )
        for k in window.degrees
    ]
    return HomologySummary(records)


# ─────────────────────────────────────────────────────────────────────────────
# Chain maps
# ─────────────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class QuasiIsoRecord:
    degree: int
    dim_src: int
    dim_dst: int
    h_src: int
    h_dst: int
    induced_rank: int
    status: str

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "dim_src": self.dim_src,
            "dim_dst": self.dim_dst,
            "h_src": self.h_src,
            "h_dst": self.h_dst,
            "induced_rank": self.induced_rank,
            "status": self.status,
        }


@dataclass
class QuasiIsoReport:
    records: list[QuasiIsoRecord]

    @property
    def ok(self) -> bool:
        return all(r.status != "fail" for r in self.records)

    def first_failure(self) -> QuasiIsoRecord | None:
        return next((r for r in self.records if r.status == "fail"), None)


def check_chain_map(maps: dict[int, SparseRationalMatrix], src: ChainComplexWindow,
                    dst: ChainComplexWindow, shift: int = 0) -> None:
    """
    Check f_{k+1} d_k = d_{k+shift} f_k wherever both sides live in the windows.

    Raises:
        VerificationError: naming the degree and the offending source basis column.
    """
    for k in src.degrees[:-1]:
        if k not in maps or k + 1 not in maps or dst.d(k + shift) is None:
            continue
        lhs = maps[k + 1] @ src.differentials[k]
        rhs = dst.differentials[k + shift] @ maps[k]
        diff = lhs - rhs
        if not diff.is_zero():
            _, c, _ = diff.entries[0]
            raise VerificationError(
                f"chain map fails from source degree {k} at basis column {c}",
                counterexample={"degree": k, "column": c},
            )


def induced_rank(f: SparseRationalMatrix, d_src_out: SparseRationalMatrix | None,
                 d_dst_in: SparseRationalMatrix | None, exact: bool | None = None) -> int:
    """Rank of the map induced on homology: rank([B | f Z]) - rank(B)."""
    if d_src_out is None:
        cycles = [{j: Fraction(1)} for j in range(f.cols)]
    else:
        cycles = kernel_basis(d_src_out)
    image = f @ SparseRationalMatrix.from_columns(f.cols, cycles)
    if d_dst_in is None or d_dst_in.cols == 0:
        return rank(image, exact)
    return rank(hstack(d_dst_in, image), exact) - rank(d_dst_in, exact)


def verify_quasi_iso(maps: dict[int, SparseRationalMatrix], src: ChainComplexWindow,
                     dst: ChainComplexWindow, shift: int = 0, exact: bool | None = None) -> QuasiIsoReport:
    """
    Compare homology of src and dst through f, degree by degree.

    A degree is "iso" when both homologies have the same dimension and f
    induces a map of that rank, "bound" when either side sits on an open
    window end, and "fail" otherwise.
    """
    check_chain_map(maps, src, dst, shift)
    h_src = homology_dims(src, exact)
    h_dst = homology_dims(dst, exact)
    src_records = h_src.by_degree()
    dst_records = h_dst.by_degree()

    records = []
    for k in src.degrees:
        target = k + shift
        if target not in dst_records:
            continue
        a, b = src_records[k], dst_records[target]
        f = maps.get(k, SparseRationalMatrix.zeros(b.dim, a.dim))
        r = induced_rank(f, src.d(k), dst.d(target - 1), exact)
        if a.is_bound or b.is_bound:
            status = "bound"
        elif a.homology == b.homology == r:
            status = "iso"
        else:
            status = "fail"
        records.append(QuasiIsoRecord(k, a.dim, b.dim, a.homology, b.homology, r, status))
        if status == "fail":
            logger.warning(f"[QuasiIso] degree {k}: H_src={a.homology} H_dst={b.homology} induced={r}")
    return QuasiIsoReport(records)


def mapping_cone(maps: dict[int, SparseRationalMatrix], src: ChainComplexWindow,
                 dst: ChainComplexWindow, shift: int = 0) -> ChainComplexWindow:
    """
    Cone of f: degree k is src_{k+1-shift} + dst_k with d(a, b) = (-d a, f a + d b).

    f is a quasi-isomorphism exactly when the cone is acyclic.
    """
    def src_dim(k: int) -> int:
        return src.dims.get(k + 1 - shift, 0) if src.lo <= k + 1 - shift <= src.hi else 0

    def dst_dim(k: int) -> int:
        return dst.dims.get(k, 0) if dst.lo <= k <= dst.hi else 0

    lo = min(dst.lo, src.lo - 1 + shift)
    hi = max(dst.hi, src.hi - 1 + shift)
    dims = {k: src_dim(k) + dst_dim(k) for k in range(lo, hi + 1)}
    differentials = {}
    for k in range(lo, hi):
        j = k + 1 - shift
        blocks = {}
        if src.d(j) is not None and src_dim(k) and src_dim(k + 1):
            blocks[(0, 0)] = -src.differentials[j]
        if j in maps and src_dim(k) and dst_dim(k + 1):
            blocks[(1, 0)] = maps[j]
        if dst.d(k) is not None and dst_dim(k) and dst_dim(k + 1):
            blocks[(1, 1)] = dst.differentials[k]
        differentials[k] = block_matrix([src_dim(k + 1), dst_dim(k + 1)], [src_dim(k), dst_dim(k)], blocks)
    return ChainComplexWindow(lo, hi, dims, differentials,
                              closed_below=src.closed_below and dst.closed_below,
                              closed_above=src.closed_above and dst.closed_above)
