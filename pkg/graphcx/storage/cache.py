"""
On-disk cache of slice bases and operator matrices.

Layout: ``{root}/{family}/{n}/{v}_{e}_{s}.basis.jsonl`` with a JSON header
line followed by one canonical graph per line, and ``{v}_{e}_{s}.{name}.mat``
for matrices in the sparse text format. Files are written to a temporary
name in the same directory and renamed into place, so readers never see a
partial file.
"""

import json
import os
import tempfile
from pathlib import Path

from tenacity import retry, retry_if_exception_type, stop_after_attempt, wait_random_exponential

from graphcx.complexes.differentials import destination, graph_operator, operator_matrix
from graphcx.complexes.generation import generate_basis
from graphcx.complexes.slices import ComplexSlice
from graphcx.core.errors import MalformedGraphError
from graphcx.core.graph import FamilyTag, LabeledDiGraph
from graphcx.linalg.sparse import SparseRationalMatrix
from graphcx.ribbon.complex import RibbonSlice, ribbon_slice
from graphcx.ribbon.ribbon import RibbonGraph
from graphcx.utils.logger import logger


@retry(
    retry=retry_if_exception_type(OSError),
    wait=wait_random_exponential(multiplier=0.05, max=1),
    stop=stop_after_attempt(5),
    reraise=True,
)
def write_atomic(path: Path, text: str) -> None:
    """Write text to path through a same-directory temporary file and a rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _s_token(s: int | None) -> str:
    return "any" if s is None else str(s)


def basis_text(sl: ComplexSlice) -> str:
    lines = [json.dumps(sl.header(), sort_keys=True, separators=(",", ":"))]
    lines += [g.to_json() for g in sl.basis]
    return "\n".join(lines) + "\n"


def ribbon_basis_text(sl: RibbonSlice) -> str:
    lines = [json.dumps(sl.header(), sort_keys=True, separators=(",", ":"))]
    lines += [r.to_json() for r in sl.basis]
    return "\n".join(lines) + "\n"


class SliceCache:
    """Cache rooted at a directory; one instance per run."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def slice_path(self, family: FamilyTag, v: int, e: int, suffix: str) -> Path:
        return self.root / family.label / str(family.n) / f"{v}_{e}_{_s_token(family.s)}.{suffix}"

    def ribbon_path(self, k: int, n: int, m: int, suffix: str) -> Path:
        return self.root / "ribbon" / "0" / f"{k}_{n}_{m}.{suffix}"

    # ── bases ─────────────────────────────────────────────────────────────────

    def save_basis(self, sl: ComplexSlice) -> Path:
        path = self.slice_path(sl.family, sl.v, sl.e, "basis.jsonl")
        write_atomic(path, basis_text(sl))
        return path

    def load_basis(self, family: FamilyTag, v: int, e: int) -> ComplexSlice | None:
        path = self.slice_path(family, v, e, "basis.jsonl")
        if not path.exists():
            return None
        lines = path.read_text(encoding="utf-8").splitlines()
        if not lines:
            raise MalformedGraphError(f"cache file {path} has no header")
        try:
            header = json.loads(lines[0])
            basis = tuple(LabeledDiGraph.from_json(line) for line in lines[1:] if line)
        except (json.JSONDecodeError, TypeError) as e:
            raise MalformedGraphError(f"cache file {path} is corrupt: {e}") from e
        if header.get("size") != len(basis):
            raise MalformedGraphError(f"cache file {path} declares {header.get('size')} graphs, holds {len(basis)}")
        return ComplexSlice(family, v, e, basis)

    def basis(self, family: FamilyTag, v: int, e: int) -> ComplexSlice:
        """Cached basis, generated and stored on a miss."""
        cached = self.load_basis(family, v, e)
        if cached is not None:
            logger.debug(f"[Cache] hit {family.label} n={family.n} v={v} e={e} s={family.s}")
            return cached
        sl = generate_basis(family, v, e)
        self.save_basis(sl)
        return sl

    def save_ribbon_basis(self, sl: RibbonSlice) -> Path:
        path = self.ribbon_path(sl.k, sl.n, sl.m, "basis.jsonl")
        write_atomic(path, ribbon_basis_text(sl))
        return path

    def load_ribbon_basis(self, k: int, n: int, m: int) -> RibbonSlice | None:
        path = self.ribbon_path(k, n, m, "basis.jsonl")
        if not path.exists():
            return None
        lines = path.read_text(encoding="utf-8").splitlines()
        try:
            basis = tuple(RibbonGraph.from_dict(json.loads(line)) for line in lines[1:] if line)
        except json.JSONDecodeError as e:
            raise MalformedGraphError(f"cache file {path} is corrupt: {e}") from e
        return RibbonSlice(k, n, m, basis)

    def ribbon_basis(self, k: int, n: int, m: int) -> RibbonSlice:
        cached = self.load_ribbon_basis(k, n, m)
        if cached is not None:
            return cached
        sl = ribbon_slice(k, n, m)
        self.save_ribbon_basis(sl)
        return sl

    # ── matrices ──────────────────────────────────────────────────────────────

    def save_matrix(self, family: FamilyTag, v: int, e: int, name: str, matrix: SparseRationalMatrix) -> Path:
        path = self.slice_path(family, v, e, f"{name}.mat")
        write_atomic(path, matrix.to_text())
        return path

    def load_matrix(self, family: FamilyTag, v: int, e: int, name: str) -> SparseRationalMatrix | None:
        path = self.slice_path(family, v, e, f"{name}.mat")
        if not path.exists():
            return None
        return SparseRationalMatrix.from_text(path.read_text(encoding="utf-8"))

    def differential(self, name: str, src: ComplexSlice) -> tuple[SparseRationalMatrix, ComplexSlice]:
        """Cached matrix of the operator ``name`` out of src; built and stored on a miss."""
        dst = self.basis(*destination(name, src.family, src.v, src.e))
        matrix = self.load_matrix(src.family, src.v, src.e, name)
        if matrix is not None and matrix.shape == (len(dst), len(src)):
            logger.debug(f"[Cache] hit {name} out of {src.header()}")
            return matrix, dst
        if matrix is not None:
            logger.warning(f"[Cache] stale {name} matrix out of {src.header()}, rebuilding")
        matrix = operator_matrix(src, dst, graph_operator(name, src.family))
        self.save_matrix(src.family, src.v, src.e, name, matrix)
        return matrix, dst
