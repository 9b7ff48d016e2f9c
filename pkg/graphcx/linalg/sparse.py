"""
Exact sparse matrices over the rationals.

Entries are kept as a dict (row, col) -> Fraction with zeros never stored.
The text format is a header line "rows cols nnz" followed by one
"row col num/den" line per entry, sorted by (col, row).
"""

from collections.abc import Iterable, Mapping
from fractions import Fraction
from math import lcm

from sympy.polys.domains import GF, QQ
from sympy.polys.matrices.sdm import SDM

from graphcx.core.errors import MalformedGraphError

Entry = tuple[int, int, Fraction]


class SparseRationalMatrix:
    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], Fraction] | Iterable[Entry] = ()):
        if rows < 0 or cols < 0:
            raise ValueError(f"negative shape ({rows}, {cols})")
        self.rows = rows
        self.cols = cols
        data: dict[tuple[int, int], Fraction] = {}
        items = entries.items() if isinstance(entries, Mapping) else (((r, c), x) for r, c, x in entries)
        for (r, c), x in items:
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"entry ({r}, {c}) outside a {rows}x{cols} matrix")
            x = Fraction(x)
            if (r, c) in data:
                raise ValueError(f"duplicate entry ({r}, {c})")
            if x:
                data[(r, c)] = x
        self._data = data

    # ── construction ──────────────────────────────────────────────────────────

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "SparseRationalMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, size: int) -> "SparseRationalMatrix":
        return cls(size, size, {(i, i): Fraction(1) for i in range(size)})

    @classmethod
    def from_columns(cls, rows: int, columns: list[Mapping[int, Fraction]]) -> "SparseRationalMatrix":
        """Build from one {row: value} mapping per column."""
        return cls(rows, len(columns), {(r, c): x for c, col in enumerate(columns) for r, x in col.items()})

    @classmethod
    def from_dense(cls, dense: list[list]) -> "SparseRationalMatrix":
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        return cls(rows, cols, {(r, c): Fraction(x) for r, row in enumerate(dense) for c, x in enumerate(row) if x})

    # ── access ────────────────────────────────────────────────────────────────

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return len(self._data)

    @property
    def entries(self) -> list[Entry]:
        """Nonzero entries sorted by (col, row)."""
        return [(r, c, x) for (r, c), x in sorted(self._data.items(), key=lambda kv: (kv[0][1], kv[0][0]))]

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        return self._data.get(key, Fraction(0))

    def column(self, c: int) -> dict[int, Fraction]:
        return {r: x for (r, cc), x in self._data.items() if cc == c}

    def columns(self) -> list[dict[int, Fraction]]:
        cols: list[dict[int, Fraction]] = [{} for _ in range(self.cols)]
        for (r, c), x in self._data.items():
            cols[c][r] = x
        return cols

    def row_dicts(self) -> dict[int, dict[int, Fraction]]:
        out: dict[int, dict[int, Fraction]] = {}
        for (r, c), x in self._data.items():
            out.setdefault(r, {})[c] = x
        return out

    def to_dense(self) -> list[list[Fraction]]:
        dense = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), x in self._data.items():
            dense[r][c] = x
        return dense

    def is_zero(self) -> bool:
        return not self._data

    # ── algebra ───────────────────────────────────────────────────────────────

    def transpose(self) -> "SparseRationalMatrix":
        return SparseRationalMatrix(self.cols, self.rows, {(c, r): x for (r, c), x in self._data.items()})

    @property
    def T(self) -> "SparseRationalMatrix":
        return self.transpose()

    def _check_same_shape(self, other: "SparseRationalMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        self._check_same_shape(other)
        data = dict(self._data)
        for key, x in other._data.items():
            total = data.get(key, 0) + x
            if total:
                data[key] = total
            else:
                data.pop(key, None)
        return SparseRationalMatrix(self.rows, self.cols, data)

    def __neg__(self) -> "SparseRationalMatrix":
        return self.scaled(-1)

    def __sub__(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        return self + (-other)

    def scaled(self, factor: Fraction | int) -> "SparseRationalMatrix":
        if not factor:
            return SparseRationalMatrix(self.rows, self.cols)
        return SparseRationalMatrix(self.rows, self.cols, {k: x * factor for k, x in self._data.items()})

    def __matmul__(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        left_rows = self.row_dicts()
        right_rows = other.row_dicts()
        data: dict[tuple[int, int], Fraction] = {}
        for r, row in left_rows.items():
            acc: dict[int, Fraction] = {}
            for k, x in row.items():
                for c, y in right_rows.get(k, {}).items():
                    acc[c] = acc.get(c, 0) + x * y
            for c, z in acc.items():
                if z:
                    data[(r, c)] = z
        return SparseRationalMatrix(self.rows, other.cols, data)

    def apply(self, vector: Mapping[int, Fraction]) -> dict[int, Fraction]:
        """Matrix times a sparse column vector."""
        out: dict[int, Fraction] = {}
        cols = self.columns()
        for c, x in vector.items():
            for r, y in cols[c].items():
                out[r] = out.get(r, 0) + x * y
        return {r: z for r, z in out.items() if z}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseRationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.shape, frozenset(self._data.items())))

    def __repr__(self) -> str:
        return f"SparseRationalMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    # ── conversions for elimination ───────────────────────────────────────────

    def to_sdm(self) -> SDM:
        """sympy sparse matrix over QQ."""
        dod: dict[int, dict] = {}
        for (r, c), x in self._data.items():
            dod.setdefault(r, {})[c] = QQ(x.numerator, x.denominator)
        return SDM(dod, self.shape, QQ)

    def to_sdm_mod(self, p: int) -> SDM:
        """
        Rows scaled to integers, then reduced modulo p.

        Row scaling does not change the rational rank; the modular rank can
        only drop, and only when p divides some pivot.
        """
        field = GF(p)
        dod: dict[int, dict] = {}
        for r, row in self.row_dicts().items():
            scale = lcm(*(x.denominator for x in row.values()))
            reduced = {c: field(int(x * scale) % p) for c, x in row.items() if int(x * scale) % p}
            if reduced:
                dod[r] = reduced
        return SDM(dod, self.shape, field)

    # ── text format ───────────────────────────────────────────────────────────

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols} {self.nnz}"]
        lines.extend(f"{r} {c} {x.numerator}/{x.denominator}" for r, c, x in self.entries)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SparseRationalMatrix":
        lines = [line for line in text.splitlines() if line.strip()]
        try:
            rows, cols, nnz = (int(tok) for tok in lines[0].split())
            entries = []
            for line in lines[1:]:
                r, c, value = line.split()
                entries.append((int(r), int(c), Fraction(value)))
            matrix = cls(rows, cols, entries)
        except (IndexError, ValueError, ZeroDivisionError) as e:
            raise MalformedGraphError(f"malformed matrix file: {e}") from e
        if matrix.nnz != nnz or len(entries) != nnz:
            raise MalformedGraphError(f"matrix header announces {nnz} entries, found {len(entries)}")
        return matrix


def hstack(*blocks: SparseRationalMatrix) -> SparseRationalMatrix:
    rows = blocks[0].rows if blocks else 0
    data: dict[tuple[int, int], Fraction] = {}
    offset = 0
    for block in blocks:
        if block.rows != rows:
            raise ValueError("hstack needs equal row counts")
        for r, c, x in block.entries:
            data[(r, c + offset)] = x
        offset += block.cols
    return SparseRationalMatrix(rows, offset, data)


def vstack(*blocks: SparseRationalMatrix) -> SparseRationalMatrix:
    return hstack(*(b.transpose() for b in blocks)).transpose()


def block_matrix(row_sizes: list[int], col_sizes: list[int],
                 blocks: Mapping[tuple[int, int], SparseRationalMatrix]) -> SparseRationalMatrix:
    """Assemble a matrix from blocks keyed by (block row, block col); missing blocks are zero."""
    row_off = [sum(row_sizes[:i]) for i in range(len(row_sizes))]
    col_off = [sum(col_sizes[:j]) for j in range(len(col_sizes))]
    data: dict[tuple[int, int], Fraction] = {}
    for (i, j), block in blocks.items():
        if block.shape != (row_sizes[i], col_sizes[j]):
            raise ValueError(f"block ({i}, {j}) has shape {block.shape}, expected {(row_sizes[i], col_sizes[j])}")
        for r, c, x in block.entries:
            data[(row_off[i] + r, col_off[j] + c)] = x
    return SparseRationalMatrix(sum(row_sizes), sum(col_sizes), data)
