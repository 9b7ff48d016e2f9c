"""
Fixed-bidegree slices: an ordered basis of canonical generators with an index.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from graphcx.core.canonical import LinearCombination
from graphcx.core.errors import GenerationError
from graphcx.core.graph import FamilyTag, LabeledDiGraph, slice_degree


@dataclass(frozen=True)
class ComplexSlice:
    """
    Basis of the (family, v, e, s) slice.

    ``family.s`` pins the hair count (hairy) or the source count (oriented,
    sourced); None means every source count is included.
    """

    family: FamilyTag
    v: int
    e: int
    basis: tuple[LabeledDiGraph, ...] = ()
    index: dict[LabeledDiGraph, int] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.index and self.basis:
            object.__setattr__(self, "index", {g: i for i, g in enumerate(self.basis)})

    @property
    def s(self) -> int:
        return self.family.s or 0

    @property
    def n(self) -> int:
        return self.family.n

    @property
    def degree(self) -> int:
        return slice_degree(self.family, self.v, self.e, self.s)

    @property
    def loop_order(self) -> int:
        return self.e - self.v

    def __len__(self) -> int:
        return len(self.basis)

    def __contains__(self, g: LabeledDiGraph) -> bool:
        return g in self.index

    def position(self, g: LabeledDiGraph) -> int:
        try:
            return self.index[g]
        except KeyError:
            raise GenerationError(
                f"{g.to_json()} is not a basis element of {self.header()}"
            ) from None

    def coordinates(self, combo: LinearCombination) -> dict[int, Fraction]:
        """Coefficient vector of a canonical linear combination in this basis."""
        return {self.position(g): coeff for g, coeff in combo.items()}

    def header(self) -> dict:
        return {
            "family": self.family.label,
            "n": self.n,
            "v": self.v,
            "e": self.e,
            "s": self.family.s,
            "degree": self.degree,
            "size": len(self.basis),
        }

    @classmethod
    def empty(cls, family: FamilyTag, v: int, e: int) -> "ComplexSlice":
        return cls(family, v, e, ())
