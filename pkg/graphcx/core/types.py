from enum import Enum


class FamilyKind(Enum):
    DIRECTED = "directed"
    ORIENTED = "oriented"
    SOURCED = "sourced"
    HAIRY = "hairy"


class EdgeType(Enum):
    """Edge types of skeleton graphs."""
    ARROW = "A"
    CROSSED = "X"


class Parity(Enum):
    EVEN = "even"
    ODD = "odd"

    @classmethod
    def of(cls, n: int) -> "Parity":
        return cls.ODD if n % 2 else cls.EVEN
