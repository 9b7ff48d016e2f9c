"""
Exact rank over the rationals.

Fast path: rank modulo two large primes. The modular rank never exceeds the
rational rank, so two agreeing primes are accepted; any disagreement, or an
explicit request, falls back to elimination over QQ.
"""

from fractions import Fraction

from graphcx.config import RANK_PRIMES, get_settings
from graphcx.linalg.sparse import SparseRationalMatrix
from graphcx.utils.logger import logger


def rank_mod_p(m: SparseRationalMatrix, p: int) -> int:
    if m.is_zero():
        return 0
    _, pivots = m.to_sdm_mod(p).rref()
    return len(pivots)


def exact_rank(m: SparseRationalMatrix) -> int:
    if m.is_zero():
        return 0
    _, pivots = m.to_sdm().rref()
    return len(pivots)


def rank(m: SparseRationalMatrix, exact: bool | None = None) -> int:
    """
    Rank of m over QQ.

    Args:
        m: The matrix.
        exact: Skip the modular fast path. Defaults to the GRAPHCX_EXACT setting.
    """
    if m.is_zero():
        return 0
    if exact is None:
        exact = get_settings().exact
    if exact:
        return exact_rank(m)

    # eliminate along the shorter side
    if m.rows > m.cols:
        m = m.transpose()
    shadows = [rank_mod_p(m, p) for p in RANK_PRIMES]
    if len(set(shadows)) == 1:
        return shadows[0]
    logger.warning(f"[Rank] modular ranks disagree {shadows} on {m!r}, recomputing exactly")
    return exact_rank(m)


def kernel_basis(m: SparseRationalMatrix) -> list[dict[int, Fraction]]:
    """Basis of the right kernel of m as sparse column vectors."""
    if m.cols == 0:
        return []
    if m.is_zero():
        return [{j: Fraction(1)} for j in range(m.cols)]
    null, _ = m.to_sdm().nullspace()
    basis = []
    for _, row in sorted(null.items()):
        basis.append({c: Fraction(int(x.numerator), int(x.denominator)) for c, x in row.items() if x})
    return basis
