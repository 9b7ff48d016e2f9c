"""
Permutation parity helpers shared by every canonical-form routine.
"""
from collections.abc import Sequence
from typing import Any

from sympy.combinatorics import Permutation


def perm_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation given in array form (perm[i] is the image of i)."""
    if len(perm) < 2:
        return 1
    return Permutation(list(perm)).signature()


def sorting_sign(items: Sequence[Any]) -> int:
    """
    Sign of the permutation that stably sorts ``items``.

    Only meaningful when the items are pairwise distinct; callers handle ties.
    """
    if len(items) < 2:
        return 1
    order = sorted(range(len(items)), key=items.__getitem__)
    return perm_sign(order)


def cycles_of(perm: Sequence[int]) -> list[tuple[int, ...]]:
    """Cycle decomposition (fixed points included), each cycle starting at its least element."""
    if not perm:
        return []
    return [tuple(c) for c in Permutation(list(perm)).full_cyclic_form]
