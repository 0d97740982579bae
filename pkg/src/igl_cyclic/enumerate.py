"""Exhaustive enumeration of small formulas and sequents."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterator

from .core import BOT, And, Box, Formula, Imp, Or, Sequent, Var, seq

_BINARY = (Imp, And, Or)


@lru_cache(maxsize=None)
def formulas_of_size(n: int, atoms: tuple[str, ...] = ("p", "q")) -> tuple[Formula, ...]:
    """All formulas with exactly ``n`` symbols over ``atoms`` and ``bot``."""
    if n < 1:
        return ()
    if n == 1:
        return tuple(Var(a) for a in atoms) + (BOT,)
    out: list[Formula] = [Box(f) for f in formulas_of_size(n - 1, atoms)]
    for k in range(1, n - 1):
        for a in formulas_of_size(k, atoms):
            for b in formulas_of_size(n - 1 - k, atoms):
                out.extend(op(a, b) for op in _BINARY)
    return tuple(out)


def formulas_up_to(n: int, atoms: tuple[str, ...] = ("p", "q")) -> list[Formula]:
    return [f for k in range(1, n + 1) for f in formulas_of_size(k, atoms)]


def small_sequents(max_size: int = 5, max_left: int = 2, atoms: tuple[str, ...] = ("p", "q")) -> Iterator[Sequent]:
    """Sequents whose formulas have ``max_size`` symbols in total, with at most
    ``max_left`` formulas (counted with multiplicity) on the left."""
    by_size = {k: formulas_of_size(k, atoms) for k in range(1, max_size + 1)}
    pool = [(k, f) for k in by_size for f in by_size[k]]
    for r in range(max_left + 1):
        for left in combinations_with_replacement(range(len(pool)), r):
            used = sum(pool[i][0] for i in left)
            for k in range(1, max_size - used + 1):
                for right in by_size[k]:
                    yield seq([pool[i][1] for i in left], right)
