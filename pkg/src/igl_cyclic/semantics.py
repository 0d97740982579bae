"""Finite intuitionistic Kripke frames (W, <=, <) and models for iGL.

:func:`satisfies` follows the clauses literally and serves as the reference
evaluator.  :func:`valid_up_to` enumerates frames up to isomorphism and
evaluates a formula under every monotone valuation at once, packing the
valuations into the bits of one integer per world.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple

from .core import And, Bot, Box, Formula, Imp, Or, Sequent, Var, dnec, interpret, seq, variables
from .core import FMultiset, ResourceLimit

MAX_FRAME_SIZE = 5


class UnknownWorld(KeyError):
    pass




@dataclass(frozen=True)
class KripkeFrame:
    size: int
    le: frozenset[tuple[int, int]]
    prec: frozenset[tuple[int, int]]

    @property
    def worlds(self) -> range:
        return range(self.size)

    def up(self, w: int) -> list[int]:
        return [v for v in self.worlds if (w, v) in self.le]

    def succ(self, w: int) -> list[int]:
        return [v for v in self.worlds if (w, v) in self.prec]

    def is_intuitionistic(self) -> bool:
        """``<=`` is a partial order and ``<=;<`` is contained in ``<``."""
        W = self.worlds
        le, prec = self.le, self.prec
        refl = all((w, w) in le for w in W)
        anti = all(not ((a, b) in le and (b, a) in le) or a == b for a in W for b in W)
        trans = all((a, c) in le for (a, b) in le for (b2, c) in le if b == b2)
        absorb = all((a, c) in prec for (a, b) in le for (b2, c) in prec if b == b2)
        return refl and anti and trans and absorb


class FrameProperties(NamedTuple):
    transitive: bool
    brilliant: bool
    converse_wf: bool


def check_frame_properties(F: KripkeFrame) -> FrameProperties:
    prec, le = F.prec, F.le
    transitive = all((a, c) in prec for (a, b) in prec for (b2, c) in prec if b == b2)
    brilliant = all((a, c) in prec for (a, b) in prec for (b2, c) in le if b == b2)
    return FrameProperties(transitive, brilliant, _acyclic(F.size, prec))


def _acyclic(n: int, rel: Iterable[tuple[int, int]]) -> bool:
    succ = {w: [v for (u, v) in rel if u == w] for w in range(n)}
    state = [0] * n  # 0 new, 1 on stack, 2 done

    def dfs(w: int) -> bool:
        state[w] = 1
        for v in succ[w]:
            if state[v] == 1 or (state[v] == 0 and not dfs(v)):
                return False
        state[w] = 2
        return True

    return all(state[w] == 2 or dfs(w) for w in range(n))


@dataclass(frozen=True)
class KripkeModel:
    frame: KripkeFrame
    valuation: Mapping[str, frozenset[int]]

    def is_monotone(self) -> bool:
        return all(v in ws for ws in self.valuation.values() for (w, v) in self.frame.le if w in ws)

    def describe(self) -> str:
        F = self.frame
        le = sorted((a, b) for (a, b) in F.le if a != b)
        lines = [
            "worlds: " + " ".join(f"w{w}" for w in F.worlds),
            "le: " + " ".join(f"w{a}<=w{b}" for a, b in le),
            "prec: " + " ".join(f"w{a}<w{b}" for a, b in sorted(F.prec)),
        ]
        for p in sorted(self.valuation):
            lines.append(f"V({p}) = {{{', '.join(f'w{w}' for w in sorted(self.valuation[p]))}}}")
        return "\n".join(lines)

    def as_dict(self) -> dict:
        F = self.frame
        return {
            "worlds": list(F.worlds),
            "le": sorted([a, b] for (a, b) in F.le),
            "prec": sorted([a, b] for (a, b) in F.prec),
            "valuation": {p: sorted(ws) for p, ws in sorted(self.valuation.items())},
        }


def satisfies(M: KripkeModel, w: int, phi: Formula) -> bool:
    F = M.frame
    if w not in F.worlds:
        raise UnknownWorld(w)
    if isinstance(phi, Bot):
        return False
    if isinstance(phi, Var):
        return w in M.valuation.get(phi.name, frozenset())
    if isinstance(phi, And):
        return satisfies(M, w, phi.lhs) and satisfies(M, w, phi.rhs)
    if isinstance(phi, Or):
        return satisfies(M, w, phi.lhs) or satisfies(M, w, phi.rhs)
    if isinstance(phi, Imp):
        return all(not satisfies(M, v, phi.lhs) or satisfies(M, v, phi.rhs) for v in F.up(w))
    if isinstance(phi, Box):
        return all(satisfies(M, v, phi.inner) for v in F.succ(w))
    raise TypeError(phi)


# -- frame enumeration --------------------------------------------------------


def _partial_orders(n: int) -> list[tuple[int, ...]]:
    """All partial orders on ``range(n)`` as row bitmasks (reflexive)."""
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    out = []
    for bits in range(1 << len(pairs)):
        rows = [1 << a for a in range(n)]
        for i, (a, b) in enumerate(pairs):
            if bits >> i & 1:
                rows[a] |= 1 << b
        if any(rows[a] >> b & 1 and rows[b] >> a & 1 for a, b in pairs):
            continue
        if all(_compose_row(rows, rows, a) == rows[a] for a in range(n)):
            out.append(tuple(rows))
    return out


def _compose_row(r: tuple[int, ...] | list[int], s: tuple[int, ...] | list[int], a: int) -> int:
    acc, row, y = 0, r[a], 0
    while row:
        if row & 1:
            acc |= s[y]
        row >>= 1
        y += 1
    return acc


def _closed_strict_orders(n: int, le: tuple[int, ...]) -> list[tuple[int, ...]]:
    """All transitive irreflexive ``prec`` with ``le;prec`` and ``prec;le`` inside ``prec``."""
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]

    def close(rows: list[int]) -> list[int] | None:
        rows = list(rows)
        while True:
            new = [
                _compose_row(rows, le, a) | _compose_row(le, rows, a) | _compose_row(rows, rows, a) | rows[a]
                for a in range(n)
            ]
            if any(new[a] >> a & 1 for a in range(n)):
                return None
            if new == rows:
                return rows
            rows = new

    out: list[tuple[int, ...]] = []

    def rec(rows: list[int], i: int, forbidden: list[int]) -> None:
        if i == len(pairs):
            out.append(tuple(rows))
            return
        a, b = pairs[i]
        if rows[a] >> b & 1:
            rec(rows, i + 1, forbidden)
            return
        fb = list(forbidden)
        fb[a] |= 1 << b
        rec(rows, i + 1, fb)
        grown = list(rows)
        grown[a] |= 1 << b
        closed = close(grown)
        if closed is not None and not any(closed[x] & forbidden[x] for x in range(n)):
            rec(closed, i + 1, forbidden)

    rec([0] * n, 0, [0] * n)
    return out


def _rows_to_pairs(rows: tuple[int, ...]) -> frozenset[tuple[int, int]]:
    n = len(rows)
    return frozenset((a, b) for a in range(n) for b in range(n) if rows[a] >> b & 1)


def _canonical(n: int, le: tuple[int, ...], prec: tuple[int, ...]) -> tuple:
    best = None
    lp, pp = _rows_to_pairs(le), _rows_to_pairs(prec)
    for perm in itertools.permutations(range(n)):
        key = (
            tuple(sorted((perm[a], perm[b]) for a, b in lp)),
            tuple(sorted((perm[a], perm[b]) for a, b in pp)),
        )
        if best is None or key < best:
            best = key
    return best


@lru_cache(maxsize=None)
def frames_of_size(n: int) -> tuple[KripkeFrame, ...]:
    """Transitive, brilliant, converse well-founded intuitionistic frames with
    ``n`` worlds, one per isomorphism class."""
    seen: dict[tuple, KripkeFrame] = {}
    # every frame is isomorphic to one whose partial order is the chosen
    # representative of its class, so only those orders need extending
    reps: dict[tuple, tuple[int, ...]] = {}
    for le in _partial_orders(n):
        reps.setdefault(_canonical(n, le, (0,) * n), le)
    for le in reps.values():
        for prec in _closed_strict_orders(n, le):
            key = _canonical(n, le, prec)
            if key not in seen:
                seen[key] = KripkeFrame(n, frozenset(key[0]), frozenset(key[1]))
    return tuple(seen[k] for k in sorted(seen))


# -- fast evaluation ----------------------------------------------------------


class _FrameTables:
    def __init__(self, F: KripkeFrame):
        n = F.size
        self.n = n
        self.up = [F.up(w) for w in range(n)]
        self.succ = [F.succ(w) for w in range(n)]
        self.upsets = [
            frozenset(w for w in range(n) if bits >> w & 1)
            for bits in range(1 << n)
            if all(v in {x for x in range(n) if bits >> x & 1} for w in range(n) if bits >> w & 1 for v in self.up[w])
        ]


@lru_cache(maxsize=None)
def _tables(F: KripkeFrame) -> _FrameTables:
    return _FrameTables(F)


@lru_cache(maxsize=4096)
def _columns(F: KripkeFrame, k: int) -> tuple[int, tuple[tuple[int, ...], ...]]:
    """Bit ``v`` of ``cols[j][w]`` says world ``w`` lies in variable ``j``'s
    upset under valuation number ``v`` (digit ``j`` base ``m``)."""
    T = _tables(F)
    m = len(T.upsets)
    total = m**k
    full = (1 << total) - 1
    cols = []
    for j in range(k):
        block = m**j
        period = block * m
        reps = total // period
        rep = sum(1 << (t * period) for t in range(reps))
        unit = (1 << block) - 1
        row = []
        for w in range(T.n):
            base = 0
            for d, U in enumerate(T.upsets):
                if w in U:
                    base |= unit << (d * block)
            row.append(base * rep)
        cols.append(tuple(row))
    return full, tuple(cols)


def _eval(F: KripkeFrame, phi: Formula, names: tuple[str, ...]):
    T = _tables(F)
    full, cols = _columns(F, len(names))
    index = {p: j for j, p in enumerate(names)}
    memo: dict[Formula, list[int]] = {}

    def ev(f: Formula) -> list[int]:
        hit = memo.get(f)
        if hit is not None:
            return hit
        if isinstance(f, Var):
            r = list(cols[index[f.name]])
        elif isinstance(f, Bot):
            r = [0] * T.n
        elif isinstance(f, And):
            a, b = ev(f.lhs), ev(f.rhs)
            r = [x & y for x, y in zip(a, b)]
        elif isinstance(f, Or):
            a, b = ev(f.lhs), ev(f.rhs)
            r = [x | y for x, y in zip(a, b)]
        elif isinstance(f, Imp):
            a, b = ev(f.lhs), ev(f.rhs)
            loc = [(~x | y) & full for x, y in zip(a, b)]
            r = []
            for w in range(T.n):
                acc = full
                for v in T.up[w]:
                    acc &= loc[v]
                r.append(acc)
        elif isinstance(f, Box):
            a = ev(f.inner)
            r = []
            for w in range(T.n):
                acc = full
                for v in T.succ[w]:
                    acc &= a[v]
                r.append(acc)
        else:
            raise TypeError(f)
        memo[f] = r
        return r

    return full, ev(phi)


def _decode(F: KripkeFrame, names: tuple[str, ...], index: int) -> dict[str, frozenset[int]]:
    ups = _tables(F).upsets
    m = len(ups)
    val = {}
    for p in names:
        index, d = divmod(index, m)
        val[p] = ups[d]
    return val


@dataclass(frozen=True)
class Countermodel:
    model: KripkeModel
    world: int

    def __bool__(self) -> bool:  # a countermodel means "not valid"
        return False


class Valid:
    def __bool__(self) -> bool:
        return True

    def __repr__(self) -> str:
        return "Valid"


VALID = Valid()


def iter_frames(max_size: int) -> Iterable[KripkeFrame]:
    for n in range(1, max_size + 1):
        yield from frames_of_size(n)


def valid_up_to(phi: Formula, max_size: int = 4) -> Valid | Countermodel:
    """``VALID`` or the first falsifying (model, world) among frames with at most
    ``max_size`` worlds."""
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    if max_size > MAX_FRAME_SIZE:
        raise ResourceLimit(f"frame size {max_size} exceeds the bound {MAX_FRAME_SIZE}")
    names = tuple(sorted(variables(phi)))
    for F in iter_frames(max_size):
        full, value = _eval(F, phi, names)
        for w, bits in enumerate(value):
            if bits != full:
                missing = ~bits & full
                v = (missing & -missing).bit_length() - 1
                return Countermodel(KripkeModel(F, _decode(F, names, v)), w)
    return VALID


def is_valid(phi: Formula, max_size: int = 4) -> bool:
    return isinstance(valid_up_to(phi, max_size), Valid)


def countermodel_for(s: Sequent, max_size: int = 4) -> Countermodel | None:
    res = valid_up_to(interpret(s), max_size)
    return res if isinstance(res, Countermodel) else None


# -- obligations of the cyclic-to-finite argument ------------------------------


def _sharp(left: Iterable[Formula], right: Formula) -> Formula:
    return interpret(seq(left, right))


def lemma_table_obligations(
    phi: Formula,
    psi: Formula,
    chi: Formula,
    gamma: Iterable[Formula] = (),
    pi: Iterable[Formula] = (),
) -> list[Formula]:
    """The eight rule-by-rule implications plus ``[]chi -> [][]chi``.

    Order: AndL, AndR, OrL, OrR0, OrR1, ImpL, ImpR, RK4, transitivity.
    """
    G = list(gamma)
    P = list(pi)
    S = _sharp
    dnec_g = list(dnec(FMultiset(G)))
    return [
        Imp(S(G + [phi, psi], chi), S(G + [And(phi, psi)], chi)),
        Imp(And(S(G, phi), S(G, psi)), S(G, And(phi, psi))),
        Imp(And(S(G + [phi], chi), S(G + [psi], chi)), S(G + [Or(phi, psi)], chi)),
        Imp(S(G, phi), S(G, Or(phi, psi))),
        Imp(S(G, psi), S(G, Or(phi, psi))),
        Imp(And(S(G + [Imp(phi, psi)], phi), S(G + [psi], chi)), S(G + [Imp(phi, psi)], chi)),
        Imp(S(G + [phi], psi), S(G, Imp(phi, psi))),
        Imp(Box(S(dnec_g, phi)), S(P + [Box(g) for g in G], Box(phi))),
        Imp(Box(chi), Box(Box(chi))),
    ]
