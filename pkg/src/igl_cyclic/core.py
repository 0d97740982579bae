"""Formulas, finite multisets of formulas and sequents.

Formulas are immutable dataclasses.  A canonical total order on formulas
(:func:`sort_key`) fixes the printed order of multisets, so equal sequents
print and hash identically.

Textual syntax::

    formula ::= imp
    imp     ::= disj ( ("->" | "~>") imp )?      right associative
    disj    ::= conj ( "|" conj )*                left associative
    conj    ::= unary ( "&" unary )*              left associative
    unary   ::= "[]" unary | atom
    atom    ::= "bot" | IDENT | "(" formula ")"
    sequent ::= ( formula ( "," formula )* )? "=>" formula
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator


class Formula:
    """Base class of the modal formula AST."""

    __slots__ = ()

    def __lt__(self, other: Formula) -> bool:
        return sort_key(self) < sort_key(other)

    def __str__(self) -> str:
        return show(self)

    def dnec(self) -> Formula:
        """The single-formula form of the boxdot: ``A & []A``."""
        return And(self, Box(self))


@dataclass(frozen=True, slots=True)
class Var(Formula):
    name: str


@dataclass(frozen=True, slots=True)
class Bot(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Imp(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True, slots=True)
class Box(Formula):
    inner: Formula


BOT = Bot()
TOP = Imp(BOT, BOT)

_RANK = {Var: 0, Bot: 1, Box: 2, And: 3, Or: 4, Imp: 5}


@lru_cache(maxsize=None)
def sort_key(f: Formula) -> tuple:
    """Total order: by size, then constructor, then components."""
    if isinstance(f, Var):
        return (1, 0, f.name)
    if isinstance(f, Bot):
        return (1, 1)
    if isinstance(f, Box):
        k = sort_key(f.inner)
        return (k[0] + 1, 2, k)
    a, b = sort_key(f.lhs), sort_key(f.rhs)
    return (a[0] + b[0] + 1, _RANK[type(f)], a, b)


def size(f: Formula) -> int:
    return sort_key(f)[0]


def immediate_subformulas(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Box):
        return (f.inner,)
    if isinstance(f, (Imp, And, Or)):
        return (f.lhs, f.rhs)
    return ()


def subformulas(f: Formula) -> set[Formula]:
    out: set[Formula] = set()
    todo = [f]
    while todo:
        g = todo.pop()
        if g not in out:
            out.add(g)
            todo.extend(immediate_subformulas(g))
    return out


def variables(f: Formula) -> set[str]:
    return {g.name for g in subformulas(f) if isinstance(g, Var)}


class FMultiset:
    """Finite multiset of formulas kept in canonical (sorted) form."""

    __slots__ = ("_items", "_hash")

    def __init__(self, formulas: Iterable[Formula] = ()):
        counts = Counter(formulas)
        self._items: tuple[tuple[Formula, int], ...] = tuple(
            sorted(counts.items(), key=lambda kv: sort_key(kv[0]))
        )
        self._hash = hash(self._items)

    @classmethod
    def _from_counts(cls, counts: Counter) -> FMultiset:
        ms = cls.__new__(cls)
        ms._items = tuple(
            sorted(((f, n) for f, n in counts.items() if n > 0), key=lambda kv: sort_key(kv[0]))
        )
        ms._hash = hash(ms._items)
        return ms

    def counts(self) -> Counter:
        return Counter(dict(self._items))

    def items(self) -> tuple[tuple[Formula, int], ...]:
        return self._items

    def distinct(self) -> list[Formula]:
        return [f for f, _ in self._items]

    def count(self, f: Formula) -> int:
        for g, n in self._items:
            if g == f:
                return n
        return 0

    def __iter__(self) -> Iterator[Formula]:
        for f, n in self._items:
            for _ in range(n):
                yield f

    def __len__(self) -> int:
        return sum(n for _, n in self._items)

    def __contains__(self, f: object) -> bool:
        return any(g == f for g, _ in self._items)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FMultiset) and self._hash == other._hash and self._items == other._items

    def __hash__(self) -> int:
        return self._hash

    def __add__(self, other: FMultiset | Iterable[Formula]) -> FMultiset:
        c = self.counts()
        c.update(other)
        return FMultiset._from_counts(c)

    def __sub__(self, other: FMultiset | Iterable[Formula]) -> FMultiset:
        c = self.counts()
        c.subtract(other)
        return FMultiset._from_counts(c)

    def add(self, *fs: Formula) -> FMultiset:
        return self + fs

    def remove(self, f: Formula) -> FMultiset:
        """Drop one occurrence of ``f``; ``KeyError`` if absent."""
        if f not in self:
            raise KeyError(f)
        return self - (f,)

    def issubset(self, other: FMultiset) -> bool:
        return all(other.count(f) >= n for f, n in self._items)

    def set_part(self) -> FMultiset:
        return FMultiset._from_counts(Counter({f: 1 for f, _ in self._items}))

    def is_set(self) -> bool:
        return all(n == 1 for _, n in self._items)

    def boxed(self) -> FMultiset:
        """Sub-multiset of formulas of the form ``[]A``."""
        return FMultiset._from_counts(Counter({f: n for f, n in self._items if isinstance(f, Box)}))

    def __repr__(self) -> str:
        return "FMultiset([%s])" % ", ".join(show(f) for f in self)


EMPTY = FMultiset()


def box_all(gamma: Iterable[Formula]) -> FMultiset:
    return FMultiset(Box(f) for f in gamma)


def dnec(gamma: FMultiset) -> FMultiset:
    """``gamma, []gamma`` with multiplicities preserved."""
    return gamma + box_all(gamma)


def undnec(m: FMultiset) -> FMultiset | None:
    """Solve ``m = dnec(gamma)`` for ``gamma``; ``None`` if impossible.

    The solution is unique: an unboxed formula counts only towards ``gamma``,
    and ``[]B`` contributes its own count minus the count of ``B`` in ``gamma``.
    Processing formulas by increasing size settles ``B`` before ``[]B``.
    """
    src = m.counts()
    gamma: Counter = Counter()
    for f, n in m.items():  # sorted by size
        k = n
        if isinstance(f, Box):
            k -= gamma[f.inner]
        if k < 0:
            return None
        if k:
            gamma[f] = k
    rebuilt = Counter(gamma)
    rebuilt.update(Box(f) for f in gamma.elements())
    return FMultiset._from_counts(gamma) if rebuilt == src else None


@dataclass(frozen=True, slots=True)
class Sequent:
    left: FMultiset
    right: Formula

    def __str__(self) -> str:
        return show_sequent(self)

    def contracted(self) -> Sequent:
        return Sequent(self.left.set_part(), self.right)

    def formulas(self) -> list[Formula]:
        return [*self.left.distinct(), self.right]


def seq(left: Iterable[Formula], right: Formula) -> Sequent:
    return Sequent(FMultiset(left), right)


def conj(fs: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``bot -> bot``."""
    out: Formula | None = None
    for f in fs:
        out = f if out is None else And(out, f)
    return TOP if out is None else out


def interpret(s: Sequent) -> Formula:
    """The formula ``/\\left -> right`` read off a sequent."""
    return Imp(conj(s.left), s.right)


def subformula_closure(s: Sequent) -> set[Formula]:
    out: set[Formula] = set()
    for f in s.formulas():
        out |= subformulas(f)
    return out


# -- printing -----------------------------------------------------------------

_PREC = {Imp: 1, Or: 2, And: 3}


def show(f: Formula) -> str:
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Box):
        inner = show(f.inner)
        if isinstance(f.inner, (Imp, And, Or)):
            inner = f"({inner})"
        return "[]" + inner
    p = _PREC[type(f)]
    lhs, rhs = show(f.lhs), show(f.rhs)
    lp = _PREC.get(type(f.lhs), 9)
    rp = _PREC.get(type(f.rhs), 9)
    if isinstance(f, Imp):
        # right associative
        if lp <= p:
            lhs = f"({lhs})"
        if rp < p:
            rhs = f"({rhs})"
        return f"{lhs} -> {rhs}"
    # left associative
    if lp < p:
        lhs = f"({lhs})"
    if rp <= p:
        rhs = f"({rhs})"
    op = "&" if isinstance(f, And) else "|"
    return f"{lhs} {op} {rhs}"


def show_sequent(s: Sequent) -> str:
    left = ", ".join(show(f) for f in s.left)
    return f"{left} => {show(s.right)}" if left else f"=> {show(s.right)}"


# -- parsing ------------------------------------------------------------------


class ResourceLimit(RuntimeError):
    """A search or enumeration budget ran out before an answer was found."""


class ParseError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(->|~>|=>|\[\]|[&|(),])|([A-Za-z_][A-Za-z0-9_']*))")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        out.append(m.group(1) or m.group(2))
        pos = m.end()
    return out


def _describe(tok: str | None) -> str:
    return "end of input" if tok is None else repr(tok)


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, tok: str | None = None) -> str:
        t = self.peek()
        if t is None or (tok is not None and t != tok):
            raise ParseError(f"expected {tok or 'token'}, got {_describe(t)}")
        self.i += 1
        return t

    def formula(self) -> Formula:
        lhs = self.disj()
        if self.peek() in ("->", "~>"):
            self.take()
            return Imp(lhs, self.formula())
        return lhs

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        t = self.peek()
        if t == "[]":
            self.take()
            return Box(self.unary())
        if t == "(":
            self.take()
            f = self.formula()
            self.take(")")
            return f
        if t is None or not (t[0].isalpha() or t[0] == "_"):
            raise ParseError(f"expected formula, got {_describe(t)}")
        self.take()
        return BOT if t == "bot" else Var(t)

    def done(self) -> None:
        if self.peek() is not None:
            raise ParseError(f"trailing input at token {self.peek()!r}")


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    p.done()
    return f


def parse_sequent(text: str) -> Sequent:
    p = _Parser(text)
    left: list[Formula] = []
    if p.peek() != "=>":
        left.append(p.formula())
        while p.peek() == ",":
            p.take()
            left.append(p.formula())
    p.take("=>")
    right = p.formula()
    p.done()
    return seq(left, right)
