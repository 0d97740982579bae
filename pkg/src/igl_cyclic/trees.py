"""Finite labelled trees and lazy (corecursively defined) labelled trees.

Nodes are addressed by paths: tuples of child indices read from the root.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Any, Callable, Generic, Hashable, Iterator, Sequence, TypeVar

A = TypeVar("A")
B = TypeVar("B")

Path = tuple[int, ...]
ROOT: Path = ()


class PathNotInTree(LookupError):
    pass


class FinTree(Generic[A]):
    """Immutable finite ordered tree with structural equality.

    Hash and height are computed once at construction; proof trees are used
    as dictionary keys by the translation cache.
    """

    __slots__ = ("label", "children", "height", "_hash")

    def __init__(self, label: A, children: Sequence[FinTree[A]] = ()):
        self.label = label
        self.children: tuple[FinTree[A], ...] = tuple(children)
        self.height: int = 1 + max((c.height for c in self.children), default=-1)
        self._hash = hash((label, self.children))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, FinTree) or self._hash != other._hash:
            return False
        return self.label == other.label and self.children == other.children

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        if not self.children:
            return f"FinTree({self.label!r})"
        return f"FinTree({self.label!r}, {list(self.children)!r})"

    def is_leaf(self) -> bool:
        return not self.children

    def nodes(self) -> Iterator[tuple[Path, FinTree[A]]]:
        """Pre-order traversal yielding ``(path, subtree)``."""
        stack: list[tuple[Path, FinTree[A]]] = [(ROOT, self)]
        while stack:
            path, t = stack.pop()
            yield path, t
            for i in range(len(t.children) - 1, -1, -1):
                stack.append((path + (i,), t.children[i]))

    def node_set(self) -> set[Path]:
        return {p for p, _ in self.nodes()}

    def leaves(self) -> list[Path]:
        return [p for p, t in self.nodes() if not t.children]

    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    def map(self, f: Callable[[A], B]) -> FinTree[B]:
        return FinTree(f(self.label), [c.map(f) for c in self.children])

    def replace(self, path: Path, new: FinTree[A]) -> FinTree[A]:
        """Copy of this tree with the subtree at ``path`` swapped for ``new``."""
        if not path:
            return new
        i, rest = path[0], path[1:]
        if i >= len(self.children):
            raise PathNotInTree(path)
        kids = list(self.children)
        kids[i] = kids[i].replace(rest, new)
        return FinTree(self.label, kids)

    def labels_along(self, path: Path) -> list[A]:
        """Labels from the root down to and including the node at ``path``."""
        out, t = [self.label], self
        for i in path:
            if i >= len(t.children):
                raise PathNotInTree(path)
            t = t.children[i]
            out.append(t.label)
        return out


class LazyTree(Generic[A]):
    """A possibly infinite tree given by a seed and a one-step destructor.

    ``step(seed)`` returns the root label and the seeds of the children.
    The tree is never built eagerly; :meth:`destruct` performs one step.
    """

    __slots__ = ("seed", "step")

    def __init__(self, seed: Any, step: Callable[[Any], tuple[A, Sequence[Any]]]):
        self.seed = seed
        self.step = step

    def destruct(self) -> tuple[A, list[LazyTree[A]]]:
        label, seeds = self.step(self.seed)
        return label, [LazyTree(s, self.step) for s in seeds]

    @property
    def label(self) -> A:
        return self.step(self.seed)[0]

    @property
    def children(self) -> list[LazyTree[A]]:
        return self.destruct()[1]


def corecurse(seed: B, beta: Callable[[B], tuple[A, Sequence[B]]]) -> LazyTree[A]:
    """The unique tree-valued map ``h`` with ``h = node . (id x map h) . beta``, at ``seed``."""
    return LazyTree(seed, beta)


class MemoStep:
    """Thread-safe memoising wrapper around a step function with hashable seeds."""

    def __init__(self, step: Callable[[Hashable], tuple[Any, Sequence[Hashable]]]):
        self._step = step
        self._cache: dict[Hashable, tuple[Any, tuple]] = {}
        self._lock = threading.Lock()

    def __call__(self, seed: Hashable) -> tuple[Any, tuple]:
        with self._lock:
            hit = self._cache.get(seed)
        if hit is not None:
            return hit
        label, seeds = self._step(seed)
        res = (label, tuple(seeds))
        with self._lock:
            return self._cache.setdefault(seed, res)


def embed(t: FinTree[A]) -> LazyTree[A]:
    """View a finite tree as a lazy one."""
    return corecurse(t, lambda u: (u.label, u.children))


@dataclass(frozen=True)
class Truncated(Generic[A]):
    """Label of a node cut off by :func:`unfold_to_depth` while it still had children."""

    label: A


def unfold_to_depth(t: LazyTree[A], depth: int) -> FinTree[A | Truncated[A]]:
    if depth < 0:
        raise ValueError("depth must be non-negative")
    label, kids = t.destruct()
    if not kids:
        return FinTree(label)
    if depth == 0:
        return FinTree(Truncated(label))
    return FinTree(label, [unfold_to_depth(k, depth - 1) for k in kids])


def subtree(t: FinTree[A] | LazyTree[A], path: Path):
    for i in path:
        kids = t.children
        if i < 0 or i >= len(kids):
            raise PathNotInTree(path)
        t = kids[i]
    return t


def is_node(t: FinTree[A] | LazyTree[A], path: Path) -> bool:
    try:
        subtree(t, path)
    except PathNotInTree:
        return False
    return True


def is_branch_prefix(t: FinTree[A] | LazyTree[A], indices: Callable[[int], int], depth: int) -> bool:
    """Depth-bounded branch test: every prefix of length <= ``depth`` of the
    index stream ``indices`` is a node of ``t``."""
    return is_node(t, tuple(indices(i) for i in range(depth)))


def is_prefix(a: Path, b: Path) -> bool:
    return len(a) <= len(b) and b[: len(a)] == a


def is_proper_prefix(a: Path, b: Path) -> bool:
    return len(a) < len(b) and b[: len(a)] == a
