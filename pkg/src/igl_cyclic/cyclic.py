"""Cyclic derivations: a finite iK4Seq derivation plus backlinks from
assumption leaves to ancestors carrying the same sequent."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .calculus import CheckReport, R, RuleName, Step, System, check_finite, conclusion, rule_of
from .core import Sequent
from .trees import FinTree, Path, PathNotInTree, is_prefix, is_proper_prefix, subtree

# progress(leaf_path, [(sequent, rule) for each node root..leaf], cycle_start) -> bool
ProgressPredicate = Callable[[Path, Sequence[tuple[Sequent, RuleName]], int], bool]


def k4_progress(path: Path, labels: Sequence[tuple[Sequent, RuleName]], start: int) -> bool:
    """iK4_circ: some node at index >= ``start`` on the path is an RK4 step."""
    return any(rule is R.RK4 for _, rule in labels[start:])


def always(path, labels, start) -> bool:
    return True


def never(path, labels, start) -> bool:
    return False


def premise_progress(rule: RuleName, k: int) -> ProgressPredicate:
    """Grz-style condition: within the cycle, ``rule`` is applied and the path
    leaves that node through its ``k``-th premise."""

    def pred(path: Path, labels: Sequence[tuple[Sequent, RuleName]], start: int) -> bool:
        return any(labels[j][1] is rule and path[j] == k for j in range(start, len(path)))

    pred.__name__ = f"premise_progress_{rule}_{k}"
    return pred


PROGRESS = {"k4circ": k4_progress, "none": always, "never": never}


def progress_by_name(name: str) -> ProgressPredicate:
    """``k4circ``, ``none``, ``never`` or ``grz-<k>`` (RK4 left through premise k)."""
    if name in PROGRESS:
        return PROGRESS[name]
    if name.startswith("grz-"):
        return premise_progress(R.RK4, int(name[4:]))
    raise ValueError(f"unknown progress condition {name!r}")


@dataclass(frozen=True)
class CyclicDerivation:
    proof: FinTree
    backlinks: dict[Path, Path] = field(default_factory=dict)
    open_assumptions: frozenset[Sequent] = frozenset()

    def root(self) -> Sequent:
        return conclusion(self.proof)

    def assumption_leaves(self) -> list[Path]:
        return [p for p, t in self.proof.nodes() if not t.children and rule_of(t) is R.Assump]

    def is_cyclic_proof(self) -> bool:
        """Backlinks cover every assumption leaf and nothing is left open."""
        return not self.open_assumptions and all(p in self.backlinks for p in self.assumption_leaves())


def check_cyclic(
    d: CyclicDerivation,
    progress: ProgressPredicate = k4_progress,
    system: System = System.iK4Seq,
) -> CheckReport:
    tree = d.proof
    linked: set[Sequent] = set()
    report = CheckReport()
    for s, b in d.backlinks.items():
        try:
            leaf = subtree(tree, s)
            target = subtree(tree, b)
        except PathNotInTree:
            report.fail(s, "backlink-dangling", f"backlink {list(s)} -> {list(b)} leaves the tree")
            continue
        if leaf.children or rule_of(leaf) is not R.Assump:
            report.fail(s, "backlink-source", "backlink source is not an assumption leaf", conclusion(leaf))
            continue
        if not is_proper_prefix(b, s):
            report.fail(s, "backlink-not-ancestor", f"target {list(b)} is not a proper ancestor")
            continue
        if conclusion(target) != conclusion(leaf):
            report.fail(s, "backlink-sequent", "target carries a different sequent", conclusion(leaf))
            continue
        linked.add(conclusion(leaf))
        labels = [(st.sequent, st.rule) for st in tree.labels_along(s)]
        if not progress(s, labels, len(b)):
            report.fail(s, "no-progress", "cycle violates the progress condition", conclusion(leaf))

    base = check_finite(tree, system, set(d.open_assumptions) | linked)
    report.extend(base)
    for s in d.assumption_leaves():
        seq = conclusion(subtree(tree, s))
        if s not in d.backlinks and seq not in d.open_assumptions:
            report.fail(s, "unlinked-assumption", "assumption is neither open nor backlinked", seq)
    return report


def classify_assumptions(p: FinTree) -> tuple[set[Path], set[Path]]:
    """Split assumption leaves into those with an RK4 strict ancestor (boxed) and the rest."""
    boxed: set[Path] = set()
    nonboxed: set[Path] = set()
    stack: list[tuple[Path, FinTree, bool]] = [((), p, False)]
    while stack:
        path, t, seen_k4 = stack.pop()
        if not t.children and rule_of(t) is R.Assump:
            (boxed if seen_k4 else nonboxed).add(path)
        below = seen_k4 or rule_of(t) is R.RK4
        for i, c in enumerate(t.children):
            stack.append((path + (i,), c, below))
    return boxed, nonboxed


def unroll(d: CyclicDerivation, leaf: Path) -> CyclicDerivation:
    """Splice a copy of the backlink target's subtree onto ``leaf``.

    Backlinks inside the copied subtree are redirected to the copy; those
    pointing further down keep their target.
    """
    target = d.backlinks[leaf]
    copy = subtree(d.proof, target)
    tree = d.proof.replace(leaf, copy)
    links: dict[Path, Path] = {}
    for s, b in d.backlinks.items():
        if s != leaf:
            links[s] = b
        if is_prefix(target, s):
            moved = leaf + s[len(target):]
            links[moved] = leaf + b[len(target):] if is_prefix(target, b) else b
    return CyclicDerivation(tree, links, d.open_assumptions)


def assumption_step(sequent: Sequent) -> FinTree:
    return FinTree(Step(sequent, R.Assump))
