"""Finite iGL proofs to ill-founded iK4 proofs (by corecursion), folding the
ill-founded proof into a cyclic one, and the way back."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .calculus import (
    CheckReport,
    R,
    RuleInstance,
    Step,
    System,
    check_finite,
    conclusion,
    explain_mismatch,
    rule_of,
)
from .core import Box, Formula, Imp, ResourceLimit, Sequent, conj, dnec, interpret, undnec
from .cyclic import CyclicDerivation, assumption_step, check_cyclic, classify_assumptions, k4_progress
from .transform import InternalError, Prover, contract_to, default_prover, loeb
from .trees import FinTree, LazyTree, MemoStep, Path, corecurse, subtree

# beta(proof) -> (root label, child proofs)
BetaStep = Callable[[FinTree], tuple[Step, Sequence[FinTree]]]

UNFOLD_CAP = 10**5


class UnfoldBudgetExceeded(ResourceLimit):
    pass


def default_beta(prover: Prover | None = None) -> BetaStep:
    """RGL roots become RK4 over the Loeb-reduced premise, contracted to
    ``dnec(set(Gamma)) => phi``; other roots are destructed as they are.

    Full contraction would not do: the set underlying ``dnec(Gamma)`` need not
    have the form ``dnec(Delta)`` (take ``Gamma = p, []p``).
    """

    def reduce(c: FinTree) -> FinTree:
        q = loeb(c, check=False, prover=prover)
        gamma = undnec(conclusion(q).left)
        if gamma is None:
            raise InternalError(f"Loeb output {conclusion(q)} is not of the form dnec(Gamma) => phi")
        return contract_to(q, dnec(gamma.set_part()), check=False)

    def beta(p: FinTree) -> tuple[Step, Sequence[FinTree]]:
        if rule_of(p) is R.RGL:
            return p.label._replace(rule=R.RK4), [reduce(c) for c in p.children]
        return p.label, p.children

    return beta


def identity_beta(p: FinTree) -> tuple[Step, Sequence[FinTree]]:
    return p.label, p.children


def trans(p: FinTree, beta: BetaStep | None = None) -> LazyTree:
    return corecurse(p, MemoStep(beta or default_beta()))


def validate_beta(beta: BetaStep, samples: Iterable[FinTree]) -> CheckReport:
    """Check the three translation conditions of ``beta`` on each sample proof.

    1. the child trees are iGLSeq proofs;
    2. the root label over the children's labels is an iK4Seq instance;
    3. unless that label is RK4, every child is strictly lower than the sample.
    """
    report = CheckReport()
    for n, p in enumerate(samples):
        where = (n,)
        label, kids = beta(p)
        for i, k in enumerate(kids):
            if not check_finite(k, System.iGLSeq).accepted:
                report.fail(where + (i,), "cond1-child-not-proof", "child is not an iGLSeq proof", conclusion(k))
        inst = RuleInstance(tuple(beta(k)[0].sequent for k in kids), label.sequent, label.rule)
        why = explain_mismatch(inst, System.iK4Seq)
        if why is not None:
            report.fail(where, "cond2-not-ik4-rule", why, label.sequent)
        if label.rule is not R.RK4 and any(k.height >= p.height for k in kids):
            report.fail(where, "cond3-height", "child height did not drop below a non-RK4 root", label.sequent)
        report.nodes_checked += 1
    return report


def check_unfolding(p: FinTree, depth: int, beta: BetaStep | None = None) -> CheckReport:
    """Check every non-truncated node of the depth-``depth`` unfolding of ``trans(p)``.

    Besides the rule instance, the finite proofs that generate each node
    (the seeds along each path) must strictly lose height across every
    non-RK4 step.  Nodes are identified by their path in the unfolding.
    """
    step = MemoStep(beta or default_beta())
    report = CheckReport()
    stack: list[tuple[Path, FinTree]] = [((), p)]
    while stack:
        path, seed = stack.pop()
        label, kids = step(seed)
        if len(path) >= depth:
            continue
        report.nodes_checked += 1
        inst = RuleInstance(tuple(step(k)[0].sequent for k in kids), label.sequent, label.rule)
        why = explain_mismatch(inst, System.iK4Seq)
        if why is not None:
            report.fail(path, "bad-instance", why, label.sequent)
        if label.rule is not R.RK4:
            for k in kids:
                if k.height >= seed.height:
                    report.fail(path, "height-not-decreasing", f"{k.height} >= {seed.height}", label.sequent)
        for i, k in enumerate(kids):
            stack.append((path + (i,), k))
    return report


def fin_to_circ(p: FinTree, beta: BetaStep | None = None, cap: int = UNFOLD_CAP) -> CyclicDerivation:
    """Unfold ``trans(p)`` depth-first and fold it into a cyclic iK4 proof.

    Along each path the conclusions of RK4 premises are remembered; when one
    recurs, the node becomes an assumption leaf backlinked to the earliest
    earlier occurrence.
    """
    step = MemoStep(beta or default_beta())
    backlinks: dict[Path, Path] = {}
    count = 0

    def build(seed: FinTree, path: Path, seen: dict[Sequent, Path]) -> FinTree:
        nonlocal count
        count += 1
        if count > cap:
            raise UnfoldBudgetExceeded(f"unfolding exceeded {cap} nodes")
        label, kids = step(seed)
        children = []
        for i, k in enumerate(kids):
            kp = path + (i,)
            if label.rule is R.RK4:
                ks = step(k)[0].sequent
                if ks in seen:
                    backlinks[kp] = seen[ks]
                    children.append(assumption_step(ks))
                    continue
                children.append(build(k, kp, {**seen, ks: kp}))
            else:
                children.append(build(k, kp, seen))
        return FinTree(label, children)

    tree = build(p, (), {})
    return CyclicDerivation(tree, backlinks)


@dataclass(frozen=True)
class AssumptionFormulaBundle:
    nonboxed: frozenset[Formula]
    boxed: frozenset[Formula]
    goal: Formula

    def formula(self) -> Formula:
        """``/\\nonboxed & /\\boxed -> goal``."""
        parts = sorted(self.nonboxed) + sorted(self.boxed)
        return Imp(conj(parts), self.goal)


def assumption_formula(d: CyclicDerivation | FinTree) -> AssumptionFormulaBundle:
    tree = d.proof if isinstance(d, CyclicDerivation) else d
    boxed, nonboxed = classify_assumptions(tree)

    def sharp(path: Path) -> Formula:
        return interpret(conclusion(subtree(tree, path)))

    return AssumptionFormulaBundle(
        nonboxed=frozenset(sharp(a).dnec() for a in nonboxed),
        boxed=frozenset(Box(sharp(a)) for a in boxed),
        goal=interpret(conclusion(tree)),
    )


def circ_to_fin(d: CyclicDerivation, prover: Prover | None = None) -> FinTree:
    """Finite iGLSeq proof of the root of a cyclic iK4 proof."""
    if not d.is_cyclic_proof():
        raise ValueError("expected a cyclic proof: every assumption backlinked, none open")
    report = check_cyclic(d, k4_progress)
    if not report.accepted:
        raise ValueError(f"not an iK4_circ proof: {report.failures[0].detail}")
    root = d.root()
    q = (prover or default_prover()).prove(root)
    if q is None:
        raise InternalError(f"accepted cyclic proof of {root} but no finite proof exists")
    if not check_finite(q, System.iGLSeq).accepted:
        raise InternalError("proof search returned a tree the checker rejects")
    return q
