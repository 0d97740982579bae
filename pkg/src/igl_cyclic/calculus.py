"""Rule instances of iG3, iK4Seq and iGLSeq, and the finite proof checker."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .core import And, Bot, Box, Formula, Imp, Or, Sequent, Var, box_all, undnec
from .trees import FinTree, Path


class RuleName(enum.Enum):
    Assump = "Assump"
    Prop = "Prop"
    Absurd = "Absurd"
    AndL = "AndL"
    AndR = "AndR"
    OrL = "OrL"
    OrR0 = "OrR0"
    OrR1 = "OrR1"
    ImpL = "ImpL"
    ImpR = "ImpR"
    RK4 = "RK4"
    RGL = "RGL"

    def __str__(self) -> str:
        return self.value


R = RuleName


class System(enum.Enum):
    iG3 = "iG3"
    iK4Seq = "iK4"
    iGLSeq = "iGL"

    @classmethod
    def parse(cls, text: str) -> System:
        t = text.strip()
        for s in cls:
            if t in (s.value, s.name):
                return s
        raise ValueError(f"unknown system {text!r}")


_G3 = frozenset({R.Prop, R.Absurd, R.AndL, R.AndR, R.OrL, R.OrR0, R.OrR1, R.ImpL, R.ImpR})
RULES = {
    System.iG3: _G3,
    System.iK4Seq: _G3 | {R.RK4},
    System.iGLSeq: _G3 | {R.RGL},
}


class Step(NamedTuple):
    """Node label of a proof tree."""

    sequent: Sequent
    rule: RuleName


# A finite proof (or derivation) is a FinTree[Step].
Proof = FinTree


def conclusion(p: FinTree) -> Sequent:
    return p.label.sequent


def rule_of(p: FinTree) -> RuleName:
    return p.label.rule


def node(sequent: Sequent, rule: RuleName, *children: FinTree) -> FinTree:
    return FinTree(Step(sequent, rule), children)


@dataclass(frozen=True)
class RuleInstance:
    premises: tuple[Sequent, ...]
    conclusion: Sequent
    name: RuleName

    @classmethod
    def at(cls, p: FinTree) -> RuleInstance:
        return cls(tuple(conclusion(c) for c in p.children), conclusion(p), rule_of(p))


class NotAnInstance(ValueError):
    pass


ALL = "All"  # principal-formula marker for the modal rules


def _sole_premise(prem: Sequence[Sequent], n: int) -> str | None:
    return None if len(prem) == n else f"expected {n} premise(s), got {len(prem)}"


def _match_modal(prem: Sequence[Sequent], concl: Sequent, loeb: bool) -> str | None:
    if (err := _sole_premise(prem, 1)) is not None:
        return err
    if not isinstance(concl.right, Box):
        return "conclusion right side is not boxed"
    (p,) = prem
    if p.right != concl.right.inner:
        return "premise right side must be the unboxed conclusion formula"
    left = p.left
    if loeb:
        if concl.right not in left:
            return "premise lacks the diagonal formula []phi"
        left = left.remove(concl.right)
    gamma = undnec(left)
    if gamma is None:
        return "premise left side is not of the form Gamma, []Gamma"
    if not box_all(gamma).issubset(concl.left):
        return "[]Gamma is not contained in the conclusion"
    return None


def _find_left(concl: Sequent, kind: type) -> list[Formula]:
    return [f for f in concl.left.distinct() if isinstance(f, kind)]


def explain_mismatch(inst: RuleInstance, system: System) -> str | None:
    """``None`` when ``inst`` instantiates its named schema in ``system``,
    otherwise the first failing constraint."""
    name, prem, c = inst.name, inst.premises, inst.conclusion
    if name not in RULES[system]:
        return f"rule {name} is not in {system.name}"
    if name is R.Prop:
        if prem:
            return "Prop has no premises"
        if not isinstance(c.right, Var):
            return "Prop needs a variable on the right"
        return None if c.right in c.left else "right variable does not occur on the left"
    if name is R.Absurd:
        if prem:
            return "Absurd has no premises"
        return None if Bot() in c.left else "bot does not occur on the left"
    if name is R.AndL:
        if (err := _sole_premise(prem, 1)) is not None:
            return err
        for a in _find_left(c, And):
            if prem[0] == Sequent(c.left.remove(a).add(a.lhs, a.rhs), c.right):
                return None
        return "no conjunction on the left yields the premise"
    if name is R.AndR:
        if (err := _sole_premise(prem, 2)) is not None:
            return err
        if not isinstance(c.right, And):
            return "right side is not a conjunction"
        ok = prem[0] == Sequent(c.left, c.right.lhs) and prem[1] == Sequent(c.left, c.right.rhs)
        return None if ok else "premises do not match the conjuncts"
    if name is R.OrL:
        if (err := _sole_premise(prem, 2)) is not None:
            return err
        for a in _find_left(c, Or):
            rest = c.left.remove(a)
            if prem[0] == Sequent(rest.add(a.lhs), c.right) and prem[1] == Sequent(rest.add(a.rhs), c.right):
                return None
        return "no disjunction on the left yields the premises"
    if name in (R.OrR0, R.OrR1):
        if (err := _sole_premise(prem, 1)) is not None:
            return err
        if not isinstance(c.right, Or):
            return "right side is not a disjunction"
        part = c.right.lhs if name is R.OrR0 else c.right.rhs
        return None if prem[0] == Sequent(c.left, part) else "premise does not match the disjunct"
    if name is R.ImpL:
        if (err := _sole_premise(prem, 2)) is not None:
            return err
        for a in _find_left(c, Imp):
            if prem[0] == Sequent(c.left, a.lhs) and prem[1] == Sequent(c.left.remove(a).add(a.rhs), c.right):
                return None
        return "no implication on the left yields the premises"
    if name is R.ImpR:
        if (err := _sole_premise(prem, 1)) is not None:
            return err
        if not isinstance(c.right, Imp):
            return "right side is not an implication"
        ok = prem[0] == Sequent(c.left.add(c.right.lhs), c.right.rhs)
        return None if ok else "premise does not match"
    if name is R.RK4:
        return _match_modal(prem, c, loeb=False)
    if name is R.RGL:
        return _match_modal(prem, c, loeb=True)
    return f"{name} is not a rule"


def match_rule(inst: RuleInstance, system: System) -> bool:
    return explain_mismatch(inst, system) is None


def principal_formula(inst: RuleInstance) -> Formula | str:
    """Principal formula of a matching instance; :data:`ALL` for modal rules."""
    name, prem, c = inst.name, inst.premises, inst.conclusion
    sys_ = System.iK4Seq if name is R.RK4 else System.iGLSeq
    if name is R.Assump or not match_rule(inst, sys_):
        raise NotAnInstance(f"{name} instance does not match its schema")
    if name in (R.RK4, R.RGL):
        return ALL
    if name is R.Prop:
        return c.right
    if name is R.Absurd:
        return Bot()
    if name in (R.AndR, R.OrR0, R.OrR1, R.ImpR):
        return c.right
    kind = {R.AndL: And, R.OrL: Or, R.ImpL: Imp}[name]
    for a in _find_left(c, kind):
        probe = RuleInstance(prem, c, name)
        if _left_principal_ok(probe, a):
            return a
    raise NotAnInstance(name)  # pragma: no cover - unreachable after match


def _left_principal_ok(inst: RuleInstance, a: Formula) -> bool:
    c, prem = inst.conclusion, inst.premises
    kind = {R.AndL: And, R.OrL: Or, R.ImpL: Imp}.get(inst.name)
    if kind is None or not isinstance(a, kind) or a not in c.left:
        return False
    rest = c.left.remove(a)
    if inst.name is R.AndL:
        return prem[0] == Sequent(rest.add(a.lhs, a.rhs), c.right)
    if inst.name is R.OrL:
        return prem[0] == Sequent(rest.add(a.lhs), c.right) and prem[1] == Sequent(rest.add(a.rhs), c.right)
    return prem[0] == Sequent(c.left, a.lhs) and prem[1] == Sequent(rest.add(a.rhs), c.right)


# -- checking -----------------------------------------------------------------


@dataclass(frozen=True)
class Failure:
    path: Path
    code: str
    detail: str
    sequent: str = ""

    def as_dict(self) -> dict:
        return {"path": list(self.path), "code": self.code, "detail": self.detail, "sequent": self.sequent}


@dataclass
class CheckReport:
    accepted: bool = True
    failures: list[Failure] = field(default_factory=list)
    nodes_checked: int = 0

    def fail(self, path: Path, code: str, detail: str, sequent: Sequent | None = None) -> None:
        self.accepted = False
        self.failures.append(Failure(tuple(path), code, detail, str(sequent) if sequent is not None else ""))

    def extend(self, other: CheckReport) -> None:
        self.nodes_checked += other.nodes_checked
        for f in other.failures:
            self.accepted = False
            self.failures.append(f)

    def to_jsonl(self) -> str:
        return "\n".join(json.dumps(f.as_dict(), sort_keys=True) for f in self.failures)

    def __bool__(self) -> bool:
        return self.accepted


def check_finite(
    p: FinTree,
    system: System = System.iGLSeq,
    assumptions: Iterable[Sequent] | None = None,
) -> CheckReport:
    """Check a finite derivation node by node.

    With ``assumptions=None`` the tree must be a proof: no ``Assump`` leaves.
    Otherwise ``Assump`` leaves are allowed when their sequent is declared.
    """
    allowed = None if assumptions is None else frozenset(assumptions)
    report = CheckReport()
    for path, t in p.nodes():
        report.nodes_checked += 1
        step = t.label
        if not isinstance(step, Step):
            report.fail(path, "bad-label", f"label {step!r} is not a (sequent, rule) pair")
            continue
        if step.rule is R.Assump:
            if t.children:
                report.fail(path, "assump-interior", "Assump labels an interior node", step.sequent)
            elif allowed is None:
                report.fail(path, "assumption-in-proof", "proofs have no assumptions", step.sequent)
            elif step.sequent not in allowed:
                report.fail(path, "undeclared-assumption", "sequent is not a declared assumption", step.sequent)
            continue
        why = explain_mismatch(RuleInstance.at(t), system)
        if why is not None:
            report.fail(path, "bad-instance", f"{step.rule}: {why}", step.sequent)
    return report


def is_proof(p: FinTree, system: System = System.iGLSeq) -> bool:
    return check_finite(p, system).accepted
