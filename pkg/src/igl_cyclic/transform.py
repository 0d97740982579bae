"""Admissible-rule transformers on finite iGLSeq proofs and a terminating
backward proof search for iGL_fin.

Weakening, contraction and the inversions used by contraction are
structural (they rebuild the tree).  Loeb's rule is realised by re-proving
the target sequent; cut is not available as a transformer.
"""

from __future__ import annotations

import os
import sys
from typing import Iterable

from .calculus import (
    R,
    RuleInstance,
    RuleName,
    System,
    _left_principal_ok,
    check_finite,
    conclusion,
    node,
    rule_of,
)
from .core import (
    BOT,
    And,
    Box,
    FMultiset,
    Formula,
    Imp,
    Or,
    ResourceLimit,
    Sequent,
    Var,
    box_all,
    undnec,
)
from .trees import FinTree

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

DEFAULT_MAX_DEPTH = int(os.environ.get("IGL_CYCLIC_MAX_DEPTH", 200))
DEFAULT_MAX_STATES = int(os.environ.get("IGL_CYCLIC_MAX_STATES", 10**6))


class NotAProof(ValueError):
    pass


class InternalError(RuntimeError):
    """A result the theory rules out (e.g. an unprovable Loeb target)."""


def _require_proof(p: FinTree) -> None:
    report = check_finite(p, System.iGLSeq)
    if not report.accepted:
        first = report.failures[0]
        raise NotAProof(f"input is not an iGLSeq proof: {list(first.path)} {first.detail}")


# -- weakening ----------------------------------------------------------------


def _weaken(p: FinTree, delta: FMultiset) -> FinTree:
    s, r = conclusion(p), rule_of(p)
    new = Sequent(s.left + delta, s.right)
    if r is R.Assump:
        raise NotAProof("cannot weaken an assumption leaf")
    if r in (R.RK4, R.RGL):
        # extra formulas join the passive context of the modal rule
        return FinTree(p.label._replace(sequent=new), p.children)
    return FinTree(p.label._replace(sequent=new), [_weaken(c, delta) for c in p.children])


def weaken(p: FinTree, delta: FMultiset | Iterable[Formula], check: bool = True) -> FinTree:
    """Proof of ``Gamma, Delta => phi`` from a proof of ``Gamma => phi``."""
    if check:
        _require_proof(p)
    delta = delta if isinstance(delta, FMultiset) else FMultiset(delta)
    return _weaken(p, delta) if len(delta) else p


# -- inversion and contraction ------------------------------------------------


def _invert(p: FinTree, a: Formula, rule: RuleName, which: int) -> FinTree:
    """Replace one occurrence of ``a`` on the left by its components.

    ``rule``/``which`` select the inverted rule and premise: AndL/0 yields
    both conjuncts, OrL/0 or OrL/1 one disjunct, ImpL/1 the consequent.
    Height never grows.
    """
    s, r = conclusion(p), rule_of(p)
    if rule is R.AndL:
        parts: tuple[Formula, ...] = (a.lhs, a.rhs)
    elif rule is R.OrL:
        parts = (a.lhs,) if which == 0 else (a.rhs,)
    else:
        parts = (a.rhs,)
    new = Sequent(s.left.remove(a).add(*parts), s.right)
    if r in (R.Prop, R.Absurd):
        return node(new, r)
    if r in (R.RK4, R.RGL):
        return FinTree(p.label._replace(sequent=new), p.children)
    if r is rule and _left_principal_ok(RuleInstance.at(p), a):
        return p.children[which]
    return FinTree(p.label._replace(sequent=new), [_invert(c, a, rule, which) for c in p.children])


def _contract_one(p: FinTree, a: Formula) -> FinTree:
    """From a proof of ``Gamma, a, a => chi`` build one of ``Gamma, a => chi``."""
    s, r = conclusion(p), rule_of(p)
    new = Sequent(s.left.remove(a), s.right)
    if r in (R.Prop, R.Absurd):
        return node(new, r)
    if r in (R.RK4, R.RGL):
        (prem,) = p.children
        left = conclusion(prem).left
        if r is R.RGL:
            left = left.remove(s.right)
        gamma = undnec(left)
        if s.left.count(a) > box_all(gamma).count(a):
            return FinTree(p.label._replace(sequent=new), p.children)
        # both copies belong to []Gamma: contract inside the premise
        inner = _contract_one(_contract_one(prem, a.inner), a)
        return node(new, r, inner)
    inst = RuleInstance.at(p)
    if r in (R.AndL, R.OrL, R.ImpL) and _left_principal_ok(inst, a):
        if r is R.AndL:
            q = _invert(p.children[0], a, R.AndL, 0)
            q = _contract_one(_contract_one(q, a.lhs), a.rhs)
            return node(new, r, q)
        if r is R.OrL:
            q0 = _contract_one(_invert(p.children[0], a, R.OrL, 0), a.lhs)
            q1 = _contract_one(_invert(p.children[1], a, R.OrL, 1), a.rhs)
            return node(new, r, q0, q1)
        q0 = _contract_one(p.children[0], a)
        q1 = _contract_one(_invert(p.children[1], a, R.ImpL, 1), a.rhs)
        return node(new, r, q0, q1)
    return FinTree(p.label._replace(sequent=new), [_contract_one(c, a) for c in p.children])


def contract(p: FinTree, check: bool = True) -> FinTree:
    """Proof of ``set_part(Gamma) => phi`` from a proof of ``Gamma => phi``."""
    if check:
        _require_proof(p)
    while True:
        dup = next((f for f, n in conclusion(p).left.items() if n > 1), None)
        if dup is None:
            return p
        p = _contract_one(p, dup)


def contract_to(p: FinTree, left: FMultiset, check: bool = True) -> FinTree:
    """Contract the end-sequent's left side down to ``left``, which must be a
    sub-multiset with the same underlying set."""
    if check:
        _require_proof(p)
    have = conclusion(p).left
    if not left.issubset(have) or left.set_part() != have.set_part():
        raise ValueError("contraction target must keep every formula of the left side")
    while True:
        cur = conclusion(p).left
        extra = next((f for f, n in cur.items() if n > left.count(f)), None)
        if extra is None:
            return p
        p = _contract_one(p, extra)


# -- Loeb's rule --------------------------------------------------------------


def loeb_target(s: Sequent) -> Sequent | None:
    """For ``dnec(Gamma), []Delta, []phi => phi`` return ``dnec(Gamma), []Delta => phi``.

    ``None`` when the sequent has no such decomposition.
    """
    diag = Box(s.right)
    if diag not in s.left:
        return None
    rest = s.left.remove(diag)
    for f, n in rest.items():
        if not isinstance(f, Box) and rest.count(Box(f)) < n:
            return None
    return Sequent(rest, s.right)


def loeb(p: FinTree, check: bool = True, prover: Prover | None = None) -> FinTree:
    """Apply Loeb's rule to the end-sequent; identity when it does not have Loeb shape."""
    if check:
        _require_proof(p)
    target = loeb_target(conclusion(p))
    if target is None:
        return p
    q = (prover or default_prover()).prove(target)
    if q is None:
        raise InternalError(f"Loeb target {target} has no proof")
    return q


# -- proof search -------------------------------------------------------------

_INF = float("inf")


class Prover:
    """Backward proof search over set-left-sided sequents with loop checking.

    Premises produced by a rule are contracted to their set part before the
    recursive search and the missing copies are restored by weakening, so
    every returned tree is a literal iGLSeq proof of the goal.
    """

    def __init__(self, max_depth: int = DEFAULT_MAX_DEPTH, max_states: int = DEFAULT_MAX_STATES):
        self.max_depth = max_depth
        self.max_states = max_states
        self.states = 0
        self._proved: dict[Sequent, FinTree] = {}
        self._failed: set[Sequent] = set()

    def prove(self, goal: Sequent) -> FinTree | None:
        self.states = 0
        s = goal.contracted()
        res, _ = self._search(s, {}, 0)
        if res is None:
            return None
        extra = goal.left - s.left
        return _weaken(res, extra) if len(extra) else res

    def provable(self, goal: Sequent) -> bool:
        return self.prove(goal) is not None

    def _search(self, s: Sequent, hist: dict[Sequent, int], depth: int):
        hit = self._proved.get(s)
        if hit is not None:
            return hit, _INF
        if s in self._failed:
            return None, _INF
        if s in hist:
            return None, hist[s]
        if depth > self.max_depth:
            raise ResourceLimit(f"search depth {self.max_depth} exceeded")
        self.states += 1
        if self.states > self.max_states:
            raise ResourceLimit(f"more than {self.max_states} search states")

        left, right = s.left, s.right
        if isinstance(right, Var) and right in left:
            return self._keep(s, node(s, R.Prop)), _INF
        if BOT in left:
            return self._keep(s, node(s, R.Absurd)), _INF

        hist[s] = depth
        try:
            inv = self._invertible(s)
            if inv is not None:
                res, low = self._apply(s, *inv, hist, depth)
                if res is not None:
                    return self._keep(s, res), low
                if low >= depth:
                    self._failed.add(s)
                return None, low
            low = _INF
            for rule, prems in self._alternatives(s):
                res, l = self._apply(s, rule, prems, hist, depth)
                low = min(low, l)
                if res is not None:
                    return self._keep(s, res), low
            if low >= depth:
                self._failed.add(s)
            return None, low
        finally:
            del hist[s]

    def _keep(self, s: Sequent, p: FinTree) -> FinTree:
        self._proved[s] = p
        return p

    def _apply(self, s, rule, prems, hist, depth):
        kids, low = [], _INF
        for prem in prems:
            sp = prem.contracted()
            res, l = self._search(sp, hist, depth + 1)
            low = min(low, l)
            if res is None:
                return None, low
            extra = prem.left - sp.left
            kids.append(_weaken(res, extra) if len(extra) else res)
        return node(s, rule, *kids), low

    @staticmethod
    def _invertible(s: Sequent):
        left, right = s.left, s.right
        for f in left.distinct():
            if isinstance(f, And):
                return R.AndL, [Sequent(left.remove(f).add(f.lhs, f.rhs), right)]
            if isinstance(f, Or):
                rest = left.remove(f)
                return R.OrL, [Sequent(rest.add(f.lhs), right), Sequent(rest.add(f.rhs), right)]
        if isinstance(right, And):
            return R.AndR, [Sequent(left, right.lhs), Sequent(left, right.rhs)]
        if isinstance(right, Imp):
            return R.ImpR, [Sequent(left.add(right.lhs), right.rhs)]
        return None

    @staticmethod
    def _alternatives(s: Sequent):
        left, right = s.left, s.right
        if isinstance(right, Or):
            yield R.OrR0, [Sequent(left, right.lhs)]
            yield R.OrR1, [Sequent(left, right.rhs)]
        if isinstance(right, Box):
            gamma = FMultiset(f.inner for f in left.boxed())
            yield R.RGL, [Sequent(gamma + left.boxed() + (right,), right.inner)]
        for f in left.distinct():
            if isinstance(f, Imp):
                yield R.ImpL, [Sequent(left, f.lhs), Sequent(left.remove(f).add(f.rhs), right)]


_default: Prover | None = None


def default_prover() -> Prover:
    global _default
    if _default is None:
        _default = Prover()
    return _default


def prove(goal: Sequent, prover: Prover | None = None) -> FinTree | None:
    """A checked iGLSeq proof of ``goal`` or ``None`` when none exists.

    Raises :class:`ResourceLimit` when the search budget runs out.
    """
    return (prover or default_prover()).prove(goal)
