"""End-to-end acceptance checks, shared by the test suite and ``igl-cyclic corpus-run``.

Each check returns a :class:`CriterionResult`; none of them raise on a
failed criterion.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .calculus import RuleInstance, System, check_finite, conclusion, explain_mismatch
from .core import BOT, And, Box, FMultiset, Formula, Imp, Or, Sequent, Var, interpret, parse_formula, parse_sequent, seq
from .corpus import load, nonprogress_example
from .cyclic import always, check_cyclic, k4_progress
from .enumerate import small_sequents
from .semantics import MAX_FRAME_SIZE, Countermodel, Valid, lemma_table_obligations, valid_up_to
from .transform import Prover, contract, loeb, loeb_target, weaken
from .translate import check_unfolding, circ_to_fin, fin_to_circ, trans
from .trees import Truncated, unfold_to_depth


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    residuals: list[str] = field(default_factory=list)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.number} {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _timed(number: int, name: str):
    def wrap(fn: Callable[..., tuple[bool, str, list[str]] | tuple[bool, str]]):
        def run(*args, **kwargs) -> CriterionResult:
            t = time.perf_counter()
            out = fn(*args, **kwargs)
            passed, detail, *rest = out
            return CriterionResult(number, name, passed, detail, time.perf_counter() - t, rest[0] if rest else [])

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return wrap


# -- 1 -------------------------------------------------------------------------


@_timed(1, "non-progress cycle")
def nonprogress_rejected():
    d = nonprogress_example()
    strict = check_cyclic(d, k4_progress)
    vacuous = check_cyclic(d, always)
    codes = sorted({f.code for f in strict.failures})
    ok = not strict.accepted and codes == ["no-progress"] and vacuous.accepted
    return ok, f"k4circ rejects with {codes}, vacuous accepts={vacuous.accepted}"


# -- 2 and 6 --------------------------------------------------------------------


_enumeration_cache: dict[int, list[tuple[Sequent, object]]] = {}


def enumerate_verdicts(max_size: int = 5, prover: Prover | None = None):
    if max_size not in _enumeration_cache:
        P = prover or Prover()
        _enumeration_cache[max_size] = [(s, P.prove(s)) for s in small_sequents(max_size)]
    return _enumeration_cache[max_size]


@_timed(2, "prove agrees with cyclic provability")
def main_equivalence(max_size: int = 5):
    bad: list[str] = []
    verdicts = enumerate_verdicts(max_size)
    proved = 0
    for s, p in verdicts:
        if p is None:
            continue
        proved += 1
        if not check_finite(p, System.iGLSeq).accepted:
            bad.append(f"finite proof of {s} rejected")
            continue
        d = fin_to_circ(p)
        if d.root() != s or not d.is_cyclic_proof() or not check_cyclic(d, k4_progress).accepted:
            bad.append(f"cyclic proof of {s} rejected")
    # the unprovable side: with no finite proof the round trip must not produce one either
    return not bad, f"{len(verdicts)} sequents, {proved} provable, {len(bad)} discrepancies", bad


@_timed(6, "Kripke semantics agrees with prove")
def semantic_agreement(max_size: int = 5, frame_size: int = 4, threshold: float = 0.95, triage: bool = True):
    unsound: list[str] = []
    residual: list[str] = []
    non_theorems = 0
    for s, p in enumerate_verdicts(max_size):
        v = valid_up_to(interpret(s), frame_size)
        if p is not None:
            if not isinstance(v, Valid):
                unsound.append(str(s))
        else:
            non_theorems += 1
            if not isinstance(v, Countermodel):
                residual.append(s)
    found = non_theorems - len(residual)
    rate = found / non_theorems if non_theorems else 1.0
    ok = not unsound and rate >= threshold
    log = [_triage(s, frame_size + 1 if triage else None) for s in residual]
    detail = (
        f"{len(unsound)} soundness violations, countermodels for {found}/{non_theorems} "
        f"non-theorems ({rate:.2%}), residuals: {'; '.join(log) or 'none'}"
    )
    return ok, detail, log


def _triage(s: Sequent, bigger: int | None) -> str:
    if bigger is None or bigger > MAX_FRAME_SIZE:
        return f"{s} (not triaged)"
    v = valid_up_to(interpret(s), bigger)
    if isinstance(v, Countermodel):
        return f"{s} (countermodel with {v.model.frame.size} worlds)"
    return f"{s} (still valid on frames up to size {bigger})"


# -- 3 and 4 --------------------------------------------------------------------


@_timed(3, "corpus round trip")
def corpus_round_trip():
    bad: list[str] = []
    docs = load("finite")
    linked = 0
    for name, doc in docs:
        p = doc.tree
        if not check_finite(p, System.iGLSeq).accepted:
            bad.append(f"{name}: stored proof rejected")
            continue
        d = fin_to_circ(p)
        linked += bool(d.backlinks)
        q = circ_to_fin(d)
        if not check_finite(q, System.iGLSeq).accepted or conclusion(q) != conclusion(p):
            bad.append(f"{name}: round trip changed or broke the proof")
    ok = not bad and len(docs) >= 25 and linked >= 5
    return ok, f"{len(docs)} proofs, {linked} with backlinks, {len(bad)} failures", bad


def _check_unfolded_tree(p, depth: int) -> list[str]:
    """Second route for criterion 4: materialise the truncated unfolding and
    check each complete node as a rule instance."""
    t = unfold_to_depth(trans(p), depth)
    bad = []
    for path, n in t.nodes():
        if isinstance(n.label, Truncated):
            continue
        kids = tuple((c.label.label if isinstance(c.label, Truncated) else c.label).sequent for c in n.children)
        inst = RuleInstance(kids, n.label.sequent, n.label.rule)
        why = explain_mismatch(inst, System.iK4Seq)
        if why is not None:
            bad.append(f"{list(path)}: {why}")
    return bad


@_timed(4, "trans unfolding is an iK4 pre-proof")
def unfolding_sound(depth: int = 50):
    bad: list[str] = []
    nodes = 0
    for name, doc in load("finite"):
        rep = check_unfolding(doc.tree, depth)
        nodes += rep.nodes_checked
        bad += [f"{name} {list(f.path)} {f.code}: {f.detail}" for f in rep.failures]
        bad += [f"{name} (materialised) {b}" for b in _check_unfolded_tree(doc.tree, depth)]
    return not bad, f"{nodes} nodes checked at depth {depth}, {len(bad)} violations", bad


# -- 5 --------------------------------------------------------------------------


def random_formula(rng: random.Random, depth: int, atoms=("p", "q", "r")) -> Formula:
    if depth <= 0 or rng.random() < 0.25:
        return BOT if rng.random() < 0.1 else Var(rng.choice(atoms))
    k = rng.randrange(4)
    if k == 0:
        return Box(random_formula(rng, depth - 1, atoms))
    op = (Imp, And, Or)[k - 1]
    return op(random_formula(rng, depth - 1, atoms), random_formula(rng, depth - 1, atoms))


def random_provable_goals(n: int, seed: int = 0, prover: Prover | None = None) -> list[tuple[Sequent, object]]:
    """``n`` provable goals: half plain random sequents, half of Loeb shape."""
    rng = random.Random(seed)
    P = prover or Prover(max_states=20_000)
    out: list[tuple[Sequent, object]] = []
    seen: set[Sequent] = set()
    while len(out) < n:
        left = [random_formula(rng, 2) for _ in range(rng.randrange(3))]
        right = random_formula(rng, 3)
        if len(out) % 2:
            # dnec(Gamma), []right => right
            left = [f for g in left for f in (g, Box(g))] + [Box(right)]
        if rng.random() < 0.3 and left:
            left.append(rng.choice(left))
        s = seq(left, right)
        if s in seen:
            continue
        seen.add(s)
        try:
            p = P.prove(s)
        except RuntimeError:
            continue
        if p is not None:
            out.append((s, p))
    return out


@_timed(5, "weaken / contract / loeb")
def admissibility(n: int = 500, seed: int = 0):
    rng = random.Random(seed + 1)
    bad: list[str] = []
    loeb_shaped = 0
    for s, p in random_provable_goals(n, seed):
        delta = FMultiset(random_formula(rng, 2) for _ in range(rng.randrange(1, 3)))
        w = weaken(p, delta)
        if conclusion(w) != Sequent(s.left + delta, s.right) or not check_finite(w).accepted:
            bad.append(f"weaken {s}")
        c = contract(w)
        if conclusion(c) != conclusion(w).contracted() or not check_finite(c).accepted:
            bad.append(f"contract {s}")
        target = loeb_target(s)
        l = loeb(p)
        if target is not None:
            loeb_shaped += 1
            if conclusion(l) != target or not check_finite(l).accepted:
                bad.append(f"loeb {s}")
    return not bad, f"{n} goals ({loeb_shaped} of Loeb shape), {len(bad)} failures", bad


# -- 7 --------------------------------------------------------------------------

OBLIGATION_POOL: list[tuple[str, str, str, tuple[str, ...], tuple[str, ...]]] = [
    ("p", "q", "r", (), ()),
    ("p", "q", "p", ("q",), ()),
    ("[]p", "q", "p|q", ("p",), ("r",)),
    ("p->q", "q", "[]p", ("[]q",), ()),
    ("bot", "p", "q", ("p&q",), ("[]p",)),
    ("p|q", "[]p", "p", ("q->p",), ()),
    ("[]p->p", "p", "[]p", ("[]([]p->p)",), ()),
    ("p", "p", "p", ("p", "p"), ("p",)),
    ("q&p", "p->bot", "[]q", (), ("q",)),
    ("[][]p", "[]q", "p->q", ("[]p", "q"), ()),
]


@_timed(7, "lemma obligations are valid")
def obligations_valid(frame_size: int = 4):
    bad: list[str] = []
    total = 0
    for phi, psi, chi, gamma, pi in OBLIGATION_POOL:
        f = parse_formula
        for row, ob in enumerate(lemma_table_obligations(f(phi), f(psi), f(chi), [f(g) for g in gamma], [f(x) for x in pi])):
            total += 1
            if not isinstance(valid_up_to(ob, frame_size), Valid):
                bad.append(f"row {row} for {(phi, psi, chi, gamma, pi)}")
    return not bad, f"{total} obligations, {len(bad)} countermodels", bad


# -- 8 --------------------------------------------------------------------------


@_timed(8, "Loeb axiom and two non-theorems")
def loeb_and_nontheorems():
    P = Prover()
    notes: list[str] = []
    loeb_goal = parse_sequent("=> []([]p->p)->[]p")
    p = P.prove(loeb_goal)
    ok = p is not None and check_finite(p).accepted
    if ok:
        d = fin_to_circ(p)
        ok = d.is_cyclic_proof() and check_cyclic(d, k4_progress).accepted
    notes.append(f"loeb axiom proved and cyclic proof checks: {ok}")
    for text in ("=> []p->p", "=> p"):
        s = parse_sequent(text)
        cm = valid_up_to(interpret(s), 4)
        rejected = P.prove(s) is None and isinstance(cm, Countermodel)
        if rejected:
            notes.append(f"{text} rejected, countermodel {cm.model.describe().replace(chr(10), '; ')} at world {cm.world}")
        else:
            notes.append(f"{text} not rejected with a countermodel")
        ok = ok and rejected
    return ok, "; ".join(notes)


def run_all(fast: bool = False) -> list[CriterionResult]:
    return [
        nonprogress_rejected(),
        main_equivalence(),
        corpus_round_trip(),
        unfolding_sound(),
        admissibility(100 if fast else 500),
        semantic_agreement(),
        obligations_valid(),
        loeb_and_nontheorems(),
    ]
