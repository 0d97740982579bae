import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import multisets, sequents
from igl_cyclic.acceptance import random_provable_goals
from igl_cyclic.calculus import R, RuleInstance, System, check_finite, conclusion, match_rule, node, rule_of
from igl_cyclic.core import BOT, Box, FMultiset, Imp, ResourceLimit, Sequent, Var, interpret, parse_sequent, seq
from igl_cyclic.corpus import load
from igl_cyclic.semantics import Valid, valid_up_to
from igl_cyclic.transform import (
    InternalError,
    NotAProof,
    Prover,
    contract,
    contract_to,
    loeb,
    loeb_target,
    prove,
    weaken,
)

p, q, r = Var("p"), Var("q"), Var("r")
S = parse_sequent
TOP = Imp(BOT, BOT)


def proof_of(text):
    t = prove(S(text))
    assert t is not None, text
    return t


# -- weakening ------------------------------------------------------------------


def test_weaken_prop():
    w = weaken(node(S("p => p"), R.Prop), [q])
    assert conclusion(w) == S("p, q => p") and check_finite(w).accepted


def test_weaken_modal_root_keeps_premise():
    t = proof_of("[]p => []p")
    assert rule_of(t) is R.RGL
    w = weaken(t, [r])
    assert conclusion(w) == S("[]p, r => []p")
    assert w.children == t.children
    assert check_finite(w).accepted


def test_weaken_by_nothing_is_identity():
    for _, doc in load("finite"):
        assert weaken(doc.tree, []) == doc.tree


def test_weaken_rejects_non_proofs():
    with pytest.raises(NotAProof):
        weaken(node(S("p => q"), R.Prop), [r])


# -- contraction ----------------------------------------------------------------


def test_contract_examples():
    c = contract(node(S("p, p => p"), R.Prop))
    assert conclusion(c) == S("p => p") and check_finite(c).accepted

    t = proof_of("p&q, p&q => p")
    c = contract(t)
    assert conclusion(c) == S("p&q => p") and check_finite(c).accepted
    assert prove(S("p&q => p")) is not None  # independent confirmation

    already = proof_of("p, q => p&q")
    assert conclusion(contract(already)) == conclusion(already)


def test_contract_through_every_left_rule():
    for text in [
        "p|q, p|q => q|p",
        "p->q, p->q, p => q",
        "[]p, []p => [][]p",
        "[]([]p->p), []([]p->p) => []p",
        "p&q, p&q, p&q => q&p",
    ]:
        t = proof_of(text)
        c = contract(t)
        assert conclusion(c) == conclusion(t).contracted(), text
        assert check_finite(c).accepted, text
        assert c.height <= t.height


def test_contract_to_partial_target():
    t = proof_of("p, p, p, []p, []p => p")
    target = FMultiset([p, Box(p)])
    c = contract_to(t, target + [p])
    assert conclusion(c).left == target + [p]
    with pytest.raises(ValueError):
        contract_to(t, FMultiset([Box(p)]))


@given(sequents(max_left=3, leaves=3), st.integers(0, 2))
def test_weaken_then_contract(s, k):
    t = prove(s)
    if t is None:
        return
    dup = FMultiset(list(s.left)[:k])
    w = weaken(t, dup)
    assert conclusion(w) == Sequent(s.left + dup, s.right)
    assert check_finite(w).accepted
    c = contract(w)
    assert conclusion(c) == s.contracted()
    assert check_finite(c).accepted


# -- Loeb -----------------------------------------------------------------------


def test_loeb_identity_off_shape():
    t = proof_of("p => p")
    assert loeb(t) is t
    assert loeb_target(S("[]p => q")) is None


def test_loeb_box_top():
    t = proof_of("[](bot->bot) => bot->bot")
    l = loeb(t)
    assert conclusion(l) == seq([], TOP)
    assert check_finite(l).accepted
    assert prove(seq([], TOP)) is not None


def test_loeb_removes_one_diagonal_copy():
    s = S("p, []p, []q, [](p->q) => p->q")
    assert loeb_target(s) == S("p, []p, []q => p->q")
    t = proof_of("[]q, [](q->q) => q->q")
    assert conclusion(loeb(t)) == S("[]q => q->q")


def test_loeb_of_rgl_premise_is_rk4_premise():
    t = proof_of("[]([]p->p) => []p")
    (premise,) = t.children
    l = loeb(premise)
    assert match_rule(RuleInstance((conclusion(l),), conclusion(t), R.RK4), System.iK4Seq)


def test_random_goals_through_transformers():
    for s, t in random_provable_goals(40, seed=7):
        target = loeb_target(s)
        l = loeb(t)
        assert conclusion(l) == (target if target is not None else s)
        assert check_finite(l).accepted


# -- search ---------------------------------------------------------------------


@pytest.mark.parametrize(
    "text",
    ["=> []([]p->p)->[]p", "=> [](([]p ~> p)) ~> []p", "=> bot->p", "p&q => q&p", "=> []p->[][]p"],
)
def test_prove_finds_checked_proofs(text):
    t = proof_of(text)
    assert conclusion(t) == S(text)
    assert check_finite(t, System.iGLSeq).accepted


@pytest.mark.parametrize("text", ["p->q, q->p => p", "=> p", "=> bot", "=> []p->p", "=> p|(p->bot)"])
def test_prove_rejects(text):
    assert prove(S(text)) is None


def test_nonprovable_atom_has_one_world_countermodel():
    cm = valid_up_to(interpret(S("=> p")), 4)
    assert cm.model.frame.size == 1 and cm.model.valuation["p"] == frozenset()


def test_search_budget():
    with pytest.raises(ResourceLimit):
        Prover(max_states=2).prove(S("[]([]q->q), []([]p->p) => [](p&q)"))
    with pytest.raises(ResourceLimit):
        Prover(max_depth=1).prove(S("=> (p->p)&(q->q)"))


def test_prove_is_repeatable():
    P = Prover()
    s = S("[]([]p->p), []([]p->q) => []q")
    assert P.prove(s) == P.prove(s) == Prover().prove(s)


@given(sequents(max_left=2, leaves=3))
def test_prove_is_sound_semantically(s):
    t = prove(s)
    if t is not None:
        assert isinstance(valid_up_to(interpret(s), 3), Valid)


@given(sequents(max_left=2, leaves=3), multisets(2, 3))
def test_weakening_preserves_provability(s, extra):
    if prove(s) is not None:
        assert prove(Sequent(s.left + extra, s.right)) is not None


def test_loeb_internal_error_for_bogus_prover():
    class Useless(Prover):
        def prove(self, goal):
            return None

    t = proof_of("[]q, [](q->q) => q->q")
    with pytest.raises(InternalError):
        loeb(t, prover=Useless())
