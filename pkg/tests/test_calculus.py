import pytest
from hypothesis import given

from conftest import sequents
from igl_cyclic.calculus import (
    ALL,
    R,
    RuleInstance,
    Step,
    System,
    check_finite,
    conclusion,
    explain_mismatch,
    is_proof,
    match_rule,
    node,
    principal_formula,
)
from igl_cyclic.core import BOT, And, Box, Imp, Var, parse_sequent, seq, subformula_closure
from igl_cyclic.corpus import load
from igl_cyclic.transform import prove
from igl_cyclic.trees import FinTree

p, q, r = Var("p"), Var("q"), Var("r")
S = parse_sequent


def inst(prems, concl, rule):
    return RuleInstance(tuple(S(x) for x in prems), S(concl), rule)


def test_rule_names_distinct():
    assert len({x.value for x in R}) == len(R)


def test_match_rule_examples():
    assert match_rule(inst([], "p => p", R.Prop), System.iG3)
    assert match_rule(inst(["p, []p => q"], "[]p => []q", R.RK4), System.iK4Seq)
    assert not match_rule(inst([], "q => p", R.Prop), System.iG3)
    assert match_rule(inst(["p, []p, []q => q"], "[]p => []q", R.RGL), System.iGLSeq)


def test_modal_rules_respect_systems():
    rk4 = inst(["p, []p => q"], "[]p => []q", R.RK4)
    rgl = inst(["p, []p, []q => q"], "[]p => []q", R.RGL)
    assert not match_rule(rk4, System.iGLSeq)
    assert not match_rule(rgl, System.iK4Seq)
    assert not match_rule(rk4, System.iG3)


def test_modal_rule_context_and_failures():
    # Pi is arbitrary context
    assert match_rule(inst(["p, []p => q"], "r, []r, []p => []q", R.RK4), System.iK4Seq)
    # Gamma may be empty
    assert match_rule(inst(["=> q"], "r => []q", R.RK4), System.iK4Seq)
    # premise needs p as well as []p
    assert explain_mismatch(inst(["[]p => q"], "[]p => []q", R.RK4), System.iK4Seq)
    # []Gamma must occur in the conclusion
    assert explain_mismatch(inst(["p, []p => q"], "p => []q", R.RK4), System.iK4Seq)
    # RGL premise needs the diagonal formula
    assert explain_mismatch(inst(["p, []p => q"], "[]p => []q", R.RGL), System.iGLSeq)


def test_ImpL_keeps_implication_in_left_premise():
    good = inst(["p->q => p", "q => q"], "p->q => q", R.ImpL)
    bad = inst(["=> p", "q => q"], "p->q => q", R.ImpL)
    assert match_rule(good, System.iG3)
    assert not match_rule(bad, System.iG3)


def test_logical_rule_examples():
    assert match_rule(inst(["p, q => r"], "p&q => r", R.AndL), System.iG3)
    assert match_rule(inst(["=> p", "=> q"], "=> p&q", R.AndR), System.iG3)
    assert match_rule(inst(["p => r", "q => r"], "p|q => r", R.OrL), System.iG3)
    assert match_rule(inst(["=> p"], "=> p|q", R.OrR0), System.iG3)
    assert match_rule(inst(["=> q"], "=> p|q", R.OrR1), System.iG3)
    assert not match_rule(inst(["=> q"], "=> p|q", R.OrR0), System.iG3)
    assert match_rule(inst(["p => q"], "=> p->q", R.ImpR), System.iG3)
    assert match_rule(inst([], "bot, p => q", R.Absurd), System.iG3)
    # Prop is for variables only
    assert not match_rule(inst([], "bot => bot", R.Prop), System.iG3)


def test_principal_formula_examples():
    assert principal_formula(inst(["p, q => r"], "p&q => r", R.AndL)) == And(p, q)
    assert principal_formula(inst(["p, []p => q"], "[]p => []q", R.RK4)) == ALL
    assert principal_formula(inst([], "r, p => p", R.Prop)) == p


def box_top_proof():
    top = Imp(BOT, BOT)
    return node(
        seq([], Box(top)),
        R.RGL,
        node(seq([Box(top)], top), R.ImpR, node(seq([Box(top), BOT], BOT), R.Absurd)),
    )


def test_check_finite_examples():
    one = node(S("p => p"), R.Prop)
    assert check_finite(one, System.iG3).accepted

    hyp = FinTree(Step(S("p => q"), R.Assump))
    assert check_finite(hyp, System.iG3, {S("p => q")}).accepted
    rep = check_finite(hyp, System.iG3)
    assert not rep.accepted and rep.failures[0].code == "assumption-in-proof"

    assert check_finite(box_top_proof(), System.iGLSeq).accepted
    assert not check_finite(box_top_proof(), System.iK4Seq).accepted


def test_check_finite_failure_codes():
    interior = FinTree(Step(S("p => p"), R.Assump), [node(S("p => p"), R.Prop)])
    assert check_finite(interior, System.iG3, set()).failures[0].code == "assump-interior"
    undeclared = FinTree(Step(S("p => q"), R.Assump))
    assert check_finite(undeclared, System.iG3, set()).failures[0].code == "undeclared-assumption"
    wrong = node(S("p => q"), R.Prop)
    rep = check_finite(wrong, System.iG3)
    assert rep.failures[0].code == "bad-instance" and rep.failures[0].path == ()
    assert check_finite(FinTree("junk"), System.iG3).failures[0].code == "bad-label"


def test_check_finite_visits_every_node_once():
    p = box_top_proof()
    assert check_finite(p).nodes_checked == p.size() == 3


def test_report_paths_point_at_failures():
    bad_leaf = node(S("=> p->q"), R.ImpR, node(S("p => q"), R.Prop))
    rep = check_finite(bad_leaf, System.iG3)
    assert [f.path for f in rep.failures] == [(0,)]


def _closure_ok(t):
    for _, n in t.nodes():
        c = subformula_closure(conclusion(n))
        allowed = c | {Box(f) for f in c}
        for k in n.children:
            if not set(conclusion(k).formulas()) <= allowed:
                return False
    return True


def test_subformula_property_on_corpus():
    for name, doc in load("finite"):
        assert is_proof(doc.tree), name
        assert _closure_ok(doc.tree), name


@given(sequents(max_left=2, leaves=3))
def test_subformula_property_on_search_results(s):
    t = prove(s)
    if t is not None:
        assert check_finite(t).accepted
        assert _closure_ok(t)


@pytest.mark.parametrize("system", list(System))
def test_match_rule_deterministic(system):
    i = inst(["p, []p, []q => q"], "[]p => []q", R.RGL)
    assert match_rule(i, system) == match_rule(i, system)
