import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import formulas, multisets, sequents
from igl_cyclic.core import (
    BOT,
    EMPTY,
    TOP,
    And,
    Box,
    FMultiset,
    Imp,
    Or,
    ParseError,
    Sequent,
    Var,
    box_all,
    dnec,
    immediate_subformulas,
    interpret,
    parse_formula,
    parse_sequent,
    seq,
    show,
    show_sequent,
    size,
    sort_key,
    subformula_closure,
    subformulas,
    undnec,
)
from igl_cyclic.semantics import valid_up_to

p, q, r = Var("p"), Var("q"), Var("r")


# -- formulas -------------------------------------------------------------------


def test_dnec_of_single_formula():
    assert p.dnec() == And(p, Box(p))


def test_size_counts_symbols():
    assert size(p) == 1
    assert size(Box(Imp(p, q))) == 4


@given(formulas())
def test_subformulas_contain_formula(f):
    subs = subformulas(f)
    assert f in subs
    assert all(g in subs for h in subs for g in immediate_subformulas(h))


@given(formulas(), formulas())
def test_sort_key_total(a, b):
    assert (sort_key(a) == sort_key(b)) == (a == b)


# -- multisets ------------------------------------------------------------------


def test_dnec_examples():
    assert dnec(EMPTY) == EMPTY
    assert dnec(FMultiset([p])) == FMultiset([p, Box(p)])
    assert dnec(FMultiset([p, p])) == FMultiset([p, p, Box(p), Box(p)])


@given(multisets(), multisets(), formulas())
def test_union_adds_counts(a, b, f):
    assert (a + b).count(f) == a.count(f) + b.count(f)


@given(multisets(), multisets())
def test_difference_inverts_union(a, b):
    assert (a + b) - b == a


@given(multisets())
def test_no_zero_entries(a):
    assert all(n > 0 for _, n in a.items())
    assert all(n > 0 for _, n in (a - a).items())


@given(multisets())
def test_set_part_idempotent_and_residual(a):
    s = a.set_part()
    assert s.set_part() == s
    assert s.is_set()
    residual = a - s
    assert s + residual == a


@given(multisets(), multisets())
def test_dnec_monotone(a, extra):
    b = a + extra
    assert a.issubset(b)
    assert dnec(a).issubset(dnec(b))


@given(multisets())
def test_undnec_inverts_dnec(a):
    assert undnec(dnec(a)) == a


def test_undnec_rejects_non_dnec():
    assert undnec(FMultiset([p])) is None
    assert undnec(FMultiset([Box(p)])) is None
    assert undnec(FMultiset([p, Box(p), Box(Box(p))])) is None
    assert undnec(FMultiset([p, Box(p), Box(p), Box(Box(p))])) == FMultiset([p, Box(p)])


def test_remove_absent_raises():
    with pytest.raises(KeyError):
        FMultiset([p]).remove(q)


def test_box_all_and_boxed():
    m = FMultiset([p, Box(q), Box(q)])
    assert m.boxed() == box_all([q, q])


@given(st.lists(formulas(), max_size=5), st.randoms())
def test_multiset_order_independent(fs, rnd):
    shuffled = list(fs)
    rnd.shuffle(shuffled)
    assert FMultiset(fs) == FMultiset(shuffled)
    assert hash(FMultiset(fs)) == hash(FMultiset(shuffled))


# -- sequents -------------------------------------------------------------------


def test_interpret_examples():
    assert interpret(seq([], p)) == Imp(TOP, p)
    assert interpret(seq([p, q], r)) == Imp(And(p, q), r)
    assert interpret(seq([p], p)) == Imp(p, p)


@given(sequents())
def test_interpret_of_contraction_is_equivalent(s):
    # syntactically different, semantically the same
    a, b = interpret(s), interpret(s.contracted())
    assert bool(valid_up_to(Imp(a, b), 2)) and bool(valid_up_to(Imp(b, a), 2))


def test_subformula_closure_examples():
    assert subformula_closure(seq([], p)) == {p}
    assert subformula_closure(seq([], Box(Imp(p, q)))) == {Box(Imp(p, q)), Imp(p, q), p, q}
    assert subformula_closure(seq([Box(p)], p)) == {Box(p), p}


@given(sequents())
def test_subformula_closure_closed(s):
    c = subformula_closure(s)
    assert all(f in c for f in s.formulas())
    assert all(g in c for f in c for g in immediate_subformulas(f))


def test_sequent_equality_is_multiset_equality():
    assert seq([p, q], r) == seq([q, p], r)
    assert seq([p], r) != seq([p, p], r)


# -- parsing --------------------------------------------------------------------


def test_parse_examples():
    assert parse_formula("p -> q -> r") == Imp(p, Imp(q, r))
    assert parse_formula("p ~> q") == Imp(p, q)
    assert parse_formula("p & q | r") == Or(And(p, q), r)
    assert parse_formula("[]p -> p") == Imp(Box(p), p)
    assert parse_formula("[](p -> p)") == Box(Imp(p, p))
    assert parse_formula("bot") == BOT
    assert parse_sequent("p, p, []q => q") == Sequent(FMultiset([p, p, Box(q)]), q)
    assert parse_sequent("=> p") == seq([], p)


@pytest.mark.parametrize("text", ["", "p ->", "(p", "p q", "=>", "p => q => r", "p $ q", "[]"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_sequent(text) if "=>" in text else parse_formula(text)


@given(formulas(8))
def test_formula_print_parse_round_trip(f):
    assert parse_formula(show(f)) == f


@given(sequents())
def test_sequent_print_parse_round_trip(s):
    assert parse_sequent(show_sequent(s)) == s
