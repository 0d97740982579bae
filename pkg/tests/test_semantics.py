import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import formulas
from igl_cyclic.core import BOT, And, Box, Imp, ResourceLimit, Var, parse_formula
from igl_cyclic.semantics import (
    Countermodel,
    KripkeFrame,
    KripkeModel,
    Valid,
    check_frame_properties,
    frames_of_size,
    is_valid,
    lemma_table_obligations,
    satisfies,
    valid_up_to,
)

p, q, r = Var("p"), Var("q"), Var("r")
F = parse_formula


def one_world(vp=frozenset()):
    frame = KripkeFrame(1, frozenset({(0, 0)}), frozenset())
    return KripkeModel(frame, {"p": vp})


def test_satisfies_examples():
    m = one_world()
    assert satisfies(m, 0, Box(p))
    assert not satisfies(m, 0, Imp(Box(p), p))
    assert not satisfies(m, 0, BOT)


def test_frame_properties_examples():
    empty = KripkeFrame(2, frozenset({(0, 0), (1, 1)}), frozenset())
    assert check_frame_properties(empty) == (True, True, True)
    cyc = KripkeFrame(2, frozenset({(0, 0), (1, 1)}), frozenset({(0, 1), (1, 0)}))
    assert not check_frame_properties(cyc).converse_wf
    chain = KripkeFrame(3, frozenset({(0, 0), (1, 1), (2, 2)}), frozenset({(0, 1), (1, 2)}))
    assert not check_frame_properties(chain).transitive


def test_frame_counts():
    # frozen from the enumerator, cross-checked by the brute-force count below
    assert [len(frames_of_size(n)) for n in range(1, 5)] == [1, 4, 31, 466]


def _brute_force_count(n):
    """Count frames of size n up to isomorphism by filtering all relation pairs."""
    import itertools

    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    seen = set()
    for le_bits in itertools.product([0, 1], repeat=len(pairs)):
        le = frozenset({(w, w) for w in range(n)} | {pr for pr, b in zip(pairs, le_bits) if b})
        if not KripkeFrame(n, le, frozenset()).is_intuitionistic():
            continue
        for prec_bits in itertools.product([0, 1], repeat=len(pairs)):
            prec = frozenset(pr for pr, b in zip(pairs, prec_bits) if b)
            fr = KripkeFrame(n, le, prec)
            if not fr.is_intuitionistic() or not all(check_frame_properties(fr)):
                continue
            key = min(
                (tuple(sorted((perm[a], perm[b]) for a, b in le)), tuple(sorted((perm[a], perm[b]) for a, b in prec)))
                for perm in itertools.permutations(range(n))
            )
            seen.add(key)
    return len(seen)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_frame_enumeration_matches_brute_force(n):
    assert len(frames_of_size(n)) == _brute_force_count(n)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_enumerated_frames_satisfy_invariants(n):
    for fr in frames_of_size(n):
        assert fr.is_intuitionistic()
        assert all(check_frame_properties(fr))


def test_valid_up_to_examples():
    assert isinstance(valid_up_to(F("[]([]p->p)->[]p"), 4), Valid)
    cm = valid_up_to(F("[]p->p"), 4)
    assert isinstance(cm, Countermodel) and cm.model.frame.size == 1
    for n in range(1, 5):
        assert is_valid(F("bot->bot"), n)


def test_valid_up_to_limits():
    with pytest.raises(ValueError):
        valid_up_to(p, 0)
    with pytest.raises(ResourceLimit):
        valid_up_to(p, 9)


def test_excluded_middle_needs_two_worlds():
    assert is_valid(F("p|(p->bot)"), 1)
    cm = valid_up_to(F("p|(p->bot)"), 2)
    assert cm.model.frame.size == 2


@st.composite
def models(draw):
    n = draw(st.integers(1, 3))
    frame = draw(st.sampled_from(frames_of_size(n)))
    ups = [frozenset(v for v in frame.worlds if all((u, v) in frame.le for u in [w])) for w in frame.worlds]
    val = {}
    for name in "pqr":
        gens = draw(st.lists(st.sampled_from(list(frame.worlds)), max_size=n))
        val[name] = frozenset().union(*[ups[w] for w in gens]) if gens else frozenset()
    return KripkeModel(frame, val)


@given(models(), formulas(6))
def test_satisfaction_is_monotone(m, f):
    assert m.is_monotone()
    for (w, v) in m.frame.le:
        if satisfies(m, w, f):
            assert satisfies(m, v, f)


@given(formulas(5))
def test_countermodels_reverify(f):
    res = valid_up_to(f, 3)
    if isinstance(res, Countermodel):
        m = res.model
        assert not satisfies(m, res.world, f)
        assert m.is_monotone() and m.frame.is_intuitionistic() and all(check_frame_properties(m.frame))
    else:
        # independent evaluation over the same frames
        for n in range(1, 4):
            for fr in frames_of_size(n):
                m = KripkeModel(fr, {v: frozenset() for v in "pqr"})
                assert all(satisfies(m, w, f) for w in fr.worlds)


def test_lemma_table_examples():
    obs = lemma_table_obligations(p, q, p)
    assert len(obs) == 9
    # AndL row: (p, q => p)^# -> (p&q => p)^#
    assert obs[0] == Imp(Imp(And(p, q), p), Imp(And(p, q), p))
    assert obs[8] == Imp(Box(p), Box(Box(p)))
    imp_r = lemma_table_obligations(p, q, p, gamma=[r])[6]
    assert imp_r == Imp(Imp(And(p, r), q), Imp(r, Imp(p, q)))
    # with an empty context the antecedent is the empty conjunction
    assert lemma_table_obligations(p, q, p)[6] == Imp(Imp(p, q), Imp(Imp(BOT, BOT), Imp(p, q)))
    assert all(is_valid(o, 3) for o in obs)
