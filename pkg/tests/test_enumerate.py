from collections import Counter

from igl_cyclic.core import Box, Var, size
from igl_cyclic.enumerate import formulas_of_size, formulas_up_to, small_sequents


def _count_formulas(n, atoms=2):
    # leaves: atoms + bot; unary box; three binary connectives
    if n == 1:
        return atoms + 1
    return _count_formulas(n - 1, atoms) + sum(
        3 * _count_formulas(k, atoms) * _count_formulas(n - 1 - k, atoms) for k in range(1, n - 1)
    )


def test_formula_counts_match_recurrence():
    for n in range(1, 6):
        fs = formulas_of_size(n)
        assert len(fs) == len(set(fs)) == _count_formulas(n)
        assert all(size(f) == n for f in fs)


def test_formulas_up_to_contents():
    fs = formulas_up_to(2)
    assert Var("p") in fs and Box(Var("q")) in fs and len(fs) == 3 + 3


def test_small_sequent_counts():
    seqs = list(small_sequents(5))
    assert len(seqs) == len(set(seqs)) == 2229
    assert all(sum(size(f) for f in s.formulas()) <= 5 for s in seqs)
    assert Counter(len(s.left) for s in seqs)[0] == sum(_count_formulas(n) for n in range(1, 6))
    assert all(len(s.left) <= 2 for s in seqs)
