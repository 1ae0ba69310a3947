import random

import pytest
from hypothesis import given, strategies as st

from stable_hhh.perm import (
    Permutation,
    PermutationError,
    PermutationParseError,
    all_permutations,
    canonical_cycle_form,
    parse_cycles,
    partitions,
    random_permutation,
    special_form,
)

perms = st.integers(1, 7).flatmap(lambda n: st.permutations(range(1, n + 1)).map(lambda im: Permutation(tuple(im))))


def test_parse_and_cycles():
    w = Permutation.parse("(1 3)(2 5 4)", 5)
    assert w.images == (3, 5, 1, 2, 4)
    assert w.cycles() == [(1, 3), (2, 5, 4)]
    assert w.cycle_type() == (2, 3)
    assert w.num_cycles == 2
    assert Permutation.parse("(1,2)(3,4)", 4) == Permutation.parse("(1 2)(3 4)", 4)
    assert Permutation.parse("(1 2)", 3).cycles() == [(1, 2), (3,)]
    assert Permutation.parse("", 2) == Permutation.identity(2)


@pytest.mark.parametrize(
    "text, token, position",
    [("(1 2", "(", 0), ("(1 2)(3", "(", 5), ("(1 x 2)", "x", 3), ("1 2", "1", 0), ("(1 (2))", "(", 3), ("(1 2))", ")", 5)],
)
def test_parse_errors_report_token_and_position(text, token, position):
    with pytest.raises(PermutationParseError) as info:
        parse_cycles(text)
    assert info.value.token == token
    assert info.value.position == position
    assert repr(token) in str(info.value) and f"position {position}" in str(info.value)


@pytest.mark.parametrize("text", ["(1 4)", "(1 2)(2 3)", "(0 1)"])
def test_invalid_points(text):
    with pytest.raises(PermutationError):
        Permutation.parse(text, 3)


def test_special_form():
    assert special_form((2, 1)) == Permutation.parse("(1)(2 3)", 3)
    assert special_form((3,)).cycle_ends() == (3,)
    assert special_form((1, 2, 2)).cycle_ends() == (1, 3, 5)
    assert special_form((2, 1)).is_special_form()
    assert not Permutation.parse("(1 2)", 3).is_special_form()
    with pytest.raises(PermutationError):
        Permutation.parse("(1 2)", 3).cycle_ends()


@pytest.mark.parametrize("n, count", [(1, 1), (2, 2), (3, 3), (4, 5), (5, 7), (6, 11)])
def test_partition_counts(n, count):
    ps = list(partitions(n))
    assert len(ps) == count == len(set(ps))
    assert all(sum(p) == n and list(p) == sorted(p) for p in ps)


@given(perms)
def test_group_laws(w):
    e = Permutation.identity(w.n)
    assert w.compose(w.inverse()) == e
    assert w.inverse().inverse() == w
    assert Permutation.from_cycles(w.n, w.cycles()) == w


@given(perms, st.randoms())
def test_conjugation_preserves_cycle_type(w, rng):
    v = random_permutation(w.n, rng)
    assert w.conjugate(v).cycle_type() == w.cycle_type()
    assert canonical_cycle_form(w.conjugate(v)) == canonical_cycle_form(w)


def test_conjugacy_classes_are_cycle_types():
    n = 4
    classes = {}
    for w in all_permutations(n):
        classes.setdefault(w.cycle_type(), set()).add(w)
    assert set(classes) == set(partitions(n))
    for ct, members in classes.items():
        w = special_form(ct)
        assert {w.conjugate(v) for v in all_permutations(n)} == members
