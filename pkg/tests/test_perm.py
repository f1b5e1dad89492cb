import pytest
from hypothesis import given, strategies as st

from retractkit.perm import Permutation, parse_cycles


def perms(n):
    return st.permutations(list(range(1, n + 1))).map(Permutation)


def test_cycle_notation_round_trip():
    p = Permutation.from_cycles("(1 2 3)(4 5)")
    assert p.images == (2, 3, 1, 5, 4)
    assert str(p) == "(1 2 3)(4 5)"
    assert str(Permutation.identity(3)) == "()"


def test_left_to_right_composition():
    a = Permutation.from_cycles("(1 2)", 3)
    b = Permutation.from_cycles("(2 3)", 3)
    # a first, then b: 1 -> 2 -> 3
    assert (a * b)(1) == 3


def test_order_and_power():
    p = Permutation.from_cycles("(1 2 3)(4 5)")
    assert p.order() == 6
    assert (p ** 6).is_identity()
    assert p ** -1 == p.inverse()


def test_bad_cycles():
    with pytest.raises(ValueError):
        Permutation.from_cycles("(1 2)(2 3)")
    with pytest.raises(ValueError):
        parse_cycles("(1 x)")


@given(perms(6), perms(6), perms(6))
def test_group_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert (a * a.inverse()).is_identity()
    assert Permutation.from_cycles(str(a), 6) == a
