from itertools import combinations

import numpy as np
import pytest

from retractkit.catalog import builtin_group, resolve
from retractkit.errors import NotNormal, RetractKitError
from retractkit.groups import conjugacy_classes
from retractkit.perm import Permutation
from retractkit.structure import (
    abelian_invariants,
    abelian_strong_retract_criterion,
    is_maximal_monolithic,
    is_nilpotent,
    kmo_hypotheses,
    monolith,
    normal_subgroups,
    verify_subnormal_series,
)


def P(text, n):
    return Permutation.from_cycles(text, n)


def v4_in(g):
    return g.subgroup([p for p in g.elements if sorted(len(c) for c in p.cycles()) == [2, 2]])


def even(g):
    return g.subgroup([p for p in g.elements if sum(len(c) - 1 for c in p.cycles()) % 2 == 0])


def brute_normal_subgroups(g):
    """Unions of classes containing 1 that are closed under multiplication."""
    t = g.table
    classes = [c for c in conjugacy_classes(g) if 0 not in c]
    out = []
    for r in range(len(classes) + 1):
        for pick in combinations(classes, r):
            members = np.array(sorted([0] + [i for c in pick for i in c]))
            if g.order % len(members):
                continue
            mask = np.zeros(g.order, dtype=bool)
            mask[members] = True
            if mask[t[np.ix_(members, members)]].all():
                out.append(frozenset(members.tolist()))
    return sorted(out, key=lambda m: (len(m), sorted(m)))


BRUTE = ["S(3)", "S(4)", "A(4)", "Dih(4)", "Q8", "Dih(5)", "Dih(6)", "direct(S3,C2)", "direct(S3,C3)",
         "Dih(12)", "direct(A4,C2)", "direct(S4,C2)", "Dih(24)", "direct(C4,C4)", "A(5)", "direct(Q8,C3)"]


@pytest.mark.parametrize("ref", BRUTE)
def test_normal_subgroups_match_brute_force(ref):
    g = resolve(ref)
    assert [n.members for n in normal_subgroups(g)] == brute_normal_subgroups(g)


def test_normal_subgroup_examples():
    assert [n.order for n in normal_subgroups(builtin_group("S(3)"))] == [1, 3, 6]
    assert [n.order for n in normal_subgroups(builtin_group("S(4)"))] == [1, 4, 12, 24]
    assert len(normal_subgroups(builtin_group("A(5)"))) == 2


def test_monolith_examples(s3, s4):
    rep = monolith(s4)
    assert rep.is_monolithic and rep.monolith == v4_in(s4) and rep.monolith_abelian
    assert monolith(s3).monolith == even(s3)
    a4 = builtin_group("A(4)")
    assert monolith(a4).monolith == v4_in(a4)
    for n in (5, 6):
        s, a = builtin_group(f"S({n})"), builtin_group(f"A({n})")
        assert monolith(s).monolith == even(s) and not monolith(s).monolith_abelian
        assert monolith(a).monolith == a.whole()
    v4 = monolith(builtin_group("V4"))
    assert not v4.is_monolithic and len(v4.minimal_normals) == 3


@pytest.mark.parametrize("ref", BRUTE + ["V4", "C(1)", "C(7)", "S(5)"])
def test_monolith_lattice_properties(ref):
    g = resolve(ref)
    normals = normal_subgroups(g)
    rep = monolith(g, normals)
    for n in normals:
        if not n.is_trivial():
            assert rep.monolith <= n
    assert rep.is_monolithic == (len(rep.minimal_normals) == 1)
    if len(normals) == 2:
        assert rep.monolith == g.whole()


def test_nilpotency():
    assert not is_nilpotent(builtin_group("S(4)"))
    assert is_nilpotent(builtin_group("Dih(4)"))
    assert is_nilpotent(resolve("direct(C2,C6)"))
    assert is_nilpotent(builtin_group("C(1)"))


def test_subnormal_series(s3, s4):
    chain = [s4.trivial(), v4_in(s4), even(s4), s4.whole()]
    factors = verify_subnormal_series(chain)
    assert [f.exponent for f in factors] == [2, 3, 2] and all(f.abelian for f in factors)
    c6 = builtin_group("C(6)")
    assert [f.exponent for f in verify_subnormal_series([c6.trivial(), c6.whole()])] == [6]
    assert [f.exponent for f in verify_subnormal_series([s3.trivial(), even(s3), s3.whole()])] == [3, 2]
    pair = s4.subgroup([P("(1 2)", 4), P("(3 4)", 4)])
    bad = [s4.trivial(), s4.subgroup([P("(1 2)", 4)]), pair, s4.whole()]
    with pytest.raises(NotNormal) as info:
        verify_subnormal_series(bad)
    assert info.value.index == 2


def test_kmo(s3, s4):
    assert kmo_hypotheses(s3, even(s3)).verdict
    a4 = builtin_group("A(4)")
    assert kmo_hypotheses(a4, v4_in(a4)).verdict
    rep = kmo_hypotheses(s4, v4_in(s4))
    assert not rep.verdict
    assert [k for k, v in rep.checks.items() if not v.passed] == ["orders_coprime"]
    assert rep.checks["orders_coprime"].detail["gcd"] == 2
    rep = kmo_hypotheses(s4, s4.subgroup([P("(1 2)", 4)]))
    assert not rep.checks["c_is_normal"].passed and not rep.verdict
    assert rep.checks["c_equals_centralizer"].detail == {"skipped": "C is not normal"}


def test_kmo_decomposable():
    g = resolve("direct(S3,S3)")
    c = g.subgroup([P("(1 2 3)", 6), P("(4 5 6)", 6)])
    rep = kmo_hypotheses(g, c)
    assert not rep.checks["c_normally_indecomposable"].passed


@pytest.mark.parametrize("ref,holds,factors", [
    ("C(6)", True, [2, 3]), ("direct(C2,C4)", False, [2, 4]), ("V4", True, [2, 2]),
    ("direct(C2,C3)", True, [2, 3]), ("C(1)", True, []), ("direct(C4,C4,C3)", True, [4, 4, 3]),
])
def test_abelian_criterion(ref, holds, factors):
    g = resolve(ref)
    rep = abelian_strong_retract_criterion(g)
    assert rep.holds == holds
    assert abelian_invariants(g) == factors


def test_abelian_criterion_rejects_nonabelian(s3):
    with pytest.raises(RetractKitError):
        abelian_strong_retract_criterion(s3)


def test_maximal_monolithic(s3, s4):
    a4 = builtin_group("A(4)")
    assert is_maximal_monolithic(s4, [s3, a4, s4]).holds
    rep = is_maximal_monolithic(a4, [s3, a4, s4])
    assert not rep.holds
    g, hom = rep.violation
    assert g is s4 and hom.is_injective() and hom.is_homomorphism()
    assert all(hom(p) == p for p in a4.elements)
    assert is_maximal_monolithic(s3, [s3]).holds
