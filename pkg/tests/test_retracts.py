from itertools import combinations_with_replacement

import numpy as np
import pytest

from retractkit.catalog import builtin_group, resolve
from retractkit.groups import closure
from retractkit.morphisms import are_isomorphic
from retractkit.perm import Permutation
from retractkit.retracts import (
    RetractionNotFound,
    all_subgroups,
    find_retraction_brute,
    find_retraction_lemma,
    strong_retract_audit,
    variety_membership,
    verify_star,
)
from retractkit.structure import is_nilpotent, monolith
from retractkit.words import LawSet, parse_law

S3_LAWS = LawSet("S3", (parse_law("x^6 = 1", name="x^6 = 1"),))


def P(text, n):
    return Permutation.from_cycles(text, n)


def even(g):
    return g.subgroup([p for p in g.elements if sum(len(c) - 1 for c in p.cycles()) % 2 == 0])


def v4_in(g):
    return g.subgroup([p for p in g.elements if sorted(len(c) for c in p.cycles()) == [2, 2]])


def test_lemma_projection(s4):
    g = resolve("direct(S4,C3)")
    h = g.subgroup_of(s4)
    cert = find_retraction_lemma(g, h)
    assert all(cert.verify().values())
    assert cert.kernel.order == 3
    for p in g.elements:
        left = Permutation(p.images[:4])
        assert cert.rho(p) == left.padded(7)


def test_lemma_examples(s4):
    cert = find_retraction_lemma(s4, s4.whole())
    assert cert.kernel.is_trivial() and np.array_equal(cert.rho.mapping, np.arange(24))
    g = resolve("direct(S4,V4)")
    cert = find_retraction_lemma(g, g.subgroup_of(s4))
    assert cert.kernel.order == 4 and cert.is_valid()
    assert all(p.images[:4] == (1, 2, 3, 4) for p in cert.kernel.elements)


def test_lemma_reports_failure(s3):
    with pytest.raises(RetractionNotFound) as info:
        find_retraction_lemma(s3, even(s3))
    assert info.value.diagnostics


def test_brute_force(s3, s4):
    assert find_retraction_brute(s3, even(s3)) is None
    a4 = builtin_group("A(4)")
    assert find_retraction_brute(a4, v4_in(a4)) is None
    cert = find_retraction_brute(s4, s4.whole())
    assert np.array_equal(cert.rho.mapping, np.arange(24))
    sub = s4.subgroup([P("(1 2)", 4)])
    cert = find_retraction_brute(s4, sub)
    assert cert.is_valid() and cert.kernel == even(s4)


PAIRS = [("direct(S4,C3)", "S4"), ("direct(S4,V4)", "S4"), ("direct(S3,C3)", "S3"), ("direct(S3,C2)", "S3"),
         ("direct(A4,C2)", "A4"), ("direct(S3,S3)", "S3"), ("S4", "S4"), ("direct(C3,S3)", "C3")]


@pytest.mark.parametrize("gref,href", PAIRS)
def test_lemma_and_brute_agree(gref, href):
    g = resolve(gref)
    h = g.subgroup_of(resolve(href))
    if not monolith(h.as_group()).is_monolithic:
        pytest.skip("H not monolithic")
    try:
        lemma = find_retraction_lemma(g, h)
    except RetractionNotFound:
        lemma = None
    brute = find_retraction_brute(g, h)
    if lemma is not None:
        assert lemma.is_valid()
        assert brute is not None and brute.is_valid()
        assert lemma.kernel.order * h.order == g.order == brute.kernel.order * h.order
        if lemma.kernel == brute.kernel:
            assert np.array_equal(lemma.rho.mapping, brute.rho.mapping)


def two_generated(g):
    out = set()
    for a, b in combinations_with_replacement(range(g.order), 2):
        out.add(frozenset(closure(g, [a, b]).tolist()))
    return out


@pytest.mark.parametrize("ref,count,classes", [("S(3)", 6, 4), ("S(4)", 30, 11), ("A(4)", 10, 5),
                                               ("Dih(4)", 10, 8), ("Q8", 6, 6), ("Dih(6)", 16, 10)])
def test_subgroup_enumeration(ref, count, classes):
    g = resolve(ref)
    subs = all_subgroups(g)
    assert len(subs) == count
    assert {s.members for s in subs} == two_generated(g)
    assert len(all_subgroups(g, up_to_conjugacy=True)) == classes


def test_variety_examples(s4):
    cert = variety_membership(builtin_group("S(3)"), s4, k_max=1)
    assert cert.verdict == "member" and cert.k == 1 and cert.verify()
    cert = variety_membership(builtin_group("C(5)"), s4)
    assert cert.verdict == "non_member" and cert.law.name == "x^12 = 1" and cert.verify()
    cert = variety_membership(builtin_group("Q8"), s4, k_max=2)
    assert cert.verdict == "member" and cert.k == 2 and cert.verify()
    s = cert.section.as_group()
    assert s.order % 8 == 0


def test_variety_unknown_and_custom_laws(s4):
    cert = variety_membership(builtin_group("Q8"), s4, k_max=1)
    assert cert.verdict == "unknown"
    # the S4 database cannot separate C4 from S3; an S3 law can
    assert variety_membership(builtin_group("C(4)"), builtin_group("S(3)"), k_max=1).verdict == "unknown"
    cert = variety_membership(builtin_group("C(4)"), builtin_group("S(3)"), k_max=1, law_db=S3_LAWS)
    assert cert.verdict == "non_member" and cert.verify()


def test_star_on_s4(s4):
    targets = {"S3": builtin_group("S(3)"), "A4": builtin_group("A(4)"), "S4": s4}
    rep = verify_star(s4, targets)
    assert not rep.outliers
    assert all(v > 0 for v in rep.classified.values())
    for name, s, t, q in rep.witnesses:
        assert not is_nilpotent(q)
        assert monolith(q).is_monolithic
        assert are_isomorphic(q, targets[name]) is not None


def test_star_trivial_cases():
    targets = {"S3": builtin_group("S(3)")}
    rep = verify_star(builtin_group("C(2)"), targets)
    assert rep.monolithic_non_nilpotent == 0
    rep = verify_star(builtin_group("A(5)"), targets)
    assert rep.outliers


def test_strong_retract_audit(s3, s4):
    tests = [(resolve(r), None) for r in ("direct(S4,C3)", "direct(S4,V4)", "direct(S4,S3)")]
    entries = strong_retract_audit(s4, tests)
    assert [e.outcome for e in entries] == ["retraction"] * 3
    assert [e.lemma.kernel.order for e in entries] == [3, 4, 6]
    (entry,) = strong_retract_audit(s3, [(resolve("direct(S3,C3)"), None)])
    assert entry.outcome == "retraction"
    (entry,) = strong_retract_audit(s4, [(s4, None)])
    assert entry.outcome == "retraction" and entry.lemma.kernel.is_trivial()


def test_audit_reports_non_members(s3):
    (entry,) = strong_retract_audit(s3, [(resolve("direct(S3,C4)"), None)], k_max=1, law_db=S3_LAWS)
    assert entry.outcome == "not_in_variety"
