import numpy as np
import pytest

from retractkit.catalog import builtin_group, resolve
from retractkit.groups import Homomorphism, quotient
from retractkit.morphisms import SearchCounter, are_isomorphic, monomorphisms, search_homomorphisms
from retractkit.errors import BudgetExceeded

from conftest import small_groups


def check_iso(iso):
    assert iso.is_bijective()
    t, u = iso.domain.table, iso.codomain.table
    m = iso.mapping
    assert (m[t] == u[m[:, None], m[None, :]]).all()


def test_examples(s4):
    v4 = s4.subgroup([p for p in s4.elements if sorted(len(c) for c in p.cycles()) == [2, 2]])
    q, _ = quotient(s4, v4)
    iso = are_isomorphic(q, builtin_group("S(3)"))
    check_iso(iso)
    assert are_isomorphic(builtin_group("C(4)"), builtin_group("V4")) is None
    same = are_isomorphic(s4, s4)
    check_iso(same)


def test_dih4_embeds_in_s4(s4):
    hom = next(monomorphisms(builtin_group("Dih(4)"), s4))
    assert hom.is_injective() and hom.is_homomorphism()


@pytest.mark.parametrize("a,b", [("Q8", "Dih(4)"), ("C(6)", "S(3)"), ("direct(C2,C6)", "Dih(6)"),
                                 ("V4", "direct(C2,C2)"), ("Dih(3)", "S(3)"), ("A(4)", "A(4)")])
def test_symmetry(a, b):
    g, h = resolve(a), resolve(b)
    f, r = are_isomorphic(g, h), are_isomorphic(h, g)
    assert (f is None) == (r is None)
    if f is not None:
        check_iso(f)
        check_iso(r)


def test_hom_count_s3_to_c2():
    homs = list(search_homomorphisms(builtin_group("S(3)"), builtin_group("C(2)")))
    assert len(homs) == 2
    assert all(h.is_homomorphism() for h in homs)


def test_budget():
    with pytest.raises(BudgetExceeded):
        list(search_homomorphisms(builtin_group("S(4)"), builtin_group("S(4)"), counter=SearchCounter(5)))


@pytest.mark.parametrize("g", small_groups(), ids=str)
def test_identity_hom(g):
    h = Homomorphism.identity(g)
    assert h.is_homomorphism() and h.kernel().is_trivial()
    assert np.array_equal(h.then(h).mapping, h.mapping)
