"""Normal subgroups, monoliths, nilpotency and the structural criteria."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .errors import NotASubgroup, NotNormal, RetractKitError
from .groups import (
    Subgroup,
    _p_part,
    centralizer,
    closure,
    commutator_subgroup,
    conjugacy_classes,
    intersect,
    is_normal,
    quotient,
)
from .morphisms import SearchCounter, search_homomorphisms


def normal_subgroups(group):
    """All normal subgroups, sorted by order and then by member indices.

    Every normal subgroup is a union of classes, hence the join of the normal
    closures of its classes; so closing the class closures under joins
    (products, for normal subgroups) reaches them all.
    """
    t = group.table
    found = {}
    for cls in conjugacy_classes(group):
        members = frozenset(closure(group, list(cls)).tolist())
        found.setdefault(members, None)
    basic = list(found)
    frontier = list(basic)
    while frontier:
        fresh = []
        for a in frontier:
            ai = np.fromiter(a, dtype=np.int64)
            for b in basic:
                if b <= a:
                    continue
                bi = np.fromiter(b, dtype=np.int64)
                joined = frozenset(np.unique(t[np.ix_(ai, bi)]).tolist())
                if joined not in found:
                    found[joined] = None
                    fresh.append(joined)
        frontier = fresh
    subs = [Subgroup(group, m) for m in found]
    subs.sort(key=Subgroup.sort_key)
    return subs


@dataclass
class MonolithReport:
    group: object
    minimal_normals: list
    monolith: Subgroup
    is_monolithic: bool
    monolith_abelian: bool


def minimal_normal_subgroups(group, normals=None):
    normals = normals if normals is not None else normal_subgroups(group)
    nontrivial = [n for n in normals if not n.is_trivial()]
    return [n for n in nontrivial if not any(m < n for m in nontrivial)]


def monolith(group, normals=None):
    """Intersection of all nontrivial normal subgroups.

    The trivial group is reported with a trivial monolith and as not
    monolithic.
    """
    normals = normals if normals is not None else normal_subgroups(group)
    minimal = minimal_normal_subgroups(group, normals)
    mono = group.whole()
    for n in minimal:
        mono = intersect(mono, n)
    if not minimal:
        mono = group.trivial()
    is_mono = group.order > 1 and not mono.is_trivial()
    abelian = mono.as_group().is_abelian if mono.order > 1 else True
    return MonolithReport(group, minimal, mono, is_mono, abelian)


def lower_central_series(group):
    series = [group.whole()]
    while True:
        nxt = commutator_subgroup(group, group.whole(), series[-1])
        if nxt == series[-1]:
            return series
        series.append(nxt)
        if nxt.is_trivial():
            return series


def is_nilpotent(group):
    return lower_central_series(group)[-1].is_trivial()


@dataclass
class Factor:
    order: int
    abelian: bool
    exponent: int


def verify_subnormal_series(chain):
    """Factor data for an ascending chain of subgroups of one parent.

    Raises NotNormal (with ``index``) when ``chain[i]`` is not normal in
    ``chain[i + 1]``.
    """
    if not chain:
        return []
    parent = chain[0].parent
    factors = []
    for i, (low, high) in enumerate(zip(chain, chain[1:])):
        if low.parent is not parent or high.parent is not parent:
            raise NotASubgroup("chain members have different parents")
        if not low <= high:
            raise NotASubgroup(f"chain is not ascending at index {i}")
        upper = high.as_group()
        lower = upper.subgroup(low.elements)
        if not is_normal(upper, lower):
            raise NotNormal(f"term {i} is not normal in term {i + 1}", index=i)
        q, _ = quotient(upper, lower)
        factors.append(Factor(q.order, q.is_abelian, q.exponent))
    return factors


@dataclass
class Check:
    passed: bool
    detail: dict = field(default_factory=dict)


@dataclass
class KMOReport:
    group: object
    c: Subgroup
    checks: dict
    verdict: bool


def kmo_hypotheses(group, c):
    """The four hypotheses on a normal subgroup C of a finite group H.

    ``c_is_normal``, ``c_equals_centralizer``, ``c_normally_indecomposable``
    (no pair A, B of nontrivial subgroups of C, normal in H, with C = A x B)
    and ``orders_coprime`` (gcd(|C|, |H/C|) = 1).
    """
    if c.parent is not group:
        raise NotASubgroup("C must be a subgroup of H")
    checks = {}
    normal = is_normal(group, c)
    checks["c_is_normal"] = Check(normal)
    if not normal:
        skipped = {"skipped": "C is not normal"}
        checks["c_equals_centralizer"] = Check(False, skipped)
        checks["c_normally_indecomposable"] = Check(False, skipped)
        checks["orders_coprime"] = Check(False, skipped)
        return KMOReport(group, c, checks, False)
    cent = centralizer(group, c)
    checks["c_equals_centralizer"] = Check(cent == c, {"centralizer_order": cent.order})
    checks["c_normally_indecomposable"] = _indecomposable(group, c)
    index = group.order // c.order
    g = gcd(c.order, index)
    checks["orders_coprime"] = Check(g == 1, {"gcd": g, "order_c": c.order, "index": index})
    return KMOReport(group, c, checks, all(ch.passed for ch in checks.values()))


def _indecomposable(group, c):
    t = group.table
    # subgroups of C normal in H are the normal subgroups of H inside C
    parts = [n for n in normal_subgroups(group) if n < c and not n.is_trivial()]
    for i, a in enumerate(parts):
        for b in parts[i:]:
            if a.order * b.order != c.order or not intersect(a, b).is_trivial():
                continue
            ai, bi = a.indices, b.indices
            if (t[np.ix_(ai, bi)] == t[np.ix_(bi, ai)].T).all():
                return Check(False, {"factors": [a.order, b.order],
                                     "a": [str(x) for x in a.elements],
                                     "b": [str(x) for x in b.elements]})
    return Check(True, {"normal_subgroups_checked": len(parts)})


def abelian_invariants(group):
    """Primary invariants of a finite abelian group, e.g. [2, 4, 3] for C2 x C4 x C3.

    For each prime p the number of cyclic factors of order >= p^i is
    log_p(|{x : x^(p^i) = 1}| / |{x : x^(p^(i-1)) = 1}|).
    """
    if not group.is_abelian:
        raise RetractKitError(f"{group} is not abelian")
    n = group.order
    orders = group.element_orders
    out = []
    p = 2
    m = n
    while m > 1:
        if m % p == 0:
            pk = _p_part(n, p)
            m //= pk
            counts = []
            q = 1
            while True:
                cnt = int(np.sum(np.gcd(orders, q) == orders)) if q > 1 else 1
                counts.append(cnt)
                if cnt == pk:
                    break
                q *= p
            # at_least[i] = number of factors of order >= p^i
            at_least = [0] + [round(np.log(counts[i] / counts[i - 1]) / np.log(p))
                              for i in range(1, len(counts))]
            for i in range(1, len(at_least)):
                exactly = at_least[i] - (at_least[i + 1] if i + 1 < len(at_least) else 0)
                out.extend([p**i] * exactly)
        p += 1
    return sorted(out, key=lambda q: (min(f for f in range(2, q + 1) if q % f == 0), q))


@dataclass
class AbelianCriterion:
    holds: bool
    factors: list
    offending_pair: tuple | None = None


def abelian_strong_retract_criterion(group):
    """Finite abelian case: a direct sum of cyclic groups whose orders are
    pairwise equal or coprime.

    Such a decomposition exists iff the primary decomposition has this
    property, i.e. every Sylow subgroup is homocyclic.
    """
    factors = abelian_invariants(group)
    for i, a in enumerate(factors):
        for b in factors[i + 1:]:
            if a != b and gcd(a, b) != 1:
                return AbelianCriterion(False, factors, (a, b))
    return AbelianCriterion(True, factors)


@dataclass
class MaximalMonolithicReport:
    holds: bool
    violation: object = None  # (candidate, Homomorphism)
    skipped: list = field(default_factory=list)
    examined: list = field(default_factory=list)


def embeddings_into_monolith(h, g, mono_h=None, mono_g=None, counter=None):
    """Monomorphisms h -> g carrying monolith(h) into monolith(g).

    The natural inclusion is tried first when h's elements lie in g (after
    padding with fixed points); after that, generator-image backtracking.
    """
    mono_h = mono_h or monolith(h).monolith
    mono_g = mono_g or monolith(g).monolith

    def carries(hom):
        return bool(mono_g.mask[hom.mapping[mono_h.indices]].all())

    incl = natural_inclusion(h, g)
    if incl is not None and carries(incl):
        yield incl
    counter = counter or SearchCounter()
    yield from search_homomorphisms(h, g, injective=True, counter=counter, accept=carries)


def natural_inclusion(h, g):
    from .groups import Homomorphism

    if h.degree > g.degree:
        return None
    try:
        mapping = [g.index(p if p.degree == g.degree else p.padded(g.degree)) for p in h.elements]
    except NotASubgroup:
        return None
    return Homomorphism(h, g, mapping)


def is_maximal_monolithic(h, candidates, budget=10_000_000):
    """Does ``h`` fail to embed, monolith into monolith, in a larger candidate?

    Candidates that are not monolithic are skipped and listed in the report.
    """
    rep_h = monolith(h)
    if not rep_h.is_monolithic:
        raise RetractKitError(f"{h} is not monolithic")
    counter = SearchCounter(budget)
    skipped, examined = [], []
    for g in candidates:
        if g.order <= h.order:
            continue
        rep_g = monolith(g)
        if not rep_g.is_monolithic:
            skipped.append(g)
            continue
        examined.append(g)
        if g.order % h.order:
            continue
        for hom in embeddings_into_monolith(h, g, rep_h.monolith, rep_g.monolith, counter):
            return MaximalMonolithicReport(False, (g, hom), skipped, examined)
    return MaximalMonolithicReport(True, None, skipped, examined)
