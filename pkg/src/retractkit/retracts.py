"""Retractions, variety membership at desk scale, and section sweeps."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import RetractKitError
from .groups import (
    Homomorphism,
    Subgroup,
    closure,
    direct_power,
    intersect,
    is_normal,
    is_p_group,
    quotient,
    sylow_subgroup,
)
from .morphisms import SearchCounter, are_isomorphic, monomorphisms, search_homomorphisms
from .structure import is_nilpotent, monolith, normal_subgroups
from .words import S4_LAWS, holds_law


class RetractionNotFound(RetractKitError):
    def __init__(self, message, diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


@dataclass
class RetractionCertificate:
    group: object
    sub: Subgroup
    kernel: Subgroup
    rho: Homomorphism
    method: str  # "lemma" or "brute_force"

    def verify(self):
        """Exhaustive checks on the full element set; returns name -> bool."""
        m = self.rho.mapping
        h = self.sub.indices
        checks = {
            "homomorphism": self.rho.is_homomorphism(),
            "idempotent": bool(np.array_equal(m[m], m)),
            "identity_on_H": bool(np.array_equal(m[h], h)),
            "image_is_H": set(np.unique(m).tolist()) == set(self.sub.members),
            "kernel_order": self.kernel.order * self.sub.order == self.group.order,
            "kernel_matches": self.rho.kernel() == self.kernel,
        }
        if self.method == "lemma":
            checks["N_normal"] = is_normal(self.group, self.kernel)
            checks["N_meets_H_trivially"] = intersect(self.kernel, self.sub).is_trivial()
        return checks

    def is_valid(self):
        return all(self.verify().values())


def find_retraction_lemma(group, sub):
    """Retraction onto a monolithic subgroup through a maximal normal subgroup
    meeting it trivially.

    Among normal subgroups N with N ∩ H = 1, the inclusion-maximal ones are
    tried in canonical order.  For each, G/N is formed; if π is injective on H
    and |G/N| = |H|, then ρ = (π|_H)^-1 ∘ π is the retraction.  Raises
    RetractionNotFound listing (|N|, |G/N|) for every maximal N otherwise.
    """
    if sub.parent is not group:
        raise RetractKitError("H must be a subgroup of G")
    if not monolith(sub.as_group()).is_monolithic:
        raise RetractKitError("H is not monolithic")
    normals = normal_subgroups(group)
    meeting_trivially = [n for n in normals if intersect(n, sub).is_trivial()]
    maximal = [n for n in meeting_trivially if not any(n < m for m in meeting_trivially)]
    diagnostics = []
    for n in maximal:
        q, pi = quotient(group, n)
        img = pi.mapping[sub.indices]
        injective = len(np.unique(img)) == sub.order
        if injective and q.order == sub.order:
            back = np.empty(q.order, dtype=np.int64)
            back[img] = sub.indices
            rho = Homomorphism(group, group, back[pi.mapping])
            return RetractionCertificate(group, sub, n, rho, "lemma")
        diagnostics.append({"N_order": n.order, "quotient_order": q.order, "injective_on_H": injective})
    raise RetractionNotFound("no maximal trivially-intersecting normal subgroup gives a retraction", diagnostics)


def find_retraction_brute(group, sub, budget=10_000_000):
    """Least retraction G -> H by generator images, or None after a complete search.

    Generators inside H are forced to themselves; the others range over
    elements of H whose order divides theirs.  Raises BudgetExceeded.
    """
    gens = group.small_gens
    orders = group.element_orders
    h = sub.indices
    cands = []
    for g in gens:
        if g in sub.members:
            cands.append(np.array([g]))
        else:
            cands.append(h[orders[g] % orders[h] == 0])

    def fixes_h(hom):
        return bool(np.array_equal(hom.mapping[h], h))

    counter = SearchCounter(budget)
    for rho in search_homomorphisms(group, group, gens, cands, counter=counter, accept=fixes_h):
        return RetractionCertificate(group, sub, rho.kernel(), rho, "brute_force")
    return None


# -- subgroup enumeration --------------------------------------------------


def all_subgroups(group, up_to_conjugacy=False, cap=None):
    """Every subgroup (or one per conjugacy class), sorted by order then members.

    Start from the cyclic subgroups and repeatedly enlarge each subgroup S by
    one element g outside it.  <S, g> only depends on the double coset SgS,
    so one g per double coset is tried.  Every subgroup is reached, since it
    is a chain of single-element extensions of a cyclic one.
    """
    t = group.table
    n = group.order
    conj = None
    if up_to_conjugacy:
        # conj[g, x] = g^-1 x g
        conj = t[group.inverse[:, None], t.T]

    def key(members):
        if conj is None:
            return members
        idx = np.fromiter(members, dtype=np.int64)
        rows = np.sort(conj[:, idx], axis=1)
        best = rows[np.lexsort(rows.T[::-1])[0]]
        return frozenset(best.tolist())

    found = {}  # key -> (members of the representative, its generators)
    queue = []
    for x in range(n):
        members = frozenset(closure(group, [x]).tolist())
        k = key(members)
        if k not in found:
            found[k] = (members, [x] if x else [])
            queue.append(k)
    while queue:
        if cap is not None and len(found) > cap:
            raise RetractKitError(f"subgroup enumeration exceeded {cap} subgroups")
        s, gens = found[queue.pop()]
        idx = np.fromiter(s, dtype=np.int64)
        covered = np.zeros(n, dtype=bool)
        covered[idx] = True
        for g in range(n):
            if covered[g]:
                continue
            covered[t[t[idx, g][:, None], idx[None, :]].ravel()] = True
            members = frozenset(closure(group, gens + [g], idx).tolist())
            k = key(members)
            if k not in found:
                found[k] = (members, gens + [g])
                queue.append(k)
    subs = [Subgroup(group, m) for m, _ in found.values()]
    subs.sort(key=Subgroup.sort_key)
    return subs


# -- variety membership ----------------------------------------------------


@dataclass
class VarietyCertificate:
    verdict: str  # "member", "non_member" or "unknown"
    group: object
    generator: object
    k: int | None = None
    base: object = None
    section: Subgroup | None = None  # S <= H^k
    kernel: Subgroup | None = None  # T normal in S (as a subgroup of S.as_group())
    isomorphism: Homomorphism | None = None  # S/T -> G
    law: object = None
    witness: dict | None = None
    notes: list = field(default_factory=list)

    def verify(self):
        """Rebuild the evidence independently of how it was found."""
        if self.verdict == "member":
            s = self.section.as_group()
            if not is_normal(s, self.kernel):
                return False
            q, _ = quotient(s, self.kernel)
            if are_isomorphic(q, self.group) is None:
                return False
            iso = self.isomorphism
            return iso is None or (iso.is_homomorphism() and iso.is_bijective())
        if self.verdict == "non_member":
            return holds_law(self.generator, self.law).holds and not holds_law(self.group, self.law).holds
        return True


def variety_membership(group, generator, k_max=2, law_db=S4_LAWS, budget=10_000_000):
    """Bounded, three-valued test of ``group`` ∈ var ``generator``.

    Negative evidence: a law of the database that holds in the generator and
    fails in ``group``.  Positive evidence: ``group`` embeds in, or is a
    quotient of a subgroup of, generator^k for some k <= k_max.  When
    ``group`` is a p-group only sections of a Sylow p-subgroup of the power
    are searched (any p-group section of a finite group is a section of a
    Sylow p-subgroup).
    """
    notes = []
    for law in law_db.laws:
        if not holds_law(generator, law).holds:
            notes.append(f"law {law} does not hold in {generator}; skipped")
            continue
        res = holds_law(group, law)
        if not res.holds:
            return VarietyCertificate("non_member", group, generator, law=law,
                                      witness=res.counterexample, notes=notes)
    counter = SearchCounter(budget)
    for k in range(1, k_max + 1):
        base = direct_power(generator, k)
        if group.order > base.order:
            continue
        for hom in monomorphisms(group, base, counter=counter):
            img = hom.image()
            s_group = img.as_group()
            back = np.empty(base.order, dtype=np.int64)
            back[img.indices] = np.arange(img.order)
            # iso: S/1 = S -> G, inverse of hom
            inv_map = np.empty(img.order, dtype=np.int64)
            inv_map[back[hom.mapping]] = np.arange(group.order)
            q, pi = quotient(s_group, s_group.trivial())
            iso = Homomorphism(q, group, inv_map[np.argsort(pi.mapping)])
            return VarietyCertificate("member", group, generator, k, base, img,
                                      s_group.trivial(), iso, notes=notes)
        search_in = base
        if is_p_group(group) and group.order > 1:
            p = next(d for d in range(2, group.order + 1) if group.order % d == 0)
            search_in = sylow_subgroup(base, p).as_group()
        for s in all_subgroups(search_in):
            if s.order <= group.order or s.order % group.order:
                continue
            s_group = s.as_group()
            for t_sub in normal_subgroups(s_group):
                if s.order // t_sub.order != group.order:
                    continue
                q, _ = quotient(s_group, t_sub)
                iso = are_isomorphic(q, group, counter=counter)
                if iso is not None:
                    section = base.subgroup(s_group.elements) if search_in is not base else s
                    kernel = section.as_group().subgroup(t_sub.elements)
                    return VarietyCertificate("member", group, generator, k, base, section,
                                              kernel, iso, notes=notes)
    return VarietyCertificate("unknown", group, generator, notes=notes)


# -- sweep of sections -------------------------------------------------------


@dataclass
class StarReport:
    base: object
    subgroups: int
    sections: int
    monolithic_non_nilpotent: int
    classified: dict
    outliers: list
    conclusive: bool
    up_to_conjugacy: bool = False
    witnesses: list = field(default_factory=list)


def verify_star(base, targets, up_to_conjugacy=False, cap=None):
    """Classify every non-nilpotent monolithic section S/T of ``base``.

    ``targets`` maps names to groups; a section isomorphic to none of them is
    an outlier.  Monolithicity is read off the normal lattice of S (normal
    subgroups of S/T are those of S containing T) before any quotient is
    built.
    """
    subs = all_subgroups(base, up_to_conjugacy=up_to_conjugacy, cap=cap)
    sections = 0
    hits = 0
    classified = {name: 0 for name in targets}
    outliers = []
    witnesses = []
    for s in subs:
        s_group = s.as_group()
        normals = normal_subgroups(s_group)
        for t_sub in normals:
            sections += 1
            above = [m for m in normals if t_sub < m]
            minimal = [m for m in above if not any(t_sub < k < m for k in above)]
            if len(minimal) != 1:
                continue
            q, _ = quotient(s_group, t_sub)
            if is_nilpotent(q):
                continue
            hits += 1
            for name, target in targets.items():
                if q.order == target.order and are_isomorphic(q, target) is not None:
                    classified[name] += 1
                    witnesses.append((name, s, t_sub, q))
                    break
            else:
                outliers.append((s, t_sub, q))
    return StarReport(base, len(subs), sections, hits, classified, outliers, True,
                      up_to_conjugacy, witnesses)


# -- strong retract audit --------------------------------------------------


@dataclass
class AuditEntry:
    group: object
    embedded: Subgroup | None
    membership: VarietyCertificate | None
    lemma: RetractionCertificate | None = None
    brute: RetractionCertificate | None = None
    brute_status: str = "not run"
    outcome: str = "skipped"
    detail: str = ""


def strong_retract_audit(h, test_groups, k_max=2, law_db=S4_LAWS, brute_budget=2_000_000):
    """For each (G, image of H in G) in var H, construct a retraction G -> H.

    ``test_groups`` holds pairs (G, Subgroup) or (G, None) for the natural
    inclusion.  Groups whose membership in var H is not established are
    reported as such, never counted as passes.
    """
    from .errors import BudgetExceeded
    from .structure import natural_inclusion

    entries = []
    for g, emb in test_groups:
        if emb is None:
            incl = natural_inclusion(h, g)
            if incl is None:
                entries.append(AuditEntry(g, None, None, outcome="error", detail="H is not inside G"))
                continue
            emb = incl.image()
        if are_isomorphic(emb.as_group(), h) is None:
            entries.append(AuditEntry(g, emb, None, outcome="error", detail="embedded subgroup is not isomorphic to H"))
            continue
        cert = variety_membership(g, h, k_max=k_max, law_db=law_db)
        entry = AuditEntry(g, emb, cert)
        if cert.verdict != "member":
            entry.outcome = "not_in_variety" if cert.verdict == "non_member" else "membership_unknown"
            entries.append(entry)
            continue
        try:
            entry.lemma = find_retraction_lemma(g, emb)
        except RetractionNotFound as exc:
            entry.outcome = "failed"
            entry.detail = f"lemma construction failed: {exc.diagnostics}"
            entries.append(entry)
            continue
        try:
            entry.brute = find_retraction_brute(g, emb, budget=brute_budget)
            entry.brute_status = "found" if entry.brute else "absent"
        except BudgetExceeded:
            entry.brute_status = "budget exhausted"
        ok = entry.lemma.is_valid() and entry.brute_status != "absent"
        entry.outcome = "retraction" if ok else "failed"
        entries.append(entry)
    return entries
