"""Backtracking search for homomorphisms by generator images."""

from __future__ import annotations

from collections import Counter

import numpy as np

from .errors import BudgetExceeded
from .groups import BFSTree, Homomorphism, abelianization_order, center, conjugacy_classes

DEFAULT_SEARCH_BUDGET = 10_000_000


class SearchCounter:
    """Shared step counter so nested searches respect one budget."""

    def __init__(self, budget=DEFAULT_SEARCH_BUDGET):
        self.budget = budget
        self.steps = 0

    def tick(self):
        self.steps += 1
        if self.budget is not None and self.steps > self.budget:
            raise BudgetExceeded(
                f"search budget of {self.budget} steps exhausted",
                budget=self.budget,
                done=self.steps,
            )


def default_candidates(domain, codomain, gens, injective):
    """Admissible images per generator.

    Orders must divide (equal, for injective maps); for injective maps the
    centralizer of the image must be at least as large (divisibility).
    """
    cod_orders = codomain.element_orders
    out = []
    for g in gens:
        og = domain.element_orders[g]
        if injective:
            ok = cod_orders == og
            cg = domain.centralizer_orders[g]
            ok &= codomain.centralizer_orders % cg == 0
        else:
            ok = og % cod_orders == 0
        out.append(np.flatnonzero(ok))
    return out


def search_homomorphisms(
    domain,
    codomain,
    gens=None,
    candidates=None,
    injective=False,
    counter=None,
    accept=None,
):
    """Yield homomorphisms ``domain -> codomain`` in lexicographic order of
    generator images.

    Partial assignments are checked against every relation visible inside the
    subgroup generated so far, so failures prune early. ``accept`` is an
    optional final filter on complete homomorphisms.
    """
    if gens is None:
        gens = domain.small_gens
    gens = list(gens)
    if counter is None:
        counter = SearchCounter()
    if candidates is None:
        candidates = default_candidates(domain, codomain, gens, injective)
    n = domain.order
    tc = codomain.table
    td = domain.table
    if not gens:
        hom = Homomorphism(domain, codomain, np.zeros(n, dtype=np.int64))
        if accept is None or accept(hom):
            yield hom
        return
    trees = [BFSTree(domain, gens[: j + 1]) for j in range(len(gens))]
    if trees[-1].size != n:
        raise ValueError("generators do not generate the domain")

    def rec(j, imgs):
        tree = trees[j]
        for c in candidates[j]:
            counter.tick()
            trial = imgs + [int(c)]
            mapping = tree.extend(tc, trial, n)
            if not tree.consistent(td, tc, mapping, trial):
                continue
            if injective and len(np.unique(mapping[tree.nodes])) != tree.size:
                continue
            if j + 1 == len(gens):
                hom = Homomorphism(domain, codomain, mapping)
                if accept is None or accept(hom):
                    yield hom
            else:
                yield from rec(j + 1, trial)

    yield from rec(0, [])


def monomorphisms(domain, codomain, counter=None, accept=None):
    if domain.order > codomain.order or codomain.order % domain.order:
        return iter(())
    return search_homomorphisms(domain, codomain, injective=True, counter=counter, accept=accept)


def invariants(group):
    """Isomorphism invariants used to prune before backtracking."""
    return (
        group.order,
        tuple(sorted(Counter(group.element_orders.tolist()).items())),
        tuple(sorted(len(c) for c in conjugacy_classes(group))),
        center(group).order,
        abelianization_order(group),
    )


def are_isomorphic(g, h, counter=None):
    """An isomorphism ``g -> h`` (least by generator images), or None."""
    if g.order != h.order:
        return None
    if invariants(g) != invariants(h):
        return None
    gens = g.small_gens
    cands = []
    for x in gens:
        ok = (h.element_orders == g.element_orders[x]) & (
            h.centralizer_orders == g.centralizer_orders[x]
        )
        cands.append(np.flatnonzero(ok))
    for hom in search_homomorphisms(g, h, gens, cands, injective=True, counter=counter):
        return hom
    return None
