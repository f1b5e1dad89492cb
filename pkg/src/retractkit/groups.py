"""Finite permutation groups held as fully enumerated element lists.

Every group keeps its elements in lexicographic order of their image
sequences, so element index 0 is always the identity and "least" anywhere in
the package means least index.  Structural algorithms run over the Cayley
table (``FiniteGroup.table``), built lazily.
"""

from __future__ import annotations

from functools import cached_property
from math import gcd

import numpy as np

from .errors import GroupTooLarge, NotASubgroup, NotNormal
from .perm import Permutation

ELEMENT_CAP = 200_000
DEGREE_CAP = 64
# Cayley tables are n*n int32; 5040^2 is about 100 MB.
TABLE_CAP = 5_040


class FiniteGroup:
    """A permutation group with every element listed.

    ``elements`` must already be sorted lexicographically. ``table`` may be
    supplied when it is cheaper to derive from a parent group.
    """

    def __init__(self, degree, generators, elements, name=None, table=None):
        self.degree = degree
        self.generators = list(generators)
        self.elements = list(elements)
        self.name = name
        self._index = {p._img: i for i, p in enumerate(self.elements)}
        if table is not None:
            table = np.ascontiguousarray(table, dtype=np.int32)
        self._table = table

    # -- basic access -------------------------------------------------

    @property
    def order(self):
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, perm):
        return isinstance(perm, Permutation) and perm._img in self._index

    def index(self, perm):
        try:
            return self._index[perm._img]
        except KeyError:
            raise NotASubgroup(f"{perm} is not an element of {self}") from None

    @property
    def identity(self):
        return self.elements[0]

    def __repr__(self):
        label = self.name or f"group of degree {self.degree}"
        return f"<{label}, order {self.order}>"

    def __str__(self):
        return self.name or repr(self)

    # -- tables -------------------------------------------------------

    @property
    def table(self):
        if self._table is None:
            if self.order > TABLE_CAP:
                raise GroupTooLarge(
                    f"{self} has order {self.order}; structural algorithms "
                    f"need order <= {TABLE_CAP}"
                )
            self._table = _build_table(self.elements, self.degree)
        return self._table

    @cached_property
    def inverse(self):
        return np.array([self._index[p.inverse()._img] for p in self.elements], dtype=np.int64)

    @cached_property
    def element_orders(self):
        return np.array([p.order() for p in self.elements], dtype=np.int64)

    @cached_property
    def gen_indices(self):
        return [self._index[g._img] for g in self.generators]

    @cached_property
    def small_gens(self):
        """A small generating set (indices), chosen greedily by element order."""
        return greedy_generators(self, range(self.order))

    @cached_property
    def centralizer_orders(self):
        t = self.table
        return (t == t.T).sum(axis=1)

    @cached_property
    def is_abelian(self):
        t = self.table
        return bool((t == t.T).all())

    @cached_property
    def exponent(self):
        return int(np.lcm.reduce(self.element_orders))

    def power(self, x, k):
        """x^k for an element index (or an index array)."""
        t = self.table
        x = np.asarray(x)
        if k < 0:
            x = self.inverse[x]
            k = -k
        result = np.zeros_like(x)
        base = x
        while k:
            if k & 1:
                result = t[result, base]
            base = t[base, base]
            k >>= 1
        return result

    # -- subgroups ----------------------------------------------------

    def whole(self):
        return Subgroup(self, range(self.order))

    def trivial(self):
        return Subgroup(self, [0])

    def subgroup(self, gens):
        """Subgroup generated by permutations (or element indices)."""
        idx = [g if isinstance(g, (int, np.integer)) else self.index(g) for g in gens]
        return Subgroup(self, closure(self, idx))

    def subgroup_of(self, other):
        """The elements of ``other`` as a subgroup of self.

        Elements of smaller degree are padded with fixed points (the natural
        inclusion of ``S_k`` into ``S_n``).
        """
        members = []
        for p in other.elements:
            if p.degree < self.degree:
                p = p.padded(self.degree)
            members.append(self.index(p))
        return Subgroup(self, members)


class Subgroup:
    """A subset of a parent group's element indices that is a subgroup."""

    def __init__(self, parent, members):
        self.parent = parent
        self.members = frozenset(int(m) for m in members)
        self._group = None

    @classmethod
    def checked(cls, parent, members):
        sub = cls(parent, members)
        if not sub.is_closed():
            raise NotASubgroup("member set is not closed under multiplication")
        return sub

    def is_closed(self):
        if 0 not in self.members:
            return False
        idx = self.indices
        prod = self.parent.table[np.ix_(idx, idx)]
        return bool(np.isin(prod, idx).all())

    @cached_property
    def indices(self):
        return np.array(sorted(self.members), dtype=np.int64)

    @cached_property
    def mask(self):
        m = np.zeros(self.parent.order, dtype=bool)
        m[self.indices] = True
        return m

    @property
    def order(self):
        return len(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, x):
        if isinstance(x, Permutation):
            return x in self.parent and self.parent.index(x) in self.members
        return int(x) in self.members

    @property
    def elements(self):
        return [self.parent.elements[i] for i in self.indices]

    def is_trivial(self):
        return len(self.members) == 1

    def __le__(self, other):
        return self.parent is other.parent and self.members <= other.members

    def __lt__(self, other):
        return self.parent is other.parent and self.members < other.members

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and self.parent is other.parent
            and self.members == other.members
        )

    def __hash__(self):
        return hash(self.members)

    def __repr__(self):
        return f"<subgroup of order {self.order} in {self.parent}>"

    @cached_property
    def generators(self):
        return greedy_generators(self.parent, self.indices)

    def sort_key(self):
        return (self.order, tuple(self.indices.tolist()))

    def as_group(self, name=None):
        """This subgroup as a standalone FiniteGroup (same degree, same elements)."""
        if self._group is None:
            parent = self.parent
            idx = self.indices
            pos = np.full(parent.order, -1, dtype=np.int64)
            pos[idx] = np.arange(len(idx))
            table = pos[parent.table[np.ix_(idx, idx)]]
            elements = [parent.elements[i] for i in idx]
            gens = [parent.elements[i] for i in self.generators]
            self._group = FiniteGroup(parent.degree, gens, elements, name=name, table=table)
        elif name and not self._group.name:
            self._group.name = name
        return self._group


class Homomorphism:
    """A homomorphism given by the image (codomain index) of every domain element."""

    def __init__(self, domain, codomain, mapping):
        self.domain = domain
        self.codomain = codomain
        self.mapping = np.asarray(mapping, dtype=np.int64)

    @classmethod
    def from_generator_images(cls, domain, codomain, images, gens=None):
        """Extend generator images to the whole domain.

        ``gens`` defaults to the domain's declared generators. Raises
        ValueError when the assignment does not extend to a homomorphism.
        """
        if gens is None:
            gens = domain.gen_indices
        gens = [g if isinstance(g, (int, np.integer)) else domain.index(g) for g in gens]
        imgs = [i if isinstance(i, (int, np.integer)) else codomain.index(i) for i in images]
        if len(gens) != len(imgs):
            raise ValueError("one image per generator is required")
        tree = BFSTree(domain, gens)
        if tree.size != domain.order:
            raise ValueError("the given elements do not generate the domain")
        mapping = tree.extend(codomain.table, imgs, domain.order)
        hom = cls(domain, codomain, mapping)
        if not tree.consistent(domain.table, codomain.table, mapping, imgs):
            raise ValueError("generator images do not define a homomorphism")
        return hom

    @classmethod
    def identity(cls, group):
        return cls(group, group, np.arange(group.order))

    @property
    def generator_images(self):
        return [self.codomain.elements[self.mapping[g]] for g in self.domain.gen_indices]

    def __call__(self, x):
        if isinstance(x, Permutation):
            return self.codomain.elements[self.mapping[self.domain.index(x)]]
        return int(self.mapping[int(x)])

    def image(self):
        return Subgroup(self.codomain, np.unique(self.mapping))

    def kernel(self):
        return Subgroup(self.domain, np.flatnonzero(self.mapping == 0))

    def is_injective(self):
        return len(np.unique(self.mapping)) == self.domain.order

    def is_bijective(self):
        return self.is_injective() and self.domain.order == self.codomain.order

    def is_homomorphism(self):
        """Full check: single valued and multiplicative on the whole domain."""
        m = self.mapping
        if m.shape != (self.domain.order,) or m[0] != 0:
            return False
        if m.min() < 0 or m.max() >= self.codomain.order:
            return False
        td, tc = self.domain.table, self.codomain.table
        for g in self.domain.small_gens:
            if not np.array_equal(m[td[:, g]], tc[m, m[g]]):
                return False
        return True

    def then(self, other):
        """Composite: apply self, then ``other``."""
        if other.domain is not self.codomain:
            raise ValueError("composition requires matching groups")
        return Homomorphism(self.domain, other.codomain, other.mapping[self.mapping])

    def as_dict(self):
        return {
            str(self.domain.elements[i]): str(self.codomain.elements[j])
            for i, j in enumerate(self.mapping.tolist())
        }


class BFSTree:
    """Breadth-first spanning tree of <gens> in the right Cayley graph.

    Nodes are grouped in levels so a homomorphism can be extended one level
    at a time with vectorised table lookups.
    """

    def __init__(self, group, gens, start=None):
        t = group.table
        self.gens = list(gens)
        seen = np.zeros(group.order, dtype=bool)
        seen[0] = True
        levels = []
        frontier = np.array([0], dtype=np.int64)
        g = np.array(self.gens, dtype=np.int64)
        while frontier.size and g.size:
            nxt = t[frontier[:, None], g[None, :]]
            parents = np.repeat(frontier, len(g))
            genpos = np.tile(np.arange(len(g)), len(frontier))
            flat = nxt.ravel()
            fresh = ~seen[flat]
            flat, parents, genpos = flat[fresh], parents[fresh], genpos[fresh]
            flat, first = np.unique(flat, return_index=True)
            if not flat.size:
                break
            seen[flat] = True
            levels.append((flat, parents[first], genpos[first]))
            frontier = flat
        self.levels = levels
        self.nodes = np.flatnonzero(seen)
        self.size = len(self.nodes)

    def extend(self, codomain_table, images, domain_order):
        mapping = np.full(domain_order, -1, dtype=np.int64)
        mapping[0] = 0
        imgs = np.asarray(images, dtype=np.int64)
        for nodes, parents, genpos in self.levels:
            mapping[nodes] = codomain_table[mapping[parents], imgs[genpos]]
        return mapping

    def consistent(self, domain_table, codomain_table, mapping, images):
        nodes = self.nodes
        for g, img in zip(self.gens, images):
            if not np.array_equal(mapping[domain_table[nodes, g]], codomain_table[mapping[nodes], img]):
                return False
        return True


# -- construction ------------------------------------------------------


def generate(degree, gens, name=None, cap=ELEMENT_CAP):
    """Close ``gens`` under multiplication; elements come out in canonical order."""
    if degree < 1:
        raise ValueError("degree must be positive")
    if degree > DEGREE_CAP:
        raise GroupTooLarge(f"degree {degree} exceeds the degree cap {DEGREE_CAP}")
    gens = list(gens)
    for g in gens:
        if g.degree != degree:
            raise ValueError(f"generator {g} has degree {g.degree}, expected {degree}")
    ident = tuple(range(degree))
    imgs = [g._img for g in gens if g._img != ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        fresh = []
        for a in frontier:
            for g in imgs:
                c = tuple([g[i] for i in a])
                if c not in seen:
                    seen.add(c)
                    fresh.append(c)
                    if len(seen) > cap:
                        raise GroupTooLarge(f"group too large: more than {cap} elements")
        frontier = fresh
    elements = [Permutation._raw(img) for img in sorted(seen)]
    return FiniteGroup(degree, gens, elements, name=name)


def _build_table(elements, degree):
    n = len(elements)
    perms = np.array([p._img for p in elements], dtype=np.int64).reshape(n, degree)
    table = np.empty((n, n), dtype=np.int32)
    if degree <= 15:
        weights = degree ** np.arange(degree - 1, -1, -1, dtype=np.int64)
        codes = perms @ weights
        block = max(1, 4_000_000 // max(1, n * degree))
        for start in range(0, n, block):
            rows = perms[start:start + block]
            # prods[j, b, k] = (e_{start+b} * e_j)[k] = e_j[e_{start+b}[k]]
            prods = perms[:, rows]
            table[start:start + block] = np.searchsorted(codes, prods @ weights).T
    else:
        index = {p._img: i for i, p in enumerate(elements)}
        for i in range(n):
            prods = perms[:, perms[i]]
            table[i] = [index[tuple(r)] for r in prods.tolist()]
    return table


def greedy_generators(group, candidates):
    """Greedy generating set for the subgroup formed by ``candidates``.

    Elements are tried in order of decreasing element order (ties by index);
    an element is kept when it enlarges the subgroup generated so far.
    """
    cand = np.asarray(list(candidates), dtype=np.int64)
    target = len(cand)
    if target <= 1:
        return []
    orders = group.element_orders[cand]
    ranked = cand[np.lexsort((cand, -orders))]
    gens = []
    mask = np.zeros(group.order, dtype=bool)
    mask[0] = True
    size = 1
    for x in ranked.tolist():
        if mask[x]:
            continue
        gens.append(x)
        mask = _closure_mask(group.table, mask, gens)
        size = int(mask.sum())
        if size == target:
            break
    return gens


def _closure_mask(table, start_mask, gens):
    mask = start_mask.copy()
    mask[0] = True
    frontier = np.flatnonzero(mask)
    g = np.asarray(gens, dtype=np.int64)
    if not g.size:
        return mask
    while frontier.size:
        nxt = table[frontier[:, None], g[None, :]].ravel()
        nxt = np.unique(nxt[~mask[nxt]])
        mask[nxt] = True
        frontier = nxt
    return mask


def closure(group, gens, start=()):
    """Indices of the subgroup generated by ``gens`` together with ``start``.

    ``start`` must already lie inside that subgroup.
    """
    mask = np.zeros(group.order, dtype=bool)
    mask[0] = True
    if len(start):
        mask[np.asarray(list(start), dtype=np.int64)] = True
    return np.flatnonzero(_closure_mask(group.table, mask, list(gens)))


def direct_product(g, h, name=None):
    """G x H acting on the disjoint union of the two point sets."""
    dg, dh = g.degree, h.degree
    if dg + dh > DEGREE_CAP:
        raise GroupTooLarge(f"degree {dg + dh} exceeds the degree cap {DEGREE_CAP}")
    if g.order * h.order > ELEMENT_CAP:
        raise GroupTooLarge(f"group too large: {g.order * h.order} elements")
    elements = [
        Permutation._raw(a._img + tuple(x + dg for x in b._img))
        for a in g.elements
        for b in h.elements
    ]
    gens = [a.padded(dg + dh) for a in g.generators]
    gens += [b.padded(dg + dh, shift=dg) for b in h.generators]
    table = None
    n = g.order * h.order
    if n <= TABLE_CAP and g.order <= TABLE_CAP and h.order <= TABLE_CAP:
        tg = g.table.astype(np.int64)
        th = h.table.astype(np.int64)
        nh = h.order
        table = (tg[:, None, :, None] * nh + th[None, :, None, :]).reshape(n, n)
    if name is None and g.name and h.name:
        name = f"direct({g.name},{h.name})"
    return FiniteGroup(dg + dh, gens, elements, name=name, table=table)


def direct_power(g, k, name=None):
    result = g
    for _ in range(k - 1):
        result = direct_product(result, g)
    if name is None and g.name:
        name = g.name if k == 1 else f"{g.name}^{k}"
    if k > 1:
        result.name = name
    return result


# -- structural primitives ---------------------------------------------


def _require_parent(group, sub):
    if not isinstance(sub, Subgroup) or sub.parent is not group:
        raise NotASubgroup("argument is not a subgroup of the given group")


def conjugacy_classes(group):
    """Classes as sorted index tuples, ordered by least member."""
    t = group.table
    inv = group.inverse
    seen = np.zeros(group.order, dtype=bool)
    classes = []
    for x in range(group.order):
        if seen[x]:
            continue
        # g^-1 x g for every g
        cls = np.unique(t[inv, t[x]])
        seen[cls] = True
        classes.append(tuple(cls.tolist()))
    return classes


def centralizer(group, sub):
    _require_parent(group, sub)
    t = group.table
    s = np.array(sub.generators or [0], dtype=np.int64)
    ok = (t[:, s] == t[s, :].T).all(axis=1)
    return Subgroup(group, np.flatnonzero(ok))


def center(group):
    return centralizer(group, group.whole())


def normalizer(group, sub):
    _require_parent(group, sub)
    t = group.table
    inv = group.inverse
    ok = np.ones(group.order, dtype=bool)
    for s in sub.generators:
        conj = t[inv, t[s]]  # g^-1 s g for all g
        ok &= sub.mask[conj]
    return Subgroup(group, np.flatnonzero(ok))


def is_normal(group, sub):
    _require_parent(group, sub)
    t = group.table
    inv = group.inverse
    gens = np.array(group.small_gens, dtype=np.int64)
    if not gens.size or sub.order == group.order:
        return True
    s = sub.indices
    conj = t[inv[gens][:, None], t[s[None, :], gens[:, None]]]
    return bool(sub.mask[conj].all())


def intersect(a, b):
    if a.parent is not b.parent:
        raise NotASubgroup("subgroups of different parents")
    return Subgroup(a.parent, a.members & b.members)


def join(a, b):
    """Subgroup generated by two subgroups."""
    if a.parent is not b.parent:
        raise NotASubgroup("subgroups of different parents")
    return Subgroup(a.parent, closure(a.parent, list(a.generators) + list(b.generators)))


def commutator_subgroup(group, a, b):
    """[A, B]: subgroup generated by all a^-1 b^-1 a b."""
    t = group.table
    inv = group.inverse
    ai, bi = a.indices, b.indices
    comm = t[t[np.ix_(inv[ai], inv[bi])], t[np.ix_(ai, bi)]]
    vals = np.unique(comm)
    return Subgroup(group, closure(group, vals.tolist()))


def derived_subgroup(group):
    whole = group.whole()
    return commutator_subgroup(group, whole, whole)


def _p_part(n, p):
    pk = 1
    while n % p == 0:
        n //= p
        pk *= p
    return pk


def sylow_subgroup(group, p):
    """A Sylow p-subgroup by greedy normalizer ascent.

    While P is not yet Sylow, p divides |N(P)/P|; the least element of N(P)
    whose order modulo P is a power of p is used to enlarge P by a factor p.
    """
    target = _p_part(group.order, p)
    t = group.table
    sub = group.trivial()
    while sub.order < target:
        norm = normalizer(group, sub)
        for x in norm.indices.tolist():
            if x in sub.members:
                continue
            m, cur = 1, x
            while cur not in sub.members:
                cur = int(t[cur, x])
                m += 1
            if _p_part(m, p) == m:
                y = int(group.power(x, m // p))
                sub = Subgroup(group, closure(group, list(sub.generators) + [y], sub.indices))
                break
        else:  # pragma: no cover - excluded by Sylow theory
            raise AssertionError("normalizer ascent stalled")
    return sub


def quotient(group, normal):
    """G/N via the action of G on the cosets of N; returns ``(G/N, projection)``.

    The quotient acts regularly on the cosets, so its degree equals its order.
    Cosets are numbered by their least element.
    """
    _require_parent(group, normal)
    if not is_normal(group, normal):
        raise NotNormal("subgroup is not normal")
    t = group.table
    n = group.order
    label = np.full(n, -1, dtype=np.int64)
    reps = []
    nidx = normal.indices
    for g in range(n):
        if label[g] < 0:
            label[t[g, nidx]] = len(reps)
            reps.append(g)
    reps = np.array(reps, dtype=np.int64)
    m = len(reps)
    # coset c moves to the coset of rep_c * g under right multiplication by g
    action = label[t[reps[:, None], reps[None, :]]].T  # action[c2][c] = label(rep_c * rep_c2)
    perms = [Permutation._raw(tuple(row)) for row in action.tolist()]
    order = sorted(range(m), key=lambda c: perms[c]._img)
    pos = np.empty(m, dtype=np.int64)
    pos[order] = np.arange(m)
    elements = [perms[c] for c in order]
    # table[pos a][pos b] = pos(label(rep_a * rep_b))
    coset_table = label[t[reps[:, None], reps[None, :]]]
    table = np.empty((m, m), dtype=np.int64)
    table[np.ix_(pos, pos)] = pos[coset_table]
    gens = [perms[label[g]] for g in group.gen_indices if label[g] != 0]
    name = None
    if group.name:
        name = f"{group.name}/N{normal.order}"
    q = FiniteGroup(m, gens, elements, name=name, table=table)
    pi = Homomorphism(group, q, pos[label])
    return q, pi


def abelianization_order(group):
    return group.order // derived_subgroup(group).order


def is_p_group(group):
    n = group.order
    if n == 1:
        return True
    p = next(q for q in range(2, n + 1) if n % q == 0)
    return _p_part(n, p) == n


def coprime(a, b):
    return gcd(a, b) == 1
