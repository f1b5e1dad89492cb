"""Equations with coefficients, the exhaustive solver and closedness audits."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct

import numpy as np

from .errors import NotASubgroup
from .words import (
    Const,
    Pow,
    Prod,
    Var,
    constants,
    evaluate_indices,
    iter_assignments,
    parse_equation,
    parse_system,
    parse_word,
    to_text,
    variables,
)

DEFAULT_SOLVE_BUDGET = 10**8


@dataclass
class EquationSystem:
    """Equations ``lhs = rhs`` in mixed words; constants come from ``coefficient_group``."""

    equations: list
    coefficient_group: object = None
    variables: list = field(default_factory=list)

    def __post_init__(self):
        seen = []
        for lhs, rhs in self.equations:
            for v in variables(lhs) + variables(rhs):
                if v not in seen:
                    seen.append(v)
        if not self.variables:
            self.variables = seen
        missing = [v for v in seen if v not in self.variables]
        if missing:
            raise ValueError(f"variables {missing} are not declared")
        if self.coefficient_group is not None:
            for lhs, rhs in self.equations:
                for c in constants(lhs) + constants(rhs):
                    evaluate_indices(c, {}, self.coefficient_group)

    @classmethod
    def parse(cls, text, coefficient_group=None, variables=None):
        return cls(parse_system(text), coefficient_group, list(variables or []))

    @classmethod
    def single(cls, text, coefficient_group=None):
        return cls([parse_equation(text)], coefficient_group)

    def __str__(self):
        return "; ".join(f"{to_text(l)} = {to_text(r)}" for l, r in self.equations)


@dataclass(frozen=True)
class Solution:
    assignment: dict

    def __str__(self):
        return ", ".join(f"{k} = {v}" for k, v in self.assignment.items())


@dataclass(frozen=True)
class NoSolution:
    searched: int


@dataclass(frozen=True)
class Exhausted:
    budget: int
    searched: int


def solve(system, group, budget=DEFAULT_SOLVE_BUDGET):
    """Least solution of ``system`` in ``group`` in lexicographic order.

    Returns Solution, NoSolution (only after the whole of G^k was scanned),
    or Exhausted when ``budget`` assignments were tried without finishing.
    Raises NotASubgroup when a coefficient is not an element of ``group``.
    """
    if isinstance(system, str):
        system = EquationSystem.parse(system)
    names = system.variables
    n = group.order
    cache = {}
    # resolve constants up front so a foreign coefficient fails loudly
    for lhs, rhs in system.equations:
        for c in constants(lhs) + constants(rhs):
            evaluate_indices(c, {}, group, _cache=cache)
    total = n ** len(names)
    searched = 0
    for _, cols in iter_assignments([np.arange(n)] * len(names)):
        if searched >= budget:
            return Exhausted(budget, searched)
        size = len(cols[0]) if cols else 1
        if searched + size > budget:
            size = budget - searched
            cols = [c[:size] for c in cols]
        env = dict(zip(names, cols))
        ok = np.ones(size, dtype=bool)
        for lhs, rhs in system.equations:
            a = evaluate_indices(lhs, env, group, _cache=cache)
            b = evaluate_indices(rhs, env, group, _cache=cache)
            ok &= np.broadcast_to(a == b, ok.shape)
        hits = np.flatnonzero(ok)
        if hits.size:
            k = int(hits[0])
            return Solution({v: group.elements[int(c[k])] for v, c in zip(names, cols)})
        searched += size
    if searched < total:
        return Exhausted(budget, searched)
    return NoSolution(total)


def word_image_mask(word, group, budget=DEFAULT_SOLVE_BUDGET):
    """Boolean mask over ``group`` of the values taken by ``word``."""
    names = variables(word)
    n = group.order
    if n ** len(names) > budget:
        from .errors import BudgetExceeded

        raise BudgetExceeded(f"word image needs {n ** len(names)} evaluations", budget=budget)
    mask = np.zeros(n, dtype=bool)
    for _, cols in iter_assignments([np.arange(n)] * len(names)):
        vals = evaluate_indices(word, dict(zip(names, cols)), group)
        mask[np.asarray(vals).ravel()] = True
    return mask


def word_image(word, group, budget=DEFAULT_SOLVE_BUDGET):
    """The set {w(g1, ..., gk)} as a sorted list of permutations."""
    if isinstance(word, str):
        word = parse_word(word)
    return [group.elements[i] for i in np.flatnonzero(word_image_mask(word, group, budget))]


# -- word enumeration for bounded audits -----------------------------------
#
# A letter is coded 2*i (variable i) or 2*i + 1 (its inverse), so the code
# order is x < x^-1 < y < y^-1 < ...


def _reduced(codes):
    return all(a ^ 1 != b for a, b in zip(codes, codes[1:]))


def _cyclically_reduced(codes):
    return _reduced(codes) and (len(codes) < 2 or codes[0] ^ 1 != codes[-1])


def _rename(codes):
    """Rename variables in order of first occurrence."""
    names = {}
    out = []
    for c in codes:
        v = c >> 1
        if v not in names:
            names[v] = len(names)
        out.append(2 * names[v] + (c & 1))
    return tuple(out)


def _orbit(codes, nvars):
    """Words giving equisolvable families of equations.

    Renaming variables, inverting a variable (x -> x^-1 is a bijection of G)
    and inverting the word (w = h iff w^-1 = h^-1, with h running over all of
    H) all preserve the audit verdict.
    """
    out = set()
    for flips in iproduct((0, 1), repeat=nvars):
        flipped = tuple(c ^ flips[c >> 1] for c in codes)
        out.add(_rename(flipped))
        out.add(_rename(tuple(c ^ 1 for c in reversed(flipped))))
    return out


def _pretty(codes):
    """Compact text for a letter sequence: powers for runs, brackets for [a, b]."""
    letters = "xyzuvw"

    def letter(c):
        return letters[c >> 1] if (c >> 1) < len(letters) else f"x{c >> 1}"

    if len(codes) == 4:
        a, b, c, d = codes
        # a^-1 b^-1 a b with single letters a, b
        if c == a ^ 1 and d == b ^ 1 and (a >> 1) != (b >> 1):
            def arg(k):
                return letter(k) if k & 1 else letter(k) + "^-1"

            return f"[{arg(a)}, {arg(b)}]"
    parts = []
    i = 0
    while i < len(codes):
        j = i
        while j < len(codes) and codes[j] == codes[i]:
            j += 1
        run = j - i
        exp = -run if codes[i] & 1 else run
        parts.append(letter(codes[i]) if exp == 1 else f"{letter(codes[i])}^{exp}")
        i = j
    return " ".join(parts)


def enumerate_words(max_length, max_vars):
    """Audit words in order (variable count, length, lexicographic code order).

    Only cyclically reduced words are produced, one per equisolvability class
    (see ``_orbit``): the class is visited at its lexicographically least
    member and represented by its most compact printed form.
    Yields ``(codes, word_ast, text)``.
    """
    for nvars in range(1, max_vars + 1):
        for length in range(1, max_length + 1):
            for codes in iproduct(range(2 * nvars), repeat=length):
                if len({c >> 1 for c in codes}) != nvars:
                    continue
                if _rename(codes) != codes or not _cyclically_reduced(codes):
                    continue
                orbit = _orbit(codes, nvars)
                if min(orbit) != codes:
                    continue
                text = min((_pretty(m) for m in orbit), key=lambda s: (len(s), s))
                yield codes, parse_word(text), text


@dataclass
class VerbalAudit:
    closed: bool | None  # None: budget exhausted before a verdict
    word: object = None
    word_text: str | None = None
    target: object = None
    words_checked: int = 0
    max_length: int = 0
    max_vars: int = 0
    exhausted: bool = False

    def describe(self):
        if self.exhausted:
            return f"audit exhausted after {self.words_checked} words"
        if self.closed:
            return (
                f"no counterexample among {self.words_checked} words "
                f"(length <= {self.max_length}, <= {self.max_vars} variables)"
            )
        return f"{self.word_text} = {self.target} is solvable in G but not in H"


def is_verbally_closed(sub, max_length=4, max_vars=2, budget=DEFAULT_SOLVE_BUDGET):
    """Bounded verbal-closedness audit of ``sub`` in its parent group.

    Every audit word ``w`` and target ``h`` in H are tested: ``w = h`` solvable
    in G must imply solvable in H.  Returns the least counterexample (by word
    order, then element order) or ``closed=True`` within the bounds.
    """
    group = sub.parent
    h_group = sub.as_group()
    h_idx = sub.indices
    used = 0
    checked = 0
    for codes, word, text in enumerate_words(max_length, max_vars):
        k = len({c >> 1 for c in codes})
        cost = group.order**k + h_group.order**k
        if used + cost > budget:
            return VerbalAudit(None, words_checked=checked, max_length=max_length,
                               max_vars=max_vars, exhausted=True)
        used += cost
        checked += 1
        in_g = word_image_mask(word, group)
        in_h = word_image_mask(word, h_group)
        bad = in_g[h_idx] & ~in_h
        if bad.any():
            target = h_group.elements[int(np.flatnonzero(bad)[0])]
            return VerbalAudit(False, word, text, target, checked, max_length, max_vars)
    return VerbalAudit(True, words_checked=checked, max_length=max_length, max_vars=max_vars)


@dataclass
class AlgebraicAudit:
    closed: bool | None
    counterexample: object = None
    systems_checked: int = 0
    exhausted: object = None


def is_algebraically_closed_sample(sub, systems, budget=DEFAULT_SOLVE_BUDGET):
    """Check each system: solvable in G must imply solvable in H.

    Coefficients have to lie in H.  Returns the first violating system, or
    ``closed=None`` if some solve ran out of budget.
    """
    group = sub.parent
    h_group = sub.as_group()
    checked = 0
    for system in systems:
        if isinstance(system, str):
            system = EquationSystem.parse(system, h_group)
        for lhs, rhs in system.equations:
            for c in constants(lhs) + constants(rhs):
                try:
                    evaluate_indices(c, {}, h_group)
                except NotASubgroup:
                    raise NotASubgroup(f"coefficient {to_text(c)} is not in H") from None
        in_g = solve(system, group, budget)
        checked += 1
        if isinstance(in_g, Exhausted):
            return AlgebraicAudit(None, None, checked, system)
        if isinstance(in_g, NoSolution):
            continue
        in_h = solve(system, h_group, budget)
        if isinstance(in_h, Exhausted):
            return AlgebraicAudit(None, None, checked, system)
        if isinstance(in_h, NoSolution):
            return AlgebraicAudit(False, system, checked)
    return AlgebraicAudit(True, None, checked)


def constant(perm):
    """Mixed-word leaf for a permutation."""
    return Const(tuple(perm.cycles()))


def conjugation_systems(sub):
    """Systems ``x^-1 h x = h'`` for every pair h, h' in H conjugate in G."""
    from .groups import conjugacy_classes

    group = sub.parent
    h_group = sub.as_group()
    out = []
    for cls in conjugacy_classes(group):
        inside = [group.elements[i] for i in cls if i in sub]
        for a in inside:
            for b in inside:
                lhs = Prod((Pow(Var("x"), -1), constant(a), Var("x")))
                out.append(EquationSystem([(lhs, constant(b))], h_group))
    return out
