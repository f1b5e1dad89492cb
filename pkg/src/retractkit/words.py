"""Words in free groups, laws, and exhaustive law checking.

Grammar (whitespace is insignificant)::

    word     := term { ["*"] term }
    term     := factor ["^" exponent]
    factor   := variable | "(" word ")" | "[" word {"," word} "]"
    exponent := ["-"] digit {digit}
    variable := letter {letter | digit}
    law      := word "=" "1"

Mixed words (used for equations) additionally allow constants ``<(1 2)(3 4)>``
and the identity literal ``e``.  Commutators are left-normed,
``[a, b, c] = [[a, b], c]``, with ``[a, b] = a^-1 b^-1 a b`` unless the
opposite convention ``a b a^-1 b^-1`` is requested.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import prod

import numpy as np

from .errors import BudgetExceeded, NotASubgroup, WordSyntaxError
from .groups import conjugacy_classes
from .perm import Permutation, parse_cycles

STANDARD = "standard"
OPPOSITE = "opposite"
DEFAULT_LAW_BUDGET = 10**8
_CHUNK = 1 << 18


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    cycles: tuple  # disjoint cycles, 1-based; () is the identity


@dataclass(frozen=True)
class Ident:
    pass


@dataclass(frozen=True)
class Prod:
    children: tuple


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


@dataclass(frozen=True)
class Comm:
    children: tuple


@dataclass(frozen=True)
class Law:
    lhs: object
    name: str | None = None

    def __str__(self):
        return f"{to_text(self.lhs)} = 1"


@dataclass(frozen=True)
class LawSet:
    name: str
    laws: tuple = field(default_factory=tuple)


# -- parsing -------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<name>[A-Za-z][A-Za-z0-9]*)|(?P<int>\d+)|(?P<const><[^<>]*>)|(?P<op>[\^\-*()\[\],=;])"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise WordSyntaxError(f"unknown token {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(kind), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, mixed):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.mixed = mixed

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value or kind not in ("op",):
            found = val or "end of input"
            raise WordSyntaxError(f"expected {value!r}, found {found!r}", pos)

    def starts_term(self):
        kind, val, _ = self.peek()
        return kind in ("name", "const") or val in ("(", "[")

    def word(self):
        terms = [self.term()]
        while True:
            kind, val, _ = self.peek()
            if val == "*":
                self.take()
                terms.append(self.term())
            elif self.starts_term():
                terms.append(self.term())
            else:
                break
        return terms[0] if len(terms) == 1 else Prod(tuple(terms))

    def term(self):
        base = self.factor()
        if self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[1] == "-":
                self.take()
                sign = -1
            kind, val, pos = self.take()
            if kind != "int":
                raise WordSyntaxError("expected an integer exponent", pos)
            return Pow(base, sign * int(val))
        return base

    def factor(self):
        kind, val, pos = self.take()
        if kind == "name":
            if val == "e":
                if not self.mixed:
                    raise WordSyntaxError("'e' is reserved for mixed words", pos)
                return Ident()
            return Var(val)
        if kind == "const":
            if not self.mixed:
                raise WordSyntaxError("constants are only allowed in mixed words", pos)
            try:
                return Const(tuple(parse_cycles(val[1:-1])))
            except ValueError as exc:
                raise WordSyntaxError(f"bad constant {val!r}: {exc}", pos) from None
        if val == "(":
            inner = self.word()
            self.expect(")")
            return inner
        if val == "[":
            args = [self.word()]
            while self.peek()[1] == ",":
                self.take()
                args.append(self.word())
            self.expect("]")
            if len(args) < 2:
                raise WordSyntaxError("a commutator needs at least two arguments", pos)
            return Comm(tuple(args))
        found = val or "end of input"
        raise WordSyntaxError(f"unexpected {found!r}", pos)

    def finish(self):
        kind, val, pos = self.peek()
        if kind != "end":
            raise WordSyntaxError(f"unexpected {val!r}", pos)


def parse_word(text, mixed=False):
    p = _Parser(text, mixed)
    w = p.word()
    p.finish()
    return w


def parse_law(text, name=None):
    p = _Parser(text, mixed=False)
    w = p.word()
    p.expect("=")
    kind, val, pos = p.take()
    if kind != "int" or val != "1":
        raise WordSyntaxError("a law must have the form 'word = 1'", pos)
    p.finish()
    return Law(w, name)


def parse_equation(text):
    """``lhs = rhs`` over mixed words."""
    p = _Parser(text, mixed=True)
    lhs = p.word()
    p.expect("=")
    if p.peek()[0] == "int" and p.peek()[1] == "1":
        p.take()
        rhs = Ident()
    else:
        rhs = p.word()
    p.finish()
    return lhs, rhs


def parse_system(text):
    """Equations separated by ``;`` or newlines."""
    parts = [s for s in re.split(r"[;\n]", text) if s.strip()]
    if not parts:
        raise WordSyntaxError("empty system", 0)
    return [parse_equation(s) for s in parts]


# -- printing ------------------------------------------------------------


def to_text(w):
    if isinstance(w, Var):
        return w.name
    if isinstance(w, Ident):
        return "e"
    if isinstance(w, Const):
        if not w.cycles:
            return "e"
        return "<" + "".join("(" + " ".join(map(str, c)) + ")" for c in w.cycles) + ">"
    if isinstance(w, Prod):
        return " ".join(f"({to_text(c)})" if isinstance(c, Prod) else to_text(c) for c in w.children)
    if isinstance(w, Pow):
        base = to_text(w.base)
        if isinstance(w.base, (Prod, Pow)):
            base = f"({base})"
        return f"{base}^{w.exp}"
    if isinstance(w, Comm):
        return "[" + ", ".join(to_text(c) for c in w.children) + "]"
    raise TypeError(f"not a word: {w!r}")


# -- structural helpers ----------------------------------------------------


def variables(w):
    """Variable names in order of first appearance."""
    out = []

    def walk(node):
        if isinstance(node, Var):
            if node.name not in out:
                out.append(node.name)
        elif isinstance(node, (Prod, Comm)):
            for c in node.children:
                walk(c)
        elif isinstance(node, Pow):
            walk(node.base)

    walk(w)
    return out


def constants(w):
    out = []

    def walk(node):
        if isinstance(node, Const):
            out.append(node)
        elif isinstance(node, (Prod, Comm)):
            for c in node.children:
                walk(c)
        elif isinstance(node, Pow):
            walk(node.base)

    walk(w)
    return out


def substitute(w, mapping):
    """Replace each variable by a word; variables missing from ``mapping`` stay."""
    if isinstance(w, Var):
        return mapping.get(w.name, w)
    if isinstance(w, Prod):
        return Prod(tuple(substitute(c, mapping) for c in w.children))
    if isinstance(w, Comm):
        return Comm(tuple(substitute(c, mapping) for c in w.children))
    if isinstance(w, Pow):
        return Pow(substitute(w.base, mapping), w.exp)
    return w


def normalize_powers(w):
    """Fold ``(a^m)^n`` into ``a^(mn)`` and drop exponent 1."""
    if isinstance(w, Prod):
        return Prod(tuple(normalize_powers(c) for c in w.children))
    if isinstance(w, Comm):
        return Comm(tuple(normalize_powers(c) for c in w.children))
    if isinstance(w, Pow):
        base = normalize_powers(w.base)
        exp = w.exp
        while isinstance(base, Pow):
            exp *= base.exp
            base = base.base
        return base if exp == 1 else Pow(base, exp)
    return w


def inverse_word(w):
    return Pow(w, -1)


# -- evaluation ------------------------------------------------------------


def _const_index(group, node, cache):
    if node not in cache:
        try:
            perm = Permutation.from_cycle_list(list(node.cycles), group.degree)
        except ValueError as exc:
            raise NotASubgroup(f"constant {to_text(node)} does not fit degree {group.degree}: {exc}") from None
        if perm not in group:
            raise NotASubgroup(f"coefficient {perm} is not in {group}")
        cache[node] = group.index(perm)
    return cache[node]


def evaluate_indices(w, env, group, convention=STANDARD, _cache=None):
    """Evaluate on element indices; ``env`` maps names to ints or index arrays."""
    t = group.table
    inv = group.inverse
    cache = {} if _cache is None else _cache

    def ev(node):
        if isinstance(node, Var):
            try:
                return np.asarray(env[node.name])
            except KeyError:
                raise KeyError(f"no value for variable {node.name!r}") from None
        if isinstance(node, Ident):
            return np.asarray(0)
        if isinstance(node, Const):
            return np.asarray(_const_index(group, node, cache))
        if isinstance(node, Prod):
            acc = ev(node.children[0])
            for c in node.children[1:]:
                acc = t[acc, ev(c)]
            return acc
        if isinstance(node, Pow):
            return group.power(ev(node.base), node.exp)
        if isinstance(node, Comm):
            acc = ev(node.children[0])
            for c in node.children[1:]:
                b = ev(c)
                if convention == STANDARD:
                    acc = t[t[inv[acc], inv[b]], t[acc, b]]
                else:
                    acc = t[t[acc, b], t[inv[acc], inv[b]]]
            return acc
        raise TypeError(f"not a word: {node!r}")

    return ev(w)


def evaluate(w, assignment, group, convention=STANDARD):
    """Value of ``w`` at an assignment of permutations; returns a Permutation."""
    missing = [v for v in variables(w) if v not in assignment]
    if missing:
        raise KeyError(f"assignment does not cover {', '.join(missing)}")
    env = {k: group.index(v) if isinstance(v, Permutation) else int(v) for k, v in assignment.items()}
    return group.elements[int(evaluate_indices(w, env, group, convention))]


def iter_assignments(domains, chunk=_CHUNK, start=0):
    """Yield ``(offset, [index array per variable])`` in lexicographic order.

    The first variable is the most significant coordinate.
    """
    sizes = [len(d) for d in domains]
    total = prod(sizes)
    if not domains:
        if start == 0:
            yield 0, []
        return
    for lo in range(start, total, chunk):
        lin = np.arange(lo, min(total, lo + chunk), dtype=np.int64)
        coords = np.unravel_index(lin, sizes)
        yield lo, [np.asarray(d)[c] for d, c in zip(domains, coords)]


@dataclass
class LawCheck:
    law: Law
    holds: bool
    counterexample: dict | None
    value: Permutation | None
    assignments_total: int
    assignments_evaluated: int


def holds_law(group, law, budget=DEFAULT_LAW_BUDGET, reduce=True, convention=STANDARD):
    """Exhaustively check ``law`` in ``group``.

    With ``reduce`` the first variable only runs over conjugacy class
    representatives: conjugating a whole assignment conjugates the value, so
    failure is class invariant.  Representatives are class minima, so the
    first failure met in this order is already the least failing assignment
    in the full lexicographic order.
    """
    if isinstance(law, str):
        law = parse_law(law)
    names = variables(law.lhs)
    n = group.order
    total = n ** len(names)
    domains = [np.arange(n)] * len(names)
    if reduce and names:
        reps = np.array([c[0] for c in conjugacy_classes(group)], dtype=np.int64)
        domains = [reps] + domains[1:]
    work = prod(len(d) for d in domains)
    if work > budget:
        raise BudgetExceeded(
            f"law check needs {work} evaluations, budget is {budget}", budget=budget
        )
    done = 0
    for _, cols in iter_assignments(domains):
        env = dict(zip(names, cols))
        vals = np.broadcast_to(evaluate_indices(law.lhs, env, group, convention), cols[0].shape if cols else ())
        bad = np.flatnonzero(np.atleast_1d(vals) != 0)
        if bad.size:
            k = int(bad[0])
            witness = {v: group.elements[int(c[k])] for v, c in zip(names, cols)}
            done += k + 1
            return LawCheck(law, False, witness, group.elements[int(np.atleast_1d(vals)[k])], total, done)
        done += len(cols[0]) if cols else 1
    return LawCheck(law, True, None, None, total, done)


@dataclass
class LawSetCheck:
    law_set: LawSet
    holds: bool
    failing: LawCheck | None
    checks: list


def holds_law_set(group, law_set, budget=DEFAULT_LAW_BUDGET, convention=STANDARD):
    checks = []
    for law in law_set.laws:
        res = holds_law(group, law, budget=budget, convention=convention)
        checks.append(res)
        if not res.holds:
            return LawSetCheck(law_set, False, res, checks)
    return LawSetCheck(law_set, True, None, checks)


def _laws(name, *texts):
    return LawSet(name, tuple(parse_law(t, name=t) for t in texts))


def abelian_of_exponent(n):
    """Abelian groups of exponent dividing n."""
    return _laws(f"Ab{n}", "[x, y] = 1", f"x^{n} = 1")


DIHEDRAL_VARIETY = _laws("D", "x^4 = 1", "[x^2, y] = 1")
# Laws of S4 used in the Sylow 2-subgroup argument.  The second law carries
# an outer cube: without it the product fails in S4 (x = (3 4), y = (2 3)).
S4_LAWS = _laws(
    "S4",
    "x^12 = 1",
    "((x^3 y^3)^4 [x^3, y^6]^3)^3 = 1",
    "[[x, y]^3, y^3, y^2] = 1",
)
S4_SECOND_LAW_UNCUBED = parse_law("(x^3 y^3)^4 [x^3, y^6]^3 = 1")
# the cube substitution applied to the second S4 law
TWO_GROUP_DESCENT = _laws("D'", "x^4 = 1", "(x y)^4 [x, y^2]^3 = 1")
