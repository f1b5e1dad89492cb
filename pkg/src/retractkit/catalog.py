"""Built-in groups, group-reference parsing and catalog files.

A group reference is either a builtin call such as ``S(4)``, ``Dih(4)``,
``direct(S4, C3)`` or ``power(S4, 2)``, the shorthand ``S4``/``A5``/``C3``/
``Dih4``, the names ``Q8``/``V4``, or a name defined in a catalog file.

Catalog file lines::

    name = <group reference>
    name = gens(<degree>): (1 2 3), (1 2)(3 4)
    # comment
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache

from .groups import FiniteGroup, direct_power, direct_product, generate
from .perm import Permutation

_SHORTHAND = re.compile(r"^(S|A|C|Dih)(\d+)$")
_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<int>\d+)|(?P<punct>[(),]))")


class CatalogError(ValueError):
    pass


def symmetric(n):
    if n < 1:
        raise CatalogError("S(n) needs n >= 1")
    gens = []
    if n >= 2:
        gens.append(Permutation.from_cycle_list([(1, 2)], n))
    if n >= 3:
        gens.append(Permutation.from_cycle_list([tuple(range(1, n + 1))], n))
    return generate(n, gens, name=f"S{n}")


def alternating(n):
    if n < 1:
        raise CatalogError("A(n) needs n >= 1")
    gens = [Permutation.from_cycle_list([(1, 2, k)], n) for k in range(3, n + 1)]
    return generate(n, gens, name=f"A{n}")


def cyclic(n):
    if n < 1:
        raise CatalogError("C(n) needs n >= 1")
    gens = [Permutation.from_cycle_list([tuple(range(1, n + 1))], n)] if n > 1 else []
    return generate(n, gens, name=f"C{n}")


def dihedral(n):
    """Dihedral group of order 2n (symmetries of an n-gon)."""
    if n < 1:
        raise CatalogError("Dih(n) needs n >= 1")
    if n == 1:
        return generate(2, [Permutation.from_cycle_list([(1, 2)], 2)], name="Dih1")
    if n == 2:
        g = klein_four()
        g.name = "Dih2"
        return g
    rot = Permutation.from_cycle_list([tuple(range(1, n + 1))], n)
    refl = Permutation([n + 1 - i for i in range(1, n + 1)])
    return generate(n, [rot, refl], name=f"Dih{n}")


def klein_four():
    gens = [Permutation.from_cycles("(1 2)(3 4)", 4), Permutation.from_cycles("(1 3)(2 4)", 4)]
    return generate(4, gens, name="V4")


def quaternion():
    """Q8 in its right regular representation on 8 points.

    Points 1..8 stand for 1, i, j, k, -1, -i, -j, -k.
    """
    units = {(0, 0): (1, 0), (1, 1): (-1, 0), (2, 2): (-1, 0), (3, 3): (-1, 0),
             (1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2),
             (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2)}

    def mul(a, b):
        sa, ua = (1, a) if a < 4 else (-1, a - 4)
        sb, ub = (1, b) if b < 4 else (-1, b - 4)
        if ua == 0:
            s, u = 1, ub
        elif ub == 0:
            s, u = 1, ua
        else:
            s, u = units[(ua, ub)]
        s *= sa * sb
        return u if s > 0 else u + 4

    gens = [Permutation([mul(x, g) for x in range(8)], zero_based=True) for g in (1, 2)]
    return generate(8, gens, name="Q8")


_BUILTINS = {"S": symmetric, "A": alternating, "C": cyclic, "Dih": dihedral}


def _tokenize(text):
    pos = 0
    tokens = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise CatalogError(f"unexpected character {text[pos]!r} in group reference {text!r}")
        pos = m.end()
        kind = m.lastgroup
        tokens.append((kind, m.group(kind)))
    return tokens


@dataclass
class Catalog:
    """Named group definitions, resolved lazily and cached by name."""

    definitions: dict = field(default_factory=dict)
    _groups: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_text(cls, text):
        cat = cls()
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise CatalogError(f"line {lineno}: expected 'name = definition'")
            name, definition = (s.strip() for s in line.split("=", 1))
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name):
                raise CatalogError(f"line {lineno}: bad name {name!r}")
            if name in cat.definitions:
                raise CatalogError(f"line {lineno}: duplicate name {name!r}")
            cat.definitions[name] = definition
        cat._check_acyclic()
        return cat

    @classmethod
    def from_file(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    def to_text(self):
        return "".join(f"{name} = {d}\n" for name, d in self.definitions.items())

    def _check_acyclic(self):
        state = {}

        def visit(name, stack):
            if state.get(name) == "done":
                return
            if state.get(name) == "active":
                raise CatalogError(f"cyclic definition: {' -> '.join(stack + [name])}")
            state[name] = "active"
            for dep in self._dependencies(self.definitions[name]):
                visit(dep, stack + [name])
            state[name] = "done"

        for name in self.definitions:
            visit(name, [])

    def _dependencies(self, definition):
        if definition.startswith("gens"):
            return []
        return [v for k, v in _tokenize(definition) if k == "name" and v in self.definitions]

    def resolve(self, ref):
        ref = ref.strip()
        if ref in self.definitions:
            if ref not in self._groups:
                group = self._build(self.definitions[ref])
                group.name = ref
                self._groups[ref] = group
            return self._groups[ref]
        return self._parse_ref(ref)

    def _build(self, definition):
        if definition.startswith("gens"):
            return parse_gens_definition(definition)
        return self._parse_ref(definition)

    def _parse_ref(self, text):
        tokens = _tokenize(text)
        group, pos = self._parse_expr(tokens, 0, text)
        if pos != len(tokens):
            raise CatalogError(f"trailing input in group reference {text!r}")
        return group

    def _parse_expr(self, tokens, pos, text):
        if pos >= len(tokens):
            raise CatalogError(f"incomplete group reference {text!r}")
        kind, val = tokens[pos]
        if kind != "name":
            raise CatalogError(f"expected a group name in {text!r}")
        pos += 1
        if pos < len(tokens) and tokens[pos] == ("punct", "("):
            args = []
            pos += 1
            while True:
                if pos < len(tokens) and tokens[pos][0] == "int":
                    args.append(int(tokens[pos][1]))
                    pos += 1
                else:
                    sub, pos = self._parse_expr(tokens, pos, text)
                    args.append(sub)
                if pos >= len(tokens):
                    raise CatalogError(f"unclosed parenthesis in {text!r}")
                if tokens[pos] == ("punct", ","):
                    pos += 1
                    continue
                if tokens[pos] == ("punct", ")"):
                    pos += 1
                    break
                raise CatalogError(f"unexpected token {tokens[pos][1]!r} in {text!r}")
            return self._call(val, args, text), pos
        return self._named(val, text), pos

    def _named(self, name, text):
        if name in self.definitions:
            return self.resolve(name)
        if name == "Q8":
            return builtin_group("Q8")
        if name == "V4":
            return builtin_group("V4")
        m = _SHORTHAND.match(name)
        if m:
            return builtin_group(f"{m.group(1)}({m.group(2)})")
        raise CatalogError(f"unknown group {name!r}")

    def _call(self, fname, args, text):
        if fname in _BUILTINS:
            if len(args) != 1 or not isinstance(args[0], int):
                raise CatalogError(f"{fname}(n) takes one integer in {text!r}")
            return builtin_group(f"{fname}({args[0]})")
        if fname == "direct":
            if len(args) < 2 or not all(isinstance(a, FiniteGroup) for a in args):
                raise CatalogError(f"direct() takes two or more groups in {text!r}")
            result = args[0]
            for a in args[1:]:
                result = direct_product(result, a)
            result.name = "direct(" + ",".join(a.name or "?" for a in args) + ")"
            return result
        if fname == "power":
            if len(args) != 2 or not isinstance(args[0], FiniteGroup) or not isinstance(args[1], int):
                raise CatalogError(f"power(G, k) expected in {text!r}")
            if args[1] < 1:
                raise CatalogError("power exponent must be positive")
            return direct_power(args[0], args[1])
        raise CatalogError(f"unknown group constructor {fname!r}")


@lru_cache(maxsize=None)
def builtin_group(spec):
    """Cached builtin groups, so repeated references share one object."""
    if spec == "Q8":
        return quaternion()
    if spec == "V4":
        return klein_four()
    m = re.fullmatch(r"(S|A|C|Dih)\((\d+)\)", spec)
    if not m:
        raise CatalogError(f"unknown builtin {spec!r}")
    return _BUILTINS[m.group(1)](int(m.group(2)))


def parse_gens_definition(text):
    """``gens(4): (1 2), (1 2 3 4)`` -> the generated group."""
    m = re.fullmatch(r"\s*gens\s*\(\s*(\d+)\s*\)\s*:(.*)", text, flags=re.S)
    if not m:
        raise CatalogError(f"bad generator definition {text!r}")
    degree = int(m.group(1))
    body = m.group(2).strip()
    gens = []
    if body:
        for part in re.split(r"\)\s*,\s*\(", body):
            part = part.strip()
            if not part.startswith("("):
                part = "(" + part
            if not part.endswith(")"):
                part = part + ")"
            gens.append(Permutation.from_cycles(part, degree))
    return generate(degree, gens)


DEFAULT_CATALOG = Catalog()


def resolve(ref, catalog=None):
    return (catalog or DEFAULT_CATALOG).resolve(ref)


def shipped_catalog():
    """The catalog bundled with the package (2-groups and audit test groups)."""
    from importlib.resources import files

    return Catalog.from_text(files("retractkit").joinpath("data/catalog.txt").read_text(encoding="utf-8"))
