"""Permutations of {1..n}.

Products are read left to right: ``p * q`` applies ``p`` first, then ``q``.
Internally images are stored 0-based; everything user facing is 1-based.
"""

from __future__ import annotations

import re
from math import lcm

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Permutation:
    __slots__ = ("_img",)

    def __init__(self, images, *, zero_based=False):
        img = tuple(int(x) for x in images)
        if not zero_based:
            img = tuple(x - 1 for x in img)
        if sorted(img) != list(range(len(img))):
            raise ValueError(f"not a permutation: {images!r}")
        if not img:
            raise ValueError("degree must be positive")
        self._img = img

    @classmethod
    def _raw(cls, img):
        p = object.__new__(cls)
        p._img = img
        return p

    @classmethod
    def identity(cls, degree):
        return cls._raw(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, text, degree=None):
        """Parse disjoint cycle notation such as ``(1 2 3)(4 5)``; ``()`` is the identity."""
        return cls.from_cycle_list(parse_cycles(text), degree)

    @classmethod
    def from_cycle_list(cls, cycles, degree=None):
        points = [x for c in cycles for x in c]
        if len(points) != len(set(points)):
            raise ValueError(f"cycles are not disjoint: {cycles!r}")
        top = max(points, default=1)
        if degree is None:
            degree = top
        if top > degree:
            raise ValueError(f"point {top} exceeds degree {degree}")
        img = list(range(degree))
        for c in cycles:
            for a, b in zip(c, c[1:] + c[:1]):
                img[a - 1] = b - 1
        return cls._raw(tuple(img))

    @property
    def degree(self):
        return len(self._img)

    @property
    def images(self):
        return tuple(x + 1 for x in self._img)

    def __call__(self, point):
        return self._img[point - 1] + 1

    def __mul__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        g = other._img
        return Permutation._raw(tuple(g[i] for i in self._img))

    def inverse(self):
        inv = [0] * len(self._img)
        for i, x in enumerate(self._img):
            inv[x] = i
        return Permutation._raw(tuple(inv))

    __invert__ = inverse

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_identity(self):
        return all(i == x for i, x in enumerate(self._img))

    def cycles(self):
        """Nontrivial cycles, each starting at its least point, ordered by that point."""
        seen = set()
        out = []
        for start in range(len(self._img)):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            x = self._img[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self._img[x]
            if len(cyc) > 1:
                out.append(tuple(p + 1 for p in cyc))
        return out

    def order(self):
        return lcm(1, *(len(c) for c in self.cycles()))

    def padded(self, degree, shift=0):
        """Embed into a larger degree, moving points by ``shift`` and fixing the rest."""
        if degree < self.degree + shift:
            raise ValueError("target degree too small")
        img = list(range(degree))
        for i, x in enumerate(self._img):
            img[i + shift] = x + shift
        return Permutation._raw(tuple(img))

    def __eq__(self, other):
        return isinstance(other, Permutation) and self._img == other._img

    def __hash__(self):
        return hash(self._img)

    def __lt__(self, other):
        return self._img < other._img

    def __le__(self, other):
        return self._img <= other._img

    def __str__(self):
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def __repr__(self):
        return f"Permutation.from_cycles({str(self)!r}, {self.degree})"


def parse_cycles(text):
    """``"(1 2 3)(4 5)"`` -> ``[(1, 2, 3), (4, 5)]``. Commas inside cycles are tolerated."""
    stripped = text.strip()
    if not stripped:
        raise ValueError("empty cycle notation")
    pos = 0
    cycles = []
    for m in _CYCLE_RE.finditer(stripped):
        if stripped[pos:m.start()].strip():
            raise ValueError(f"bad cycle notation near {stripped[pos:]!r}")
        pos = m.end()
        body = m.group(1).replace(",", " ").split()
        if not body:
            continue
        try:
            pts = tuple(int(x) for x in body)
        except ValueError:
            raise ValueError(f"bad cycle {m.group(0)!r}") from None
        if any(p < 1 for p in pts):
            raise ValueError(f"points are 1-based: {m.group(0)!r}")
        if len(pts) > 1:
            cycles.append(pts)
    if stripped[pos:].strip():
        raise ValueError(f"bad cycle notation near {stripped[pos:]!r}")
    return cycles
