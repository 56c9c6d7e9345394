"""Permutations on points ``1..n``.

Internally a permutation stores 0-based images. Composition is read left to
right: ``compose(a, b)`` applies ``a`` first, then ``b``. Every other module
inherits this convention.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import lcm


class PermError(ValueError):
    pass


@dataclass(frozen=True)
class Perm:
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.images)
        if n < 1:
            raise PermError("degree must be at least 1")
        if sorted(self.images) != list(range(n)):
            raise PermError(f"not a bijection on 0..{n - 1}: {self.images}")

    @classmethod
    def identity(cls, degree: int) -> Perm:
        return cls(tuple(range(degree)))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        """Image of a 1-based point."""
        return self.images[point - 1] + 1

    def __mul__(self, other: Perm) -> Perm:
        return compose(self, other)

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles as 1-based tuples, sorted by least moved point."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start] or self.images[start] == start:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x + 1)
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return lcm(1, *(len(c) for c in self.cycles()))

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def __repr__(self) -> str:
        return f"Perm({self}, degree={self.degree})"


def compose(a: Perm, b: Perm) -> Perm:
    """Apply ``a`` then ``b``."""
    if a.degree != b.degree:
        raise PermError(f"degree mismatch: {a.degree} vs {b.degree}")
    return Perm(tuple(b.images[x] for x in a.images))


def inverse(a: Perm) -> Perm:
    out = [0] * a.degree
    for i, x in enumerate(a.images):
        out[x] = i
    return Perm(tuple(out))


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int) -> Perm:
    """Parse disjoint cycle notation such as ``"(1 2 3)(4 5)"``.

    Points are 1-based and may be separated by spaces or commas. ``""`` and
    ``"()"`` both give the identity.
    """
    if degree < 1:
        raise PermError("degree must be at least 1")
    stripped = text.strip()
    if _CYCLE.sub("", stripped).strip():
        raise PermError(f"malformed cycle notation: {text!r}")
    images = list(range(degree))
    used: set[int] = set()
    for body in _CYCLE.findall(stripped):
        tokens = [t for t in re.split(r"[\s,]+", body.strip()) if t]
        try:
            points = [int(t) for t in tokens]
        except ValueError:
            raise PermError(f"non-integer point in {text!r}") from None
        for p in points:
            if not 1 <= p <= degree:
                raise PermError(f"point {p} out of range 1..{degree}")
            if p in used:
                raise PermError(f"point {p} repeated in {text!r}")
            used.add(p)
        for x, y in zip(points, points[1:] + points[:1]):
            images[x - 1] = y - 1
    return Perm(tuple(images))
