"""Group names for the command line.

Accepted forms: ``S<n>``, ``A<n>``, ``Z<n>``, ``V`` and
``gen:<degree>:<cycles>;<cycles>;...``, e.g. ``gen:4:(1 2 3 4);(1 3)``.
Parsing the same text twice returns the same group object, so repeated
factors such as ``S3 S3 S3`` share one group.
"""

from __future__ import annotations

import re
from functools import lru_cache

from .groups import (
    FiniteGroup,
    GroupError,
    alternating_group,
    cyclic_group,
    group_from_generators,
    klein_four,
    symmetric_group,
)
from .perm import PermError, parse_cycles

_SIMPLE = re.compile(r"^([SAZ])(\d+)$")
_GEN = re.compile(r"^gen:(\d+):(.*)$")
CYCLIC_MAX = 5040


class SpecError(GroupError):
    pass


def _canonical_gen(degree: int, parts: list[str]) -> tuple[str, list]:
    perms = [parse_cycles(p, degree) for p in parts]
    text = ";".join(str(p) for p in perms)
    return f"gen:{degree}:{text}", perms


def canonical_spec(text: str) -> str:
    """Normal form of a group name (whitespace and cycle layout normalized)."""
    s = text.strip()
    if s == "V":
        return s
    m = _SIMPLE.match(s)
    if m:
        return f"{m.group(1)}{int(m.group(2))}"
    m = _GEN.match(s)
    if m:
        degree = int(m.group(1))
        if degree < 1:
            raise SpecError("degree must be at least 1")
        parts = [p.strip() for p in m.group(2).split(";")] if m.group(2).strip() else []
        try:
            return _canonical_gen(degree, parts)[0]
        except PermError as exc:
            raise SpecError(f"bad generator in {text!r}: {exc}") from exc
    raise SpecError(f"unrecognized group {text!r}; expected S<n>, A<n>, Z<n>, V or gen:<degree>:<cycles;...>")


@lru_cache(maxsize=None)
def _build(spec: str) -> FiniteGroup:
    if spec == "V":
        return klein_four()
    m = _SIMPLE.match(spec)
    if m:
        kind, n = m.group(1), int(m.group(2))
        if kind == "Z":
            if not 1 <= n <= CYCLIC_MAX:
                raise SpecError(f"Z<n> needs 1 <= n <= {CYCLIC_MAX}")
            return cyclic_group(n)
        try:
            return symmetric_group(n) if kind == "S" else alternating_group(n)
        except GroupError as exc:
            raise SpecError(str(exc)) from exc
    m = _GEN.match(spec)
    degree = int(m.group(1))
    parts = m.group(2).split(";") if m.group(2) else []
    _, perms = _canonical_gen(degree, parts)
    G = group_from_generators(perms, degree, spec)
    G.spec = spec
    return G


def parse_group(text: str) -> FiniteGroup:
    return _build(canonical_spec(text))


def format_group(G: FiniteGroup) -> str:
    if G.spec is None:
        raise SpecError(f"{G.label} has no textual name")
    return G.spec
