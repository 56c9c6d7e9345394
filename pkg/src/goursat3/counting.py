"""Closed-form counts of subdirect products of symmetric groups.

``l2(n1, n2)`` counts subdirect products of ``S_n1 x S_n2``; ``l2inj(n1, n2, n3)``
counts the 2-factor injective ones in ``S_n1 x S_n2 x S_n3``; ``l3`` counts all
of them by summing ``l2inj`` over the quotients by normal subgroups. Every
quotient of a symmetric group is again symmetric, so only quotient degrees
matter. Values are Python ints (``(n!)**2`` passes 64 bits at ``n = 13``).
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import dataclass, field
from math import factorial

MAX_TABLE_N = 20

# Degree of S_n / N for each normal subgroup N of S_n, with a name for N.
def quotient_degrees(n: int) -> list[tuple[int, str]]:
    if n < 1:
        raise ValueError("degree must be at least 1")
    if n == 1:
        return [(1, "1")]
    if n == 2:
        return [(2, "1"), (1, "S2")]
    if n == 3:
        return [(3, "1"), (2, "A3"), (1, "S3")]
    if n == 4:
        return [(4, "1"), (3, "V"), (2, "A4"), (1, "S4")]
    return [(n, "1"), (2, f"A{n}"), (1, f"S{n}")]


@dataclass(frozen=True)
class CountResult:
    value: int
    breakdown: list[tuple[str, int]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.breakdown and sum(v for _, v in self.breakdown) != self.value:
            raise ValueError("breakdown does not sum to the value")

    def __int__(self) -> int:
        return self.value


def iso_count_sn(n: int) -> int:
    """Number of automorphisms of ``S_n``."""
    if n < 1:
        raise ValueError("degree must be at least 1")
    if n <= 2:
        return 1
    if n == 6:
        return 2 * factorial(6)
    return factorial(n)


def count_2factor_sn(n1: int, n2: int) -> CountResult:
    """``l(n1, n2)``: subdirect products of ``S_n1 x S_n2``."""
    if min(n1, n2) < 1:
        raise ValueError("degrees must be at least 1")
    a, b = max(n1, n2), min(n1, n2)
    if b == 1:
        return CountResult(1, [("trivial factor: the full product", 1)])
    if a != b:
        if (a, b) == (4, 3):
            return CountResult(8, [("full product", 1), ("via A4 and A3", 1), ("via V, 6 isomorphisms S3 -> S3", 6)])
        return CountResult(2, [("full product", 1), ("via alternating groups", 1)])
    if a == 2:
        return CountResult(2, [("full product", 1), ("diagonal", 1)])
    parts = [("full product", 1), ("via alternating groups", 1), (f"diagonals, i({a})", iso_count_sn(a))]
    if a == 4:
        parts.append(("via V, 6 isomorphisms S3 -> S3", 6))
    return CountResult(sum(v for _, v in parts), parts)


def count_2inj_sn(n1: int, n2: int, n3: int) -> CountResult:
    """``l2inj(n1, n2, n3)``: 2-factor injective subdirect products."""
    if min(n1, n2, n3) < 1:
        raise ValueError("degrees must be at least 1")
    a, b, c = sorted((n1, n2, n3), reverse=True)
    if c == 1:
        # Extension to trivial factors: psi-injectivity forces a graph of an isomorphism.
        if a == 1:
            return CountResult(1, [("[trivial-factor extension] all factors trivial", 1)])
        if b == 1:
            return CountResult(0, [])
        if a == b:
            return CountResult(iso_count_sn(a), [(f"[trivial-factor extension] graphs, i({a})", iso_count_sn(a))])
        return CountResult(0, [])
    f = factorial(a)
    if a == b == c:
        if a == 2:
            return CountResult(2, [("diagonal", 1), ("abc = 1 over S2", 1)])
        if a == 6:
            return CountResult((2 * f) ** 2, [("degenerate, i(6)^2", (2 * f) ** 2)])
        parts = [(f"degenerate, i({a})^2", f * f)]
        if a == 3:
            parts.append(("E = A3, semidirect family", 2 * f))
        elif a == 4:
            parts.append(("E = V, semidirect family", 6 * f))
        return CountResult(sum(v for _, v in parts), parts)
    if a == b and c == 2:
        return CountResult(iso_count_sn(a), [(f"E = A{a} x A{a} x 1, i({a})", iso_count_sn(a))])
    if (a, b, c) == (4, 4, 3):
        return CountResult(144, [("E = V x V x 1, i(4) * i(3)", 144)])
    return CountResult(0, [])


def count_3factor_sn(n1: int, n2: int, n3: int) -> CountResult:
    """``l(n1, n2, n3)`` by summing ``l2inj`` over quotients by normal subgroups."""
    parts = []
    for (q1, m1), (q2, m2), (q3, m3) in itertools.product(*(quotient_degrees(n) for n in (n1, n2, n3))):
        v = count_2inj_sn(q1, q2, q3).value
        if v:
            tag = " [trivial-factor extension]" if 1 in (q1, q2, q3) else ""
            parts.append((f"N = ({m1}, {m2}, {m3}): l2inj({q1},{q2},{q3}){tag}", v))
    return CountResult(sum(v for _, v in parts), parts)


def count_3factor_proper_form(n1: int, n2: int, n3: int) -> int:
    """Second form: pairwise counts minus 2, plus ``l2inj`` over proper normal subgroups.

    Only defined for degrees at least 2 (nontrivial factors).
    """
    if min(n1, n2, n3) < 2:
        raise ValueError("the pairwise form needs nontrivial factors")
    total = count_2factor_sn(n1, n2).value + count_2factor_sn(n2, n3).value + count_2factor_sn(n1, n3).value - 2
    proper = [[q for q, _ in quotient_degrees(n) if q > 1] for n in (n1, n2, n3)]
    total += sum(count_2inj_sn(*q).value for q in itertools.product(*proper))
    return total


def count_3factor_closed_form(n1: int, n2: int, n3: int) -> int:
    """The closed form for ``n1 >= n2 >= n3 >= 2`` with ``n1 >= 5`` (after sorting)."""
    a, b, c = sorted((n1, n2, n3), reverse=True)
    if c < 2 or a < 5:
        raise ValueError("closed form needs all degrees >= 2 and the largest >= 5")
    f = factorial(a)
    if a == b == c:
        return 2082246 if a == 6 else f * f + 6 * f + 6
    if b == c == 4:
        return 66
    if b in (3, 4) and c == 3:
        return 18
    if (a, b) == (6, 6) or (b, c) == (6, 6):
        return 2886
    if a == b or b == c:
        m1 = b
        if m1 != 6 and m1 >= 5:
            return 2 * factorial(m1) + 6
    return 6


# -- table emission --------------------------------------------------------------


def emit_table(max_n: int) -> list[tuple[tuple[int, int, int], CountResult]]:
    """``l(n1, n2, n3)`` for every ordered triple with entries in ``1..max_n``."""
    if not 1 <= max_n <= MAX_TABLE_N:
        raise ValueError(f"max_n must be in 1..{MAX_TABLE_N}")
    cache: dict[tuple[int, int, int], CountResult] = {}
    out = []
    for t in itertools.product(range(1, max_n + 1), repeat=3):
        key = tuple(sorted(t))
        if key not in cache:
            cache[key] = count_3factor_sn(*key)
        out.append((t, cache[key]))
    return out


def result_json(n: tuple[int, ...], r: CountResult) -> dict:
    return {
        "n": list(n),
        "count": str(r.value),
        "breakdown": [{"case": label, "count": str(v)} for label, v in r.breakdown],
    }


def format_table(rows, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps([result_json(n, r) for n, r in rows], indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n1", "n2", "n3", "count"])
        for n, r in rows:
            w.writerow([*n, r.value])
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    width = max(len(str(r.value)) for _, r in rows)
    lines = [f"{'n1':>3} {'n2':>3} {'n3':>3}  {'count':>{width}}"]
    lines += [f"{n[0]:>3} {n[1]:>3} {n[2]:>3}  {r.value:>{width}}" for n, r in rows]
    return "\n".join(lines) + "\n"
