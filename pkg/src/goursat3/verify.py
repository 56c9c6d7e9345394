"""Invariant suites run by ``goursat3 verify``.

Each suite returns a list of :class:`Check` records; a failing record carries
a counterexample in ``detail``. Products are enumerated at oracle scale: every
sorted triple of symmetric groups whose product fits the bound, plus the
Abelian cubes ``Z2^3``, ``Z3^3``, ``Z4^3``, ``V^3``, which are the only small
cases where ``delta = H``.
"""

from __future__ import annotations

import itertools
import json
from collections.abc import Callable
from dataclasses import asdict, dataclass
from math import factorial

from .counting import (
    count_2factor_sn,
    count_2inj_sn,
    count_3factor_closed_form,
    count_3factor_proper_form,
    count_3factor_sn,
)
from .goursat2 import iter_goursat_tuples, subgroup_to_tuple, tuple_to_subgroup
from .groups import FiniteGroup, Subgroup
from .groupspec import parse_group
from .lattice import all_subgroups
from .oracle import DEFAULT_BOUND, census, census2
from .product import (
    DirectProduct,
    InvariantViolation,
    analyze,
    is_subdirect,
    is_two_factor_injective,
    reduce_to_two_factor_injective,
)
from .structure3 import (
    build_structure_witness,
    composition_failures,
    degenerate_tuple_to_group,
    group_to_degenerate_tuple,
    group_to_nondiagonal_tuple,
    iter_degenerate_tuples,
    iter_nondiagonal_tuples,
    nondiagonal_tuple_to_group,
    structure_equation_failures,
)

SUITES = ("goursat2", "structure", "degenerate", "nondiagonal", "counting")
DEFAULT_PAIRS = (("S2", "S2"), ("S3", "S3"), ("S3", "S4"), ("S4", "S4"))
ABELIAN_CUBES = ("Z2", "Z3", "Z4", "V")

# l(n1, n2, n3) for n_i in 1..4, keyed by the sorted triple.
TABLE_ONE = {
    (1, 1, 1): 1, (1, 1, 2): 1, (1, 1, 3): 1, (1, 1, 4): 1,
    (1, 2, 2): 2, (1, 2, 3): 2, (1, 2, 4): 2, (1, 3, 3): 8, (1, 3, 4): 8, (1, 4, 4): 32,
    (2, 2, 2): 6, (2, 2, 3): 6, (2, 2, 4): 6, (2, 3, 3): 18, (2, 3, 4): 18, (2, 4, 4): 66,
    (3, 3, 3): 90, (3, 3, 4): 90, (3, 4, 4): 282, (4, 4, 4): 1386,
}


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    detail: str = ""


class _Recorder:
    def __init__(self, suite: str) -> None:
        self.suite = suite
        self.checks: list[Check] = []

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(self.suite, name, bool(passed), detail))

    def guard(self, name: str, fn: Callable[[], str | None]) -> None:
        """Record ``fn``; it returns a failure message or ``None``, or raises."""
        try:
            msg = fn()
        except (InvariantViolation, ValueError) as exc:
            msg = f"{type(exc).__name__}: {exc}"
        self.add(name, msg is None, msg or "")


_PRODUCTS: dict[tuple[str, ...], DirectProduct] = {}


def product_for(names: tuple[str, ...]) -> DirectProduct:
    if names not in _PRODUCTS:
        _PRODUCTS[names] = DirectProduct(tuple(parse_group(n) for n in names))
    return _PRODUCTS[names]


def symmetric_triples(bound: int) -> list[tuple[int, int, int]]:
    """Sorted triples ``n1 >= n2 >= n3`` with ``n1! n2! n3! <= bound``."""
    out = []
    for t in itertools.combinations_with_replacement(range(4, 0, -1), 3):
        if factorial(t[0]) * factorial(t[1]) * factorial(t[2]) <= bound:
            out.append(t)
    return out


def oracle_products(bound: int) -> list[tuple[str, str, str]]:
    out = [tuple(f"S{n}" for n in t) for t in symmetric_triples(bound)]
    for a in ABELIAN_CUBES:
        if parse_group(a).order ** 3 <= bound:
            out.append((a, a, a))
    return out


def injective_subdirect(dp: DirectProduct) -> list[Subgroup]:
    return [D for D in all_subgroups(dp.group, bound=max(dp.order, 1)) if is_subdirect(D) and is_two_factor_injective(D)]


def _label(names) -> str:
    return " x ".join(names)


# -- suites -------------------------------------------------------------------------


def suite_goursat2(pairs=DEFAULT_PAIRS) -> list[Check]:
    r = _Recorder("goursat2")
    for names in pairs:
        dp = product_for(tuple(names))
        G1, G2 = dp.factors
        lattice = all_subgroups(dp.group)
        seen: set[int] = set()
        count = 0
        collisions = 0
        for t in iter_goursat_tuples(G1, G2):
            b = tuple_to_subgroup(t, dp).bits
            collisions += b in seen
            seen.add(b)
            count += 1
        r.add(f"{_label(names)}: tuple count equals lattice size", count == len(lattice),
              f"{count} tuples, {len(lattice)} subgroups")
        r.add(f"{_label(names)}: distinct tuples give distinct subgroups", collisions == 0, f"{collisions} collisions")
        r.add(f"{_label(names)}: tuple subgroups are the lattice", seen == {S.bits for S in lattice})
        bad = [S for S in lattice if tuple_to_subgroup(subgroup_to_tuple(S), dp) != S]
        r.add(f"{_label(names)}: subgroup -> tuple -> subgroup", not bad,
              "" if not bad else f"fails on order {bad[0].order} subgroup {[dp.format(int(k)) for k in bad[0].indices]}")
        sub = sum(1 for S in lattice if is_subdirect(S))
        if all(n.startswith("S") for n in names):
            n1, n2 = (int(n[1:]) for n in names)
            want = count_2factor_sn(n1, n2).value
            r.add(f"{_label(names)}: subdirect count equals l({n1},{n2})", sub == want, f"{sub} vs {want}")
    return r.checks


def suite_structure(bound: int = DEFAULT_BOUND) -> list[Check]:
    r = _Recorder("structure")
    for names in oracle_products(bound):
        dp = product_for(names)
        subs = all_subgroups(dp.group, bound=max(dp.order, 1))
        subdirect = [D for D in subs if is_subdirect(D)]
        inj = [D for D in subdirect if is_two_factor_injective(D)]

        def reductions() -> str | None:
            for D in subdirect:
                red = reduce_to_two_factor_injective(D)
                analyze(red.delta)  # asserts [H_i, H_j] = 1 on the reduced product
            return None

        r.guard(f"{_label(names)}: reduction round trip on {len(subdirect)} subdirect products", reductions)
        failures = {"commute": [], "index": [], "equations": [], "composition": [], "witness": []}
        for D in inj:
            try:
                a = analyze(D)
            except InvariantViolation as exc:
                failures["commute"].append(str(exc))
                continue
            if not a.index_claim():
                failures["index"].append(_dump(dp, D))
            eq = structure_equation_failures(a)
            if eq:
                failures["equations"].append(eq[0])
            comp = composition_failures(a)
            if comp:
                failures["composition"].append(comp[0])
            try:
                build_structure_witness(a)
            except InvariantViolation as exc:
                failures["witness"].append(f"{exc} on {_dump(dp, D)}")
        for key, what in (("commute", "[H_i, H_j] = 1 and M_i Abelian"), ("index", "index claim"),
                          ("equations", "displayed equations"), ("composition", "canonical maps compose"),
                          ("witness", "witness isomorphic to H")):
            bad = failures[key]
            r.add(f"{_label(names)}: {what} on {len(inj)} 2-factor injective products", not bad,
                  bad[0] if bad else "")
    return r.checks


def _dump(dp: DirectProduct, D: Subgroup, limit: int = 12) -> str:
    els = [dp.format(int(k)) for k in D.indices[:limit]]
    more = "" if D.order <= limit else f" ... ({D.order} elements)"
    return "{" + ", ".join(els) + more + "}"


def _correspondence(suite: str, bound: int, select, to_tuple, to_group, enumerate_tuples) -> list[Check]:
    r = _Recorder(suite)
    for names in oracle_products(bound):
        dp = product_for(names)
        domain = []
        for D in injective_subdirect(dp):
            if select(analyze(D)):
                domain.append(D)

        def backward() -> str | None:
            for D in domain:
                if to_group(to_tuple(D), dp) != D:
                    return f"round trip fails on {_dump(dp, D)}"
            return None

        r.guard(f"{_label(names)}: group -> tuple -> group on {len(domain)} products", backward)

        def forward() -> str | None:
            tuples = list(enumerate_tuples(*dp.factors))
            images = [to_group(t, dp) for t in tuples]
            if len({D.bits for D in images}) != len(tuples):
                return "two tuples give the same group"
            if {D.bits for D in images} != {D.bits for D in domain}:
                return f"{len(tuples)} tuples but {len(domain)} groups in the domain"
            for t, D in zip(tuples, images):
                if to_tuple(D).key() != t.key():
                    return f"tuple -> group -> tuple fails on {_dump(dp, D)}"
            return None

        r.guard(f"{_label(names)}: tuples biject onto the domain", forward)
    return r.checks


def suite_degenerate(bound: int = DEFAULT_BOUND) -> list[Check]:
    return _correspondence("degenerate", bound, lambda a: a.degenerate, group_to_degenerate_tuple,
                           degenerate_tuple_to_group, iter_degenerate_tuples)


def suite_nondiagonal(bound: int = DEFAULT_BOUND) -> list[Check]:
    return _correspondence("nondiagonal", bound, lambda a: a.H == a.delta, group_to_nondiagonal_tuple,
                           nondiagonal_tuple_to_group, iter_nondiagonal_tuples)


def suite_counting(max_n: int = 4, bound: int = DEFAULT_BOUND) -> list[Check]:
    r = _Recorder("counting")
    for key, want in sorted(TABLE_ONE.items()):
        if max(key) > max_n:
            continue
        for t in sorted(set(itertools.permutations(key))):
            got = count_3factor_sn(*t).value
            r.add(f"l{t} = {want}", got == want, f"got {got}")
    top = max(max_n, 2)
    bad = [t for t in itertools.product(range(2, min(top, 8) + 1), repeat=3)
           if count_3factor_proper_form(*t) != count_3factor_sn(*t).value]
    r.add(f"both summation forms agree for degrees 2..{min(top, 8)}", not bad, f"first mismatch {bad[:1]}")
    bad = [t for t in itertools.product(range(2, top + 1), repeat=3)
           if max(t) >= 5 and count_3factor_closed_form(*t) != count_3factor_sn(*t).value]
    r.add(f"closed form agrees with the summation for degrees 2..{top}", not bad, f"first mismatch {bad[:1]}")
    for t in symmetric_triples(bound):
        names = tuple(f"S{n}" for n in t)
        rep = census(*product_for(names).factors, bound=bound, product=product_for(names))
        want = count_3factor_sn(*t).value
        r.add(f"oracle l{t} = {want}", rep.subdirect == want, f"oracle {rep.subdirect}")
        want = count_2inj_sn(*t).value
        r.add(f"oracle l2inj{t} = {want}", rep.two_factor_injective == want, f"oracle {rep.two_factor_injective}")
    for a, b in ((2, 2), (3, 3), (4, 3), (4, 4)):
        rep = census2(parse_group(f"S{a}"), parse_group(f"S{b}"), bound=max(bound, 576))
        want = count_2factor_sn(a, b).value
        r.add(f"oracle l({a},{b}) = {want}", rep.subdirect == want, f"oracle {rep.subdirect}")
    return r.checks


def run(suite: str, bound: int = DEFAULT_BOUND, pairs=DEFAULT_PAIRS, max_n: int = 4) -> list[Check]:
    if suite == "all":
        names = SUITES
    elif suite in SUITES:
        names = (suite,)
    else:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES + ('all',))}")
    out: list[Check] = []
    for name in names:
        if name == "goursat2":
            out += suite_goursat2(pairs)
        elif name == "structure":
            out += suite_structure(bound)
        elif name == "degenerate":
            out += suite_degenerate(bound)
        elif name == "nondiagonal":
            out += suite_nondiagonal(bound)
        else:
            out += suite_counting(max_n, bound)
    return out


def format_checks(checks: list[Check], as_json: bool = False) -> str:
    if as_json:
        return json.dumps({"passed": all(c.passed for c in checks), "checks": [asdict(c) for c in checks]},
                          indent=2) + "\n"
    lines = []
    for c in checks:
        tail = f"  [{c.detail}]" if c.detail and not c.passed else ""
        lines.append(f"{'PASS' if c.passed else 'FAIL'}  {c.suite}: {c.name}{tail}")
    lines.append(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed")
    return "\n".join(lines) + "\n"


def groups_of(names) -> tuple[FiniteGroup, ...]:
    return tuple(parse_group(n) for n in names)
