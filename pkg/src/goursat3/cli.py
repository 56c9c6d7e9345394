"""Command line interface: ``goursat3 <command> ...``.

Exit status is 0 on success, 1 when a verification fails and 2 on bad usage
(unknown group, bound exceeded, failed preconditions).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .counting import (
    MAX_TABLE_N,
    count_2factor_sn,
    count_2inj_sn,
    count_3factor_sn,
    emit_table,
    format_table,
    result_json,
)
from .groups import FiniteGroup, GroupError, Homomorphism, Subgroup, quotient
from .groupspec import parse_group
from .isomorphism import find_isomorphisms
from .lattice import normal_subgroups
from .oracle import DEFAULT_BOUND, TIERS, census, census2, targeted_semidirect_census
from .perm import PermError, parse_cycles
from .product import (
    DirectProduct,
    analyze,
    is_subdirect,
    is_two_factor_injective,
    is_two_factor_surjective,
    product_of,
)
from .structure3 import (
    build_abc_group,
    build_diagonal,
    build_interleaved,
    build_semidirect_example,
    extract_semidirect_data,
    lift_through_cover,
)
from .verify import SUITES, format_checks, run


class UsageError(Exception):
    pass


def _degree(text: str) -> int:
    s = text.strip()
    if s[:1] in "Ss" and s[1:].isdigit():
        s = s[1:]
    if not s.isdigit() or int(s) < 1:
        raise UsageError(f"expected a degree n >= 1 or S<n>, got {text!r}")
    return int(s)


def _emit(text: str) -> None:
    sys.stdout.write(text)


def _subgroup_from_cycles(G: FiniteGroup, gens: list[str]) -> Subgroup:
    if not hasattr(G.elements[0], "images"):
        raise UsageError(f"{G.label} is not a permutation group")
    degree = G.elements[0].degree
    idx = []
    for text in gens:
        p = parse_cycles(text, degree)
        if p not in G.index:
            raise UsageError(f"{text} is not an element of {G.label}")
        idx.append(G.index[p])
    return G.generated(idx)


def _bound(args) -> int:
    if getattr(args, "tier", None):
        return TIERS[args.tier]
    return args.bound


# -- count / table -----------------------------------------------------------------


def cmd_count(args) -> int:
    ns = [_degree(x) for x in args.degrees]
    if len(ns) == 2:
        if args.injective:
            raise UsageError("--injective needs three degrees")
        r = count_2factor_sn(*ns)
        name = f"l({ns[0]},{ns[1]})"
    elif len(ns) == 3:
        r = count_2inj_sn(*ns) if args.injective else count_3factor_sn(*ns)
        name = f"{'l2inj' if args.injective else 'l'}({','.join(map(str, ns))})"
    else:
        raise UsageError("count takes two or three degrees")
    if args.json:
        _emit(json.dumps(result_json(tuple(ns), r), indent=2) + "\n")
        return 0
    lines = [f"{name} = {r.value}"]
    lines += [f"  {v:>8}  {label}" for label, v in r.breakdown]
    _emit("\n".join(lines) + "\n")
    return 0


def cmd_table(args) -> int:
    if not 1 <= args.max_n <= MAX_TABLE_N:
        raise UsageError(f"--max-n must be in 1..{MAX_TABLE_N}")
    fmt = "json" if args.json else "csv" if args.csv else "text"
    _emit(format_table(emit_table(args.max_n), fmt))
    return 0


# -- census ------------------------------------------------------------------------


def cmd_census(args) -> int:
    groups = [parse_group(s) for s in args.groups]
    bound = _bound(args)
    if len(groups) == 3:
        rep = census(*groups, bound=bound, listing=args.list)
    elif len(groups) == 2:
        if args.list:
            raise UsageError("--list is available for three factors")
        rep = census2(*groups, bound=bound)
    else:
        raise UsageError("census takes two or three groups")
    if args.json:
        _emit(rep.to_json(with_listing=args.list))
        return 0
    lines = [f"product: {rep.product} (order {rep.order})", f"subgroups: {rep.total}", f"subdirect: {rep.subdirect}"]
    if rep.two_factor_injective is not None:
        lines += [f"2-factor injective: {rep.two_factor_injective}", f"degenerate: {rep.degenerate}"]
    for row in rep.listing:
        lines.append("{" + ", ".join(row) + "}")
    _emit("\n".join(lines) + "\n")
    return 0


# -- construct ---------------------------------------------------------------------


def _find_cover_map(cover: FiniteGroup, G: FiniteGroup) -> Homomorphism:
    """A surjection ``cover -> G``: the first normal subgroup with quotient isomorphic to ``G``."""
    for N in normal_subgroups(cover):
        if cover.order != N.order * G.order:
            continue
        Q = quotient(cover, N)
        isos = find_isomorphisms(Q.group, G, limit=1)
        if isos:
            return Q.projection.then(isos[0])
    raise UsageError(f"{cover.label} has no quotient isomorphic to {G.label}")


def _build_example(args) -> Subgroup:
    name = args.example
    params = args.params
    if name in ("diagonal", "abc"):
        if len(params) != 1:
            raise UsageError(f"construct {name} takes one group")
        G = parse_group(params[0])
        return build_diagonal(G) if name == "diagonal" else build_abc_group(G)
    if name == "interleaved":
        if len(params) != 3:
            raise UsageError("construct interleaved takes three groups")
        return build_interleaved(*(parse_group(p) for p in params))
    if name == "semidirect":
        if len(params) != 1 or not args.normal or not args.complement:
            raise UsageError("construct semidirect takes one group plus --normal and --complement generators")
        G = parse_group(params[0])
        return build_semidirect_example(G, _subgroup_from_cycles(G, args.normal),
                                        _subgroup_from_cycles(G, args.complement))
    if name == "lift":
        if len(params) != 1 or not args.cover:
            raise UsageError("construct lift takes one group and --cover G1,G2,...")
        G = parse_group(params[0])
        parts = [parse_group(s) for s in args.cover.split(",")]
        cover = parts[0] if len(parts) == 1 else DirectProduct(parts).group
        return lift_through_cover(build_diagonal(G), _find_cover_map(cover, G))
    raise UsageError(f"unknown example {name!r}")


def classify(delta: Subgroup) -> dict:
    sub = is_subdirect(delta)
    out = {
        "order": delta.order,
        "subdirect": sub,
        "two_factor_injective": is_two_factor_injective(delta),
        "two_factor_surjective": is_two_factor_surjective(delta),
    }
    if sub:
        a = analyze(delta)
        out["H_order"] = a.H.order
        out["M_orders"] = [m.order for m in a.M]
        out["degenerate"] = a.degenerate
        out["delta_equals_H"] = a.H == delta
    return out


def cmd_construct(args) -> int:
    delta = _build_example(args)
    dp = product_of(delta)
    info = classify(delta) if args.classify else None
    if args.json:
        doc = {"product": dp.group.label, "order": delta.order,
               "elements": [dp.format(int(k)) for k in delta.indices]}
        if info is not None:
            doc["classification"] = info
        _emit(json.dumps(doc, indent=2) + "\n")
        return 0
    lines = [f"product: {dp.group.label}", f"order: {delta.order}"]
    lines += [dp.format(int(k)) for k in delta.indices]
    if info is not None:
        lines += [f"{k}: {json.dumps(v)}" for k, v in info.items()]
    _emit("\n".join(lines) + "\n")
    return 0


# -- verify / extract --------------------------------------------------------------


def cmd_verify(args) -> int:
    pairs = [tuple(p.split(",")) for p in args.pairs] if args.pairs else None
    if pairs and any(len(p) != 2 for p in pairs):
        raise UsageError("--pairs takes entries like S3,S4")
    for p in pairs or []:
        for s in p:
            parse_group(s)
    kwargs = {"bound": _bound(args), "max_n": args.max_n}
    if pairs:
        kwargs["pairs"] = pairs
    checks = run(args.suite, **kwargs)
    _emit(format_checks(checks, as_json=args.json))
    return 0 if all(c.passed for c in checks) else 1


def _map_lines(G: FiniteGroup, f: Homomorphism) -> list[str]:
    return [f"{G.format(g)} -> {G.format(int(f.table[g]))}" for g in G.generators]


def cmd_extract(args) -> int:
    G = parse_group(args.group)
    E = _subgroup_from_cycles(G, args.normal)
    K = _subgroup_from_cycles(G, args.complement)
    deltas = targeted_semidirect_census(G, E, K) if args.all else [build_semidirect_example(G, E, K)]
    records = []
    for D in deltas:
        data = extract_semidirect_data(D, K)
        records.append({"order": D.order,
                        "kappa": _map_lines(G, data.kappa),
                        "iota": _map_lines(G, data.iota)})
    distinct = len({(tuple(r["kappa"]), tuple(r["iota"])) for r in records})
    if args.json:
        _emit(json.dumps({"group": G.label, "count": len(records), "distinct_pairs": distinct,
                          "pairs": records}, indent=2) + "\n")
        return 0
    lines = [f"group: {G.label}", f"products: {len(records)}", f"distinct (kappa, iota): {distinct}"]
    for i, r in enumerate(records, 1):
        lines.append(f"[{i}] order {r['order']}")
        lines += [f"  kappa: {x}" for x in r["kappa"]]
        lines += [f"  iota:  {x}" for x in r["iota"]]
    _emit("\n".join(lines) + "\n")
    return 0


# -- parser ------------------------------------------------------------------------


def _add_bound(p: argparse.ArgumentParser, default: int = DEFAULT_BOUND) -> None:
    p.add_argument("--bound", type=int, default=default, help=f"largest product order to enumerate (default {default})")
    p.add_argument("--tier", choices=sorted(TIERS), help="use a named bound instead of --bound")
    p.add_argument("--threads", type=int, default=1,
                   help="accepted for compatibility; computation is single-threaded and output does not depend on it")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="goursat3", description="Subdirect products of two and three finite groups.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="closed-form count of subdirect products of symmetric groups")
    p.add_argument("degrees", nargs="+", help="two or three degrees (n or S<n>)")
    p.add_argument("--injective", action="store_true", help="count only 2-factor injective products")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("table", help="l(n1, n2, n3) for all degrees up to --max-n")
    p.add_argument("--max-n", type=int, default=4)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", action="store_true")
    g.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("census", help="brute-force census of subgroups of a product")
    p.add_argument("groups", nargs="+", help="two or three group names")
    p.add_argument("--list", action="store_true", help="list the subdirect products")
    p.add_argument("--json", action="store_true")
    _add_bound(p)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("construct", help="build an example subdirect product")
    p.add_argument("example", choices=["diagonal", "abc", "semidirect", "interleaved", "lift"])
    p.add_argument("params", nargs="*", help="group names")
    p.add_argument("--normal", action="append", help="generator of the normal subgroup (semidirect), repeatable")
    p.add_argument("--complement", action="append", help="generator of the complement (semidirect), repeatable")
    p.add_argument("--cover", help="comma-separated factors of the covering group (lift)")
    p.add_argument("--classify", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="run an invariant suite")
    p.add_argument("suite", choices=list(SUITES) + ["all"])
    p.add_argument("--pairs", nargs="+", help="factor pairs for the goursat2 suite, e.g. S3,S3 S3,S4")
    p.add_argument("--max-n", type=int, default=4, help="largest degree for the counting suite")
    p.add_argument("--json", action="store_true")
    _add_bound(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("extract", help="the pair (kappa, iota) of semidirect-type products")
    p.add_argument("group")
    p.add_argument("--normal", action="append", required=True, help="generator of E, repeatable")
    p.add_argument("--complement", action="append", required=True, help="generator of K, repeatable")
    p.add_argument("--all", action="store_true", help="extract from every product of the family, not just the example")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_extract)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, GroupError, PermError) as exc:
        print(f"goursat3 {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
