import json

import numpy as np
import pytest

from goursat3.goursat2 import goursat_census
from goursat3.groups import GroupTooLarge, element_index
from goursat3.groupspec import parse_group
from goursat3.lattice import all_subgroups
from goursat3.oracle import DEFAULT_BOUND, TIERS, CensusReport, census, census2, targeted_semidirect_census
from goursat3.product import analyze, is_subdirect, is_two_factor_injective
from goursat3.structure3 import semidirect_domain_failures
from goursat3.verify import product_for


def gen(G, *texts):
    return G.generated([element_index(G, t) for t in texts])


@pytest.mark.parametrize("names, expected", [
    (("S2", "S2", "S2"), (16, 6, 2, 1)),
    (("S3", "S3", "S3"), (904, 90, 48, 36)),
    (("S3", "S2", "S2"), (None, 6, 0, 0)),
    (("S3", "S3", "S2"), (None, 18, 6, 6)),
])
def test_census_values(names, expected):
    dp = product_for(names)
    r = census(*dp.factors, product=dp)
    got = (r.total, r.subdirect, r.two_factor_injective, r.degenerate)
    assert got[1:] == expected[1:]
    if expected[0] is not None:
        assert r.total == expected[0]


def test_census_agrees_with_predicates():
    dp = product_for(("S3", "S3", "S2"))
    subs = all_subgroups(dp.group)
    r = census(*dp.factors, product=dp, listing=True)
    sd = [D for D in subs if is_subdirect(D)]
    inj = [D for D in sd if is_two_factor_injective(D)]
    assert r.total == len(subs) and r.subdirect == len(sd) == len(r.listing)
    assert r.two_factor_injective == len(inj)
    assert r.degenerate == sum(analyze(D).degenerate for D in inj)


def test_census_bound():
    S4 = parse_group("S4")
    with pytest.raises(GroupTooLarge):
        census(S4, S4, S4)
    assert TIERS["default"] == DEFAULT_BOUND == 1152


def test_report_nesting_and_json():
    with pytest.raises(AssertionError):
        CensusReport("x", 8, 4, 5)
    r = census(*product_for(("S2", "S2", "S2")).factors, listing=True)
    d = json.loads(r.to_json())
    assert d == {"product": r.product, "order": 8, "total": 16, "subdirect": 6,
                 "two_factor_injective": 2, "degenerate": 1}
    assert "seconds" not in d
    listed = json.loads(r.to_json(with_listing=True))["listing"]
    assert len(listed) == 6 and sorted(len(x) for x in listed) == [2, 4, 4, 4, 4, 8]


def test_census_listing_is_deterministic():
    dp = product_for(("S2", "S2", "S2"))
    a = census(*dp.factors, product=dp, listing=True).listing
    b = census(*dp.factors, product=dp, listing=True).listing
    assert a == b and a == sorted(a, key=lambda r: (len(r), r))


@pytest.mark.parametrize("names, total, subdirect", [
    (("S2", "S2"), 5, 2), (("S3", "S3"), 60, 8), (("S3", "S2"), 16, 2), (("S4", "S3"), 372, 8),
])
def test_census2_matches_goursat(names, total, subdirect):
    G1, G2 = (parse_group(n) for n in names)
    dp = product_for(names)
    r = census2(G1, G2, product=dp)
    assert (r.total, r.subdirect) == (total, subdirect)
    assert len(goursat_census(G1, G2, product=dp)[1]) == total
    assert len(goursat_census(G1, G2, subdirect_only=True, product=dp)[1]) == subdirect


def test_targeted_census_s3_matches_lattice():
    G = parse_group("S3")
    E, K = gen(G, "(1 2 3)"), gen(G, "(1 2)")
    dp = product_for(("S3", "S3", "S3"))
    found = targeted_semidirect_census(G, E, K, dp)
    assert len(found) == 12
    brute = [D for D in all_subgroups(dp.group)
             if is_subdirect(D) and is_two_factor_injective(D) and not semidirect_domain_failures(D, E)
             and analyze(D).E[0] == E]
    assert sorted(D.bits for D in brute) == sorted(D.bits for D in found)


def test_targeted_census_s4():
    G = parse_group("S4")
    E, K = gen(G, "(1 2)(3 4)", "(1 3)(2 4)"), gen(G, "(1 2)", "(1 2 3)")
    found = targeted_semidirect_census(G, E, K, product_for(("S4", "S4", "S4")))
    assert len(found) == 144
    assert all(D.order == 96 for D in found)


def test_targeted_census_preconditions():
    G = parse_group("S3")
    with pytest.raises(Exception):
        targeted_semidirect_census(G, gen(G, "(1 2)"), gen(G, "(1 2 3)"))
    with pytest.raises(Exception):
        targeted_semidirect_census(G, gen(G, "(1 2 3)"), gen(G, "(1 2 3)"))
