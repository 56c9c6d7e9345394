import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from goursat3.counting import count_2factor_sn
from goursat3.goursat2 import (
    GoursatTuple,
    goursat_census,
    iter_goursat_tuples,
    subgroup_to_tuple,
    tuple_to_subgroup,
)
from goursat3.groups import GroupError, Homomorphism, element_index, quotient
from goursat3.isomorphism import find_isomorphisms
from goursat3.lattice import all_subgroups
from goursat3.verify import product_for


def _tuple(P1, P2, N1, N2, which=0):
    Q1, Q2 = quotient(P1, N1), quotient(P2, N2)
    return GoursatTuple(P1, P2, N1, N2, find_isomorphisms(Q1.group, Q2.group)[which])


def test_diagonal_and_full(S):
    dp = product_for(("S3", "S3"))
    G = S[3]
    one = G.trivial()
    identity = Homomorphism(quotient(G, one).group, quotient(G, one).group, np.arange(6))
    D = tuple_to_subgroup(GoursatTuple(G.whole(), G.whole(), one, one, identity), dp)
    assert D.order == 6 and all(dp.coords[k, 0] == dp.coords[k, 1] for k in D.indices)
    assert tuple_to_subgroup(_tuple(G.whole(), G.whole(), G.whole(), G.whole()), dp) == dp.whole()


def test_index_two_subdirect(S):
    dp = product_for(("S3", "S3"))
    G = S[3]
    A3 = G.generated([element_index(G, "(1 2 3)")])
    assert len(find_isomorphisms(quotient(G, A3).group, quotient(G, A3).group)) == 1
    D = tuple_to_subgroup(_tuple(G.whole(), G.whole(), A3, A3), dp)
    assert D.order == 18
    t = subgroup_to_tuple(D)
    assert (t.P1, t.P2, t.N1, t.N2) == (G.whole(), G.whole(), A3, A3)


def test_subgroup_to_tuple_examples(S):
    dp = product_for(("S3", "S3"))
    diag = [D for D in all_subgroups(dp.group) if D.order == 6 and all(dp.coords[k, 0] == dp.coords[k, 1] for k in D.indices)]
    t = subgroup_to_tuple(diag[0])
    assert t.N1.order == t.N2.order == 1 and (t.phi.table == np.arange(6)).all()
    dp2 = product_for(("S3", "S2"))
    G = S[3]
    A3 = G.generated([element_index(G, "(1 2 3)")])
    D = dp2.subproduct([A3, S[2].whole()])
    t = subgroup_to_tuple(D)
    assert (t.P1, t.N1, t.N2) == (A3, A3, S[2].whole()) and t.phi.domain.order == 1


def test_bad_tuple(S):
    G = S[3]
    T = G.generated([element_index(G, "(1 2)")])
    with pytest.raises(GroupError):
        _tuple(G.whole(), G.whole(), T, T).check()


@pytest.mark.parametrize("names, total, subdirect", [
    (("S2", "S2"), 5, 2), (("S3", "S3"), 60, 8), (("S3", "S4"), 372, 8), (("S4", "S4"), 2976, 32)])
def test_census_equals_lattice(names, total, subdirect):
    dp = product_for(names)
    count, subs = goursat_census(*dp.factors, product=dp)
    lattice = all_subgroups(dp.group)
    assert count == len(subs) == len(lattice) == total
    assert [D.bits for D in subs] == [D.bits for D in lattice]
    count, subs = goursat_census(*dp.factors, subdirect_only=True, product=dp)
    assert count == len(subs) == subdirect


@pytest.mark.parametrize("names", [("S4", "S4"), ("S4", "S3"), ("S4", "S2"), ("S3", "S3"), ("S3", "S2"), ("S2", "S2"),
                                   ("V", "Z4"), ("A4", "S3"), ("Z6", "S3")])
def test_round_trip_on_every_subgroup(names):
    dp = product_for(names)
    for D in all_subgroups(dp.group):
        assert tuple_to_subgroup(subgroup_to_tuple(D), dp) == D


@pytest.mark.parametrize("n1", [2, 3, 4, 5])
@pytest.mark.parametrize("n2", [2, 3, 4, 5])
def test_subdirect_tuple_count_matches_formula(S, n1, n2):
    count = sum(1 for _ in iter_goursat_tuples(S[n1], S[n2], subdirect_only=True))
    assert count == count_2factor_sn(n1, n2).value


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_random_tuple_round_trip(data):
    dp = product_for(("S3", "S4"))
    tuples = _all_tuples(dp)
    t = data.draw(st.sampled_from(tuples))
    back = subgroup_to_tuple(tuple_to_subgroup(t, dp))
    assert (back.P1, back.P2, back.N1, back.N2) == (t.P1, t.P2, t.N1, t.N2)
    assert np.array_equal(back.phi.table, t.phi.table)


_TUPLES = {}


def _all_tuples(dp):
    if id(dp) not in _TUPLES:
        _TUPLES[id(dp)] = list(iter_goursat_tuples(*dp.factors))
    return _TUPLES[id(dp)]
