import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from goursat3.groups import GroupError, cyclic_group, element_index, symmetric_group
from goursat3.lattice import all_subgroups
from goursat3.product import (
    DirectProduct,
    ProductError,
    analyze,
    canonical_isomorphism,
    coproject,
    is_subdirect,
    is_two_factor_injective,
    is_two_factor_surjective,
    product_of,
    project,
    projection_homomorphism,
    reduce_to_two_factor_injective,
    succ,
)
from goursat3.structure3 import build_abc_group, build_diagonal, build_interleaved, lift_through_cover
from goursat3.verify import product_for


def test_succ():
    assert [succ(i) for i in (1, 2, 3)] == [2, 3, 1]
    assert [succ(i, 2) for i in (1, 2, 3)] == [3, 1, 2]


def test_product_basics(S):
    dp = DirectProduct((S[3], S[2], S[2]))
    assert dp.order == 24
    x = dp.encode([3, 1, 0])
    assert tuple(dp.coords[x]) == (3, 1, 0)
    a, b = 5, 17
    assert dp.mul_many(np.array([a]), np.array([b]))[0] == dp.group.table[a, b]
    assert dp.closure([]).order == 1 and dp.closure(range(dp.order)).order == dp.order


def test_projections_of_examples(S, s3_cube):
    diag = build_diagonal(S[3], s3_cube)
    assert project(diag, 1).order == 6
    assert project(s3_cube.group.trivial(), 2).order == 1
    with pytest.raises(ProductError):
        project(diag, 4)
    abc = build_abc_group(cyclic_group(2))
    assert project(abc, 1).order == 2
    assert coproject(abc, 3).order == 4


def test_coproject_examples(S, s3_cube):
    diag = build_diagonal(S[3], s3_cube)
    d2 = coproject(diag, 1)
    assert d2.order == 6 and is_subdirect(d2)
    assert coproject(s3_cube.whole(), 2).order == 36


def test_predicates(S, s3_cube):
    diag = build_diagonal(S[3], s3_cube)
    assert (is_subdirect(diag), is_two_factor_injective(diag), is_two_factor_surjective(diag)) == (True, True, False)
    abc = build_abc_group(cyclic_group(2))
    assert is_subdirect(abc) and is_two_factor_injective(abc) and is_two_factor_surjective(abc)
    full = product_for(("S2", "S2", "S2")).whole()
    assert is_subdirect(full) and not is_two_factor_injective(full)


def test_analyze_examples(S, s3_cube):
    a = analyze(build_interleaved(*(cyclic_group(2),) * 3))
    assert [m.order for m in a.M] == [1, 1, 1]
    a = analyze(build_abc_group(cyclic_group(2)))
    assert a.M[0] == a.B[0] == a.C[0] == a.product.factors[0].whole()
    a = analyze(build_diagonal(S[3], s3_cube))
    assert a.H.order == 1 and all(x.order == 1 for x in a.B + a.C + a.M)
    with pytest.raises(ProductError):
        analyze(s3_cube.group.trivial())


def test_canonical_map_on_abc_is_identity():
    Z = cyclic_group(2)
    a = analyze(build_abc_group(Z))
    f = canonical_isomorphism(a, 1, 2, 3)
    assert [f(g) for g in range(Z.order)] == list(range(Z.order))


def test_canonical_map_on_abc_z3_composes():
    Z = cyclic_group(3)
    a = analyze(build_abc_group(Z))
    for i, j, k in itertools.permutations((1, 2, 3)):
        f = canonical_isomorphism(a, i, j, k)
        g = canonical_isomorphism(a, j, k, i)
        h = canonical_isomorphism(a, k, j, i)
        for m in a.M[j - 1].indices:
            assert g(f(int(m))) == h(int(m))
        assert f.restrict(a.M[j - 1]).image(a.M[j - 1]) == a.M[k - 1]


def test_canonical_map_reverses_products(S):
    # H_1 is a copy of S3 here, so phi^1_{2,3} as defined is an anti-homomorphism
    delta = build_interleaved(S[3], symmetric_group(1), symmetric_group(1))
    a = analyze(delta)
    f = canonical_isomorphism(a, 1, 2, 3)
    dom = f.domain.indices
    G2, G3 = f.source_group, f.target_group
    x, y = dom[:, None], dom[None, :]
    assert (f.table[G2.table[x, y]] == G3.table[f.table[y], f.table[x]]).all()
    with pytest.raises(GroupError):
        f.restrict(f.domain)
    iso = f.as_isomorphism()
    assert iso.is_injective() and iso.image() == f.codomain


def test_canonical_map_needs_injectivity(s3_cube):
    a = analyze(s3_cube.whole())
    with pytest.raises(ProductError):
        canonical_isomorphism(a, 1, 2, 3)


def test_reduction_examples(S, s3_cube):
    diag = build_diagonal(S[3], s3_cube)
    red = reduce_to_two_factor_injective(diag)
    assert all(n.order == 1 for n in red.N) and red.delta.order == 6
    full = product_for(("S2", "S2", "S2")).whole()
    red = reduce_to_two_factor_injective(full)
    assert [n.order for n in red.N] == [2, 2, 2] and red.delta.order == 1


def test_reduction_of_a_lift(S, s3_cube):
    cover = DirectProduct((S[3], S[3]))
    kappa = projection_homomorphism(cover, 1)
    lifted = lift_through_cover(build_diagonal(S[3], s3_cube), kappa)
    assert lifted.order == 36 and is_subdirect(lifted) and not is_two_factor_injective(lifted)
    red = reduce_to_two_factor_injective(lifted)
    assert red.N[0] == kappa.kernel() and red.N[1].order == red.N[2].order == 1
    assert red.delta.order == 6


def test_commutation_needs_injectivity(s3_cube):
    # in the full product H_1 and H_2 do not commute; the reduced product is fine
    a = analyze(s3_cube.whole())
    assert not s3_cube.commute(a.Hs[0].indices, a.Hs[1].indices)
    analyze(reduce_to_two_factor_injective(s3_cube.whole()).delta)


def _lattice(names):
    dp = product_for(names)
    return dp, all_subgroups(dp.group)


def test_invariants_on_s3_cube():
    dp, subs = _lattice(("S3", "S3", "S3"))
    sub = [D for D in subs if is_subdirect(D)]
    inj = [D for D in sub if is_two_factor_injective(D)]
    assert (len(subs), len(sub), len(inj)) == (904, 90, 48)
    for D in sub:
        red = reduce_to_two_factor_injective(D)
        a = analyze(red.delta)
        for i, j in itertools.combinations(range(3), 2):
            assert product_of(red.delta).commute(a.Hs[i].indices, a.Hs[j].indices)
    for D in inj:
        a = analyze(D)
        assert a.index_claim()
        assert len({m.order for m in a.M}) == 1 and all(m.is_abelian() for m in a.M)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([("S3", "S2", "S2"), ("Z2", "Z2", "Z2"), ("S3", "S3", "S2"), ("Z4", "Z2", "Z2")]), st.data())
def test_random_subdirect_products(names, data):
    dp, subs = _lattice(names)
    D = data.draw(st.sampled_from([D for D in subs if is_subdirect(D)]))
    red = reduce_to_two_factor_injective(D)
    assert is_two_factor_injective(red.delta)
    assert red.delta.order * np.prod([n.order for n in red.N]) == D.order
    if is_two_factor_injective(D):
        a = analyze(D)
        assert a.index_claim()
        for i, j, k in itertools.permutations((1, 2, 3)):
            f = canonical_isomorphism(a, i, j, k)
            assert f.as_isomorphism().image() == f.codomain
            assert f.restrict(a.M[j - 1]).image(a.M[j - 1]) == a.M[k - 1]


def test_element_lookup(S):
    dp = DirectProduct((S[3], S[3]))
    g = dp.encode([element_index(S[3], "(1 2)"), element_index(S[3], "(1 2 3)")])
    assert dp.format(g) == "((1 2), (1 2 3))"
