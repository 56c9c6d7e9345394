import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from goursat3.groups import GroupError, Homomorphism, cyclic_group, element_index, klein_four, quotient, symmetric_group
from goursat3.isomorphism import are_isomorphic, automorphisms, find_isomorphisms
from goursat3.product import (
    DirectProduct,
    ProductError,
    analyze,
    canonical_isomorphism,
    is_subdirect,
    is_two_factor_injective,
    is_two_factor_surjective,
    product_of,
    projection_homomorphism,
    succ,
)
from goursat3.structure3 import (
    DegenerateTuple,
    NonDiagonalTuple,
    TupleConditionError,
    build_abc_group,
    build_diagonal,
    build_interleaved,
    build_semidirect_example,
    build_structure_witness,
    composition_failures,
    degenerate_tuple_to_group,
    extract_semidirect_data,
    group_to_degenerate_tuple,
    group_to_nondiagonal_tuple,
    iter_degenerate_tuples,
    iter_nondiagonal_tuples,
    lift_through_cover,
    nondiagonal_tuple_to_group,
    realize_semidirect_pair,
    reference_delta,
    semidirect_domain_failures,
    structure_equation_failures,
)
from goursat3.verify import injective_subdirect, product_for

S1 = symmetric_group(1)


def gen(G, *texts):
    return G.generated([element_index(G, t) for t in texts])


@pytest.fixture(scope="module")
def s3_semidirect(S):
    G = S[3]
    return G, gen(G, "(1 2 3)"), gen(G, "(1 2)")


@pytest.fixture(scope="module")
def s4_semidirect(S):
    G = S[4]
    return G, gen(G, "(1 2)(3 4)", "(1 3)(2 4)"), gen(G, "(1 2)", "(1 2 3)")


# -- constructions -------------------------------------------------------------------


@pytest.mark.parametrize("n, order", [(2, 2), (3, 6), (4, 24)])
def test_diagonal(S, n, order):
    D = build_diagonal(S[n])
    assert D.order == order and is_subdirect(D) and is_two_factor_injective(D)
    assert not is_two_factor_surjective(D) or n == 1


def test_abc_group():
    assert build_abc_group(cyclic_group(2)).order == 4
    D = build_abc_group(cyclic_group(3))
    assert D.order == 9 and is_subdirect(D) and is_two_factor_injective(D) and is_two_factor_surjective(D)
    Z3 = cyclic_group(3)
    assert are_isomorphic(D.as_group(), DirectProduct((Z3, Z3)).group)
    assert build_abc_group(klein_four()).order == 16


def test_abc_rejects_non_abelian(S):
    with pytest.raises(GroupError):
        build_abc_group(S[3])


def test_semidirect_examples(s3_semidirect, s4_semidirect):
    D = build_semidirect_example(*s3_semidirect)
    assert D.order == 18 and D.is_closed() and is_subdirect(D) and is_two_factor_injective(D)
    D = build_semidirect_example(*s4_semidirect)
    assert D.order == 96 and is_subdirect(D) and is_two_factor_injective(D)
    assert product_of(D).closure(D.indices) == D


def test_semidirect_with_trivial_normal_part_is_diagonal(S):
    G = S[3]
    dp = product_for(("S3", "S3", "S3"))
    assert build_semidirect_example(G, G.trivial(), G.whole(), dp) == build_diagonal(G, dp)


def test_semidirect_preconditions(S):
    G = S[3]
    with pytest.raises(GroupError):
        build_semidirect_example(G, gen(G, "(1 2)"), gen(G, "(1 2 3)"))  # not normal
    with pytest.raises(GroupError):
        build_semidirect_example(G, gen(G, "(1 2 3)"), gen(G, "(1 2 3)"))  # not a complement
    H = S[4]
    with pytest.raises(GroupError):
        build_semidirect_example(H, gen(H, "(1 2 3)", "(2 3 4)"), gen(H, "(1 2)"))  # A4 is not Abelian


def test_interleaved(S):
    Z2 = cyclic_group(2)
    D = build_interleaved(Z2, Z2, Z2)
    assert D.order == 8 and product_of(D).order == 64
    assert is_subdirect(D) and is_two_factor_injective(D)
    assert build_interleaved(S[3], S1, S1).order == 6
    a = analyze(build_interleaved(S[3], S[3], S[3]))
    assert a.delta.order == 216 and a.degenerate


def test_lift(S, s3_cube):
    diag = build_diagonal(S[3], s3_cube)
    ident = Homomorphism(S[3], S[3], np.arange(6))
    assert lift_through_cover(diag, ident).indices.tolist() == diag.indices.tolist()
    kappa = projection_homomorphism(DirectProduct((S[3], S[3])), 1)
    L = lift_through_cover(diag, kappa)
    assert L.order == 36 and is_subdirect(L) and not is_two_factor_injective(L)
    V = gen(S[4], "(1 2)(3 4)", "(1 3)(2 4)")
    Q = quotient(S[4], V)
    to_s3 = Q.projection.then(find_isomorphisms(Q.group, S[3], limit=1)[0])
    L = lift_through_cover(diag, to_s3)
    assert L.order == 24 and is_subdirect(L) and not is_two_factor_injective(L)


def test_lift_is_injective_exactly_for_injective_covers(S, s3_cube):
    diag = build_diagonal(S[3], s3_cube)
    for f in automorphisms(S[3]):
        assert is_two_factor_injective(lift_through_cover(diag, f))


def test_lift_rejects_non_surjective(S, s3_cube):
    diag = build_diagonal(S[3], s3_cube)
    with pytest.raises(GroupError):
        lift_through_cover(diag, Homomorphism(S[3], S[3], np.zeros(6, dtype=int)))


# -- structure witness and equations ---------------------------------------------------


def test_witness_of_diagonal(S):
    w = build_structure_witness(analyze(build_diagonal(S[3])))
    assert w.quotient.group.order == 1


def test_witness_of_abc():
    D = build_abc_group(cyclic_group(2))
    w = build_structure_witness(analyze(D))
    assert w.quotient.group.order == 4 and analyze(D).H == D


def test_witness_of_s3_semidirect(s3_semidirect):
    a = analyze(build_semidirect_example(*s3_semidirect))
    assert a.H.order == 9
    w = build_structure_witness(a)
    Q = w.quotient.group
    Z3 = cyclic_group(3)
    assert are_isomorphic(Q, DirectProduct((Z3, Z3)).group)
    assert w.M.order == 3 and w.kernel.order == 27
    assert w.ambient.order == w.kernel.order * 9


def test_witness_requires_injectivity(s3_cube):
    with pytest.raises(ProductError):
        build_structure_witness(analyze(s3_cube.whole()))


def test_equations_and_witness_on_small_cubes():
    for names in [("S3", "S3", "S3"), ("Z3", "Z3", "Z3"), ("Z4", "Z4", "Z4"), ("S3", "S3", "S2")]:
        for D in injective_subdirect(product_for(names)):
            a = analyze(D)
            assert structure_equation_failures(a) == []
            assert composition_failures(a) == []
            build_structure_witness(a)


# -- the Delta = H correspondence ----------------------------------------------------------


def test_nondiagonal_abc_over_z2():
    Z2 = cyclic_group(2)
    dp = product_for(("Z2", "Z2", "Z2"))
    tuples = list(iter_nondiagonal_tuples(*dp.factors))
    assert len(tuples) == 1
    assert nondiagonal_tuple_to_group(tuples[0], dp) == build_abc_group(dp.factors[0], dp)
    assert all(b == Z2.whole() or b.group is dp.factors[0] for b in tuples[0].B)


def test_nondiagonal_interleaved():
    Z2 = cyclic_group(2)
    D = build_interleaved(Z2, Z2, Z2)
    t = group_to_nondiagonal_tuple(D)
    dp = product_of(D)
    # B_i and C_i are the two evident factors of G_i
    for i in range(3):
        assert t.B[i].order == t.C[i].order == 2 and (t.B[i] & t.C[i]).order == 1
    assert nondiagonal_tuple_to_group(t, dp) == D


def test_nondiagonal_trivial():
    dp = DirectProduct((S1, S1, S1))
    tuples = list(iter_nondiagonal_tuples(S1, S1, S1))
    assert len(tuples) == 1 and nondiagonal_tuple_to_group(tuples[0], dp).order == 1


def test_nondiagonal_condition_failures():
    dp = product_for(("Z3", "Z3", "Z3"))
    t = group_to_nondiagonal_tuple(build_abc_group(dp.factors[0], dp))
    Z = dp.factors[0]
    # psi_1 of the abc group is inversion; the identity breaks the cycle condition
    ident = Homomorphism(t.psi[0].domain, Z, np.arange(3))
    bad = NonDiagonalTuple(t.groups, t.B, t.C, (ident, t.psi[1], t.psi[2]))
    with pytest.raises(TupleConditionError) as exc:
        bad.check()
    assert exc.value.condition == 6
    one = Z.trivial()
    with pytest.raises(TupleConditionError) as exc:
        NonDiagonalTuple(t.groups, (one,) + t.B[1:], (one,) + t.C[1:], t.psi).check()
    assert exc.value.condition == 2


def test_nondiagonal_rejects_wrong_domain(S, s3_cube):
    with pytest.raises(ProductError):
        group_to_nondiagonal_tuple(build_diagonal(S[3], s3_cube))


# -- the degenerate correspondence ---------------------------------------------------------


def _identity_on(Q):
    return Homomorphism(Q, Q, np.arange(Q.order))


def test_degenerate_diagonal(S, s3_cube):
    G = S[3]
    one = G.trivial()
    Q = quotient(G, one).group
    t = DegenerateTuple((G, G, G), (one,) * 3, (one,) * 3, (_identity_on(Q),) * 3)
    assert degenerate_tuple_to_group(t, s3_cube) == build_diagonal(G, s3_cube)
    back = group_to_degenerate_tuple(build_diagonal(G, s3_cube))
    assert back.key() == t.key()


def test_degenerate_interleaved():
    Z2 = cyclic_group(2)
    D = build_interleaved(Z2, Z2, Z2)
    t = group_to_degenerate_tuple(D)
    assert degenerate_tuple_to_group(t, product_of(D)) == D
    assert any(degenerate_tuple_to_group(u, product_of(D)) == D for u in iter_degenerate_tuples(*product_of(D).factors))


def test_degenerate_count_s2_cube():
    dp = product_for(("S2", "S2", "S2"))
    inj = injective_subdirect(dp)
    assert len(inj) == 2
    assert sum(analyze(D).degenerate for D in inj) == 1
    assert len(list(iter_degenerate_tuples(*dp.factors))) == 1


def test_degenerate_condition_failures(S):
    G = S[3]
    one = G.trivial()
    Q = quotient(G, one).group
    auts = [f for f in automorphisms(Q) if not (f.table == np.arange(6)).all()]
    t = DegenerateTuple((G, G, G), (one,) * 3, (one,) * 3, (_identity_on(Q), _identity_on(Q), auts[0]))
    with pytest.raises(TupleConditionError) as exc:
        t.check()
    assert exc.value.condition == 6
    A3 = gen(G, "(1 2 3)")
    t = DegenerateTuple((G, G, G), (A3, one, one), (A3, one, one), t.phi)
    with pytest.raises(TupleConditionError) as exc:
        t.check()
    assert exc.value.condition == 2


def test_degenerate_rejects_non_degenerate():
    with pytest.raises(ProductError):
        group_to_degenerate_tuple(build_abc_group(cyclic_group(3)))


@pytest.mark.parametrize("names", [("S3", "S3", "S3"), ("S3", "S3", "S2"), ("Z4", "Z4", "Z4"), ("Z3", "Z3", "Z3")])
def test_correspondences_are_bijections(names):
    dp = product_for(names)
    inj = injective_subdirect(dp)
    nd = {D.bits for D in inj if analyze(D).H == D}
    dg = {D.bits for D in inj if analyze(D).degenerate}
    nd_tuples = list(iter_nondiagonal_tuples(*dp.factors))
    dg_tuples = list(iter_degenerate_tuples(*dp.factors))
    assert len(nd_tuples) == len(nd) and {nondiagonal_tuple_to_group(t, dp).bits for t in nd_tuples} == nd
    assert len(dg_tuples) == len(dg) and {degenerate_tuple_to_group(t, dp).bits for t in dg_tuples} == dg
    for t in nd_tuples:
        assert group_to_nondiagonal_tuple(nondiagonal_tuple_to_group(t, dp)).key() == t.key()
    for t in dg_tuples:
        assert group_to_degenerate_tuple(degenerate_tuple_to_group(t, dp)).key() == t.key()


def test_tuples_do_not_separate_the_mixed_case():
    dp = product_for(("V", "V", "V"))
    groups: dict = {}
    for D in injective_subdirect(dp):
        a = analyze(D)
        key = (tuple(b.bits for b in a.B), tuple(c.bits for c in a.C),
               tuple(canonical_isomorphism(a, succ(i, 2), i, succ(i, 1)).pairing.tobytes() for i in (1, 2, 3)))
        groups.setdefault(key, []).append(a)
    clash = [v for v in groups.values() if len(v) > 1 and not v[0].degenerate]
    assert clash
    a, b = clash[0][:2]
    assert a.delta != b.delta and a.delta.order == 8 and a.H.order == 4
    assert all(m.order == 2 for m in a.M + b.M)


# -- semidirect injection --------------------------------------------------------------------


def test_extract_s3_example(s3_semidirect):
    G, E, K = s3_semidirect
    D = build_semidirect_example(G, E, K)
    data = extract_semidirect_data(D, K)
    t = element_index(G, "(1 2)")
    # kappa(b k) = b^-1 k, which is conjugation by (1 2)
    for g in range(G.order):
        assert data.kappa(g) == G.mul(G.mul(t, g), t)
    for b in E.indices:
        for k in K.indices:
            assert data.kappa(G.mul(int(b), int(k))) == G.mul(int(G.inv[b]), int(k))
    assert (data.iota.table == np.arange(6)).all()
    assert realize_semidirect_pair(data.kappa, data.iota, E, K, product_of(D)) == D


def test_reference_delta_is_in_the_domain(s4_semidirect):
    G, E, K = s4_semidirect
    for kappa in automorphisms(G)[:4]:
        ref = reference_delta(G, E, K, kappa)
        assert semidirect_domain_failures(ref, E) == [] and ref.order == 96


def test_extract_preconditions(S, s3_semidirect, s3_cube):
    G, E, K = s3_semidirect
    with pytest.raises(GroupError):
        extract_semidirect_data(s3_cube.whole(), K)
    assert semidirect_domain_failures(s3_cube.whole(), E) == ["not 2-factor injective"]
    D = build_diagonal(G, s3_cube)
    assert extract_semidirect_data(D, G.whole()).kappa.table.tolist() == list(range(6))


@pytest.mark.parametrize("which, expected", [("s3", 12), ("s4", 144)])
def test_semidirect_family_is_injective(which, expected, s3_semidirect, s4_semidirect):
    G, E, K = s3_semidirect if which == "s3" else s4_semidirect
    dp = product_for(("S3",) * 3 if which == "s3" else ("S4",) * 3)
    fixing = [f for f in automorphisms(G) if f.image(K) == K]
    pairs = {}
    for kappa in automorphisms(G):
        for iota in fixing:
            D = realize_semidirect_pair(kappa, iota, E, K, dp)
            data = extract_semidirect_data(D, K)
            assert data.kappa == kappa and data.iota == iota
            pairs[data.key()] = D.bits
    assert len(pairs) == len(set(pairs.values())) == expected


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["Z2", "Z3", "Z4", "V", "Z6"]))
def test_abc_is_nondiagonal(name):
    from goursat3.groupspec import parse_group

    A = parse_group(name)
    D = build_abc_group(A)
    a = analyze(D)
    assert D.order == A.order ** 2 and a.H == D and all(m.order == A.order for m in a.M)
    t = group_to_nondiagonal_tuple(D)
    assert nondiagonal_tuple_to_group(t, product_of(D)) == D


@settings(max_examples=25, deadline=None)
@given(st.lists(st.sampled_from(["S1", "Z2", "Z3", "S3"]), min_size=3, max_size=3))
def test_interleaved_properties(names):
    from goursat3.groupspec import parse_group

    Hs = [parse_group(n) for n in names]
    D = build_interleaved(*Hs)
    a = analyze(D)
    assert D.order == np.prod([H.order for H in Hs])
    assert is_two_factor_injective(D) and a.degenerate and a.H == D
    assert degenerate_tuple_to_group(group_to_degenerate_tuple(D), product_of(D)) == D
