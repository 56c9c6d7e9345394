"""Subdirect products of three factors: example constructions, the structure
witness for 2-factor injective products, the two correspondence theorems
(``delta = H`` and degenerate), and the semidirect injection ``delta -> (kappa, iota)``.

Index arithmetic on {1, 2, 3} goes through :func:`goursat3.product.succ`.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroup, GroupError, Homomorphism, Quotient, Subgroup, quotient
from .isomorphism import automorphisms, find_isomorphisms, subgroup_isomorphisms
from .lattice import normal_subgroups
from .product import (
    CanonicalMap,
    DirectProduct,
    InvariantViolation,
    ProductError,
    SubdirectAnalysis,
    analyze,
    canonical_isomorphism,
    is_subdirect,
    is_two_factor_injective,
    product_of,
    project,
    succ,
)

I3 = (1, 2, 3)


class TupleConditionError(GroupError):
    """A correspondence tuple violates the numbered condition ``condition``."""

    def __init__(self, condition: int, message: str) -> None:
        super().__init__(f"condition {condition}: {message}")
        self.condition = condition


def _cube(G: FiniteGroup, product: DirectProduct | None) -> DirectProduct:
    dp = product or DirectProduct((G, G, G))
    if dp.factors != (G, G, G):
        raise ProductError("product is not G x G x G")
    return dp


def _from_coords(dp: DirectProduct, cols: list[np.ndarray]) -> Subgroup:
    return Subgroup.from_indices(dp.group, np.unique(dp.encode_many(np.stack(cols, axis=1))))


# -- example constructions ----------------------------------------------------


def build_diagonal(G: FiniteGroup, product: DirectProduct | None = None) -> Subgroup:
    """``{(g, g, g)}`` in ``G^3``."""
    dp = _cube(G, product)
    g = np.arange(G.order)
    return _from_coords(dp, [g, g, g])


def build_abc_group(A: FiniteGroup, product: DirectProduct | None = None) -> Subgroup:
    """``{(a, b, c) : abc = 1}`` in ``A^3`` for Abelian ``A``."""
    if not A.is_abelian():
        raise GroupError(f"{A.label} is not Abelian")
    dp = _cube(A, product)
    a, b = (x.ravel() for x in np.meshgrid(np.arange(A.order), np.arange(A.order), indexing="ij"))
    c = A.inv[A.table[a, b]]
    return _from_coords(dp, [a, b, c])


def build_semidirect_example(G: FiniteGroup, Hsub: Subgroup, Ksub: Subgroup,
                             product: DirectProduct | None = None) -> Subgroup:
    """``{(ak, bk, ck) : a, b, c in H, k in K, abc = 1}`` for ``G = H x| K`` with ``H`` Abelian."""
    if not Hsub.is_normal():
        raise GroupError("H is not normal in G")
    if not Hsub.is_abelian():
        raise GroupError("H is not Abelian")
    if (Hsub & Ksub).order != 1 or Hsub.order * Ksub.order != G.order:
        raise GroupError("K is not a complement of H")
    dp = _cube(G, product)
    t = G.table
    h, k = Hsub.indices, Ksub.indices
    a, b, kk = (x.ravel() for x in np.meshgrid(h, h, k, indexing="ij"))
    c = G.inv[t[a, b]]
    return _from_coords(dp, [t[a, kk], t[b, kk], t[c, kk]])


def build_interleaved(H1: FiniteGroup, H2: FiniteGroup, H3: FiniteGroup) -> Subgroup:
    """``{((h2, h3), (h1, h3), (h1, h2))}`` in ``(H2 x H3) x (H1 x H3) x (H1 x H2)``."""
    G1 = DirectProduct((H2, H3), label=f"({H2.label} x {H3.label})")
    G2 = DirectProduct((H1, H3), label=f"({H1.label} x {H3.label})")
    G3 = DirectProduct((H1, H2), label=f"({H1.label} x {H2.label})")
    dp = DirectProduct((G1.group, G2.group, G3.group))
    h1, h2, h3 = (x.ravel() for x in np.meshgrid(np.arange(H1.order), np.arange(H2.order),
                                                   np.arange(H3.order), indexing="ij"))
    cols = [G1.encode_many(np.stack([h2, h3], 1)), G2.encode_many(np.stack([h1, h3], 1)),
            G3.encode_many(np.stack([h1, h2], 1))]
    return _from_coords(dp, cols)


def lift_through_cover(delta: Subgroup, kappa: Homomorphism) -> Subgroup:
    """``{(g1, g2, g3) : (kappa(g1), g2, g3) in delta}`` for surjective ``kappa: G~ -> G1``."""
    dp = product_of(delta)
    if kappa.codomain is not dp.factors[0]:
        raise GroupError("kappa does not map onto the first factor")
    if kappa.domain.order != kappa.domain.group.order:
        raise GroupError("kappa must be defined on a whole group")
    if not kappa.is_surjective():
        raise GroupError("kappa is not surjective")
    Gt = kappa.domain.group
    big = DirectProduct((Gt, dp.factors[1], dp.factors[2]))
    c = big.coords
    codes = dp.encode_many(np.stack([kappa.table[c[:, 0]], c[:, 1], c[:, 2]], axis=1))
    return Subgroup.from_mask(big.group, delta.mask[codes])


# -- the structure witness -----------------------------------------------------


@dataclass
class StructureWitness:
    """The abstract description of ``H`` for a 2-factor injective product.

    ``H_groups[i]`` realizes ``H_{i+1}`` as ``pi_{i+2}(H_{i+1})``. ``M`` is ``M_1``,
    embedded centrally into each ``H_i`` by ``embeddings[i]``. The ambient group
    consists of triples of pairs ``((x1, y1), (x2, y2), (x3, y3))`` with
    ``x1, y3`` in ``H_2``, ``y1, x2`` in ``H_3``, ``y2, x3`` in ``H_1``; ``kernel`` is
    the image of ``M^3`` and ``natural_map`` sends ``h1 h2 h3`` to
    ``((h2, h3), (h3, h1), (h1, h2))``.
    """

    analysis: SubdirectAnalysis
    H_groups: tuple[FiniteGroup, FiniteGroup, FiniteGroup]
    M: FiniteGroup
    embeddings: tuple[np.ndarray, np.ndarray, np.ndarray]
    ambient: FiniteGroup
    kernel: Subgroup
    quotient: Quotient
    natural_map: Homomorphism
    isomorphism: Homomorphism


def _abstract_h(a: SubdirectAnalysis, i: int):
    """``H_i`` realized on ``pi_{i+1}(H_i)``; returns (group, position of each H_i member)."""
    dp = a.product
    j = succ(i, 1)
    S = a.B[j - 1]
    Hg = S.as_group()
    pos = np.full(dp.factors[j - 1].order, -1, dtype=np.int64)
    pos[S.indices] = np.arange(S.order)
    return Hg, pos[dp.coords[a.h(i).indices, j - 1]]


def _lift(a: SubdirectAnalysis, i: int, slot: int, values: np.ndarray) -> np.ndarray:
    """Members of ``H_i`` with the given values in coordinate ``slot``."""
    dp = a.product
    idx = a.h(i).indices
    look = np.full(dp.factors[slot - 1].order, -1, dtype=np.int64)
    look[dp.coords[idx, slot - 1]] = idx
    out = look[values]
    if (out < 0).any():
        raise InvariantViolation(f"value outside pi_{slot}(H_{i})")
    return out


def build_structure_witness(a: SubdirectAnalysis) -> StructureWitness:
    if not a.two_factor_injective:
        raise ProductError("the structure witness needs a 2-factor injective product")
    dp = a.product
    Hgs, hpos = zip(*(_abstract_h(a, i) for i in I3))
    # position in the abstract group of every member of H_i, keyed by product index
    apos = [np.full(dp.order, -1, dtype=np.int64) for _ in I3]
    for s in range(3):
        apos[s][a.Hs[s].indices] = hpos[s]
    M1 = a.M[0]
    G1 = dp.factors[0]
    m = M1.indices
    e2 = _lift(a, 2, 1, m)
    e3 = _lift(a, 3, 1, G1.inv[m])
    e1 = dp.group.inv[dp.mul_many(e2, e3)]
    if (dp.coords[e1, 0] != G1.identity).any():
        raise InvariantViolation("eps_2(m) eps_3(m) leaves H_1")
    emb = (apos[0][e1], apos[1][e2], apos[2][e3])
    for s, (Hg, ev) in enumerate(zip(Hgs, emb)):
        t = Hg.table
        if not (t[ev[:, None], np.arange(Hg.order)[None, :]] == t[np.arange(Hg.order)[None, :], ev[:, None]]).all():
            raise InvariantViolation(f"M is not central in H_{s + 1}")
    Mg = M1.as_group()

    # Ambient: component groups in order x1, y1, x2, y2, x3, y3.
    comp = (Hgs[1], Hgs[2], Hgs[2], Hgs[0], Hgs[0], Hgs[1])
    sizes = np.array([g.order for g in comp], dtype=np.int64)
    strides = np.ones(6, dtype=np.int64)
    for s in range(4, -1, -1):
        strides[s] = strides[s + 1] * sizes[s + 1]
    nm = Mg.order
    ma, mb = (x.ravel() for x in np.meshgrid(np.arange(nm), np.arange(nm), indexing="ij"))
    mc = Mg.inv[Mg.table[ma, mb]]
    H1g, H2g, H3g = Hgs
    x1, y1, y2, ia, ib = (x.ravel() for x in np.meshgrid(
        np.arange(H2g.order), np.arange(H3g.order), np.arange(H1g.order), np.arange(nm), np.arange(nm),
        indexing="ij"))
    ic = mc[ia * nm + ib]
    y3 = H2g.table[H2g.inv[emb[1][ia]], x1]
    x2 = H3g.table[emb[2][ib], y1]
    x3 = H1g.table[emb[0][ic], y2]
    cols = np.stack([x1, y1, x2, y2, x3, y3], axis=1)
    codes = np.unique(cols @ strides)
    n = codes.size
    if n != H1g.order * H2g.order * H3g.order * nm * nm:
        raise InvariantViolation("ambient group has the wrong size")
    cols = np.stack([(codes // strides[s]) % sizes[s] for s in range(6)], axis=1)

    def build_table(_G: FiniteGroup) -> np.ndarray:
        t = np.empty((n, n), dtype=np.int64)
        for lo in range(0, n, max(1, 1_000_000 // n)):
            rows = cols[lo : lo + max(1, 1_000_000 // n)]
            acc = np.zeros((len(rows), n), dtype=np.int64)
            for s, g in enumerate(comp):
                acc += g.table[rows[:, s][:, None], cols[:, s][None, :]].astype(np.int64) * strides[s]
            pos = np.searchsorted(codes, acc)
            pos = np.minimum(pos, n - 1)
            if not (codes[pos] == acc).all():
                raise InvariantViolation("ambient set is not closed under multiplication")
            t[lo : lo + len(rows)] = pos
        return t

    keys = [tuple(int(v) for v in row) for row in cols]
    ident = int(np.searchsorted(codes, int(np.array([g.identity for g in comp]) @ strides)))
    A = FiniteGroup(keys, label="ambient", table_builder=build_table, identity=ident)
    A.table  # materialize now so that closure is checked eagerly

    def encode(c: np.ndarray) -> np.ndarray:
        pos = np.searchsorted(codes, c @ strides)
        if (pos >= n).any() or not (codes[np.minimum(pos, n - 1)] == c @ strides).all():
            raise InvariantViolation("element outside the ambient group")
        return pos

    ka, kb, kc = (x.ravel() for x in np.meshgrid(np.arange(nm), np.arange(nm), np.arange(nm), indexing="ij"))
    kcols = np.stack([emb[1][ka], emb[2][ka], emb[2][kb], emb[0][kb], emb[0][kc], emb[1][kc]], axis=1)
    K = A.subgroup(encode(kcols))
    if K.order != nm ** 3 or not K.is_closed() or not K.is_normal():
        raise InvariantViolation("kernel is not a normal subgroup of order |M|^3")
    Q = quotient(A, K)

    # The natural map H -> A/K over every decomposition g = h1 h2 h3.
    Hidx = [a.Hs[s].indices for s in range(3)]
    g1, g2, g3 = (x.ravel() for x in np.meshgrid(*Hidx, indexing="ij"))
    g = dp.mul_many(dp.mul_many(g1, g2), g3)
    h1, h2, h3 = apos[0][g1], apos[1][g2], apos[2][g3]
    img = Q.projection.table[encode(np.stack([h2, h3, h3, h1, h1, h2], axis=1))]
    Hmask = a.H.mask
    if not Hmask[g].all():
        raise InvariantViolation("H1 H2 H3 leaves H")
    tab = np.full(dp.order, -1, dtype=np.int64)
    tab[g] = img
    if not (tab[g] == img).all():
        raise InvariantViolation("natural map depends on the decomposition")
    natural = Homomorphism(a.H, Q.group, tab, check=False)
    _verify_on_pairs(dp, natural)
    if not natural.is_bijective():
        raise InvariantViolation("natural map H -> ambient/kernel is not bijective")
    Hgroup = a.H.as_group()
    found = find_isomorphisms(Q.group, Hgroup, limit=1)
    if not found:
        raise InvariantViolation("no isomorphism between the witness quotient and H")
    return StructureWitness(a, tuple(Hgs), Mg, emb, A, K, Q, natural, found[0])


def _verify_on_pairs(dp: DirectProduct, f: Homomorphism) -> None:
    """Multiplicativity of ``f`` on its domain inside a product, without the product table."""
    idx = f.domain.indices
    x, y = idx[:, None], idx[None, :]
    lhs = f.table[dp.mul_many(x, y)]
    rhs = f.codomain.table[f.table[x], f.table[y]]
    if not (lhs == rhs).all():
        raise InvariantViolation("map is not multiplicative")


# -- the displayed equations of the structure theorem --------------------------


def _representations(G: FiniteGroup, C: Subgroup, B: Subgroup) -> tuple[np.ndarray, np.ndarray]:
    """For each ``g`` in ``CB``, one pair ``(c, b)`` with ``g = c b^-1`` (``-1`` elsewhere)."""
    c, b = (x.ravel() for x in np.meshgrid(C.indices, B.indices, indexing="ij"))
    g = G.table[c, G.inv[b]].astype(np.int64)
    rc = np.full(G.order, -1, dtype=np.int64)
    rb = np.full(G.order, -1, dtype=np.int64)
    rc[g[::-1]] = c[::-1]
    rb[g[::-1]] = b[::-1]
    return rc, rb


def structure_equation_failures(a: SubdirectAnalysis, all_representations: bool = True) -> list[str]:
    """Check both displayed equations for every element of ``H``.

    Each ``g_i`` is written as ``c_i b_i^-1`` with ``c_i`` in ``C_i``, ``b_i`` in
    ``B_i``; with ``all_representations`` every such choice is tried. The
    equations are evaluated with the canonical maps exactly as defined, in all
    three cyclic relabelings. Returns human-readable failures (empty = pass).
    """
    dp = a.product
    G = dp.factors
    rows = dp.coords[a.H.indices]
    reps = [_representations(G[s], a.C[s], a.B[s]) for s in range(3)]
    c0 = [reps[s][0][rows[:, s]] for s in range(3)]
    b0 = [reps[s][1][rows[:, s]] for s in range(3)]
    if any((x < 0).any() for x in c0):
        return ["some g_i is not in C_i B_i"]
    phi: dict[tuple[int, int, int], np.ndarray] = {}
    for p in itertools.permutations(I3):
        phi[p] = canonical_isomorphism(a, *p).table
    failures: list[str] = []
    shifts = list(itertools.product(*(a.M[s].indices for s in range(3)))) if all_representations else [
        tuple(G[s].identity for s in range(3))]
    for ms in shifts:
        c = [G[s].table[c0[s], ms[s]].astype(np.int64) for s in range(3)]
        b = [G[s].table[b0[s], ms[s]].astype(np.int64) for s in range(3)]
        for i in I3:
            j, k = succ(i, 2), succ(i, 1)
            x = phi[(i, j, k)][c[j - 1]]
            Gk = G[k - 1]
            bad = x < 0
            val = Gk.table[Gk.inv[b[k - 1]], np.where(bad, Gk.identity, x)]
            bad |= ~a.M[k - 1].mask[val]
            if bad.any():
                failures.append(f"two-factor equation fails for i={i} at {dp.format(int(a.H.indices[np.argmax(bad)]))}")
        for r in range(3):
            i1, i2, i3 = succ(1, r), succ(2, r), succ(3, r)
            T = G[i3 - 1].table
            inv3 = G[i3 - 1].inv
            p1, p2, p3 = phi[(i1, i2, i3)], phi[(i2, i1, i3)], phi[(i3, i1, i2)]
            u = p3[G[i1 - 1].inv[b[i1 - 1]]]
            w = G[i2 - 1].table[c[i2 - 1], np.maximum(u, 0)]
            parts = [p1[b[i2 - 1]], p2[c[i1 - 1]], p1[w]]
            bad = (u < 0) | np.any([q < 0 for q in parts], axis=0)
            q1, q2, q3 = (np.where(bad, G[i3 - 1].identity, q) for q in parts)
            val = T[T[T[T[c[i3 - 1], inv3[q1]], q2], inv3[b[i3 - 1]]], q3]
            bad |= val != G[i3 - 1].identity
            if bad.any():
                failures.append(f"abelian equation (rotation {r}) fails at {dp.format(int(a.H.indices[np.argmax(bad)]))}")
    return failures


def composition_failures(a: SubdirectAnalysis) -> list[str]:
    """Check ``phi^i_{j,k}`` then ``phi^j_{k,i}`` equals ``phi^k_{j,i}`` on ``M_j``, and
    ``phi^i_{j,k}`` inverts ``phi^i_{k,j}``, for all labelings."""
    out = []
    for i, j, k in itertools.permutations(I3):
        f = canonical_isomorphism(a, i, j, k).table
        g = canonical_isomorphism(a, j, k, i).table
        h = canonical_isomorphism(a, k, j, i).table
        back = canonical_isomorphism(a, i, k, j).table
        m = a.M[j - 1].indices
        if (f[m] < 0).any() or not a.M[k - 1].mask[f[m]].all():
            out.append(f"phi^{i}_{j},{k} does not map M_{j} onto M_{k}")
            continue
        if not (g[f[m]] == h[m]).all():
            out.append(f"composition fails for ({i},{j},{k})")
        dom = canonical_isomorphism(a, i, j, k).domain.indices
        if not (back[f[dom]] == dom).all():
            out.append(f"phi^{i}_{j},{k} and phi^{i}_{k},{j} are not inverse")
    return out


# -- correspondence for delta = H ----------------------------------------------


@dataclass(frozen=True)
class NonDiagonalTuple:
    """``(B_i, C_i, psi_i)`` with ``psi_i: B_i -> C_{i+1}`` an isomorphism.

    ``psi_i(b) = c`` means ``(b in slot i, c in slot i+1, 1 in slot i+2)`` lies in the
    group; the canonical map is ``phi_i(b) = psi_i(b)^-1``.
    """

    groups: tuple[FiniteGroup, FiniteGroup, FiniteGroup]
    B: tuple[Subgroup, Subgroup, Subgroup]
    C: tuple[Subgroup, Subgroup, Subgroup]
    psi: tuple[Homomorphism, Homomorphism, Homomorphism]

    def key(self) -> tuple:
        return (tuple(b.bits for b in self.B), tuple(c.bits for c in self.C),
                tuple(p.table.tobytes() for p in self.psi))

    def M(self, i: int) -> Subgroup:
        return self.B[i - 1] & self.C[i - 1]

    def check(self) -> None:
        for i in I3:
            B, C, G = self.B[i - 1], self.C[i - 1], self.groups[i - 1]
            if B.group is not G or C.group is not G or not (B.is_normal() and C.is_normal()):
                raise TupleConditionError(1, f"B_{i} or C_{i} is not normal in G_{i}")
        for i in I3:
            B, C = self.B[i - 1], self.C[i - 1]
            if B.order * C.order // (B & C).order != self.groups[i - 1].order:
                raise TupleConditionError(2, f"B_{i} C_{i} is not G_{i}")
        for i in I3:
            p = self.psi[i - 1]
            j = succ(i)
            if p.domain != self.B[i - 1] or p.codomain is not self.groups[j - 1]:
                raise TupleConditionError(3, f"psi_{i} is not defined on B_{i}")
            p.verify()
            if p.image() != self.C[j - 1] or not p.is_injective():
                raise TupleConditionError(3, f"psi_{i} is not an isomorphism B_{i} -> C_{j}")
        for i in I3:
            if not self.B[i - 1].commutes_with(self.C[i - 1]):
                raise TupleConditionError(4, f"[B_{i}, C_{i}] is not trivial")
        for i in I3:
            if self.psi[i - 1].image(self.M(i)) != self.M(succ(i)):
                raise TupleConditionError(5, f"psi_{i} does not map M_{i} onto M_{succ(i)}")
        m = self.M(1).indices
        G1 = self.groups[0]
        x = self.psi[2].table[self.psi[1].table[self.psi[0].table[m]]]
        if not (x == G1.inv[m]).all():
            raise TupleConditionError(6, "phi_3 phi_2 phi_1 is not the identity on M_1")


def nondiagonal_tuple_to_group(t: NonDiagonalTuple, product: DirectProduct | None = None,
                               seed: int = 0) -> Subgroup:
    """The group of a tuple, by the coset-and-equation membership test.

    Membership is evaluated with one representation ``g_i = c_i b_i^-1`` per
    coordinate and re-evaluated on randomly shifted representations, which must
    agree; the result is also compared with ``H_1 H_2 H_3`` built from the psi_i.
    """
    t.check()
    dp = product or DirectProduct(t.groups)
    if dp.factors != t.groups:
        raise ProductError("product factors do not match the tuple")
    G = t.groups
    reps = [_representations(G[s], t.C[s], t.B[s]) for s in range(3)]
    phi = []
    for s in range(3):
        tab = t.psi[s].table
        out = np.full(G[s].order, -1, dtype=np.int64)
        ok = tab >= 0
        out[ok] = G[(s + 1) % 3].inv[tab[ok]]
        phi.append(out)
    # phi_3^-1: C_1 -> B_3, c -> psi_3^-1(c^-1)
    phi3_inv = np.full(G[0].order, -1, dtype=np.int64)
    b3 = t.B[2].indices
    phi3_inv[phi[2][b3]] = b3
    Ms = [t.M(i) for i in I3]

    def member(c, b):
        ok = np.ones(len(c[0]), dtype=bool)
        for s in range(3):
            n = (s + 1) % 3
            x = phi[s][b[s]]
            Gn = G[n]
            ok &= Ms[n].mask[Gn.table[Gn.inv[x], c[n]]]
        T3, inv3 = G[2].table, G[2].inv
        u = phi[0][G[0].inv[b[0]]]
        v = phi[1][G[1].table[c[1], u]]
        y = phi3_inv[c[0]]
        val = T3[T3[T3[T3[c[2], inv3[phi[1][b[1]]]], y], inv3[b[2]]], v]
        return ok & (u >= 0) & (v >= 0) & (y >= 0) & (val == G[2].identity)

    cols = [dp.coords[:, s] for s in range(3)]
    c = [reps[s][0][cols[s]] for s in range(3)]
    b = [reps[s][1][cols[s]] for s in range(3)]
    mask = member(c, b)
    rng = np.random.default_rng(seed)
    for _ in range(3):
        ms = [Ms[s].indices[rng.integers(0, Ms[s].order, size=dp.order)] for s in range(3)]
        c2 = [G[s].table[c[s], ms[s]].astype(np.int64) for s in range(3)]
        b2 = [G[s].table[b[s], ms[s]].astype(np.int64) for s in range(3)]
        if not (member(c2, b2) == mask).all():
            raise InvariantViolation("membership depends on the chosen representation")
    delta = Subgroup.from_mask(dp.group, mask)

    def embed(cols3):
        return dp.encode_many(np.stack(cols3, axis=1))

    parts = []
    for s in range(3):
        bb = t.B[s].indices
        img = t.psi[s].table[bb]
        col = [np.full(len(bb), G[r].identity, dtype=np.int64) for r in range(3)]
        col[s] = bb
        col[(s + 1) % 3] = img
        parts.append(embed(col))
    prod = dp.product_set(*parts)
    if not np.array_equal(prod, delta.indices):
        raise InvariantViolation("membership test and H_1 H_2 H_3 disagree")
    return delta


def group_to_nondiagonal_tuple(delta: Subgroup) -> NonDiagonalTuple:
    a = analyze(delta)
    if not a.two_factor_injective:
        raise ProductError("delta is not 2-factor injective")
    if a.H != delta:
        raise ProductError("delta is not generated by H_1, H_2, H_3")
    psi = tuple(canonical_isomorphism(a, succ(i, 2), i, succ(i, 1)).as_isomorphism() for i in I3)
    t = NonDiagonalTuple(a.product.factors, a.B, a.C, psi)
    t.check()
    return t


def _bc_pairs(G: FiniteGroup, degenerate: bool) -> list[tuple[Subgroup, Subgroup]]:
    Ns = normal_subgroups(G)
    out = []
    for B, C in itertools.product(Ns, Ns):
        if not B.commutes_with(C):
            continue
        inter = (B & C).order
        if degenerate and inter != 1:
            continue
        if not degenerate and B.order * C.order // inter != G.order:
            continue
        out.append((B, C))
    return out


def iter_nondiagonal_tuples(G1: FiniteGroup, G2: FiniteGroup, G3: FiniteGroup) -> Iterator[NonDiagonalTuple]:
    groups = (G1, G2, G3)
    pairs = [_bc_pairs(G, False) for G in groups]
    for choice in itertools.product(*pairs):
        B = tuple(p[0] for p in choice)
        C = tuple(p[1] for p in choice)
        Ms = [b & c for b, c in zip(B, C)]
        if any(B[s].order != C[(s + 1) % 3].order for s in range(3)):
            continue
        if len({m.order for m in Ms}) != 1:
            continue
        options = []
        for s in range(3):
            isos = [f for f in subgroup_isomorphisms(B[s], C[(s + 1) % 3])
                    if f.image(Ms[s]) == Ms[(s + 1) % 3]]
            options.append(isos)
        m = Ms[0].indices
        for psi in itertools.product(*options):
            if (psi[2].table[psi[1].table[psi[0].table[m]]] == G1.inv[m]).all():
                yield NonDiagonalTuple(groups, B, C, psi)


# -- degenerate correspondence -------------------------------------------------


@dataclass(frozen=True)
class DegenerateTuple:
    """``(B_i, C_i, phi_i)`` with ``phi_i: G_i/C_i -> G_{i+1}/B_{i+1}`` on materialized quotients."""

    groups: tuple[FiniteGroup, FiniteGroup, FiniteGroup]
    B: tuple[Subgroup, Subgroup, Subgroup]
    C: tuple[Subgroup, Subgroup, Subgroup]
    phi: tuple[Homomorphism, Homomorphism, Homomorphism]

    def key(self) -> tuple:
        return (tuple(b.bits for b in self.B), tuple(c.bits for c in self.C),
                tuple(p.table.tobytes() for p in self.phi))

    def source(self, i: int) -> Quotient:
        return quotient(self.groups[i - 1], self.C[i - 1])

    def target(self, i: int) -> Quotient:
        return quotient(self.groups[succ(i) - 1], self.B[succ(i) - 1])

    def check(self) -> None:
        for i in I3:
            B, C, G = self.B[i - 1], self.C[i - 1], self.groups[i - 1]
            if B.group is not G or C.group is not G or not (B.is_normal() and C.is_normal()):
                raise TupleConditionError(1, f"B_{i} or C_{i} is not normal in G_{i}")
        for i in I3:
            if (self.B[i - 1] & self.C[i - 1]).order != 1:
                raise TupleConditionError(2, f"B_{i} and C_{i} intersect nontrivially")
        for i in I3:
            if not self.B[i - 1].commutes_with(self.C[i - 1]):
                raise TupleConditionError(3, f"[B_{i}, C_{i}] is not trivial")
        for i in I3:
            p = self.phi[i - 1]
            if p.domain.group is not self.source(i).group or p.codomain is not self.target(i).group:
                raise TupleConditionError(4, f"phi_{i} is not a map G_{i}/C_{i} -> G_{succ(i)}/B_{succ(i)}")
            p.verify()
            if not p.is_bijective():
                raise TupleConditionError(4, f"phi_{i} is not bijective")
        for i in I3:
            j = succ(i)
            src, dst = self.source(i), self.target(i)
            bc = src.projection.image(self.B[i - 1])
            cb = dst.projection.image(self.C[j - 1])
            if self.phi[i - 1].image(bc) != cb:
                raise TupleConditionError(5, f"phi_{i} does not map B_{i}C_{i} onto C_{j}B_{j}")
        if not (self._cycle() == np.arange(len(self._cycle()))).all():
            raise TupleConditionError(6, "phi_3 phi_2 phi_1 does not fix every coset of B_1 C_1")

    def _cycle(self) -> np.ndarray:
        """The triple composition on ``G_1 / B_1 C_1``, as a permutation of coset ids."""
        G1 = self.groups[0]
        bc = [self.B[s].join(self.C[s]) for s in range(3)]
        Wid = quotient(G1, bc[0]).projection.table
        reps = quotient(G1, bc[0]).reps
        cur = reps.copy()
        for s in range(3):
            i = s + 1
            q = self.source(i).projection.table[cur]
            cur = self.target(i).reps[self.phi[s].table[q]]
        return Wid[cur]


def degenerate_tuple_to_group(t: DegenerateTuple, product: DirectProduct | None = None) -> Subgroup:
    t.check()
    dp = product or DirectProduct(t.groups)
    if dp.factors != t.groups:
        raise ProductError("product factors do not match the tuple")
    mask = np.ones(dp.order, dtype=bool)
    for i in I3:
        j = succ(i)
        qc = t.source(i).projection.table[dp.coords[:, i - 1]]
        qb = t.target(i).projection.table[dp.coords[:, j - 1]]
        mask &= t.phi[i - 1].table[qc] == qb
    return Subgroup.from_mask(dp.group, mask)


def group_to_degenerate_tuple(delta: Subgroup) -> DegenerateTuple:
    a = analyze(delta)
    if not a.two_factor_injective:
        raise ProductError("delta is not 2-factor injective")
    if not a.degenerate:
        raise ProductError("delta is not degenerate")
    dp = a.product
    rows = dp.coords[delta.indices]
    phis = []
    for i in I3:
        j = succ(i)
        src = quotient(dp.factors[i - 1], a.C[i - 1])
        dst = quotient(dp.factors[j - 1], a.B[j - 1])
        qc = src.projection.table[rows[:, i - 1]]
        qb = dst.projection.table[rows[:, j - 1]]
        tab = np.full(src.group.order, -1, dtype=np.int64)
        tab[qc] = qb
        if not (tab[qc] == qb).all():
            raise InvariantViolation(f"phi_{i} is not well defined")
        phis.append(Homomorphism(src.group, dst.group, tab, check=True))
    t = DegenerateTuple(dp.factors, a.B, a.C, tuple(phis))
    t.check()
    return t


def iter_degenerate_tuples(G1: FiniteGroup, G2: FiniteGroup, G3: FiniteGroup) -> Iterator[DegenerateTuple]:
    groups = (G1, G2, G3)
    pairs = [_bc_pairs(G, True) for G in groups]
    for choice in itertools.product(*pairs):
        B = tuple(p[0] for p in choice)
        C = tuple(p[1] for p in choice)
        if any(groups[s].order // C[s].order != groups[(s + 1) % 3].order // B[(s + 1) % 3].order
               for s in range(3)):
            continue
        options = []
        for s in range(3):
            i, j = s + 1, succ(s + 1)
            src = quotient(groups[s], C[s])
            dst = quotient(groups[j - 1], B[j - 1])
            bc = src.projection.image(B[s])
            cb = dst.projection.image(C[j - 1])
            options.append([f for f in find_isomorphisms(src.group, dst.group) if f.image(bc) == cb])
        for phi in itertools.product(*options):
            t = DegenerateTuple(groups, B, C, phi)
            c = t._cycle()
            if (c == np.arange(len(c))).all():
                yield t


# -- the semidirect injection --------------------------------------------------


@dataclass(frozen=True)
class SemidirectData:
    kappa: Homomorphism  # G2 -> G3
    iota: Homomorphism  # automorphism of G1 fixing K setwise

    def key(self) -> tuple[bytes, bytes]:
        return (self.kappa.table.tobytes(), self.iota.table.tobytes())


def _check_complement(G: FiniteGroup, E: Subgroup, K: Subgroup) -> None:
    if not E.is_normal():
        raise GroupError("E is not normal in G")
    if (E & K).order != 1 or E.order * K.order != G.order:
        raise GroupError("K is not a complement of E")


def _k_of(G: FiniteGroup, E: Subgroup, K: Subgroup) -> np.ndarray:
    """For each ``g``, the unique element of ``K`` in the coset ``gE``."""
    t = G.table
    k, e = (x.ravel() for x in np.meshgrid(K.indices, E.indices, indexing="ij"))
    out = np.full(G.order, -1, dtype=np.int64)
    out[t[k, e]] = k
    return out


def reference_delta(G: FiniteGroup, E: Subgroup, K: Subgroup, kappa: Homomorphism,
                    product: DirectProduct | None = None) -> Subgroup:
    """``<(k(g), g, kappa(g)), (a, a^-1, 1) : g in G, a in E>`` with ``k(g)`` the element of ``K`` in ``gE``."""
    _check_complement(G, E, K)
    dp = _cube(G, product)
    g = np.arange(G.order)
    gens = [dp.encode_many(np.stack([_k_of(G, E, K), g, kappa.table[g]], axis=1))]
    a = E.indices
    gens.append(dp.encode_many(np.stack([a, G.inv[a], np.full(len(a), G.identity)], axis=1)))
    return dp.closure(np.concatenate(gens))


def realize_semidirect_pair(kappa: Homomorphism, iota: Homomorphism, E: Subgroup, K: Subgroup,
                            product: DirectProduct | None = None) -> Subgroup:
    """``{(iota(g1), g2, g3) : (g1, g2, g3) in reference_delta(kappa)}``."""
    G = E.group
    ref = reference_delta(G, E, K, kappa, product)
    dp = product_of(ref)
    rows = dp.coords[ref.indices]
    return _from_coords(dp, [iota.table[rows[:, 0]], rows[:, 1], rows[:, 2]])


def semidirect_domain_failures(delta: Subgroup, E: Subgroup) -> list[str]:
    """Which hypotheses of the semidirect injection fail for ``delta`` (empty = all hold)."""
    if not is_subdirect(delta):
        return ["not subdirect"]
    if not is_two_factor_injective(delta):
        return ["not 2-factor injective"]
    a = analyze(delta)
    out = []
    if a.E[0] != E:
        out.append("pi_1(H) differs from E")
    if a.B[0] != E or a.C[0] != E:
        out.append("B_1 and C_1 are not both E")
    return out


def extract_semidirect_data(delta: Subgroup, K: Subgroup) -> SemidirectData:
    """``(kappa, iota)`` for ``delta``; ``iota`` is measured against :func:`reference_delta`.

    The same group object must serve as all three factors, since ``iota`` compares
    ``delta`` with a reference product built from ``kappa``.
    """
    dp = product_of(delta)
    G = dp.factors[0]
    if dp.factors != (G, G, G):
        raise ProductError("the semidirect data is defined here for G x G x G")
    a = analyze(delta)
    E = a.E[0]
    problems = semidirect_domain_failures(delta, E)
    _check_complement(G, E, K)
    if problems:
        raise ProductError("; ".join(problems))
    rows = dp.coords[delta.indices]
    inK = K.mask[rows[:, 0]]
    kap = np.full(G.order, -1, dtype=np.int64)
    kap[rows[inK, 1]] = rows[inK, 2]
    if (kap < 0).any() or np.unique(rows[inK, 1]).size != inK.sum():
        raise InvariantViolation("kappa is not a well-defined map")
    kappa = Homomorphism(G, G, kap, check=True)
    if not kappa.is_bijective():
        raise InvariantViolation("kappa is not bijective")
    ref = reference_delta(G, E, K, kappa, dp)
    if semidirect_domain_failures(ref, E):
        raise InvariantViolation("the reference product is outside the theorem's domain")
    look = {}
    for r in rows:
        look[(int(r[1]), int(r[2]))] = int(r[0])
    iota_k = {int(k): look[(int(k), int(kap[k]))] for k in K.indices}
    iota_e = {int(e): look[(int(G.inv[e]), G.identity)] for e in E.indices}
    kof = _k_of(G, E, K)
    tab = np.empty(G.order, dtype=np.int64)
    t = G.table
    for g in range(G.order):
        k = int(kof[g])
        e = int(t[g, G.inv[k]])  # g = e k
        tab[g] = t[iota_e[e], iota_k[k]]
    iota = Homomorphism(G, G, tab, check=True)
    if not iota.is_bijective() or iota.image(K) != K:
        raise InvariantViolation("iota is not an automorphism fixing K")
    return SemidirectData(kappa, iota)


def semidirect_pairs(G: FiniteGroup, K: Subgroup) -> Iterator[tuple[Homomorphism, Homomorphism]]:
    """All ``(kappa, iota)``: ``kappa`` any automorphism, ``iota`` one fixing ``K`` setwise."""
    auts = automorphisms(G)
    fix = [f for f in auts if f.image(K) == K]
    for kappa in auts:
        for iota in fix:
            yield kappa, iota
