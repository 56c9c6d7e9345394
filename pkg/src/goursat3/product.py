"""Direct products, projections, and the subgroups attached to a subdirect product.

Elements of a :class:`DirectProduct` are tuples of factor indices, numbered in
mixed radix with the first factor most significant, so element ``k`` has
coordinates ``coords[k]``. Factor positions are 1-based in the public API
(``project(delta, 1)`` is the first coordinate); :func:`succ` is the single
place where the cyclic index arithmetic ``i+1``, ``i+2`` (mod 3) lives.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroup, GroupError, Homomorphism, Quotient, Subgroup, quotient


class ProductError(GroupError):
    pass


class InvariantViolation(AssertionError):
    """A property that the theory guarantees failed; this means a bug."""


def succ(i: int, k: int = 1) -> int:
    """``i + k`` on the cyclic index set {1, 2, 3}."""
    return (i - 1 + k) % 3 + 1


def _slot(i: int, arity: int) -> int:
    if not 1 <= i <= arity:
        raise ProductError(f"factor index {i} out of range 1..{arity}")
    return i - 1


class DirectProduct:
    """The direct product of finitely many factor groups."""

    def __init__(self, factors: tuple[FiniteGroup, ...] | list[FiniteGroup], label: str | None = None) -> None:
        factors = tuple(factors)
        if not factors:
            raise ProductError("a direct product needs at least one factor")
        self.factors = factors
        self.arity = len(factors)
        self.sizes = np.array([G.order for G in factors], dtype=np.int64)
        self.strides = np.ones(self.arity, dtype=np.int64)
        for i in range(self.arity - 2, -1, -1):
            self.strides[i] = self.strides[i + 1] * self.sizes[i + 1]
        n = int(np.prod(self.sizes))
        grids = np.indices(tuple(self.sizes)).reshape(self.arity, n).T
        self.coords = np.ascontiguousarray(grids, dtype=np.int64)
        keys = [tuple(int(c) for c in row) for row in self.coords]
        label = label or " x ".join(G.label for G in factors)
        self.group = FiniteGroup(keys, label=label, table_builder=self._build_table,
                                 identity=self.encode([G.identity for G in factors]))
        self.group._inv = self.encode_many(np.stack([G.inv[self.coords[:, i]] for i, G in enumerate(factors)], axis=1))
        self.group._cache["direct_product"] = self
        self.group._cache["formatter"] = self.format
        self._drops: dict[int, DirectProduct] = {}

    def __repr__(self) -> str:
        return f"<DirectProduct {self.group.label}>"

    @property
    def order(self) -> int:
        return self.group.order

    def encode(self, coords) -> int:
        return int(np.dot(np.asarray(coords, dtype=np.int64), self.strides))

    def encode_many(self, coords: np.ndarray) -> np.ndarray:
        return np.asarray(coords, dtype=np.int64) @ self.strides

    def _build_table(self, _G: FiniteGroup) -> np.ndarray:
        n = self.order
        dtype = np.int32 if n * n <= 4_000_000 else np.uint16
        t = np.empty((n, n), dtype=dtype)
        step = max(1, 2_000_000 // n)
        for lo in range(0, n, step):
            rows = self.coords[lo : lo + step]
            acc = np.zeros((len(rows), n), dtype=np.int64)
            for i, G in enumerate(self.factors):
                acc += G.table[rows[:, i][:, None], self.coords[:, i][None, :]].astype(np.int64) * self.strides[i]
            t[lo : lo + step] = acc
        return t

    def mul_many(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Componentwise products of element indices (broadcasting, no Cayley table)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
        for i, G in enumerate(self.factors):
            out += G.table[self.coords[a, i], self.coords[b, i]].astype(np.int64) * self.strides[i]
        return out

    def product_set(self, *parts: np.ndarray) -> np.ndarray:
        """Sorted distinct products ``x_1 x_2 ...`` with ``x_j`` drawn from ``parts[j]``."""
        cur = np.unique(np.asarray(parts[0], dtype=np.int64))
        for p in parts[1:]:
            cur = np.unique(self.mul_many(cur[:, None], np.asarray(p, dtype=np.int64)[None, :]))
        return cur

    def closure(self, gens) -> Subgroup:
        """Subgroup generated by ``gens``, computed without the product's Cayley table."""
        g = np.unique(np.asarray(list(gens), dtype=np.int64))
        mask = np.zeros(self.order, dtype=bool)
        mask[self.group.identity] = True
        mask[g] = True
        frontier = np.union1d([self.group.identity], g)
        while frontier.size and g.size:
            prod = self.mul_many(frontier[:, None], g[None, :]).ravel()
            new = np.unique(prod[~mask[prod]])
            mask[new] = True
            frontier = new
        return Subgroup.from_mask(self.group, mask)

    def commute(self, xs: np.ndarray, ys: np.ndarray) -> bool:
        """Whether every element of ``xs`` commutes with every element of ``ys``."""
        xs = np.asarray(xs, dtype=np.int64)[:, None]
        ys = np.asarray(ys, dtype=np.int64)[None, :]
        return bool((self.mul_many(xs, ys) == self.mul_many(ys, xs)).all())

    def embed(self, i: int, x: int) -> int:
        """Element with ``x`` in slot ``i`` and identities elsewhere."""
        s = _slot(i, self.arity)
        c = [G.identity for G in self.factors]
        c[s] = x
        return self.encode(c)

    def embed_subgroup(self, i: int, S: Subgroup) -> Subgroup:
        return Subgroup.from_indices(self.group, [self.embed(i, int(x)) for x in S.indices])

    def format(self, k: int) -> str:
        return "(" + ", ".join(G.format(int(c)) for G, c in zip(self.factors, self.coords[k])) + ")"

    def subproduct(self, subgroups: list[Subgroup]) -> Subgroup:
        """``S_1 x ... x S_t`` as a subgroup of the product."""
        mask = np.ones(self.order, dtype=bool)
        for i, S in enumerate(subgroups):
            mask &= S.mask[self.coords[:, i]]
        return Subgroup.from_mask(self.group, mask)

    def drop(self, i: int) -> DirectProduct:
        """The product of all factors except the ``i``-th (cached)."""
        s = _slot(i, self.arity)
        if s not in self._drops:
            rest = [G for j, G in enumerate(self.factors) if j != s]
            self._drops[s] = DirectProduct(rest)
        return self._drops[s]

    def whole(self) -> Subgroup:
        return self.group.whole()


def direct_product(*factors: FiniteGroup) -> DirectProduct:
    return DirectProduct(factors)


def product_of(delta: Subgroup) -> DirectProduct:
    dp = delta.group._cache.get("direct_product")
    if dp is None:
        raise ProductError(f"{delta.group.label} is not a direct product")
    return dp


# -- projections and predicates ----------------------------------------------


def project(delta: Subgroup, i: int) -> Subgroup:
    """``pi_i(delta)`` as a subgroup of the ``i``-th factor."""
    dp = product_of(delta)
    s = _slot(i, dp.arity)
    return Subgroup.from_indices(dp.factors[s], np.unique(dp.coords[delta.indices, s]))


def coproject(delta: Subgroup, i: int) -> Subgroup:
    """Image of ``delta`` after dropping coordinate ``i``, inside ``dp.drop(i)``."""
    dp = product_of(delta)
    s = _slot(i, dp.arity)
    rest = dp.drop(i)
    keep = [j for j in range(dp.arity) if j != s]
    codes = rest.encode_many(dp.coords[delta.indices][:, keep])
    return Subgroup.from_indices(rest.group, np.unique(codes))


def coordinate_kernel(delta: Subgroup, i: int) -> Subgroup:
    """``ker(pi_i) & delta``: members whose ``i``-th coordinate is trivial."""
    dp = product_of(delta)
    s = _slot(i, dp.arity)
    idx = delta.indices
    return Subgroup.from_indices(dp.group, idx[dp.coords[idx, s] == dp.factors[s].identity])


def cokernel(delta: Subgroup, i: int) -> Subgroup:
    """``ker(psi_i) & delta``: members trivial outside coordinate ``i``."""
    dp = product_of(delta)
    s = _slot(i, dp.arity)
    idx = delta.indices
    ok = np.ones(len(idx), dtype=bool)
    for j, G in enumerate(dp.factors):
        if j != s:
            ok &= dp.coords[idx, j] == G.identity
    return Subgroup.from_indices(dp.group, idx[ok])


def is_subdirect(delta: Subgroup) -> bool:
    dp = product_of(delta)
    return all(project(delta, i).order == G.order for i, G in enumerate(dp.factors, start=1))


def is_two_factor_injective(delta: Subgroup) -> bool:
    """Any two coordinates of a member determine the third."""
    dp = product_of(delta)
    return all(coproject(delta, i).order == delta.order for i in range(1, dp.arity + 1))


def is_two_factor_surjective(delta: Subgroup) -> bool:
    dp = product_of(delta)
    return all(coproject(delta, i).order == dp.drop(i).order for i in range(1, dp.arity + 1))


def _require_triple(delta: Subgroup) -> DirectProduct:
    dp = product_of(delta)
    if dp.arity != 3:
        raise ProductError("expected a subgroup of a 3-factor product")
    return dp


# -- analysis of a subdirect product -----------------------------------------


@dataclass(frozen=True)
class SubdirectAnalysis:
    """Subgroups derived from a subdirect product ``delta`` of ``G1 x G2 x G3``.

    Tuples are ordered by factor, so ``B[0]`` is ``B_1``. ``Hs[i]`` lives in the
    product; ``B``, ``C``, ``E``, ``M``, ``N`` live in the factors.
    """

    delta: Subgroup
    product: DirectProduct
    Hs: tuple[Subgroup, Subgroup, Subgroup]
    H: Subgroup
    B: tuple[Subgroup, Subgroup, Subgroup]
    C: tuple[Subgroup, Subgroup, Subgroup]
    E: tuple[Subgroup, Subgroup, Subgroup]
    M: tuple[Subgroup, Subgroup, Subgroup]
    N: tuple[Subgroup, Subgroup, Subgroup]
    two_factor_injective: bool

    def h(self, i: int) -> Subgroup:
        return self.Hs[i - 1]

    @property
    def degenerate(self) -> bool:
        return all(m.order == 1 for m in self.M)

    def index_claim(self) -> bool:
        """Whether ``[pi_i(delta) : pi_i(H)] = [delta : H]`` for every ``i``."""
        k = self.delta.order // self.H.order
        return all(project(self.delta, i).order // self.E[i - 1].order == k for i in (1, 2, 3))


def analyze(delta: Subgroup) -> SubdirectAnalysis:
    """Compute ``H_i``, ``H``, ``B_i``, ``C_i``, ``E_i``, ``M_i``, ``N_i`` for ``delta``.

    For 2-factor injective ``delta`` the pairwise commutation of the ``H_i`` and
    the commutativity of every ``M_i`` are asserted.
    """
    dp = _require_triple(delta)
    if not is_subdirect(delta):
        raise ProductError("analyze needs a subdirect product")
    inj = is_two_factor_injective(delta)
    Hs = tuple(coordinate_kernel(delta, i) for i in (1, 2, 3))
    # The H_i are normal in delta, so their product set is already a subgroup.
    H = Subgroup.from_indices(dp.group, dp.product_set(*(h.indices for h in Hs)))
    B = tuple(project(Hs[succ(i, 2) - 1], i) for i in (1, 2, 3))
    C = tuple(project(Hs[succ(i, 1) - 1], i) for i in (1, 2, 3))
    E = tuple(project(H, i) for i in (1, 2, 3))
    M = tuple(b & c for b, c in zip(B, C))
    N = tuple(project(cokernel(delta, i), i) for i in (1, 2, 3))
    if inj:
        for a in range(3):
            for b in range(a + 1, 3):
                if not dp.commute(Hs[a].indices, Hs[b].indices):
                    raise InvariantViolation(f"H_{a + 1} and H_{b + 1} do not commute")
        for i, m in enumerate(M, start=1):
            if not m.is_abelian():
                raise InvariantViolation(f"M_{i} is not Abelian")
    return SubdirectAnalysis(delta, dp, Hs, H, B, C, E, M, N, inj)


class CanonicalMap:
    """The map ``phi^i_{j,k}: pi_j(H_i) -> pi_k(H_i)``.

    It is defined by ``(1 in slot i, g in slot j, phi(g)^-1 in slot k)`` lying in
    ``delta``. Because of the inverse in slot ``k`` this map reverses products,
    so it is a homomorphism only on Abelian subgroups such as ``M_j``;
    :meth:`as_isomorphism` gives the genuine isomorphism ``g -> phi(g)^-1``.
    """

    def __init__(self, analysis: SubdirectAnalysis, i: int, j: int, k: int) -> None:
        if sorted((i, j, k)) != [1, 2, 3]:
            raise ProductError(f"({i}, {j}, {k}) is not a permutation of (1, 2, 3)")
        if not analysis.two_factor_injective:
            raise ProductError("canonical maps need a 2-factor injective product")
        dp = analysis.product
        self.i, self.j, self.k = i, j, k
        self.source_group = dp.factors[j - 1]
        self.target_group = dp.factors[k - 1]
        Hi = analysis.h(i)
        self.domain = project(Hi, j)
        self.codomain = project(Hi, k)
        rows = dp.coords[Hi.indices]
        gj, gk = rows[:, j - 1], rows[:, k - 1]
        self.pairing = np.full(self.source_group.order, -1, dtype=np.int64)
        self.pairing[gj] = gk
        self.table = np.full(self.source_group.order, -1, dtype=np.int64)
        self.table[gj] = self.target_group.inv[gk]

    def __repr__(self) -> str:
        return f"<CanonicalMap phi^{self.i}_{{{self.j},{self.k}}}>"

    def __call__(self, g: int) -> int:
        y = int(self.table[g])
        if y < 0:
            raise ProductError(f"element {g} outside pi_{self.j}(H_{self.i})")
        return y

    def restrict(self, S: Subgroup) -> Homomorphism:
        """Restriction to ``S``; raises unless it is a homomorphism (e.g. ``S`` Abelian)."""
        if not S <= self.domain:
            raise ProductError("restriction outside the domain")
        return Homomorphism(S, self.target_group, self.table, check=True)

    def as_isomorphism(self) -> Homomorphism:
        """The isomorphism ``pi_j(H_i) -> pi_k(H_i)`` pairing slot ``j`` with slot ``k``."""
        return Homomorphism(self.domain, self.target_group, self.pairing, check=True)


def canonical_isomorphism(analysis: SubdirectAnalysis, i: int, j: int, k: int) -> CanonicalMap:
    return CanonicalMap(analysis, i, j, k)


# -- reduction to the 2-factor injective case --------------------------------


@dataclass(frozen=True)
class Reduction:
    N: tuple[Subgroup, Subgroup, Subgroup]
    quotients: tuple[Quotient, Quotient, Quotient]
    product: DirectProduct
    delta: Subgroup  # the reduced product inside ``product``


def quotient_product(dp: DirectProduct, N: list[Subgroup] | tuple[Subgroup, ...]):
    qs = tuple(quotient(G, n) for G, n in zip(dp.factors, N))
    return qs, DirectProduct([q.group for q in qs])


def image_in_quotients(delta: Subgroup, quotients, qdp: DirectProduct) -> Subgroup:
    dp = product_of(delta)
    rows = dp.coords[delta.indices]
    qc = np.stack([q.projection.table[rows[:, s]] for s, q in enumerate(quotients)], axis=1)
    return Subgroup.from_indices(qdp.group, np.unique(qdp.encode_many(qc)))


def preimage_from_quotients(dp: DirectProduct, quotients, reduced: Subgroup) -> Subgroup:
    """``{(g_1, g_2, g_3) : (g_1 N_1, g_2 N_2, g_3 N_3) in reduced}``."""
    qdp = product_of(reduced)
    qc = np.stack([q.projection.table[dp.coords[:, s]] for s, q in enumerate(quotients)], axis=1)
    return Subgroup.from_mask(dp.group, reduced.mask[qdp.encode_many(qc)])


def reduce_to_two_factor_injective(delta: Subgroup) -> Reduction:
    dp = _require_triple(delta)
    if not is_subdirect(delta):
        raise ProductError("reduction needs a subdirect product")
    N = tuple(project(cokernel(delta, i), i) for i in (1, 2, 3))
    qs, qdp = quotient_product(dp, N)
    reduced = image_in_quotients(delta, qs, qdp)
    if preimage_from_quotients(dp, qs, reduced) != delta:
        raise InvariantViolation("preimage of the reduced product differs from delta")
    if not (is_subdirect(reduced) and is_two_factor_injective(reduced)):
        raise InvariantViolation("reduced product is not 2-factor injective subdirect")
    return Reduction(N, qs, qdp, reduced)


def projection_homomorphism(dp: DirectProduct, i: int) -> Homomorphism:
    s = _slot(i, dp.arity)
    return Homomorphism(dp.group, dp.factors[s], dp.coords[:, s], check=False)
