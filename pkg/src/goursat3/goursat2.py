"""Subgroups of ``G1 x G2`` as Goursat tuples ``(P1, P2, N1, N2, phi)``.

``phi`` is an isomorphism ``P1/N1 -> P2/N2`` between materialized quotient
groups; the subgroup is ``{(g1, g2) : g1 in P1, g2 in P2, phi(g1 N1) = g2 N2}``.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroup, GroupError, Homomorphism, Quotient, Subgroup, quotient
from .isomorphism import find_isomorphisms
from .lattice import all_subgroups, normal_subgroups_of
from .product import DirectProduct, cokernel, product_of, project


@dataclass(frozen=True)
class GoursatTuple:
    P1: Subgroup
    P2: Subgroup
    N1: Subgroup
    N2: Subgroup
    phi: Homomorphism  # quotient(P1, N1).group -> quotient(P2, N2).group

    @property
    def Q1(self) -> Quotient:
        return quotient(self.P1, self.N1)

    @property
    def Q2(self) -> Quotient:
        return quotient(self.P2, self.N2)

    def check(self) -> None:
        for name, P, N in (("1", self.P1, self.N1), ("2", self.P2, self.N2)):
            if not (N <= P and N.is_normal(P)):
                raise GroupError(f"N{name} is not a normal subgroup of P{name}")
        if self.phi.domain.group is not self.Q1.group or self.phi.codomain is not self.Q2.group:
            raise GroupError("phi does not map P1/N1 to P2/N2")
        if not self.phi.is_bijective():
            raise GroupError("phi is not bijective")


def tuple_to_subgroup(t: GoursatTuple, product: DirectProduct | None = None) -> Subgroup:
    t.check()
    G1, G2 = t.P1.group, t.P2.group
    dp = product or DirectProduct((G1, G2))
    if dp.factors != (G1, G2):
        raise GroupError("product factors do not match the tuple")
    c1, c2 = dp.coords[:, 0], dp.coords[:, 1]
    mask = t.P1.mask[c1] & t.P2.mask[c2]
    q1 = t.Q1.projection.table[c1[mask]]
    q2 = t.Q2.projection.table[c2[mask]]
    ok = np.zeros(dp.order, dtype=bool)
    ok[np.nonzero(mask)[0]] = t.phi.table[q1] == q2
    D = Subgroup.from_mask(dp.group, ok)
    if D.order != t.P1.order * t.N2.order:
        raise GroupError("constructed subgroup has the wrong order")
    return D


def subgroup_to_tuple(D: Subgroup) -> GoursatTuple:
    dp = product_of(D)
    if dp.arity != 2:
        raise GroupError("expected a subgroup of a 2-factor product")
    P1, P2 = project(D, 1), project(D, 2)
    N1, N2 = project(cokernel(D, 1), 1), project(cokernel(D, 2), 2)
    Q1, Q2 = quotient(P1, N1), quotient(P2, N2)
    rows = dp.coords[D.indices]
    tab = np.full(Q1.group.order, -1, dtype=np.int64)
    tab[Q1.projection.table[rows[:, 0]]] = Q2.projection.table[rows[:, 1]]
    phi = Homomorphism(Q1.group, Q2.group, tab, check=True)
    return GoursatTuple(P1, P2, N1, N2, phi)


def sections(G: FiniteGroup, whole_only: bool = False) -> list[tuple[Subgroup, Subgroup]]:
    """Pairs ``(P, N)`` with ``N`` normal in ``P``, ordered by ``P`` then ``N``."""
    Ps = [G.whole()] if whole_only else all_subgroups(G)
    return [(P, N) for P in Ps for N in normal_subgroups_of(P)]


def iter_goursat_tuples(G1: FiniteGroup, G2: FiniteGroup, subdirect_only: bool = False) -> Iterator[GoursatTuple]:
    """Every Goursat tuple for ``G1 x G2`` in a deterministic order."""
    right: dict[int, list[tuple[Subgroup, Subgroup]]] = {}
    for P2, N2 in sections(G2, subdirect_only):
        right.setdefault(P2.order // N2.order, []).append((P2, N2))
    for P1, N1 in sections(G1, subdirect_only):
        Q1 = quotient(P1, N1)
        for P2, N2 in right.get(Q1.group.order, []):
            Q2 = quotient(P2, N2)
            for phi in find_isomorphisms(Q1.group, Q2.group):
                yield GoursatTuple(P1, P2, N1, N2, phi)


def goursat_census(G1: FiniteGroup, G2: FiniteGroup, subdirect_only: bool = False,
                   product: DirectProduct | None = None) -> tuple[int, list[Subgroup]]:
    """Number of tuples and the distinct subgroups they produce."""
    dp = product or DirectProduct((G1, G2))
    seen: dict[int, Subgroup] = {}
    count = 0
    for t in iter_goursat_tuples(G1, G2, subdirect_only):
        D = tuple_to_subgroup(t, dp)
        seen.setdefault(D.bits, D)
        count += 1
    return count, sorted(seen.values(), key=Subgroup.sort_key)


def enumerate_subgroups_via_goursat(G1: FiniteGroup, G2: FiniteGroup, subdirect_only: bool = False,
                                    product: DirectProduct | None = None) -> list[Subgroup]:
    return goursat_census(G1, G2, subdirect_only, product)[1]
