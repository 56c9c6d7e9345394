"""Brute-force census of subgroups of small direct products.

Everything here is computed from the subgroup lattice and the coordinate
projections alone; none of the correspondence machinery is used, so the
numbers can serve as ground truth for it. Lattice classes are classified by
their representative and weighted by class size, since conjugation in the
product preserves every property counted.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from .groups import FiniteGroup, GroupError, GroupTooLarge, Subgroup
from .isomorphism import automorphisms
from .lattice import subgroup_lattice
from .product import DirectProduct

DEFAULT_BOUND = 1152
EXTENDED_BOUND = 3456
STRETCH_BOUND = 13824
TIERS = {"default": DEFAULT_BOUND, "extended": EXTENDED_BOUND, "stretch": STRETCH_BOUND}


@dataclass
class CensusReport:
    product: str
    order: int
    total: int
    subdirect: int
    two_factor_injective: int | None = None
    degenerate: int | None = None
    classes: int = 0
    seconds: float = 0.0
    listing: list[list[str]] = field(default_factory=list)

    def __post_init__(self) -> None:
        chain = [c for c in (self.degenerate, self.two_factor_injective, self.subdirect, self.total) if c is not None]
        if chain != sorted(chain):
            raise AssertionError(f"census counts are not nested: {chain}")

    def to_dict(self, with_listing: bool = False) -> dict:
        d = {
            "product": self.product,
            "order": self.order,
            "total": self.total,
            "subdirect": self.subdirect,
        }
        if self.two_factor_injective is not None:
            d["two_factor_injective"] = self.two_factor_injective
            d["degenerate"] = self.degenerate
        if with_listing:
            d["listing"] = self.listing
        return d

    def to_json(self, with_listing: bool = False) -> str:
        return json.dumps(self.to_dict(with_listing), indent=2) + "\n"


def _projection_sizes(dp: DirectProduct, idx: np.ndarray) -> list[int]:
    return [np.unique(dp.coords[idx, s]).size for s in range(dp.arity)]


def _subdirect(dp: DirectProduct, idx: np.ndarray) -> bool:
    return _projection_sizes(dp, idx) == [int(x) for x in dp.sizes]


def _two_factor_injective(dp: DirectProduct, idx: np.ndarray) -> bool:
    c = dp.coords[idx]
    for s in range(3):
        a, b = [t for t in range(3) if t != s]
        if np.unique(c[:, a] * dp.sizes[b] + c[:, b]).size != len(idx):
            return False
    return True


def _trivial_outside(dp: DirectProduct, idx: np.ndarray, s: int) -> np.ndarray:
    """Members of ``idx`` whose coordinate ``s`` is the identity."""
    return idx[dp.coords[idx, s] == dp.factors[s].identity]


def _interlink_orders(dp: DirectProduct, idx: np.ndarray) -> list[int]:
    """``|pi_i(H_{i+1}) & pi_i(H_{i+2})|`` for each coordinate."""
    kern = [_trivial_outside(dp, idx, s) for s in range(3)]
    out = []
    for s in range(3):
        a = set(dp.coords[kern[(s + 1) % 3], s].tolist())
        b = set(dp.coords[kern[(s + 2) % 3], s].tolist())
        out.append(len(a & b))
    return out


def _check(dp: DirectProduct, bound: int) -> None:
    if dp.order > bound:
        raise GroupTooLarge(f"{dp.group.label} has order {dp.order}, above the census bound {bound}")


def _listing(dp: DirectProduct, S: Subgroup) -> list[str]:
    return [dp.format(int(k)) for k in S.indices]


def census(G1: FiniteGroup, G2: FiniteGroup, G3: FiniteGroup, bound: int = DEFAULT_BOUND,
           listing: bool = False, product: DirectProduct | None = None) -> CensusReport:
    """Subgroups of ``G1 x G2 x G3``, classified as subdirect, 2-factor injective, degenerate."""
    dp = product or DirectProduct((G1, G2, G3))
    _check(dp, bound)
    t0 = time.perf_counter()
    lat = subgroup_lattice(dp.group, bound=max(bound, dp.order))
    sub = inj = deg = 0
    rows: list[list[str]] = []
    for cls in lat.classes:
        idx = cls.representative.indices
        if not _subdirect(dp, idx):
            continue
        sub += cls.size
        if listing:
            rows += [_listing(dp, S) for S in cls.subgroups()]
        if _two_factor_injective(dp, idx):
            inj += cls.size
            if max(_interlink_orders(dp, idx)) == 1:
                deg += cls.size
    if listing:
        rows.sort(key=lambda r: (len(r), r))
    return CensusReport(dp.group.label, dp.order, len(lat), sub, inj, deg, len(lat.classes),
                        time.perf_counter() - t0, rows)


def census2(G1: FiniteGroup, G2: FiniteGroup, bound: int = DEFAULT_BOUND,
            product: DirectProduct | None = None) -> CensusReport:
    """Subgroups of ``G1 x G2`` and how many are subdirect."""
    dp = product or DirectProduct((G1, G2))
    _check(dp, bound)
    t0 = time.perf_counter()
    lat = subgroup_lattice(dp.group, bound=max(bound, dp.order))
    sub = sum(c.size for c in lat.classes if _subdirect(dp, c.representative.indices))
    return CensusReport(dp.group.label, dp.order, len(lat), sub, classes=len(lat.classes),
                        seconds=time.perf_counter() - t0)


# -- semidirect family ------------------------------------------------------------


def _in_semidirect_domain(dp: DirectProduct, idx: np.ndarray, E: Subgroup) -> bool:
    """Subdirect, 2-factor injective, ``pi_1(H) = E`` and ``B_1 = C_1 = E``."""
    if not (_subdirect(dp, idx) and _two_factor_injective(dp, idx)):
        return False
    kern = [_trivial_outside(dp, idx, s) for s in range(3)]
    e = set(E.indices.tolist())
    B1 = set(dp.coords[kern[2], 0].tolist())
    C1 = set(dp.coords[kern[1], 0].tolist())
    if B1 != e or C1 != e:
        return False
    # H = H_1 H_2 H_3; its first projection is B_1 C_1 because H_1 is trivial there
    return True


def targeted_semidirect_census(G: FiniteGroup, E: Subgroup, K: Subgroup,
                               product: DirectProduct | None = None) -> list[Subgroup]:
    """All 2-factor injective subdirect ``delta <= G^3`` with ``pi_1(H) = E``, ``B_1 = C_1 = E``.

    Each candidate is generated by ``(iota(k(g)), g, kappa(g))`` for ``g`` in ``G`` and
    ``(iota(a), a^-1, 1)`` for ``a`` in ``E``, where ``k(g)`` is the element of ``K``
    in ``gE``, ``kappa`` runs over all automorphisms and ``iota`` over those
    fixing ``K`` setwise. Candidates are filtered by the domain predicates and
    deduplicated; the full lattice of ``G^3`` is never built.
    """
    if E.group is not G or K.group is not G:
        raise GroupError("E and K must be subgroups of G")
    if not (E.is_normal() and E.is_abelian()):
        raise GroupError("E must be an Abelian normal subgroup")
    if (E & K).order != 1 or E.order * K.order != G.order:
        raise GroupError("K is not a complement of E")
    dp = product or DirectProduct((G, G, G))
    if dp.factors != (G, G, G):
        raise GroupError("product is not G x G x G")
    t = G.table
    kof = np.full(G.order, -1, dtype=np.int64)
    kk, ee = (x.ravel() for x in np.meshgrid(K.indices, E.indices, indexing="ij"))
    kof[t[kk, ee]] = kk
    g = np.arange(G.order)
    a = E.indices
    auts = automorphisms(G)
    fixing = [f for f in auts if set(f.table[K.indices].tolist()) == set(K.indices.tolist())]
    seen: dict[int, Subgroup] = {}
    for kappa in auts:
        for iota in fixing:
            i = iota.table
            gens = np.concatenate([
                dp.encode_many(np.stack([i[kof], g, kappa.table], axis=1)),
                dp.encode_many(np.stack([i[a], G.inv[a], np.full(len(a), G.identity)], axis=1)),
            ])
            D = dp.closure(gens)
            if D.bits not in seen and _in_semidirect_domain(dp, D.indices, E):
                seen[D.bits] = D
    return sorted(seen.values(), key=Subgroup.sort_key)
