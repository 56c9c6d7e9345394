"""Subgroup lattices by cyclic extension.

Subgroups are grown one conjugacy class at a time. For a solvable group every
subgroup ``U > 1`` has a normal subgroup ``V`` of prime index ``p``, so
``U = V<z>`` for an element ``z`` of prime-power order that normalizes ``V``
with ``z^p`` in ``V``; only class representatives need extending, since the
extensions of a conjugate are conjugates of the extensions. Groups that are
not solvable fall back to joining representatives with every cyclic subgroup
of prime-power order, which is complete but slower.

``all_subgroups_naive`` is an independent, much slower method used only to
validate the above on small groups.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .groups import FiniteGroup, GroupTooLarge, Subgroup, mask_to_bits

log = logging.getLogger(__name__)

DEFAULT_BOUND = 20000
WARN_ABOVE = 4000


@dataclass
class SubgroupClass:
    representative: Subgroup
    members: list[int] = field(default_factory=list)  # bitsets of all conjugates

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def order(self) -> int:
        return self.representative.order

    def subgroups(self) -> list[Subgroup]:
        G = self.representative.group
        return [Subgroup(G, b) for b in self.members]


@dataclass
class Lattice:
    group: FiniteGroup
    classes: list[SubgroupClass]

    def __len__(self) -> int:
        return sum(c.size for c in self.classes)

    def subgroups(self) -> list[Subgroup]:
        out = [S for c in self.classes for S in c.subgroups()]
        out.sort(key=Subgroup.sort_key)
        return out

    def normal(self) -> list[Subgroup]:
        return sorted((c.representative for c in self.classes if c.size == 1), key=Subgroup.sort_key)


def _check_bound(G: FiniteGroup, bound: int) -> None:
    if G.order > bound:
        raise GroupTooLarge(f"{G.label} has order {G.order}, above the lattice bound {bound}")
    if G.order > WARN_ABOVE:
        log.warning("enumerating the subgroup lattice of %s (order %d) may be slow", G.label, G.order)


def _smallest_prime(n: int) -> int:
    p = 2
    while n % p:
        p += 1
    return p


def _is_prime_power(n: int) -> bool:
    if n < 2:
        return False
    p = _smallest_prime(n)
    while n % p == 0:
        n //= p
    return n == 1


def cyclic_prime_power_generators(G: FiniteGroup) -> list[int]:
    """One generator (the least index) per cyclic subgroup of prime-power order."""
    t = G.table
    orders = G.element_orders
    keep = np.array([_is_prime_power(int(o)) for o in orders])
    idx = np.nonzero(keep)[0]
    if idx.size == 0:
        return []
    ords = orders[idx]
    rep = idx.copy()
    cur = idx.copy()
    for k in range(2, int(ords.max())):
        cur = t[cur, idx]
        ok = (k < ords) & (np.gcd(k, ords) == 1)
        rep[ok] = np.minimum(rep[ok], cur[ok])
    return sorted(set(int(r) for r in rep))


def _orbit(U_idx: np.ndarray, maps: list[np.ndarray], n: int) -> list[int]:
    """Bitsets of all conjugates of the subgroup with member indices ``U_idx``."""

    def bits_of(ix: np.ndarray) -> int:
        m = np.zeros(n, dtype=bool)
        m[ix] = True
        return mask_to_bits(m)

    start = bits_of(U_idx)
    seen = {start}
    out = [start]
    frontier = [U_idx]
    while frontier:
        nxt = []
        for ix in frontier:
            for m in maps:
                jx = m[ix]
                b = bits_of(jx)
                if b not in seen:
                    seen.add(b)
                    out.append(b)
                    nxt.append(jx)
        frontier = nxt
    return out


def subgroup_lattice(G: FiniteGroup, bound: int = DEFAULT_BOUND) -> Lattice:
    """All subgroups of ``G``, grouped into conjugacy classes."""
    _check_bound(G, bound)
    cache_key = "lattice"
    if cache_key in G._cache:
        return G._cache[cache_key]
    t = G.table
    inv = G.inv
    n = G.order
    maps = [t[t[inv[g]], g].astype(np.int64) for g in G.generators]
    zgens = cyclic_prime_power_generators(G)
    primes = [_smallest_prime(G.element_order(z)) for z in zgens]
    zpow = [G.power(z, p) for z, p in zip(zgens, primes)]
    solvable = G.whole().is_solvable()

    seen: set[int] = set()
    classes: list[SubgroupClass] = []

    def register(mask: np.ndarray) -> bool:
        bits = mask_to_bits(mask)
        if bits in seen:
            return False
        idx = np.nonzero(mask)[0]
        members = _orbit(idx, maps, n)
        seen.update(members)
        classes.append(SubgroupClass(Subgroup(G, bits), members))
        return True

    triv = np.zeros(n, dtype=bool)
    triv[G.identity] = True
    register(triv)
    queue = 0
    while queue < len(classes):
        V = classes[queue].representative
        queue += 1
        vm = V.mask
        vi = V.indices
        for z, p, zp in zip(zgens, primes, zpow):
            if vm[z]:
                continue
            if solvable:
                if not vm[zp] or n % (V.order * p):
                    continue
                if not vm[t[t[inv[z], vi], z]].all():
                    continue
                um = vm.copy()
                cur = vi
                for _ in range(p - 1):
                    cur = t[cur, z]
                    um[cur] = True
            else:
                um = G.closure(V.generators + [z])
            register(um)

    classes.sort(key=lambda c: c.representative.sort_key())
    lat = Lattice(G, classes)
    G._cache[cache_key] = lat
    return lat


def all_subgroups(G: FiniteGroup, bound: int = DEFAULT_BOUND) -> list[Subgroup]:
    """Every subgroup of ``G``, sorted by (order, bitset)."""
    return subgroup_lattice(G, bound).subgroups()


def normal_subgroups(G: FiniteGroup, bound: int = DEFAULT_BOUND) -> list[Subgroup]:
    return subgroup_lattice(G, bound).normal()


def normal_subgroups_of(P: Subgroup) -> list[Subgroup]:
    """Normal subgroups of a subgroup ``P``, via the parent's lattice."""
    lat = subgroup_lattice(P.group)
    out = []
    for c in lat.classes:
        if c.order > P.order or P.order % c.order:
            continue
        for S in c.subgroups():
            if S <= P and S.is_normal(P):
                out.append(S)
    out.sort(key=Subgroup.sort_key)
    return out


def subgroups_of(P: Subgroup) -> list[Subgroup]:
    lat = subgroup_lattice(P.group)
    out = [S for c in lat.classes if P.order % c.order == 0 for S in c.subgroups() if S <= P]
    out.sort(key=Subgroup.sort_key)
    return out


def all_subgroups_naive(G: FiniteGroup, bound: int = 216) -> list[Subgroup]:
    """Lattice by brute force: close all 2-generated subgroups, then join until stable."""
    _check_bound(G, bound)
    n = G.order
    found: dict[int, Subgroup] = {}
    for a in range(n):
        for b in range(a, n):
            m = G.closure([a, b])
            bits = mask_to_bits(m)
            if bits not in found:
                found[bits] = Subgroup(G, bits)
    cyclic = {b: S for b, S in found.items() if len(S.generators) <= 1}
    frontier = list(found.values())
    while frontier:
        nxt = []
        for S in frontier:
            for C in cyclic.values():
                if C <= S:
                    continue
                bits = mask_to_bits(G.closure(S.generators + C.generators))
                if bits not in found:
                    found[bits] = Subgroup(G, bits)
                    nxt.append(found[bits])
        frontier = nxt
    return sorted(found.values(), key=Subgroup.sort_key)


def subgroups_by_exhaustive_closure(G: FiniteGroup) -> list[Subgroup]:
    """Every subset closed under multiplication; only for tiny groups (order <= 8)."""
    n = G.order
    if n > 8:
        raise GroupTooLarge("exhaustive subset check is limited to order 8")
    t = G.table
    out = []
    for code in range(1 << n):
        if not (code >> G.identity) & 1:
            continue
        members = [i for i in range(n) if (code >> i) & 1]
        if all((code >> int(t[a, b])) & 1 for a in members for b in members):
            out.append(Subgroup(G, code))
    return sorted(out, key=Subgroup.sort_key)

