"""Isomorphism search between small groups by backtracking on generator images.

The generators of the source group are fixed up front. Each is assigned an
image of the same element order and conjugacy-class size; after every
assignment the partial map is extended over the subgroup generated so far and
checked for multiplicativity and injectivity, which prunes most branches.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroup, Homomorphism, Subgroup


def _signature(G: FiniteGroup) -> np.ndarray:
    return G.element_orders * (G.order + 1) + G.class_sizes()


def _choose_generators(G: FiniteGroup, weight: np.ndarray, max_evals: int = 200) -> list[int]:
    """Greedy generating set preferring elements with few candidate images."""
    gens: list[int] = []
    cur = G.closure([])
    while not cur.all():
        outside = np.nonzero(~cur)[0]
        outside = outside[np.lexsort((outside, -G.element_orders[outside], weight[outside]))]
        best = None
        best_score = None
        for x in outside[:max_evals]:
            m = G.closure(gens + [int(x)])
            size = int(m.sum())
            if size == G.order:
                score = (0, int(weight[x]), 0)
            else:
                score = (1, -size / int(weight[x]), int(weight[x]))
            if best_score is None or score < best_score:
                best, best_score, best_mask = int(x), score, m
            if score[0] == 0:
                break
        gens.append(best)
        cur = best_mask
    return gens


@dataclass
class _Layer:
    elements: np.ndarray
    parents: np.ndarray
    gen_ids: np.ndarray


def _bfs_layers(G: FiniteGroup, gens: list[int]) -> tuple[list[_Layer], np.ndarray]:
    t = G.table
    g = np.array(gens, dtype=np.int64)
    seen = np.zeros(G.order, dtype=bool)
    seen[G.identity] = True
    frontier = np.array([G.identity], dtype=np.int64)
    layers = []
    while frontier.size:
        prod = t[frontier[:, None], g[None, :]].ravel().astype(np.int64)
        par = np.repeat(frontier, len(g))
        gid = np.tile(np.arange(len(g)), len(frontier))
        fresh = ~seen[prod]
        prod, par, gid = prod[fresh], par[fresh], gid[fresh]
        prod, first = np.unique(prod, return_index=True)
        par, gid = par[first], gid[first]
        seen[prod] = True
        if prod.size:
            layers.append(_Layer(prod, par, gid))
        frontier = prod
    return layers, np.nonzero(seen)[0]


class _Search:
    def __init__(self, G: FiniteGroup, H: FiniteGroup) -> None:
        self.G, self.H = G, H
        sig_g, sig_h = _signature(G), _signature(H)
        counts = Counter(sig_h.tolist())
        weight = np.array([counts.get(s, 0) for s in sig_g.tolist()], dtype=np.int64)
        self.gens = _choose_generators(G, weight)
        self.candidates = [np.nonzero(sig_h == sig_g[x])[0] for x in self.gens]
        self.levels = [_bfs_layers(G, self.gens[: d + 1]) for d in range(len(self.gens))]

    def _extend(self, d: int, img_gens: np.ndarray) -> np.ndarray | None:
        G, H = self.G, self.H
        layers, members = self.levels[d]
        img = np.full(G.order, -1, dtype=np.int64)
        img[G.identity] = H.identity
        for L in layers:
            img[L.elements] = H.table[img[L.parents], img_gens[L.gen_ids]]
        g = np.array(self.gens[: d + 1], dtype=np.int64)
        lhs = img[G.table[members[:, None], g[None, :]]]
        rhs = H.table[img[members][:, None], img_gens[None, :]]
        if not (lhs == rhs).all():
            return None
        if np.unique(img[members]).size != members.size:
            return None
        return img

    def run(self, limit: int | None):
        out = []
        k = len(self.gens)
        chosen = np.zeros(k, dtype=np.int64)

        def rec(d: int) -> bool:
            for h in self.candidates[d]:
                chosen[d] = h
                img = self._extend(d, chosen[: d + 1])
                if img is None:
                    continue
                if d + 1 == k:
                    out.append(img)
                    if limit is not None and len(out) >= limit:
                        return True
                elif rec(d + 1):
                    return True
            return False

        rec(0)
        return out


def find_isomorphisms(G: FiniteGroup, H: FiniteGroup, limit: int | None = None) -> list[Homomorphism]:
    """All isomorphisms ``G -> H`` (at most ``limit`` of them if given)."""
    if G.order != H.order:
        return []
    if sorted(_signature(G).tolist()) != sorted(_signature(H).tolist()):
        return []
    if G.order == 1:
        return [Homomorphism(G, H, [H.identity], check=False)]
    search = _Search(G, H)
    return [Homomorphism(G, H, img, check=False) for img in search.run(limit)]


def are_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    return bool(find_isomorphisms(G, H, limit=1))


def automorphisms(G: FiniteGroup) -> list[Homomorphism]:
    key = "automorphisms"
    if key not in G._cache:
        G._cache[key] = find_isomorphisms(G, G)
    return G._cache[key]


def subgroup_isomorphisms(S: Subgroup, T: Subgroup, limit: int | None = None) -> list[Homomorphism]:
    """Isomorphisms from ``S`` onto ``T`` as maps into ``T``'s parent group."""
    if S.order != T.order:
        return []
    Sg, Tg = S.as_group(), T.as_group()
    s_idx, t_idx = S.indices, T.indices
    out = []
    for f in find_isomorphisms(Sg, Tg, limit):
        tab = np.full(S.group.order, -1, dtype=np.int64)
        tab[s_idx] = t_idx[f.table]
        out.append(Homomorphism(S, T.group, tab, check=False))
    return out
