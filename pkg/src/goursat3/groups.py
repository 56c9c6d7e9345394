"""Fully enumerated finite groups, subgroups as bitsets, and homomorphisms.

A :class:`FiniteGroup` indexes its elements ``0..n-1`` and multiplies through a
Cayley table. Element keys are opaque hashable values (a :class:`Perm`, a tuple
of factor indices, a coset representative, ...). Subgroups are Python ``int``
bitsets over the parent's element indices, which makes them cheap to hash and
to compare for the lattice code.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Hashable, Iterable, Sequence

import numpy as np

from .perm import Perm, compose, inverse, parse_cycles

# Above this order no Cayley table is built (it would need order**2 entries).
TABLE_LIMIT = 20000


class GroupError(ValueError):
    pass


class GroupTooLarge(GroupError):
    pass


def mask_to_bits(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def bits_to_mask(bits: int, n: int) -> np.ndarray:
    raw = bits.to_bytes((n + 7) // 8, "little")
    return np.unpackbits(np.frombuffer(raw, np.uint8), bitorder="little", count=n).astype(bool)


class FiniteGroup:
    """A finite group given by an element list and a Cayley table.

    ``table[a, b]`` is the index of ``elements[a] * elements[b]``. The table may
    be supplied directly or produced lazily by ``table_builder``; groups too big
    for a table (e.g. S8) still support key-level multiplication via ``keymul``.
    """

    def __init__(
        self,
        elements: Sequence[Hashable],
        table: np.ndarray | None = None,
        *,
        label: str = "G",
        identity: int | None = None,
        table_builder: Callable[[FiniteGroup], np.ndarray] | None = None,
        keymul: Callable[[Hashable, Hashable], Hashable] | None = None,
        keyinv: Callable[[Hashable], Hashable] | None = None,
        check: bool = False,
    ) -> None:
        self.elements = list(elements)
        self.order = len(self.elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != self.order:
            raise GroupError("element keys are not pairwise distinct")
        self.label = label
        self.spec: str | None = None
        self._table = None if table is None else _compact(np.asarray(table), self.order)
        self._table_builder = table_builder
        self._keymul = keymul
        self._keyinv = keyinv
        self._identity = identity
        self._inv: np.ndarray | None = None
        self._orders: np.ndarray | None = None
        self._gens: list[int] | None = None
        self._classes: np.ndarray | None = None
        self._cache: dict = {}
        if check:
            check_group_axioms(self)

    def __repr__(self) -> str:
        return f"<FiniteGroup {self.label} of order {self.order}>"

    def __len__(self) -> int:
        return self.order

    # -- arithmetic -------------------------------------------------------

    @property
    def has_table(self) -> bool:
        return self._table is not None or self.order <= TABLE_LIMIT

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            if self.order > TABLE_LIMIT:
                raise GroupTooLarge(
                    f"{self.label} has order {self.order}; Cayley tables stop at {TABLE_LIMIT}"
                )
            if self._table_builder is not None:
                self._table = _compact(self._table_builder(self), self.order)
            elif self._keymul is not None:
                els = self.elements
                t = np.empty((self.order, self.order), dtype=np.int64)
                for i, a in enumerate(els):
                    t[i] = [self.index[self._keymul(a, b)] for b in els]
                self._table = _compact(t, self.order)
            else:
                raise GroupError(f"{self.label} has no multiplication")
        return self._table

    @property
    def identity(self) -> int:
        if self._identity is None:
            t = self.table
            hits = np.nonzero((t == np.arange(self.order)).all(axis=1))[0]
            if len(hits) != 1:
                raise GroupError("no unique left identity")
            self._identity = int(hits[0])
        return self._identity

    @property
    def inv(self) -> np.ndarray:
        if self._inv is None:
            if not self.has_table:
                self._inv = np.array([self.index[self._keyinv(e)] for e in self.elements])
            else:
                t = self.table
                e = self.identity
                inv = np.empty(self.order, dtype=np.int64)
                step = max(1, 4_000_000 // max(self.order, 1))
                for lo in range(0, self.order, step):
                    rows, cols = np.nonzero(t[lo : lo + step] == e)
                    inv[rows + lo] = cols
                self._inv = inv
        return self._inv

    def mul(self, a: int, b: int) -> int:
        if self.has_table:
            return int(self.table[a, b])
        return self.index[self._keymul(self.elements[a], self.elements[b])]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = int(self.inv[a]), -k
        out = self.identity
        base = a
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def conj(self, x: int, g: int) -> int:
        """``g^-1 x g``."""
        return self.mul(self.mul(int(self.inv[g]), x), g)

    def commutator(self, x: int, y: int) -> int:
        ix, iy = int(self.inv[x]), int(self.inv[y])
        return self.mul(self.mul(ix, iy), self.mul(x, y))

    @property
    def element_orders(self) -> np.ndarray:
        if self._orders is None:
            t = self.table
            n = self.order
            e = self.identity
            orders = np.zeros(n, dtype=np.int64)
            cur = np.arange(n)
            k = 1
            while True:
                hit = (cur == e) & (orders == 0)
                orders[hit] = k
                if (orders > 0).all():
                    break
                cur = t[cur, np.arange(n)]
                k += 1
            self._orders = orders
        return self._orders

    def element_order(self, a: int) -> int:
        return int(self.element_orders[a])

    def is_abelian(self) -> bool:
        return self.whole().is_abelian()

    # -- structure ----------------------------------------------------------

    @property
    def generators(self) -> list[int]:
        if self._gens is None:
            self._gens = self.whole().generators
        return self._gens

    def closure(self, gens: Iterable[int]) -> np.ndarray:
        """Membership mask of the subgroup generated by ``gens``."""
        t = self.table
        gens = np.unique(np.fromiter((int(g) for g in gens), dtype=np.int64))
        mask = np.zeros(self.order, dtype=bool)
        mask[self.identity] = True
        if len(gens) == 0:
            return mask
        mask[gens] = True
        frontier = np.union1d([self.identity], gens)
        while frontier.size:
            prod = t[frontier[:, None], gens[None, :]].ravel()
            new = np.unique(prod[~mask[prod]])
            mask[new] = True
            frontier = new
        return mask

    def subgroup(self, members: Iterable[int] | np.ndarray) -> Subgroup:
        """Subgroup with exactly these member indices (no closure taken)."""
        return Subgroup.from_indices(self, members)

    def generated(self, gens: Iterable[int]) -> Subgroup:
        return Subgroup.from_mask(self, self.closure(gens))

    def whole(self) -> Subgroup:
        if "whole" not in self._cache:
            self._cache["whole"] = Subgroup(self, (1 << self.order) - 1)
        return self._cache["whole"]

    def trivial(self) -> Subgroup:
        return Subgroup(self, 1 << self.identity)

    def conjugacy_class_ids(self) -> np.ndarray:
        """Array assigning each element the least index in its class."""
        if self._classes is None:
            n = self.order
            t = self.table
            inv = self.inv
            maps = [t[t[inv[g]], g] for g in self.generators]
            ids = np.full(n, -1, dtype=np.int64)
            for x in range(n):
                if ids[x] >= 0:
                    continue
                ids[x] = x
                frontier = np.array([x])
                while frontier.size:
                    nxt = np.unique(np.concatenate([m[frontier] for m in maps])) if maps else frontier[:0]
                    nxt = nxt[ids[nxt] < 0]
                    ids[nxt] = x
                    frontier = nxt
            self._classes = ids
        return self._classes

    def class_sizes(self) -> np.ndarray:
        """Size of the conjugacy class of each element."""
        ids = self.conjugacy_class_ids()
        counts = np.bincount(ids, minlength=self.order)
        return counts[ids]

    def center(self) -> Subgroup:
        return self.whole().center()

    def format(self, i: int) -> str:
        fmt = self._cache.get("formatter")
        return fmt(i) if fmt is not None else format_key(self.elements[i])


def format_key(key) -> str:
    if isinstance(key, tuple):
        return "(" + ", ".join(format_key(k) for k in key) + ")"
    return str(key)


def _compact(table: np.ndarray, n: int) -> np.ndarray:
    if n <= np.iinfo(np.int32).max and table.dtype != np.int32 and n * n > 4_000_000:
        if n < 2**16:
            return table.astype(np.uint16)
    return table.astype(np.int32, copy=False) if table.dtype != np.uint16 else table


def check_group_axioms(G: FiniteGroup, samples: int = 100_000, seed: int = 0) -> None:
    """Associativity (exhaustive up to order 200, sampled above) and inverses."""
    t = G.table.astype(np.int64)
    n = G.order
    e = G.identity
    if not (t[e] == np.arange(n)).all() or not (t[:, e] == np.arange(n)).all():
        raise GroupError("identity is not two-sided")
    inv = G.inv
    if not ((t[np.arange(n), inv] == e).all() and (t[inv, np.arange(n)] == e).all()):
        raise GroupError("inverse table is not two-sided")
    if n <= 200:
        lhs = t[t[:, :, None], np.arange(n)[None, None, :]]  # (ab)c
        rhs = t[np.arange(n)[:, None, None], t[None, :, :]]  # a(bc)
        if not (lhs == rhs).all():
            raise GroupError("multiplication is not associative")
    else:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, samples))
        if not (t[t[a, b], c] == t[a, t[b, c]]).all():
            raise GroupError("multiplication is not associative")


class Subgroup:
    """A subset of a parent group's element indices, stored as an ``int`` bitset."""

    __slots__ = ("group", "bits", "order", "_indices", "_gens", "_as_group")

    def __init__(self, group: FiniteGroup, bits: int) -> None:
        self.group = group
        self.bits = bits
        self.order = bits.bit_count()
        self._indices: np.ndarray | None = None
        self._gens: list[int] | None = None
        self._as_group = None

    @classmethod
    def from_mask(cls, group: FiniteGroup, mask: np.ndarray) -> Subgroup:
        S = cls(group, mask_to_bits(mask))
        return S

    @classmethod
    def from_indices(cls, group: FiniteGroup, members: Iterable[int] | np.ndarray) -> Subgroup:
        mask = np.zeros(group.order, dtype=bool)
        idx = np.fromiter((int(m) for m in members), dtype=np.int64) if not isinstance(members, np.ndarray) else members
        mask[idx] = True
        return cls.from_mask(group, mask)

    @property
    def indices(self) -> np.ndarray:
        if self._indices is None:
            self._indices = np.nonzero(self.mask)[0]
        return self._indices

    @property
    def mask(self) -> np.ndarray:
        return bits_to_mask(self.bits, self.group.order)

    def __len__(self) -> int:
        return self.order

    def __iter__(self):
        return iter(int(i) for i in self.indices)

    def __contains__(self, i: int) -> bool:
        return bool((self.bits >> int(i)) & 1)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Subgroup) and other.group is self.group and other.bits == self.bits

    def __hash__(self) -> int:
        return hash((id(self.group), self.bits))

    def __le__(self, other: Subgroup) -> bool:
        return self.bits & ~other.bits == 0

    def __lt__(self, other: Subgroup) -> bool:
        return self <= other and self.bits != other.bits

    def __and__(self, other: Subgroup) -> Subgroup:
        return Subgroup(self.group, self.bits & other.bits)

    def __repr__(self) -> str:
        return f"<Subgroup of {self.group.label}, order {self.order}>"

    def sort_key(self) -> tuple[int, int]:
        return (self.order, self.bits)

    def keys(self) -> list:
        return [self.group.elements[i] for i in self.indices]

    # -- structure ----------------------------------------------------------

    @property
    def generators(self) -> list[int]:
        """A small generating set, chosen greedily by decreasing element order."""
        if self._gens is None:
            G = self.group
            idx = self.indices
            if self.order == 1:
                self._gens = []
                return self._gens
            orders = G.element_orders[idx]
            cand = idx[np.lexsort((idx, -orders))]
            gens: list[int] = []
            cur = np.zeros(G.order, dtype=bool)
            cur[G.identity] = True
            got = 1
            for x in cand:
                if cur[x]:
                    continue
                gens.append(int(x))
                cur = G.closure(gens)
                got = int(cur.sum())
                if got == self.order:
                    break
            self._gens = gens
        return self._gens

    def join(self, other: Subgroup | Iterable[int]) -> Subgroup:
        extra = other.generators if isinstance(other, Subgroup) else list(other)
        return Subgroup.from_mask(self.group, self.group.closure(self.generators + list(extra)))

    def product_set(self, other: Subgroup) -> Subgroup | None:
        """``self * other`` when that set is a subgroup, else ``None``."""
        t = self.group.table
        prod = np.unique(t[self.indices[:, None], other.indices[None, :]].ravel())
        S = Subgroup.from_indices(self.group, prod)
        return S if S.is_closed() else None

    def is_closed(self) -> bool:
        if self.group.identity not in self:
            return False
        t = self.group.table
        m = self.mask
        gens = self.indices
        return bool(m[t[np.ix_(gens, gens)]].all())

    def conjugate(self, g: int) -> Subgroup:
        G = self.group
        t = G.table
        return Subgroup.from_indices(G, t[t[G.inv[g], self.indices], g])

    def normalizes(self, g: int) -> bool:
        G = self.group
        t = G.table
        return bool(self.mask[t[t[G.inv[g], self.indices], g]].all())

    def is_normal(self, ambient: Subgroup | None = None) -> bool:
        ambient = ambient or self.group.whole()
        return self <= ambient and all(self.normalizes(g) for g in ambient.generators)

    def commutes_with(self, other: Subgroup) -> bool:
        """Whether ``[self, other] = 1``."""
        t = self.group.table
        a = np.array(self.generators, dtype=np.int64)
        b = np.array(other.generators, dtype=np.int64)
        if a.size == 0 or b.size == 0:
            return True
        return bool((t[a[:, None], b[None, :]] == t[b[None, :], a[:, None]]).all())

    def is_abelian(self) -> bool:
        return self.commutes_with(self)

    def center(self) -> Subgroup:
        t = self.group.table
        idx = self.indices
        g = np.array(self.generators, dtype=np.int64)
        if g.size == 0:
            return self
        ok = (t[idx[:, None], g[None, :]] == t[g[None, :], idx[:, None]]).all(axis=1)
        return Subgroup.from_indices(self.group, idx[ok])

    def normal_closure_of(self, elems: Iterable[int]) -> Subgroup:
        """Smallest normal subgroup of ``self`` containing ``elems``."""
        G = self.group
        t = G.table
        inv = G.inv
        cur = G.closure(list(elems))
        ambient = self.generators
        while True:
            S = Subgroup.from_mask(G, cur)
            new = [int(t[t[inv[g], x], g]) for g in ambient for x in S.generators]
            missing = [x for x in new if not cur[x]]
            if not missing:
                return S
            cur = G.closure(S.generators + missing)

    def derived_subgroup(self) -> Subgroup:
        G = self.group
        gens = self.generators
        comms = [G.commutator(x, y) for x, y in itertools.combinations(gens, 2)]
        return self.normal_closure_of(comms)

    def is_solvable(self) -> bool:
        S = self
        while S.order > 1:
            D = S.derived_subgroup()
            if D == S:
                return False
            S = D
        return True

    def index_in(self, other: Subgroup) -> int:
        return other.order // self.order

    def as_group(self) -> FiniteGroup:
        """Materialize as a standalone group; keys are the parent's keys."""
        if self._as_group is None:
            G = self.group
            idx = self.indices
            pos = np.full(G.order, -1, dtype=np.int64)
            pos[idx] = np.arange(len(idx))
            dp = G._cache.get("direct_product")
            if dp is not None and G._table is None:
                # avoid materializing the whole product's table
                sub = pos[dp.mul_many(idx[:, None], idx[None, :])]
            else:
                sub = pos[G.table[np.ix_(idx, idx)]]
            H = FiniteGroup([G.elements[i] for i in idx], sub, label=f"<{G.label}|{self.order}>",
                            identity=int(pos[G.identity]))
            H._cache["embedding"] = idx
            H._cache["formatter"] = lambda i: G.format(int(idx[i]))
            self._as_group = H
        return self._as_group


class Homomorphism:
    """A homomorphism from a subgroup of one group into another group.

    ``table`` is indexed by the domain's *parent* element indices and holds
    ``-1`` outside the domain. Construction verifies multiplicativity: on every
    pair when the domain has order at most 200, otherwise on (element,
    generator) pairs, which is equivalent.
    """

    def __init__(self, domain: Subgroup | FiniteGroup, codomain: FiniteGroup, table, *, check: bool = True) -> None:
        if isinstance(domain, FiniteGroup):
            domain = domain.whole()
        self.domain = domain
        self.codomain = codomain
        tab = np.full(domain.group.order, -1, dtype=np.int64)
        table = np.asarray(table, dtype=np.int64)
        if table.shape[0] == domain.group.order:
            tab[domain.indices] = table[domain.indices]
        elif table.shape[0] == domain.order:
            tab[domain.indices] = table
        else:
            raise GroupError("table length matches neither domain nor its parent")
        self.table = tab
        if check:
            self.verify()

    def verify(self) -> None:
        D = self.domain
        G = D.group
        H = self.codomain
        tab = self.table
        idx = D.indices
        if (tab[idx] < 0).any():
            raise GroupError("map undefined on part of its domain")
        if tab[G.identity] != H.identity:
            raise GroupError("identity not preserved")
        if D.order <= 200:
            right = idx
        else:
            right = np.array(D.generators, dtype=np.int64)
        if right.size == 0:
            return
        lhs = tab[G.table[idx[:, None], right[None, :]]]
        rhs = H.table[tab[idx][:, None], tab[right][None, :]]
        if not (lhs == rhs).all():
            raise GroupError("map is not multiplicative")

    def __call__(self, x: int) -> int:
        y = int(self.table[x])
        if y < 0:
            raise GroupError(f"element {x} outside the domain")
        return y

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Homomorphism)
            and self.domain == other.domain
            and self.codomain is other.codomain
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self) -> int:
        return hash((self.domain, id(self.codomain), self.table[self.domain.indices].tobytes()))

    def __repr__(self) -> str:
        return f"<Homomorphism {self.domain.group.label}[{self.domain.order}] -> {self.codomain.label}>"

    def key(self) -> bytes:
        return self.table.tobytes()

    def image(self, S: Subgroup | None = None) -> Subgroup:
        S = self.domain if S is None else S
        return Subgroup.from_indices(self.codomain, np.unique(self.table[S.indices]))

    def preimage(self, T: Subgroup) -> Subgroup:
        idx = self.domain.indices
        return Subgroup.from_indices(self.domain.group, idx[T.mask[self.table[idx]]])

    def kernel(self) -> Subgroup:
        return self.preimage(self.codomain.trivial())

    def is_injective(self) -> bool:
        return self.image().order == self.domain.order

    def is_surjective(self) -> bool:
        return self.image().order == self.codomain.order

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def restrict(self, S: Subgroup) -> Homomorphism:
        if not S <= self.domain:
            raise GroupError("restriction to a non-subgroup of the domain")
        return Homomorphism(S, self.codomain, self.table, check=False)

    def then(self, other: Homomorphism) -> Homomorphism:
        """``self`` followed by ``other``."""
        if other.codomain is None or self.codomain is not other.domain.group:
            raise GroupError("codomain/domain mismatch")
        if not self.image() <= other.domain:
            raise GroupError("image leaves the next domain")
        tab = np.full_like(self.table, -1)
        idx = self.domain.indices
        tab[idx] = other.table[self.table[idx]]
        return Homomorphism(self.domain, other.codomain, tab, check=False)

    def inverse(self) -> Homomorphism:
        if not self.is_injective():
            raise GroupError("not injective")
        img = self.image()
        tab = np.full(self.codomain.order, -1, dtype=np.int64)
        idx = self.domain.indices
        tab[self.table[idx]] = idx
        return Homomorphism(img, self.domain.group, tab, check=False)


def identity_hom(G: FiniteGroup | Subgroup) -> Homomorphism:
    S = G.whole() if isinstance(G, FiniteGroup) else G
    return Homomorphism(S, S.group, np.arange(S.group.order), check=False)


# -- constructors --------------------------------------------------------------


def _perm_table_builder(G: FiniteGroup) -> np.ndarray:
    P = np.array([p.images for p in G.elements], dtype=np.int64)
    d = P.shape[1]
    pw = d ** np.arange(d, dtype=np.int64)
    codes = P @ pw
    order = np.argsort(codes)
    sorted_codes = codes[order]
    n = G.order
    t = np.empty((n, n), dtype=np.int32 if n * n <= 4_000_000 else np.uint16)
    for a in range(n):
        rows = P[:, P[a]]  # row b: b[a[i]] = (a then b)[i]
        t[a] = order[np.searchsorted(sorted_codes, rows @ pw)]
    return t


def permutation_group(elements: Sequence[Perm], label: str) -> FiniteGroup:
    """Wrap a complete, multiplicatively closed list of permutations."""
    G = FiniteGroup(
        elements,
        label=label,
        table_builder=_perm_table_builder,
        keymul=compose,
        keyinv=inverse,
    )
    G._identity = G.index[Perm.identity(elements[0].degree)]
    return G


def group_from_generators(gens: Sequence[Perm], degree: int, label: str) -> FiniteGroup:
    for g in gens:
        if g.degree != degree:
            raise GroupError(f"generator {g} has degree {g.degree}, expected {degree}")
    ident = Perm.identity(degree)
    seen = {ident}
    out = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    out.append(y)
                    nxt.append(y)
        frontier = nxt
    first = out[:1]
    rest = sorted(out[1:], key=lambda p: p.images)
    return permutation_group(first + rest, label)


SYMMETRIC_MAX = 8


def symmetric_group(n: int) -> FiniteGroup:
    if not 1 <= n <= SYMMETRIC_MAX:
        raise GroupError(f"symmetric_group needs 1 <= n <= {SYMMETRIC_MAX}, got {n}")
    elements = [Perm(p) for p in itertools.permutations(range(n))]
    G = permutation_group(elements, f"S{n}")
    G._identity = 0
    G.spec = f"S{n}"
    return G


def alternating_group(n: int) -> FiniteGroup:
    if not 1 <= n <= SYMMETRIC_MAX:
        raise GroupError(f"alternating_group needs 1 <= n <= {SYMMETRIC_MAX}, got {n}")
    elements = [Perm(p) for p in itertools.permutations(range(n)) if _is_even(p)]
    G = permutation_group(elements, f"A{n}")
    G.spec = f"A{n}"
    return G


def _is_even(p: Sequence[int]) -> bool:
    return sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j]) % 2 == 0


def cyclic_group(n: int) -> FiniteGroup:
    """Z_n realized as the group generated by an n-cycle."""
    if n < 1:
        raise GroupError("cyclic group order must be positive")
    gen = Perm(tuple((i + 1) % n for i in range(n)))
    G = group_from_generators([gen], n, f"Z{n}")
    G.spec = f"Z{n}"
    return G


def klein_four() -> FiniteGroup:
    G = group_from_generators(
        [parse_cycles("(1 2)(3 4)", 4), parse_cycles("(1 3)(2 4)", 4)], 4, "V"
    )
    G.spec = "V"
    return G


def generated_subgroup(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    return G.generated(gens)


def element_index(G: FiniteGroup, cycles: str) -> int:
    """Index of the permutation written in cycle notation (permutation groups)."""
    degree = G.elements[0].degree
    return G.index[parse_cycles(cycles, degree)]


# -- quotients -----------------------------------------------------------------


class Quotient:
    """The group ``P/N`` with its projection ``P -> P/N``.

    Each coset is represented by its least parent index; the quotient's element
    keys are the parent keys of those representatives.
    """

    def __init__(self, P: Subgroup, N: Subgroup) -> None:
        G = P.group
        if not N <= P:
            raise GroupError("N is not contained in P")
        if not N.is_normal(P):
            raise GroupError("N is not normal")
        t = G.table
        p_idx = P.indices
        rep_of_p = t[p_idx[:, None], N.indices[None, :]].min(axis=1).astype(np.int64)
        reps = np.unique(rep_of_p)
        rep_of = np.full(G.order, -1, dtype=np.int64)
        rep_of[p_idx] = rep_of_p
        qpos = np.full(G.order, -1, dtype=np.int64)
        qpos[reps] = np.arange(len(reps))
        qtab = qpos[rep_of[t[reps[:, None], reps[None, :]]]]
        label = f"{_label(P)}/{N.order}" if N.order > 1 else _label(P)
        self.group = FiniteGroup([G.elements[r] for r in reps], qtab, label=label,
                                 identity=int(qpos[rep_of[G.identity]]))
        self.P = P
        self.N = N
        self.reps = reps
        self.group._cache["formatter"] = lambda q: G.format(int(reps[q]))
        proj = np.full(G.order, -1, dtype=np.int64)
        proj[p_idx] = qpos[rep_of_p]
        self.projection = Homomorphism(P, self.group, proj, check=False)

    def coset(self, q: int) -> np.ndarray:
        """Parent indices of the coset with quotient index ``q``."""
        return np.nonzero(self.projection.table == q)[0]

    def lift(self, q: int) -> int:
        return int(self.reps[q])

    def preimage(self, T: Subgroup) -> Subgroup:
        return self.projection.preimage(T)


def _label(P: Subgroup) -> str:
    return P.group.label if P.order == P.group.order else f"{P.group.label}[{P.order}]"


def quotient(P: Subgroup | FiniteGroup, N: Subgroup) -> Quotient:
    """``P/N`` for ``N`` normal in ``P``; cached on the parent group."""
    if isinstance(P, FiniteGroup):
        P = P.whole()
    key = ("quotient", P.bits, N.bits)
    cache = P.group._cache
    if key not in cache:
        cache[key] = Quotient(P, N)
    return cache[key]
