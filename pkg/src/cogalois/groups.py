"""Finite groups as multiplication tables.

Elements are the integers ``0..n-1`` and the identity is always ``0``.
Subgroups are handled internally as integer bitmasks over element indices;
the public :class:`Subgroup` wraps a mask together with its sorted members.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import (
    NoIdentity,
    NoInverse,
    NotAssociative,
    NotNormal,
    OrderBoundExceeded,
    ParseError,
)

DEFAULT_ORDER_BOUND = 1024
EXHAUSTIVE_ASSOC_LIMIT = 256
ASSOC_SAMPLES = 100_000


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def to_mask(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _check_table(table: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(table)
    if n == 0:
        raise ParseError("empty table")
    rows = []
    for i, row in enumerate(table):
        if len(row) != n:
            raise ParseError(f"row {i} has length {len(row)}, expected {n}")
        r = []
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise ParseError(f"entry ({i}, {j}) is not an integer")
            v = int(v)
            if not 0 <= v < n:
                raise ParseError(f"entry ({i}, {j}) = {v} out of range")
            r.append(v)
        rows.append(r)
    return rows


def _validate(rows: list[list[int]], rng_seed: int = 0) -> list[int]:
    n = len(rows)
    for x in range(n):
        if rows[0][x] != x or rows[x][0] != x:
            raise NoIdentity(x)
    inverse = [-1] * n
    for x in range(n):
        row = rows[x]
        for y in range(n):
            if row[y] == 0 and rows[y][x] == 0:
                inverse[x] = y
                break
        if inverse[x] < 0:
            raise NoInverse(x)
    t = np.asarray(rows, dtype=np.int64)
    if n <= EXHAUSTIVE_ASSOC_LIMIT:
        left = t[t]  # left[a, b, c] = (ab)c
        right = t[np.arange(n)[:, None, None], t[None, :, :]]  # a(bc)
        bad = np.argwhere(left != right)
        if len(bad):
            a, b, c = (int(v) for v in bad[0])
            raise NotAssociative(a, b, c)
    else:
        rng = np.random.default_rng(rng_seed)
        abc = rng.integers(0, n, size=(ASSOC_SAMPLES, 3))
        a, b, c = abc[:, 0], abc[:, 1], abc[:, 2]
        bad = np.nonzero(t[t[a, b], c] != t[a, t[b, c]])[0]
        if len(bad):
            i = bad[0]
            raise NotAssociative(int(a[i]), int(b[i]), int(c[i]))
    return inverse


class FiniteGroup:
    """A finite group given by its multiplication table (identity at index 0)."""

    def __init__(self, table: Sequence[Sequence[int]], name: Optional[str] = None):
        rows = _check_table(table)
        self.inverse = _validate(rows)
        self.table = rows
        self.order = len(rows)
        self.identity = 0
        self.name = name
        self._gens_cache: dict[int, list[int]] = {}
        self._join_cache: dict[tuple[int, int], int] = {}

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def conj(self, g: int, x: int) -> int:
        """g x g^-1"""
        return self.table[self.table[g][x]][self.inverse[g]]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverse[a], -k
        r = 0
        for _ in range(k):
            r = self.table[r][a]
        return r

    @cached_property
    def np_table(self) -> np.ndarray:
        return np.asarray(self.table, dtype=np.int64)

    @cached_property
    def element_orders(self) -> list[int]:
        out = []
        for a in range(self.order):
            k, x = 1, a
            while x != 0:
                x = self.table[x][a]
                k += 1
            out.append(k)
        return out

    @cached_property
    def is_abelian(self) -> bool:
        t = self.np_table
        return bool((t == t.T).all())

    @cached_property
    def exponent(self) -> int:
        e = 1
        for o in self.element_orders:
            e = e * o // gcd(e, o)
        return e

    @cached_property
    def order_statistics(self) -> tuple:
        counts: dict[int, int] = {}
        for o in self.element_orders:
            counts[o] = counts.get(o, 0) + 1
        return tuple(sorted(counts.items()))

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    # subgroup machinery -------------------------------------------------

    def closure(self, gens: Iterable[int], base: Sequence[int] = (0,)) -> list[int]:
        """Elements of the subgroup generated by ``base`` (a subgroup) and ``gens``.

        ``base`` must list the elements of a subgroup; ``gens`` must include
        generators for it when it is not trivial.
        """
        gens = list(gens)
        elems = list(base)
        seen = to_mask(elems)
        t = self.table
        i = 0
        while i < len(elems):
            row = t[elems[i]]
            for g in gens:
                y = row[g]
                if not (seen >> y) & 1:
                    seen |= 1 << y
                    elems.append(y)
            i += 1
        return elems

    def closure_mask(self, gens: Iterable[int]) -> int:
        return to_mask(self.closure(gens))

    def generators_of(self, mask: int) -> list[int]:
        """A small generating set of the subgroup ``mask`` (cached)."""
        got = self._gens_cache.get(mask)
        if got is None:
            got = self._greedy_generators(mask)
            self._gens_cache[mask] = got
        return got

    def _greedy_generators(self, mask: int) -> list[int]:
        gens: list[int] = []
        cur = 1
        orders = self.element_orders
        while cur != mask:
            rest = bits(mask & ~cur)
            if len(rest) * self.order <= 1 << 16:
                best, best_mask = -1, 0
                for x in rest:
                    m = self.closure_mask(gens + [x])
                    if popcount(m) > popcount(best_mask):
                        best, best_mask = x, m
            else:
                best = max(rest, key=lambda x: (orders[x], -x))
                best_mask = self.closure_mask(gens + [best])
            gens.append(best)
            cur = best_mask
        return gens

    @cached_property
    def generators(self) -> list[int]:
        """Greedy generating set: each step adjoins the element enlarging the span most."""
        return self._greedy_generators(self.full_mask)

    def join_masks(self, a: int, b: int) -> int:
        if a & b == b:
            return a
        if a & b == a:
            return b
        key = (a, b) if a < b else (b, a)
        got = self._join_cache.get(key)
        if got is None:
            got = to_mask(self.closure(self.generators_of(a) + self.generators_of(b), bits(a)))
            self._join_cache[key] = got
        return got

    def is_subgroup_mask(self, mask: int) -> bool:
        if not mask & 1:
            return False
        el = bits(mask)
        t = self.table
        return all((mask >> t[a][b]) & 1 for a in el for b in el)

    def is_normal_mask(self, mask: int) -> bool:
        gens = self.generators
        for x in self.generators_of(mask):
            for g in gens:
                if not (mask >> self.conj(g, x)) & 1:
                    return False
        return True

    def conjugate_mask(self, g: int, mask: int) -> int:
        return to_mask(self.conj(g, x) for x in bits(mask))

    def core_mask(self, mask: int) -> int:
        """Intersection of all conjugates of a subgroup."""
        out = mask
        for g in range(self.order):
            out &= self.conjugate_mask(g, mask)
        return out

    @cached_property
    def center_mask(self) -> int:
        t = self.table
        gens = self.generators
        return to_mask(x for x in range(self.order) if all(t[x][g] == t[g][x] for g in gens))

    def subgroup(self, members: Iterable[int] | int) -> "Subgroup":
        mask = members if isinstance(members, int) else to_mask(members)
        return Subgroup(self, mask)

    def subgroup_masks(self, bound: int = DEFAULT_ORDER_BOUND) -> list[int]:
        """All subgroups, canonically ordered by their sorted member tuples."""
        if self.order > bound:
            raise OrderBoundExceeded(f"group of order {self.order} exceeds bound {bound}")
        cached = self.__dict__.get("_subgroup_masks")
        if cached is None:
            cached = _enumerate_subgroups(self)
            self.__dict__["_subgroup_masks"] = cached
        return cached

    @cached_property
    def normal_subgroup_masks(self) -> list[int]:
        return [m for m in self.subgroup_masks() if self.is_normal_mask(m)]

    @cached_property
    def is_nilpotent(self) -> bool:
        """A finite group is nilpotent iff every Sylow subgroup is normal (unique)."""
        n = self.order
        for p in prime_factors(n):
            pa = 1
            while n % (pa * p) == 0:
                pa *= p
            count = sum(1 for o in self.element_orders if pa % o == 0)
            if count != pa:
                return False
        return True

    def primary_mask(self, p: int) -> int:
        """Elements of p-power order (the Sylow p-subgroup when nilpotent)."""
        out = 0
        for x, o in enumerate(self.element_orders):
            while o % p == 0:
                o //= p
            if o == 1:
                out |= 1 << x
        return out

    def coprime_mask(self, p: int) -> int:
        """Elements of order prime to p."""
        return to_mask(x for x, o in enumerate(self.element_orders) if o % p)


def canonical_key(mask: int) -> tuple[int, ...]:
    return tuple(bits(mask))


def _enumerate_subgroups(G: FiniteGroup) -> list[int]:
    # cyclic extension: start from cyclic subgroups and keep adjoining one element
    reps: dict[int, int] = {}
    for g in range(G.order):
        m = G.closure_mask([g])
        if m not in reps:
            reps[m] = g
            G._gens_cache.setdefault(m, [g] if g else [])
    cyclic = list(reps.items())
    found = set(reps)
    layer = list(reps)
    while layer:
        nxt = []
        for h in layer:
            hg = G.generators_of(h)
            hel = bits(h)
            for cm, g in cyclic:
                if cm & h == cm:
                    continue
                k = to_mask(G.closure(hg + [g], hel))
                if k not in found:
                    found.add(k)
                    G._gens_cache.setdefault(k, hg + [g])
                    nxt.append(k)
        layer = nxt
    return sorted(found, key=canonical_key)


class Subgroup:
    """A subgroup of a finite group; compares by parent identity and members."""

    __slots__ = ("parent", "mask", "members")

    def __init__(self, parent: FiniteGroup, mask: int):
        self.parent = parent
        self.mask = mask
        self.members = tuple(bits(mask))

    def __len__(self) -> int:
        return len(self.members)

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return bool((self.mask >> x) & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Subgroup) and other.parent is self.parent and other.mask == self.mask

    def __hash__(self) -> int:
        return hash(self.mask)

    def __le__(self, other: "Subgroup") -> bool:
        return self.mask & other.mask == self.mask

    def __repr__(self) -> str:
        return f"Subgroup({list(self.members)})"

    def is_normal(self) -> bool:
        return self.parent.is_normal_mask(self.mask)

    def index(self) -> int:
        return self.parent.order // len(self.members)


class SubgroupLattice:
    """All subgroups of a group (optionally those containing a base subgroup)."""

    def __init__(self, parent: FiniteGroup, masks: list[int], base: int = 1):
        self.parent = parent
        self.base = base
        self.masks = masks
        self.nodes = [Subgroup(parent, m) for m in masks]
        self._pos = {m: i for i, m in enumerate(masks)}

    def __len__(self) -> int:
        return len(self.masks)

    def __iter__(self) -> Iterator[Subgroup]:
        return iter(self.nodes)

    def __contains__(self, s: Subgroup | int) -> bool:
        m = s.mask if isinstance(s, Subgroup) else s
        return m in self._pos

    def position(self, s: Subgroup | int) -> int:
        return self._pos[s.mask if isinstance(s, Subgroup) else s]

    @property
    def bottom(self) -> Subgroup:
        return Subgroup(self.parent, self.base)

    @property
    def top(self) -> Subgroup:
        return Subgroup(self.parent, self.parent.full_mask)

    def meet(self, a: Subgroup, b: Subgroup) -> Subgroup:
        return Subgroup(self.parent, a.mask & b.mask)

    def join(self, a: Subgroup, b: Subgroup) -> Subgroup:
        return Subgroup(self.parent, self.parent.join_masks(a.mask, b.mask))


@dataclass(frozen=True)
class GroupMorphism:
    source: FiniteGroup
    target: FiniteGroup
    map: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.map[x]

    def is_homomorphism(self) -> bool:
        m, ts, tt = self.map, self.source.table, self.target.table
        if m[0] != 0:
            return False
        n = self.source.order
        return all(m[ts[x][y]] == tt[m[x]][m[y]] for x in range(n) for y in range(n))

    def kernel(self) -> Subgroup:
        return Subgroup(self.source, to_mask(x for x, v in enumerate(self.map) if v == 0))

    def image_mask(self) -> int:
        return to_mask(self.map)

    def is_bijective(self) -> bool:
        return self.source.order == self.target.order and len(set(self.map)) == len(self.map)

    def compose(self, inner: "GroupMorphism") -> "GroupMorphism":
        """self after inner."""
        return GroupMorphism(inner.source, self.target, tuple(self.map[v] for v in inner.map))

    def inverse(self) -> "GroupMorphism":
        inv = [0] * len(self.map)
        for x, v in enumerate(self.map):
            inv[v] = x
        return GroupMorphism(self.target, self.source, tuple(inv))


# construction ----------------------------------------------------------------


def make_group(table: Sequence[Sequence[int]], name: Optional[str] = None) -> FiniteGroup:
    """Validate a multiplication table and wrap it as a group."""
    return FiniteGroup(table, name)


def generated_subgroup(G: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    seed = list(seed)
    for s in seed:
        if not 0 <= s < G.order:
            raise ParseError(f"element {s} not in group")
    return Subgroup(G, G.closure_mask(seed))


def all_subgroups(
    G: FiniteGroup, above: Optional[Subgroup] = None, bound: int = DEFAULT_ORDER_BOUND
) -> SubgroupLattice:
    masks = G.subgroup_masks(bound)
    base = 1
    if above is not None:
        base = above.mask
        masks = [m for m in masks if m & base == base]
    return SubgroupLattice(G, masks, base)


def quotient(G: FiniteGroup, N: Subgroup | int, name: Optional[str] = None) -> tuple[FiniteGroup, GroupMorphism]:
    """Quotient by a normal subgroup; cosets are labelled by their least element."""
    nmask = N.mask if isinstance(N, Subgroup) else N
    if not G.is_subgroup_mask(nmask) or not G.is_normal_mask(nmask):
        raise NotNormal("subgroup is not normal")
    t = G.table
    nel = bits(nmask)
    label = [-1] * G.order
    reps = []
    for x in range(G.order):
        if label[x] < 0:
            for n in nel:
                label[t[x][n]] = len(reps)
            reps.append(x)
    table = [[label[t[a][b]] for b in reps] for a in reps]
    Q = FiniteGroup(table, name)
    return Q, GroupMorphism(G, Q, tuple(label))


def direct_product(G: FiniteGroup, H: FiniteGroup, name: Optional[str] = None) -> FiniteGroup:
    """Pairs (g, h) coded as g*|H| + h."""
    m = H.order
    tg, th = G.table, H.table
    table = [
        [tg[a // m][b // m] * m + th[a % m][b % m] for b in range(G.order * m)]
        for a in range(G.order * m)
    ]
    return FiniteGroup(table, name)


def semidirect_product(
    N: FiniteGroup, H: FiniteGroup, act: Sequence[Sequence[int]], name: Optional[str] = None
) -> FiniteGroup:
    """N x| H with (x, g)(y, h) = (x * g(y), g h), pairs coded as x*|H| + g."""
    m = H.order
    tn, th = N.table, H.table
    size = N.order * m
    table = []
    for a in range(size):
        x, g = divmod(a, m)
        row_n, row_h, ag = tn[x], th[g], act[g]
        table.append([row_n[ag[b // m]] * m + row_h[b % m] for b in range(size)])
    return FiniteGroup(table, name)


def group_from_permutations(gens: Sequence[Sequence[int]], name: Optional[str] = None) -> FiniteGroup:
    """The permutation group generated by ``gens``; elements in discovery order."""
    degree = len(gens[0])
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    i = 0
    while i < len(elems):
        p = elems[i]
        for g in gens:
            q = tuple(g[p[k]] for k in range(degree))
            if q not in index:
                index[q] = len(elems)
                elems.append(q)
        i += 1

    # product a*b is the composite "b first, then a"
    table = [[index[tuple(a[b[k]] for k in range(degree))] for b in elems] for a in elems]
    return FiniteGroup(table, name)


# maps between groups ----------------------------------------------------------


class _Schedule:
    """Spanning-tree schedule for extending values from generators to a group.

    For each generator level ``i`` the list ``ops[i]`` holds tuples
    ``(is_set, y, x, j)`` meaning ``val[y] := val[x] * x(v_j)`` for a tree edge or a
    consistency check for a non-tree edge ``y = x * g_j``.  Checking every edge of
    the Cayley graph is equivalent to the crossed-homomorphism law.
    """

    def __init__(self, G: FiniteGroup, gens: Sequence[int]):
        self.gens = list(gens)
        t = G.table
        reached = 1
        order = [0]
        self.ops: list[list[tuple[bool, int, int, int]]] = []
        self.layers: list[list[int]] = []
        for i in range(len(self.gens)):
            ops = []
            queue = list(order)
            n_old = len(order)
            q = 0
            while q < len(queue):
                x = queue[q]
                row = t[x]
                for j in range(i + 1):
                    if q < n_old and j < i:
                        continue
                    y = row[self.gens[j]]
                    if not (reached >> y) & 1:
                        reached |= 1 << y
                        queue.append(y)
                        ops.append((True, y, x, j))
                    else:
                        ops.append((False, y, x, j))
                q += 1
            order = queue
            self.ops.append(ops)
            self.layers.append(list(order))


def schedule(G: FiniteGroup) -> _Schedule:
    s = G.__dict__.get("_schedule")
    if s is None:
        s = _Schedule(G, G.generators)
        G.__dict__["_schedule"] = s
    return s


def extend_maps(
    G: FiniteGroup,
    target_table: Sequence[Sequence[int]],
    act: Optional[Sequence[Sequence[int]]] = None,
    candidates: Optional[Sequence[Sequence[int]]] = None,
    injective: bool = False,
) -> Iterator[list[int]]:
    """Yield every map f: G -> T with f(x g) = f(x) * x(f(g)) on all edges.

    With ``act`` None this enumerates homomorphisms into the group with table
    ``target_table``; otherwise crossed homomorphisms for the action
    ``act[x][t]``.  Candidate values per generator can be restricted.
    """
    sch = schedule(G)
    k = len(sch.gens)
    n_target = len(target_table)
    n = G.order
    if candidates is None:
        candidates = [range(n_target)] * k
    val = [-1] * n
    val[0] = 0
    if k == 0:
        yield list(val)
        return
    v = [0] * k
    T = target_table
    ops_all = sch.ops
    layers = sch.layers

    def rec(i: int) -> Iterator[list[int]]:
        ops = ops_all[i]
        for c in candidates[i]:
            v[i] = c
            ok = True
            if act is None:
                for is_set, y, x, j in ops:
                    w = T[val[x]][v[j]]
                    if is_set:
                        val[y] = w
                    elif val[y] != w:
                        ok = False
                        break
            else:
                for is_set, y, x, j in ops:
                    w = T[val[x]][act[x][v[j]]]
                    if is_set:
                        val[y] = w
                    elif val[y] != w:
                        ok = False
                        break
            if not ok:
                continue
            if injective:
                layer = layers[i]
                if len({val[h] for h in layer}) != len(layer):
                    continue
            if i + 1 == k:
                yield list(val)
            else:
                yield from rec(i + 1)

    yield from rec(0)


def homomorphisms(G: FiniteGroup, H: FiniteGroup) -> list[GroupMorphism]:
    ho = H.element_orders
    cands = [[y for y in range(H.order) if G.element_orders[g] % ho[y] == 0] for g in schedule(G).gens]
    maps = sorted(tuple(m) for m in extend_maps(G, H.table, candidates=cands))
    return [GroupMorphism(G, H, m) for m in maps]


def _iso_candidates(G: FiniteGroup, H: FiniteGroup) -> list[list[int]]:
    ho = H.element_orders
    return [[y for y in range(H.order) if ho[y] == G.element_orders[g]] for g in schedule(G).gens]


def isomorphisms(G: FiniteGroup, H: FiniteGroup) -> Iterator[GroupMorphism]:
    if G.order != H.order or G.order_statistics != H.order_statistics:
        return
    for m in extend_maps(G, H.table, candidates=_iso_candidates(G, H), injective=True):
        yield GroupMorphism(G, H, tuple(m))


def find_isomorphism(G: FiniteGroup, H: FiniteGroup) -> Optional[GroupMorphism]:
    """First isomorphism in canonical search order, or None."""
    if G.is_abelian != H.is_abelian:
        return None
    return next(isomorphisms(G, H), None)


def automorphisms(G: FiniteGroup, bound: int = DEFAULT_ORDER_BOUND) -> list[GroupMorphism]:
    if G.order > bound:
        raise OrderBoundExceeded(f"group of order {G.order} exceeds bound {bound}")
    cached = G.__dict__.get("_automorphisms")
    if cached is None:
        maps = sorted(tuple(m) for m in extend_maps(G, G.table, candidates=_iso_candidates(G, G), injective=True))
        cached = [GroupMorphism(G, G, m) for m in maps]
        G.__dict__["_automorphisms"] = cached
    return cached


class AutomorphismGroup:
    """Aut(G) as a table group; element i acts by ``maps[i]``; product is composition."""

    def __init__(self, G: FiniteGroup, limit: int = 4096):
        auts = automorphisms(G)
        if len(auts) > limit:
            raise OrderBoundExceeded(f"|Aut| = {len(auts)} exceeds limit {limit}")
        self.base = G
        self.maps = [a.map for a in auts]
        gens = G.generators
        key = {tuple(m[g] for g in gens): i for i, m in enumerate(self.maps)}
        table = []
        for a in self.maps:
            table.append([key[tuple(a[b[g]] for g in gens)] for b in self.maps])
        self.group = FiniteGroup(table, f"Aut({G.name})")


def automorphism_group(G: FiniteGroup, limit: int = 4096) -> AutomorphismGroup:
    cached = G.__dict__.get("_autgroup")
    if cached is None:
        cached = AutomorphismGroup(G, limit)
        G.__dict__["_autgroup"] = cached
    return cached


# JSON -----------------------------------------------------------------------


def group_to_json(G: FiniteGroup) -> dict:
    out: dict = {}
    if G.name:
        out["name"] = G.name
    out["order"] = G.order
    out["table"] = [list(r) for r in G.table]
    return out


def group_from_json(obj: dict) -> FiniteGroup:
    if not isinstance(obj, dict) or "table" not in obj:
        raise ParseError("group object needs a 'table'")
    table = obj["table"]
    if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
        raise ParseError("'table' must be a list of lists")
    if "order" in obj and obj["order"] != len(table):
        raise ParseError(f"'order' is {obj['order']} but table has {len(table)} rows")
    return make_group(table, obj.get("name"))

