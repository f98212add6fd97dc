"""Operator groups: a group Gamma acting on a group G by automorphisms.

An action is stored as a table ``act[gamma][x]``.  Ideals are the normal
subgroups of G that every gamma maps into themselves.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import (
    BadShape,
    NotAnAction,
    NotAnIdeal,
    NotAutomorphism,
    OrderBoundExceeded,
    ParseError,
)
from .groups import (
    DEFAULT_ORDER_BOUND,
    FiniteGroup,
    GroupMorphism,
    Subgroup,
    automorphism_group,
    bits,
    group_from_json,
    group_to_json,
    homomorphisms,
    quotient,
    semidirect_product,
    to_mask,
)


@dataclass(frozen=True)
class GroupAction:
    gamma: FiniteGroup
    g: FiniteGroup
    act: tuple[tuple[int, ...], ...]

    def __call__(self, gamma: int, x: int) -> int:
        return self.act[gamma][x]


def _validate_action(gamma: FiniteGroup, g: FiniteGroup, act: list[list[int]]) -> None:
    A = np.asarray(act, dtype=np.int64)
    n = g.order
    T = g.np_table
    for s in range(gamma.order):
        row = A[s]
        if len(set(row.tolist())) != n:
            raise NotAutomorphism(s, ": not bijective")
        bad = np.argwhere(row[T] != T[row[:, None], row[None, :]])
        if len(bad):
            x, y = (int(v) for v in bad[0])
            raise NotAutomorphism(s, f": fails on ({x}, {y})")
    if (A[0] != np.arange(n)).any():
        raise NotAnAction(0, 0)
    G = gamma.np_table
    composite = A[np.arange(gamma.order)[:, None, None], A[None, :, :]]  # sigma(tau(x))
    bad = np.argwhere((A[G] != composite).any(axis=2))
    if len(bad):
        s, t = (int(v) for v in bad[0])
        raise NotAnAction(s, t)


class GammaGroup:
    """A finite group ``g`` with an action of ``gamma`` by automorphisms."""

    def __init__(
        self,
        gamma: FiniteGroup,
        g: FiniteGroup,
        act: Sequence[Sequence[int]],
        validate: bool = True,
    ):
        act = [list(map(int, r)) for r in act]
        if len(act) != gamma.order or any(len(r) != g.order for r in act):
            raise BadShape(f"action table must be {gamma.order} x {g.order}")
        for r in act:
            for v in r:
                if not 0 <= v < g.order:
                    raise ParseError(f"action value {v} out of range")
        if validate:
            _validate_action(gamma, g, act)
        self.gamma = gamma
        self.g = g
        self.act = act
        self._ideal_cache: dict[int, int] = {}

    def __repr__(self) -> str:
        return f"GammaGroup({self.gamma.name or '?'} on {self.g.name or '?'})"

    @property
    def action(self) -> GroupAction:
        return GroupAction(self.gamma, self.g, tuple(tuple(r) for r in self.act))

    @cached_property
    def np_act(self) -> np.ndarray:
        return np.asarray(self.act, dtype=np.int64)

    @cached_property
    def fix_mask(self) -> int:
        """Kernel of the action, as a mask on Gamma."""
        ident = list(range(self.g.order))
        return to_mask(s for s in range(self.gamma.order) if self.act[s] == ident)

    @property
    def fix(self) -> Subgroup:
        return Subgroup(self.gamma, self.fix_mask)

    @cached_property
    def is_trivial(self) -> bool:
        return self.fix_mask == self.gamma.full_mask

    @cached_property
    def invariants_mask(self) -> int:
        """Elements of g fixed by all of Gamma."""
        gens = self.gamma.generators
        return to_mask(x for x in range(self.g.order) if all(self.act[s][x] == x for s in gens))

    def apply_mask(self, s: int, mask: int) -> int:
        a = self.act[s]
        return to_mask(a[x] for x in bits(mask))

    def is_invariant_mask(self, mask: int) -> bool:
        return all(self.apply_mask(s, mask) == mask for s in self.gamma.generators)

    def is_ideal_mask(self, mask: int) -> bool:
        g = self.g
        return g.is_subgroup_mask(mask) and g.is_normal_mask(mask) and self.is_invariant_mask(mask)

    @cached_property
    def ideal_masks(self) -> list[int]:
        return [m for m in self.g.normal_subgroup_masks if self.is_invariant_mask(m)]

    def ideal_closure(self, mask: int) -> int:
        """Least ideal containing the elements of ``mask``."""
        got = self._ideal_cache.get(mask)
        if got is not None:
            return got
        g = self.g
        maps = [[g.conj(h, x) for x in range(g.order)] for h in g.generators]
        maps += [self.act[s] for s in self.gamma.generators]
        orbit = bits(mask)
        seen = mask
        i = 0
        while i < len(orbit):
            x = orbit[i]
            for f in maps:
                y = f[x]
                if not (seen >> y) & 1:
                    seen |= 1 << y
                    orbit.append(y)
            i += 1
        out = g.closure_mask(orbit)
        self._ideal_cache[mask] = out
        return out


def make_gamma_group(gamma: FiniteGroup, g: FiniteGroup, act: Sequence[Sequence[int]]) -> GammaGroup:
    return GammaGroup(gamma, g, act, validate=True)


def trivial_action(gamma: FiniteGroup, g: FiniteGroup) -> GammaGroup:
    return GammaGroup(gamma, g, [list(range(g.order))] * gamma.order, validate=False)


# actions ------------------------------------------------------------------


def all_actions(gamma: FiniteGroup, g: FiniteGroup, aut_limit: int = 4096) -> list[list[list[int]]]:
    """Every action of gamma on g, i.e. Hom(gamma, Aut(g)), in canonical order."""
    aut = automorphism_group(g, aut_limit)
    out = []
    for h in homomorphisms(gamma, aut.group):
        out.append([list(aut.maps[h.map[s]]) for s in range(gamma.order)])
    out.sort()
    return out


@dataclass(frozen=True)
class UnitGroup:
    """(Z/k)^x as a table group; ``units[i]`` is the residue of element i."""

    k: int
    units: tuple[int, ...]
    group: FiniteGroup


def unit_group(k: int) -> UnitGroup:
    units = [u for u in range(1, k) if gcd(u, k) == 1] if k > 1 else [0]
    pos = {u: i for i, u in enumerate(units)}
    table = [[pos[(a * b) % k] if k > 1 else 0 for b in units] for a in units]
    return UnitGroup(k, tuple(units), FiniteGroup(table, f"U({k})"))


def characters(gamma: FiniteGroup, k: int) -> list[tuple[int, ...]]:
    """Homomorphisms gamma -> (Z/k)^x, as tuples of residues, canonically sorted."""
    U = unit_group(k)
    out = sorted(tuple(U.units[v] for v in h.map) for h in homomorphisms(gamma, U.group))
    return out


def character_action(gamma: FiniteGroup, g: FiniteGroup, chi: Sequence[int]) -> GammaGroup:
    """gamma acts on the abelian group g by x -> chi(gamma) x."""
    if not g.is_abelian:
        raise BadShape("character actions need an abelian group")
    e = g.exponent
    powers = [[0] * g.order for _ in range(e)]
    for x in range(g.order):
        y = 0
        for u in range(e):
            powers[u][x] = y
            y = g.table[y][x]
    act = [powers[chi[s] % e] for s in range(gamma.order)]
    return GammaGroup(gamma, g, act, validate=False)


# semidirect products --------------------------------------------------------


@dataclass(frozen=True)
class SemidirectData:
    """E = g x| gamma with (x, s) coded as x*|gamma| + s; p projects, s1 is the zero section."""

    e: FiniteGroup
    p: GroupMorphism
    s1: GroupMorphism
    inclusion: GroupMorphism


def semidirect(gg: GammaGroup, bound: int = DEFAULT_ORDER_BOUND) -> SemidirectData:
    m, n = gg.gamma.order, gg.g.order
    if m * n > bound:
        raise OrderBoundExceeded(f"semidirect product of order {m * n} exceeds bound {bound}")
    E = semidirect_product(gg.g, gg.gamma, gg.act, f"{gg.g.name}:{gg.gamma.name}")
    p = GroupMorphism(E, gg.gamma, tuple(c % m for c in range(m * n)))
    s1 = GroupMorphism(gg.gamma, E, tuple(range(m)))
    inc = GroupMorphism(gg.g, E, tuple(x * m for x in range(n)))
    return SemidirectData(E, p, s1, inc)


def action_from_semidirect(sd: SemidirectData) -> list[list[int]]:
    """Recover the action by conjugating the kernel of p with the zero section."""
    E = sd.e
    m = sd.s1.source.order
    n = sd.inclusion.source.order
    return [[E.conj(sd.s1(s), sd.inclusion(x)) // m for x in range(n)] for s in range(m)]


# ideals ---------------------------------------------------------------------


class Ideal:
    __slots__ = ("parent", "mask", "members")

    def __init__(self, parent: GammaGroup, mask: int):
        self.parent = parent
        self.mask = mask
        self.members = tuple(bits(mask))

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return bool((self.mask >> x) & 1)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Ideal) and other.parent is self.parent and other.mask == self.mask

    def __hash__(self) -> int:
        return hash(self.mask)

    def __le__(self, other: "Ideal") -> bool:
        return self.mask & other.mask == self.mask

    def __repr__(self) -> str:
        return f"Ideal({list(self.members)})"

    @property
    def subgroup(self) -> Subgroup:
        return Subgroup(self.parent.g, self.mask)


def as_ideal(gg: GammaGroup, a: Ideal | Subgroup | Iterable[int] | int) -> Ideal:
    if isinstance(a, (Ideal, Subgroup)):
        mask = a.mask
    elif isinstance(a, int):
        mask = a
    else:
        mask = to_mask(a)
    if not gg.is_ideal_mask(mask):
        raise NotAnIdeal(f"{bits(mask)} is not an ideal")
    return Ideal(gg, mask)


class IdealLattice:
    def __init__(self, gg: GammaGroup):
        self.parent = gg
        self.masks = list(gg.ideal_masks)
        self.nodes = [Ideal(gg, m) for m in self.masks]
        self._pos = {m: i for i, m in enumerate(self.masks)}

    def __len__(self) -> int:
        return len(self.masks)

    def __iter__(self) -> Iterator[Ideal]:
        return iter(self.nodes)

    def position(self, a: Ideal | int) -> int:
        return self._pos[a.mask if isinstance(a, Ideal) else a]

    @property
    def bottom(self) -> Ideal:
        return Ideal(self.parent, 1)

    @property
    def top(self) -> Ideal:
        return Ideal(self.parent, self.parent.g.full_mask)

    def meet(self, a: Ideal, b: Ideal) -> Ideal:
        return Ideal(self.parent, a.mask & b.mask)

    def join(self, a: Ideal, b: Ideal) -> Ideal:
        return Ideal(self.parent, self.parent.g.join_masks(a.mask, b.mask))

    @cached_property
    def meet_table(self) -> list[list[int]]:
        return [[self._pos[a & b] for b in self.masks] for a in self.masks]

    @cached_property
    def join_table(self) -> list[list[int]]:
        g = self.parent.g
        return [[self._pos[g.join_masks(a, b)] for b in self.masks] for a in self.masks]


def all_ideals(gg: GammaGroup, bound: int = DEFAULT_ORDER_BOUND) -> IdealLattice:
    if gg.g.order > bound:
        raise OrderBoundExceeded(f"group of order {gg.g.order} exceeds bound {bound}")
    return IdealLattice(gg)


def quotient_gamma(gg: GammaGroup, a: Ideal | Subgroup | int) -> tuple[GammaGroup, GroupMorphism]:
    """The quotient Gamma-group g/a and the projection; cosets labelled by least member."""
    a = as_ideal(gg, a)
    Q, proj = quotient(gg.g, a.mask)
    reps = [-1] * Q.order
    for x, lab in enumerate(proj.map):
        if reps[lab] < 0:
            reps[lab] = x
    act = [[proj.map[row[r]] for r in reps] for row in gg.act]
    return GammaGroup(gg.gamma, Q, act, validate=False), proj


# JSON -----------------------------------------------------------------------


def gamma_group_to_json(gg: GammaGroup) -> dict:
    return {"gamma": group_to_json(gg.gamma), "g": group_to_json(gg.g), "action": [list(r) for r in gg.act]}


def gamma_group_from_json(obj: dict) -> GammaGroup:
    for key in ("gamma", "g", "action"):
        if key not in obj:
            raise ParseError(f"gamma-group object needs {key!r}")
    gamma = group_from_json(obj["gamma"])
    g = group_from_json(obj["g"])
    act = obj["action"]
    if not isinstance(act, list) or not all(isinstance(r, list) for r in act):
        raise ParseError("'action' must be a list of lists")
    return make_gamma_group(gamma, g, act)
