"""Self-actions of a group on itself and the deformed groups they produce.

For a self-action ``omega`` the deformed product is
``x . y = x * omega(x)^-1 (y)``; when it is associative the identity map is a
bijective cocycle from the original group to the deformed one.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Optional, Sequence

import numpy as np

from .cocycle import Triple, make_cocycle
from .errors import (
    BadParameters,
    BoundError,
    BoundExceeded,
    NotAdequate,
    NotAnAction,
    NotAutomorphism,
    NotKneser,
    TheoremViolation,
)
from .groups import FiniteGroup, bits, find_isomorphism, prime_factors
from .operators import GammaGroup, all_actions


def _is_automorphism(G: FiniteGroup, m: Sequence[int]) -> bool:
    if sorted(m) != list(range(G.order)):
        return False
    T = G.np_table
    a = np.asarray(m)
    return bool((a[T] == T[a[:, None], a[None, :]]).all())


@dataclass(frozen=True)
class SelfAction:
    """omega[g] is the automorphism by which g acts on the group itself."""

    gamma: FiniteGroup
    omega: tuple[tuple[int, ...], ...]

    @cached_property
    def inverse_maps(self) -> list[list[int]]:
        out = []
        for m in self.omega:
            inv = [0] * len(m)
            for x, y in enumerate(m):
                inv[y] = x
            out.append(inv)
        return out

    @cached_property
    def kernel_mask(self) -> int:
        ident = tuple(range(self.gamma.order))
        return sum(1 << g for g, m in enumerate(self.omega) if m == ident)

    @cached_property
    def bullet_table(self) -> list[list[int]]:
        T, inv = self.gamma.table, self.inverse_maps
        return [[T[x][inv[x][y]] for y in range(self.gamma.order)] for x in range(self.gamma.order)]


def self_action(gamma: FiniteGroup, omega: Sequence[Sequence[int]]) -> SelfAction:
    omega = tuple(tuple(int(v) for v in m) for m in omega)
    if len(omega) != gamma.order:
        raise BadParameters("one automorphism per group element is needed")
    for g, m in enumerate(omega):
        if len(m) != gamma.order or not _is_automorphism(gamma, m):
            raise NotAutomorphism(g)
    T = gamma.table
    for a in range(gamma.order):
        for b in range(gamma.order):
            ab = omega[T[a][b]]
            if any(ab[x] != omega[a][omega[b][x]] for x in range(gamma.order)):
                raise NotAnAction(a, b)
    return SelfAction(gamma, omega)


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)], f"C{n}")


def unit_self_action(n: int, u: int, gamma: Optional[FiniteGroup] = None) -> SelfAction:
    """x acts on Z/n by y -> u^x y; needs u^n = 1 mod n."""
    if n < 1 or gcd(u, n) != 1 or pow(u, n, n) != 1 % n:
        raise BadParameters(f"{u} does not define a self-action of Z/{n}")
    gamma = gamma or cyclic_group(n)
    return SelfAction(gamma, tuple(map(tuple, _unit_omega(n, u).tolist())))


def _structural_adequacy(om: np.ndarray) -> bool:
    """omega(theta(g)) == theta o omega(g) o theta^-1 for all g and theta in the image."""
    seen = set()
    for th in om:
        key = th.tobytes()
        if key in seen:
            continue
        seen.add(key)
        th_inv = np.empty_like(th)
        th_inv[th] = np.arange(len(th))
        if not (om[th] == th[om[:, th_inv]]).all():
            return False
    return True


def _bullet(T: np.ndarray, om: np.ndarray) -> np.ndarray:
    inv = np.empty_like(om)
    rows = np.arange(len(om))[:, None]
    inv[rows, om] = np.arange(om.shape[1])[None, :]
    return T[rows, inv]


def _associative(B: np.ndarray) -> bool:
    return bool((B[B, :] == B[:, B]).all())


def is_adequate(sa: SelfAction, cross_check: bool = True) -> bool:
    """Equivariance of omega under its own image; optionally confirmed by associativity."""
    om = np.asarray(sa.omega)
    a = _structural_adequacy(om)
    if cross_check and _associative(_bullet(sa.gamma.np_table, om)) != a:
        raise TheoremViolation("adequacy tests disagree")
    return a


def _unit_omega(n: int, u: int) -> np.ndarray:
    powers = np.asarray([pow(u, x, n) for x in range(n)], dtype=np.int64)
    return (powers[:, None] * np.arange(n)[None, :]) % n


def unit_is_adequate(n: int, u: int, cross_check: bool = True) -> bool:
    """Adequacy of y -> u^x y on Z/n, straight from the definition."""
    om = _unit_omega(n, u)
    a = _structural_adequacy(om)
    if cross_check:
        T = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
        if _associative(_bullet(T, om)) != a:
            raise TheoremViolation(f"adequacy tests disagree for u = {u} mod {n}")
    return a


@dataclass
class Deformation:
    base: SelfAction
    group: FiniteGroup  # the deformed product on the same carrier
    forward: Triple  # (Gamma, deformed, identity)
    backward: Triple  # (deformed, Gamma, identity)


def deform(sa: SelfAction) -> Deformation:
    if not is_adequate(sa):
        raise NotAdequate("self-action is not adequate")
    gamma = sa.gamma
    n = gamma.order
    D = FiniteGroup(sa.bullet_table, f"{gamma.name}_w")
    ident = list(range(n))
    fwd_gg = GammaGroup(gamma, D, [list(m) for m in sa.omega])
    fwd = Triple(fwd_gg, make_cocycle(fwd_gg, ident))
    back_gg = GammaGroup(D, gamma, sa.inverse_maps)
    back = Triple(back_gg, make_cocycle(back_gg, ident))
    if not (fwd.is_bijective and back.is_bijective):
        raise TheoremViolation("deformation cocycles are not bijective")
    k = sa.kernel_mask
    for x in bits(k):
        for y in bits(k):
            if D.table[x][y] != gamma.table[x][y]:
                raise TheoremViolation("deformed product differs on the kernel of omega")
    if not (gamma.is_normal_mask(k) and D.is_subgroup_mask(k) and D.is_normal_mask(k)):
        raise TheoremViolation("kernel of omega is not normal in both groups")
    return Deformation(sa, D, fwd, back)


# cyclic groups ------------------------------------------------------------------


def _vp(p: int, n: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _p_set(n: int) -> set[int]:
    out = {p for p in prime_factors(n) if p != 2}
    if n % 4 == 0:
        out.add(2)
    return out


def adequate_units_brute(n: int) -> list[int]:
    """u with u^r = 1 mod n where r = gcd(n, u - 1)."""
    return [u for u in range(1, n) if gcd(u, n) == 1 and pow(u, gcd(n, u - 1), n) == 1 % n]


def _mult_order(u: int, m: int) -> int:
    k, x = 1, u % m
    while x != 1 % m:
        x = (x * u) % m
        k += 1
    return k


def adequate_units_criterion(n: int) -> list[int]:
    """The prime-by-prime description of the adequate units."""
    pn = _p_set(n)
    out = []
    for u in range(1, n):
        if gcd(u, n) != 1:
            continue
        r = gcd(n, u - 1)
        if r == 1:
            continue
        pr = _p_set(r)
        if any(_vp(p, n) > 2 * _vp(p, r) for p in pr):
            continue
        ok = True
        for p in pn - pr:
            if p == 2:
                e = _vp(2, n)
                if (u + 1) % (2 ** (e - 1)):
                    ok = False
            else:
                o = _mult_order(u, p ** _vp(p, n))
                if o < 2 or gcd(r, p - 1) % o:
                    ok = False
        if ok:
            out.append(u)
    return out


ADEQUATE_CHECK_LIMIT = 128


def adequate_units(n: int, method: str = "both", bound: int = 100_000) -> list[int]:
    if n < 2:
        raise BadParameters("n must be at least 2")
    if n > bound:
        raise BoundExceeded(f"n = {n} exceeds bound {bound}")
    if method == "brute":
        return adequate_units_brute(n)
    if method == "criterion":
        return adequate_units_criterion(n)
    if method != "both":
        raise BadParameters(f"unknown method {method!r}")
    a = adequate_units_brute(n)
    b = adequate_units_criterion(n)
    if a != b:
        raise TheoremViolation(f"adequate-unit methods disagree for n = {n}: {a} vs {b}")
    # the formula against the definition on the actual self-actions
    for u in range(1, n):
        if gcd(u, n) == 1 and pow(u, n, n) == 1:
            adequate = unit_is_adequate(n, u, cross_check=n <= ADEQUATE_CHECK_LIMIT)
            if adequate != (u in a):
                raise TheoremViolation(f"u = {u} mod {n}: formula and definition disagree")
    return a


# enumeration ----------------------------------------------------------------------


def self_actions(gamma: FiniteGroup, aut_limit: int = 4096) -> list[SelfAction]:
    try:
        acts = all_actions(gamma, gamma, aut_limit)
    except BoundError as exc:
        raise BoundExceeded(str(exc)) from exc
    return [SelfAction(gamma, tuple(tuple(m) for m in act)) for act in acts]


@dataclass
class DeformationClass:
    representative: FiniteGroup
    actions: list[SelfAction]


def deformation_classes(gamma: FiniteGroup, aut_limit: int = 4096) -> list[DeformationClass]:
    """Isomorphism classes of the groups obtained from adequate self-actions, first one is gamma."""
    classes: list[DeformationClass] = [DeformationClass(gamma, [])]
    for sa in self_actions(gamma, aut_limit):
        if not is_adequate(sa):
            continue
        D = deform(sa).group
        for c in classes:
            if find_isomorphism(c.representative, D) is not None:
                c.actions.append(sa)
                break
        else:
            classes.append(DeformationClass(D, [sa]))
    return classes


def is_rigid(gamma: FiniteGroup) -> bool:
    return len(deformation_classes(gamma)) == 1


def induced_self_action(t: Triple) -> Optional[SelfAction]:
    """The adequate self-action inducing a bijective triple, if there is one.

    The action on G is pulled back along eta; the triple is induced exactly when
    these maps are automorphisms of Gamma and the pulled-back product of G is the
    deformed product.
    """
    if not t.is_bijective:
        return None
    gamma, g, v = t.gamma, t.g, t.values
    back = [0] * g.order
    for s, x in enumerate(v):
        back[x] = s
    omega = tuple(tuple(back[t.gg.act[s][v[y]]] for y in range(gamma.order)) for s in range(gamma.order))
    if not all(_is_automorphism(gamma, m) for m in omega):
        return None
    sa = SelfAction(gamma, omega)
    pulled = [[back[g.table[v[x]][v[y]]] for y in range(gamma.order)] for x in range(gamma.order)]
    if pulled != sa.bullet_table:
        return None
    if not is_adequate(sa):
        raise TheoremViolation("pulled-back self-action has an associative product but is not adequate")
    return sa


# Kneser structures -------------------------------------------------------------


@dataclass
class KneserStructure:
    labels: list[int]  # coset label of each element of Gamma (least member)
    points: list[int]  # coset labels in increasing order
    bullet: dict[tuple[int, int], int]
    inverse: dict[int, int]
    neutral: int


def kneser_structure(t: Triple) -> KneserStructure:
    """The group law on Gamma/Delta carried over from G, and its compatibility with Gamma."""
    if not t.is_surjective:
        raise NotKneser(f"{t!r} is not Kneser")
    gamma, g, v = t.gamma, t.g, t.values
    T = gamma.table
    k = bits(t.kernel_mask)
    labels = [-1] * gamma.order
    for s in range(gamma.order):
        if labels[s] < 0:
            coset = [T[s][d] for d in k]
            lab = min(coset)
            for c in coset:
                labels[c] = lab
    points = sorted(set(labels))
    to_g = {labels[s]: v[s] for s in range(gamma.order)}
    from_g = {x: p for p, x in to_g.items()}
    if len(from_g) != len(points) or len(points) != g.order:
        raise TheoremViolation("cosets of the kernel do not match G")
    bullet = {(x, y): from_g[g.table[to_g[x]][to_g[y]]] for x in points for y in points}
    inverse = {x: from_g[g.inverse[to_g[x]]] for x in points}
    neutral = from_g[0]

    def act(s: int, x: int) -> int:
        return labels[T[s][x]]

    for s in range(gamma.order):
        hat = labels[s]
        ih = inverse[hat]
        for x in points:
            for y in points:
                lhs = act(s, bullet[(x, y)])
                rhs = bullet[(bullet[(act(s, x), ih)], act(s, y))]
                if lhs != rhs:
                    raise TheoremViolation(f"Kneser structure axiom fails at ({s}, {x}, {y})")
            if act(s, inverse[x]) != bullet[(bullet[(hat, inverse[act(s, x)])], hat)]:
                raise TheoremViolation(f"Kneser structure inverse identity fails at ({s}, {x})")
    return KneserStructure(labels, points, bullet, inverse, neutral)

