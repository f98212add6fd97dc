"""1-cocycles (crossed homomorphisms) and triples (Gamma, G, eta).

A cocycle is a map ``eta`` from Gamma to G with
``eta(s t) = eta(s) * s(eta(t))``.  Values are stored as a tuple indexed by
Gamma's elements.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    CocycleLawViolated,
    NotAbelian,
    OrderBoundExceeded,
    ParseError,
    TheoremViolation,
)
from .groups import (
    DEFAULT_ORDER_BOUND,
    FiniteGroup,
    GroupMorphism,
    Subgroup,
    bits,
    extend_maps,
    popcount,
    quotient,
    to_mask,
)
from .operators import (
    GammaGroup,
    Ideal,
    as_ideal,
    gamma_group_from_json,
    gamma_group_to_json,
    quotient_gamma,
    semidirect,
)


def first_law_violation(gg: GammaGroup, values: Sequence[int]) -> Optional[tuple[int, int]]:
    V = np.asarray(values, dtype=np.int64)
    G = gg.gamma.np_table
    T = gg.g.np_table
    A = gg.np_act
    lhs = V[G]
    rhs = T[V[:, None], A[:, V]]  # eta(s) * s(eta(t))
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        return int(bad[0][0]), int(bad[0][1])
    return None


class Cocycle:
    __slots__ = ("parent", "values")

    def __init__(self, parent: GammaGroup, values: Sequence[int]):
        self.parent = parent
        self.values = tuple(int(v) for v in values)

    def __call__(self, s: int) -> int:
        return self.values[s]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Cocycle) and other.parent is self.parent and other.values == self.values

    def __hash__(self) -> int:
        return hash(self.values)

    def __repr__(self) -> str:
        return f"Cocycle({list(self.values)})"


def make_cocycle(gg: GammaGroup, values: Sequence[int]) -> Cocycle:
    if len(values) != gg.gamma.order:
        raise ParseError(f"cocycle needs {gg.gamma.order} values, got {len(values)}")
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or not 0 <= v < gg.g.order:
            raise ParseError(f"cocycle value {v!r} out of range")
    bad = first_law_violation(gg, values)
    if bad is not None:
        raise CocycleLawViolated(*bad)
    g, gamma = gg.g, gg.gamma
    if values[0] != 0:
        raise TheoremViolation("cocycle does not send 1 to 1")
    for s in range(gamma.order):
        si = gamma.inverse[s]
        if values[si] != gg.act[si][g.inverse[values[s]]]:
            raise TheoremViolation(f"inverse identity fails at {s}")
    return Cocycle(gg, values)


def cocycle_value_lists(gg: GammaGroup, bound: int = DEFAULT_ORDER_BOUND) -> list[tuple[int, ...]]:
    """All cocycles as value tuples, lexicographically sorted."""
    if gg.gamma.order > bound or gg.g.order > bound:
        raise OrderBoundExceeded("group order exceeds enumeration bound")
    return sorted(tuple(v) for v in extend_maps(gg.gamma, gg.g.table, act=gg.act))


def enumerate_cocycles(gg: GammaGroup, bound: int = DEFAULT_ORDER_BOUND) -> list[Cocycle]:
    return [Cocycle(gg, v) for v in cocycle_value_lists(gg, bound)]


def brute_force_cocycles(gg: GammaGroup) -> list[tuple[int, ...]]:
    """Oracle: filter every map Gamma -> G by the cocycle law (tiny inputs only)."""
    from itertools import product

    out = []
    n = gg.g.order
    for rest in product(range(n), repeat=gg.gamma.order - 1):
        vals = (0,) + rest
        if first_law_violation(gg, vals) is None:
            out.append(vals)
    return out


class Triple:
    """(Gamma, G, eta) with cached kernel data."""

    def __init__(self, gg: GammaGroup, eta: Cocycle | Sequence[int]):
        if not isinstance(eta, Cocycle):
            eta = Cocycle(gg, eta)
        self.gg = gg
        self.eta = eta
        self.values = eta.values

    def __repr__(self) -> str:
        return f"Triple({self.gamma.name}, {self.g.name}, {list(self.values)})"

    @property
    def gamma(self) -> FiniteGroup:
        return self.gg.gamma

    @property
    def g(self) -> FiniteGroup:
        return self.gg.g

    @cached_property
    def kernel_mask(self) -> int:
        return to_mask(s for s, v in enumerate(self.values) if v == 0)

    @property
    def fix_mask(self) -> int:
        return self.gg.fix_mask

    @cached_property
    def core_mask(self) -> int:
        return self.kernel_mask & self.gg.fix_mask

    @property
    def kernel(self) -> Subgroup:
        return Subgroup(self.gamma, self.kernel_mask)

    @property
    def fix(self) -> Subgroup:
        return Subgroup(self.gamma, self.fix_mask)

    @property
    def core(self) -> Subgroup:
        return Subgroup(self.gamma, self.core_mask)

    @cached_property
    def image_mask(self) -> int:
        return to_mask(self.values)

    def image_of(self, mask: int) -> int:
        v = self.values
        return to_mask(v[s] for s in bits(mask))

    def preimage(self, mask: int) -> int:
        return to_mask(s for s, v in enumerate(self.values) if (mask >> v) & 1)

    @cached_property
    def is_generating(self) -> bool:
        return self.g.closure_mask(bits(self.image_mask)) == self.g.full_mask

    @cached_property
    def is_surjective(self) -> bool:
        return self.image_mask == self.g.full_mask

    @cached_property
    def is_injective(self) -> bool:
        return self.kernel_mask == 1

    @property
    def is_bijective(self) -> bool:
        return self.is_surjective and self.is_injective

    @cached_property
    def is_normalized(self) -> bool:
        return self.core_mask == 1

    def J(self, mask: int) -> int:
        """Least ideal containing the image of the subgroup ``mask``."""
        return self.gg.ideal_closure(self.image_of(mask))

    def S(self, mask: int) -> int:
        return self.preimage(mask)

    @cached_property
    def subgroups_over_kernel(self) -> list[int]:
        k = self.kernel_mask
        return [m for m in self.gamma.subgroup_masks() if m & k == k]


def make_triple(gg: GammaGroup, values: Sequence[int]) -> Triple:
    return Triple(gg, make_cocycle(gg, values))


# kernel invariants ----------------------------------------------------------


@dataclass(frozen=True)
class KernelInvariants:
    delta: Subgroup
    delta_prime: Subgroup
    delta_second: Subgroup
    delta_bar: Subgroup
    delta_tilde: Subgroup


def _second_kernel_mask(t: Triple) -> int:
    gamma, act, v = t.gamma, t.gg.act, t.values
    out = 0
    for s in range(gamma.order):
        if all(act[c][v[s]] == v[gamma.conj(c, s)] for c in range(gamma.order)):
            out |= 1 << s
    return out


def kernel_invariants(t: Triple) -> KernelInvariants:
    """Kernel, fixer, equivariant part and their meets; checks the structural identities.

    The identities are asserted in full when eta is generating; for other
    cocycles only those that hold without that hypothesis are checked.
    """
    gamma, g = t.gamma, t.g
    d, d1, dt = t.kernel_mask, t.fix_mask, t.core_mask
    d2 = _second_kernel_mask(t)
    db = d1 & d2

    def fail(msg: str) -> None:
        raise TheoremViolation(f"{msg} for {t!r}")

    if not gamma.is_subgroup_mask(dt) or not gamma.is_normal_mask(dt):
        fail("kernel core is not normal")
    if dt & ~d2:
        fail("kernel core not inside the equivariant part")
    if g.is_abelian and d1 & ~d2:
        fail("fixer not inside the equivariant part for abelian G")
    if t.is_generating:
        if gamma.core_mask(d) != dt:
            fail("kernel core differs from the intersection of kernel conjugates")
        for m, what in ((d2, "equivariant part"), (db, "bar subgroup")):
            if not gamma.is_subgroup_mask(m) or not gamma.is_normal_mask(m):
                fail(f"{what} is not a normal subgroup")
        img = t.image_of(db)
        if img & ~g.center_mask:
            fail("image of the bar subgroup is not central")
        if not t.gg.is_ideal_mask(img) or t.J(db) != img:
            fail("image of the bar subgroup is not an ideal")
        if db != d1 & t.preimage(g.center_mask):
            fail("bar subgroup differs from fixer meet preimage of the center")
        # restriction to the bar subgroup is a homomorphism with kernel the core
        v, T, G = t.values, g.table, gamma.table
        el = bits(db)
        if any(v[G[a][b]] != T[v[a]][v[b]] for a in el for b in el):
            fail("restriction to the bar subgroup is not a homomorphism")
        if popcount(db) != popcount(dt) * popcount(img):
            fail("bar/core index differs from image size")
    S = lambda m: Subgroup(gamma, m)  # noqa: E731
    return KernelInvariants(S(d), S(d1), S(d2), S(db), S(dt))


# derived triples -------------------------------------------------------------


def normalize(t: Triple) -> Triple:
    """Quotient Gamma by the kernel core; the result has trivial core."""
    if t.core_mask == 1:
        return t
    Q, proj = quotient(t.gamma, t.core_mask, f"{t.gamma.name}/core")
    reps = [-1] * Q.order
    for s, lab in enumerate(proj.map):
        if reps[lab] < 0:
            reps[lab] = s
    act = [t.gg.act[r] for r in reps]
    gg = GammaGroup(Q, t.g, act, validate=False)
    out = Triple(gg, [t.values[r] for r in reps])
    if out.core_mask != 1:
        raise TheoremViolation("normalization left a nontrivial core")
    return out


def induced_cocycle(t: Triple, a: Ideal | Subgroup | int) -> Triple:
    a = as_ideal(t.gg, a)
    qg, proj = quotient_gamma(t.gg, a)
    out = Triple(qg, [proj.map[v] for v in t.values])
    if out.kernel_mask != t.preimage(a.mask):
        raise TheoremViolation("kernel of induced cocycle differs from the preimage of the ideal")
    return out


def coboundary(gg: GammaGroup, x: int) -> Cocycle:
    """s -> s(x) - x for abelian G."""
    g = gg.g
    if not g.is_abelian:
        raise NotAbelian("additive coboundaries need an abelian group")
    xi = g.inverse[x]
    return Cocycle(gg, [g.table[gg.act[s][x]][xi] for s in range(gg.gamma.order)])


def conjugation_gamma_group(G: FiniteGroup) -> GammaGroup:
    return GammaGroup(G, G, [[G.conj(s, x) for x in range(G.order)] for s in range(G.order)], validate=False)


def inner_coboundary(G: FiniteGroup, x: int) -> Triple:
    """G acting on itself by conjugation with the cocycle s -> [x, s] = x s x^-1 s^-1."""
    gg = conjugation_gamma_group(G)
    T, inv = G.table, G.inverse
    vals = [T[T[T[x][s]][inv[x]]][inv[s]] for s in range(G.order)]
    return Triple(gg, make_cocycle(gg, vals))


def section_s2(t: Triple) -> GroupMorphism:
    """s -> (eta(s), s) in the semidirect product; a homomorphic section of the projection."""
    sd = semidirect(t.gg)
    m = t.gamma.order
    s2 = GroupMorphism(t.gamma, sd.e, tuple(t.values[s] * m + s for s in range(m)))
    if not s2.is_homomorphism():
        raise TheoremViolation("second section is not a homomorphism")
    if any(sd.p(s2(s)) != s for s in range(m)):
        raise TheoremViolation("second section is not a section")
    return s2


# cohomology -----------------------------------------------------------------


@dataclass(frozen=True)
class AbelianH1:
    z1: list[tuple[int, ...]]
    b1: list[tuple[int, ...]]

    @property
    def order(self) -> int:
        return len(self.z1) // len(self.b1)


def abelian_h1(gg: GammaGroup) -> AbelianH1:
    if not gg.g.is_abelian:
        raise NotAbelian("H^1 is only computed for abelian G")
    z1 = cocycle_value_lists(gg)
    b1 = sorted({coboundary(gg, x).values for x in range(gg.g.order)})
    zs = set(z1)
    T = gg.g.table
    # closure checks: Z1 under pointwise product, B1 inside Z1
    for a in z1[:16]:
        for b in z1:
            if tuple(T[x][y] for x, y in zip(a, b)) not in zs:
                raise TheoremViolation("Z1 is not closed under pointwise product")
    if not set(b1) <= zs or len(z1) % len(b1):
        raise TheoremViolation("coboundaries do not form a subgroup of Z1")
    return AbelianH1(z1, b1)


def twisted_class_count(gg: GammaGroup) -> int:
    """Experimental: number of orbits of G on Z1 under eta -> (s -> x^-1 eta(s) s(x))."""
    g = gg.g
    T, inv = g.table, g.inverse
    z1 = cocycle_value_lists(gg)
    index = {z: i for i, z in enumerate(z1)}
    seen = [False] * len(z1)
    count = 0
    for i, z in enumerate(z1):
        if seen[i]:
            continue
        count += 1
        for x in range(g.order):
            w = tuple(T[T[inv[x]][z[s]]][gg.act[s][x]] for s in range(gg.gamma.order))
            seen[index[w]] = True
    return count


# JSON -----------------------------------------------------------------------


def triple_to_json(t: Triple) -> dict:
    return {"gamma_group": gamma_group_to_json(t.gg), "cocycle": list(t.values)}


def triple_from_json(obj: dict) -> Triple:
    if not isinstance(obj, dict) or "gamma_group" not in obj or "cocycle" not in obj:
        raise ParseError("triple object needs 'gamma_group' and 'cocycle'")
    gg = gamma_group_from_json(obj["gamma_group"])
    vals = obj["cocycle"]
    if not isinstance(vals, list):
        raise ParseError("'cocycle' must be a list")
    return make_triple(gg, vals)


def generating_triples(gg: GammaGroup) -> Iterable[Triple]:
    for v in cocycle_value_lists(gg):
        t = Triple(gg, v)
        if t.is_generating:
            yield t
