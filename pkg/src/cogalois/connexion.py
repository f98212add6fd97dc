"""The J/S connexion of a triple and the Galois connexions of an abelian module.

For a triple ``(Gamma, G, eta)``, ``J`` sends a subgroup over the kernel to
the ideal generated by its image and ``S`` pulls an ideal back along eta.

For a finite abelian Gamma-module ``A`` the cocycle group ``Z1 = Z^1(Gamma, A)``
is stored as an integer array of value rows, and the dual module is the
subgroup of ``Hom(Z1, A)`` generated by the evaluations ``alpha -> alpha(gamma)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import log
from typing import Optional, Sequence

import numpy as np

from .catalog import abelian
from .cocycle import Triple, cocycle_value_lists, induced_cocycle
from .errors import (
    NotAbelian,
    NotAboveKernel,
    OrderBoundExceeded,
    ParseError,
    TheoremViolation,
)
from .groups import (
    FiniteGroup,
    Subgroup,
    SubgroupLattice,
    bits,
    find_isomorphism,
    homomorphisms,
    popcount,
    prime_factors,
    quotient,
    to_mask,
)
from .operators import GammaGroup, Ideal, IdealLattice, all_ideals, as_ideal
from .report import Report

# Z1 subgroup lattices are enumerated in full up to this order; above it the
# checks run on cyclic subgroups and the perp images (see README).
FULL_Z1_LATTICE = 64


# the coGalois connexion of a triple ------------------------------------------


class CoGaloisConnexion:
    def __init__(self, t: Triple):
        self.triple = t
        self.domain = SubgroupLattice(t.gamma, t.subgroups_over_kernel, t.kernel_mask)
        self.codomain: IdealLattice = all_ideals(t.gg)
        self.j_masks = [t.J(m) for m in self.domain.masks]
        self.s_masks = [t.S(a) for a in self.codomain.masks]

    @cached_property
    def j_table(self) -> list[int]:
        return [self.codomain.position(a) for a in self.j_masks]

    @cached_property
    def s_table(self) -> list[int]:
        return [self.domain.position(s) for s in self.s_masks]

    def fixed_points(self) -> tuple[list[int], list[int]]:
        """Subgroups with S(J(L)) = L and ideals with J(S(a)) = a."""
        t = self.triple
        lam = [m for m, j in zip(self.domain.masks, self.j_masks) if t.S(j) == m]
        ids = [a for a, s in zip(self.codomain.masks, self.s_masks) if t.J(s) == a]
        return lam, ids


def connexion(t: Triple) -> CoGaloisConnexion:
    c = t.__dict__.get("_connexion")
    if c is None:
        c = CoGaloisConnexion(t)
        t.__dict__["_connexion"] = c
    return c


def op_J(t: Triple, lam: Subgroup | int) -> Ideal:
    mask = lam.mask if isinstance(lam, Subgroup) else lam
    if not t.gamma.is_subgroup_mask(mask):
        raise ParseError(f"{bits(mask)} is not a subgroup")
    if mask & t.kernel_mask != t.kernel_mask:
        raise NotAboveKernel("subgroup does not contain the kernel")
    return Ideal(t.gg, t.J(mask))


def op_S(t: Triple, a: Ideal | Subgroup | int) -> Subgroup:
    a = as_ideal(t.gg, a)
    s = t.S(a.mask)
    # induced_cocycle asserts that its kernel is this preimage
    induced_cocycle(t, a)
    return Subgroup(t.gamma, s)


def verify_cogalois_connexion(t: Triple, report: Optional[Report] = None) -> Report:
    rep = report if report is not None else Report("connexion-laws")
    c = connexion(t)
    gamma, g = t.gamma, t.g
    D, J = c.domain.masks, c.j_masks
    I, S = c.codomain.masks, c.s_masks
    jd = dict(zip(D, J))
    sd = dict(zip(I, S))
    where = repr(t)
    n = 0
    for lam, j in zip(D, J):
        n += 3
        if j not in sd:
            rep.fail(f"J{bits(lam)} is not an ideal: {where}")
            continue
        sj = sd[j]
        if lam & ~sj:
            rep.fail(f"L not inside S(J(L)) for L={bits(lam)}: {where}")
        if jd.get(sj) != j:
            rep.fail(f"JSJ != J at L={bits(lam)}: {where}")
    for a, s in zip(I, S):
        n += 3
        if s not in jd:
            rep.fail(f"S{bits(a)} is not a subgroup over the kernel: {where}")
            continue
        js = jd[s]
        if js & ~a:
            rep.fail(f"J(S(a)) not inside a for a={bits(a)}: {where}")
        if sd.get(js) != s:
            rep.fail(f"SJS != S at a={bits(a)}: {where}")
        if t.is_surjective and js != a:
            rep.fail(f"J(S(a)) != a on a Kneser triple, a={bits(a)}: {where}")
    for i, (l1, j1) in enumerate(zip(D, J)):
        for l2, j2 in zip(D[i:], J[i:]):
            n += 2
            if l1 & l2 == l1 and j1 & ~j2:
                rep.fail(f"J not monotone at {bits(l1)} <= {bits(l2)}: {where}")
            if l1 & l2 == l2 and j2 & ~j1:
                rep.fail(f"J not monotone at {bits(l2)} <= {bits(l1)}: {where}")
            n += 1
            if jd.get(gamma.join_masks(l1, l2)) != g.join_masks(j1, j2):
                rep.fail(f"J does not preserve the join of {bits(l1)}, {bits(l2)}: {where}")
    for i, (a1, s1) in enumerate(zip(I, S)):
        for a2, s2 in zip(I[i:], S[i:]):
            n += 2
            if a1 & a2 == a1 and s1 & ~s2:
                rep.fail(f"S not monotone at {bits(a1)} <= {bits(a2)}: {where}")
            if sd.get(a1 & a2) != s1 & s2:
                rep.fail(f"S does not preserve the meet of {bits(a1)}, {bits(a2)}: {where}")
    rep.checked += n
    return rep


# abelian modules ---------------------------------------------------------------


def _radix(base: int, width: int) -> np.ndarray:
    return base ** np.arange(width - 1, -1, -1, dtype=np.int64)


def _rows_to_mask(flags: np.ndarray) -> int:
    return to_mask(np.nonzero(flags)[0].tolist())


def _idx(mask: int) -> np.ndarray:
    return np.asarray(bits(mask), dtype=np.int64)


def elementary_divisors(G: FiniteGroup) -> tuple[int, ...]:
    """Prime-power cyclic factors of an abelian group, read off from element orders."""
    if not G.is_abelian:
        raise NotAbelian("elementary divisors need an abelian group")
    orders = G.element_orders
    out: list[int] = []
    for p in prime_factors(G.order):
        top = 0
        while G.exponent % p ** (top + 1) == 0:
            top += 1
        counts = [round(log(sum(1 for o in orders if p**k % o == 0), p)) for k in range(top + 1)]
        ranks = [counts[i] - counts[i - 1] for i in range(1, len(counts))] + [0]
        for e in range(1, len(ranks)):
            out += [p**e] * (ranks[e - 1] - ranks[e])
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _canonical_subgroups(divisors: tuple[int, ...]) -> tuple[FiniteGroup, np.ndarray]:
    C = abelian(*divisors) if divisors else abelian(1)
    masks = C.subgroup_masks()
    mat = np.zeros((len(masks), C.order), dtype=bool)
    for i, m in enumerate(masks):
        mat[i, bits(m)] = True
    return C, mat


def abelian_subgroup_matrix(G: FiniteGroup) -> np.ndarray:
    """All subgroups of an abelian group as rows of a boolean matrix.

    The lattice is computed once per isomorphism type and transported along an
    isomorphism from the standard product of cyclic groups.
    """
    C, mat = _canonical_subgroups(elementary_divisors(G))
    iso = find_isomorphism(C, G)
    if iso is None:
        raise TheoremViolation("abelian group not isomorphic to its standard form")
    out = np.zeros_like(mat)
    out[:, np.asarray(iso.map)] = mat
    return out


def torsion_module(gamma: FiniteGroup, a: FiniteGroup, act: Sequence[Sequence[int]]) -> GammaGroup:
    if not a.is_abelian:
        raise NotAbelian("module must be abelian")
    return GammaGroup(gamma, a, act)


class Z1Module:
    """Z^1(Gamma, A) with pointwise addition and the Gamma-action s.alpha = alpha + f_{alpha(s)}."""

    def __init__(self, m: GammaGroup, bound: int = 4096):
        if not m.g.is_abelian:
            raise NotAbelian("Z1 module needs an abelian coefficient group")
        self.base = m
        vals = cocycle_value_lists(m, bound)
        if len(vals) > bound:
            raise OrderBoundExceeded(f"|Z1| = {len(vals)} exceeds bound {bound}")
        self.V = np.asarray(vals, dtype=np.int64)
        self.order = len(vals)
        self.A = m.g
        self.T = m.g.np_table
        self.inv = np.asarray(m.g.inverse, dtype=np.int64)
        self.act = m.np_act
        self._w = _radix(self.A.order, m.gamma.order)
        self.keys = self.V @ self._w

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        k = rows @ self._w
        pos = np.searchsorted(self.keys, k)
        pos = np.minimum(pos, self.order - 1)
        if (self.keys[pos] != k).any():
            raise TheoremViolation("row is not a cocycle of this module")
        return pos

    def add(self, i: np.ndarray, j: np.ndarray) -> np.ndarray:
        return self.lookup(self.T[self.V[i], self.V[j]])

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    @cached_property
    def gamma_perm(self) -> np.ndarray:
        """gamma_perm[s][i] = index of s.alpha_i, checked against s alpha(s^-1 g s)."""
        gamma = self.base.gamma
        V, T, A, inv = self.V, self.T, self.act, self.inv
        out = np.empty((gamma.order, self.order), dtype=np.int64)
        G = np.asarray(gamma.table)
        for s in range(gamma.order):
            a_s = V[:, s]  # alpha(s)
            f = T[A[:, a_s].T, inv[a_s][:, None]]  # f[alpha, g] = g.alpha(s) - alpha(s)
            rows = T[V, f]
            si = gamma.inverse[s]
            conj = G[G[si][:], s]  # s^-1 g s for each g
            other = A[s][V[:, conj]]
            if (other != rows).any():
                raise TheoremViolation("the two formulas for the action on Z1 disagree")
            out[s] = self.lookup(rows)
        return out

    @cached_property
    def coboundary_mask(self) -> int:
        A = self.act
        inv = self.inv
        rows = self.T[A[:, np.arange(self.A.order)].T, inv[:, None]]  # rows[a, g] = g a - a
        return to_mask(self.lookup(rows).tolist())

    @property
    def h1_order(self) -> int:
        return self.order // popcount(self.coboundary_mask)

    @cached_property
    def group(self) -> FiniteGroup:
        n = self.order
        if n > 1024:
            raise OrderBoundExceeded(f"|Z1| = {n} too large for a table")
        table = self.lookup(self.T[self.V[:, None, :], self.V[None, :, :]].reshape(n * n, -1)).reshape(n, n)
        return FiniteGroup(table.tolist(), "Z1")

    def multiples(self, i: int) -> int:
        out = 1
        cur = 0
        while True:
            cur = int(self.add(np.array([cur]), np.array([i]))[0])
            if cur == 0:
                return out
            out |= 1 << cur

    def span(self, mask: int) -> int:
        """Subgroup generated by the cocycles in ``mask``."""
        span = 1
        for i in bits(mask):
            if (span >> i) & 1:
                continue
            cyc = _idx(self.multiples(i))
            cur = _idx(span)
            sums = self.add(np.repeat(cur, len(cyc)), np.tile(cyc, len(cur)))
            span = to_mask(sums.tolist())
        return span

    def act_mask(self, s: int, mask: int) -> int:
        return to_mask(self.gamma_perm[s][_idx(mask)].tolist())

    @cached_property
    def generator_indices(self) -> list[int]:
        gens: list[int] = []
        span = 1
        for i in range(self.order):
            if not (span >> i) & 1:
                gens.append(i)
                span = self.span(to_mask(gens))
        return gens

    def perp_up(self, lam: Subgroup | int) -> int:
        """Cocycles vanishing on the subgroup (mask over Z1 indices)."""
        mask = lam.mask if isinstance(lam, Subgroup) else lam
        cols = _idx(mask)
        return _rows_to_mask((self.V[:, cols] == 0).all(axis=1))

    def perp_down(self, G: int) -> int:
        """Common kernel of the cocycles in G (mask over Gamma)."""
        return _rows_to_mask((self.V[_idx(G)] == 0).all(axis=0))

    @cached_property
    def subgroup_matrix(self) -> np.ndarray:
        """Rows are subgroups of Z1: all of them when small, else cyclic ones and the perps."""
        n = self.order
        if n <= FULL_Z1_LATTICE:
            return abelian_subgroup_matrix(self.group)
        rows = np.zeros((n, n), dtype=bool)
        idx = np.arange(n)
        cur = np.zeros(n, dtype=np.int64)
        while True:
            cur = self.add(cur, idx)
            rows[idx, cur] = True
            if (cur == 0).all():
                break
        lams = self.base.gamma.subgroup_masks()
        extra = np.stack([self.perp_up_vector(m) for m in lams])
        cob = np.zeros((1, n), dtype=bool)
        cob[0, _idx(self.coboundary_mask)] = True
        full = np.ones((1, n), dtype=bool)
        return np.unique(np.vstack([rows, extra, cob, full]), axis=0)

    def perp_up_vector(self, mask: int) -> np.ndarray:
        return (self.V[:, _idx(mask)] == 0).all(axis=1)

    @property
    def subgroup_masks(self) -> list[int]:
        return sorted((_rows_to_mask(r) for r in self.subgroup_matrix), key=lambda m: tuple(bits(m)))

    @property
    def complete_lattice(self) -> bool:
        return self.order <= FULL_Z1_LATTICE


def z1_module(m: GammaGroup, bound: int = 4096) -> Z1Module:
    return Z1Module(m, bound)


class DualModule:
    """The subgroup of Hom(Z1, A) generated by evaluations, with both Gamma-actions."""

    def __init__(self, z: Z1Module, bound: int = 4096):
        self.z1 = z
        gamma = z.base.gamma
        self.gamma = gamma
        gidx = np.asarray(z.generator_indices, dtype=np.int64)
        self._gidx = gidx
        self._w = _radix(z.A.order, max(len(gidx), 1))
        T = z.T
        cols = [z.V[:, s] for s in range(gamma.order)]
        # closure of the evaluation vectors under pointwise addition
        zero = np.zeros(z.order, dtype=np.int64)
        elems = [zero]
        seen = {self._key(zero): 0}
        i = 0
        while i < len(elems):
            x = elems[i]
            for c in cols:
                y = T[x, c]
                k = self._key(y)
                if k not in seen:
                    seen[k] = len(elems)
                    elems.append(y)
                    if len(elems) > bound:
                        raise OrderBoundExceeded(f"dual module exceeds {bound} elements")
            i += 1
        order = sorted(range(len(elems)), key=lambda e: self._key(elems[e]))
        self.Phi = np.asarray([elems[e] for e in order], dtype=np.int64)  # Phi[phi, alpha] = phi(alpha)
        self.order = len(elems)
        self.keys = np.asarray([self._key(r) for r in self.Phi], dtype=np.int64)
        self.eta_values = self.lookup(np.stack(cols)).tolist()

    def _key(self, row: np.ndarray) -> int:
        if len(self._gidx) == 0:
            return 0
        return int(row[self._gidx] @ self._w)

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        if len(self._gidx) == 0:
            return np.zeros(len(rows), dtype=np.int64)
        k = rows[:, self._gidx] @ self._w
        pos = np.minimum(np.searchsorted(self.keys, k), self.order - 1)
        if (self.keys[pos] != k).any():
            raise TheoremViolation("vector is not in the dual module")
        if (self.Phi[pos] != rows).any():
            raise TheoremViolation("dual-module element not determined by generator values")
        return pos

    @cached_property
    def group(self) -> FiniteGroup:
        n, T = self.order, self.z1.T
        sums = T[self.Phi[:, None, :], self.Phi[None, :, :]].reshape(n * n, -1)
        return FiniteGroup(self.lookup(sums).reshape(n, n).tolist(), "G")

    @cached_property
    def act1(self) -> list[list[int]]:
        """(s phi)(alpha) = s . phi(alpha)."""
        A = self.z1.act
        return [self.lookup(A[s][self.Phi]).tolist() for s in range(self.gamma.order)]

    @cached_property
    def act2(self) -> list[list[int]]:
        """(^s phi)(alpha) = s . phi(s^-1 alpha)."""
        A, perm = self.z1.act, self.z1.gamma_perm
        out = []
        for s in range(self.gamma.order):
            si = self.gamma.inverse[s]
            out.append(self.lookup(A[s][self.Phi[:, perm[si]]]).tolist())
        return out

    @cached_property
    def gamma_group(self) -> GammaGroup:
        return GammaGroup(self.gamma, self.group, self.act1)

    @cached_property
    def triple(self) -> Triple:
        return Triple(self.gamma_group, self.eta_values)

    @cached_property
    def ideal_masks(self) -> list[int]:
        """Submodules of the dual for the first action."""
        if self.order <= FULL_Z1_LATTICE:
            mat = abelian_subgroup_matrix(self.group)
            keep = np.ones(len(mat), dtype=bool)
            for s in self.gamma.generators:
                a = np.asarray(self.act1[s])
                moved = np.empty_like(mat)
                moved[:, a] = mat
                keep &= (moved == mat).all(axis=1)
            return sorted((_rows_to_mask(r) for r in mat[keep]), key=lambda m: tuple(bits(m)))
        return self.gamma_group.ideal_masks

    def perp_lower(self, a: int) -> int:
        """a_perp: cocycles killed by every phi in a (mask over Z1)."""
        return _rows_to_mask((self.Phi[_idx(a)] == 0).all(axis=0))

    def perp_lower_z(self, G: int) -> int:
        """G_perp: elements of the dual killing every cocycle in G (mask over the dual)."""
        return _rows_to_mask((self.Phi[:, _idx(G)] == 0).all(axis=1))

    def act2_mask(self, s: int, a: int) -> int:
        row = self.act2[s]
        return to_mask(row[x] for x in bits(a))


def dual_module(m: GammaGroup, bound: int = 4096) -> DualModule:
    return DualModule(Z1Module(m, bound), bound)


def equivariant_homs(d: DualModule) -> list[tuple[int, ...]]:
    """Hom_Gamma(G, A) by filtering all homomorphisms G -> A."""
    A = d.z1.A
    act_a = d.z1.base.act
    act1 = d.act1
    gens = d.gamma.generators
    out = []
    for h in homomorphisms(d.group, A):
        m = h.map
        if all(m[act1[s][x]] == act_a[s][m[x]] for s in gens for x in range(d.order)):
            out.append(m)
    return out


def pairing_check(d: DualModule, report: Optional[Report] = None) -> Report:
    rep = report if report is not None else Report("pairing")
    z, gamma = d.z1, d.gamma
    A, perm, Phi = z.act, z.gamma_perm, d.Phi
    where = f"{gamma.name} on {z.A.name} {z.base.act}"
    for s in range(gamma.order):
        a1 = np.asarray(d.act1[s])
        a2 = np.asarray(d.act2[s])
        lhs = A[s][Phi]  # s <phi, alpha>
        rep.check(bool((Phi[a1] == lhs).all()), f"<s phi, alpha> != s<phi, alpha> for s={s}: {where}")
        rep.check(bool((Phi[a2][:, perm[s]] == lhs).all()), f"<^s phi, s alpha> != s<phi, alpha> for s={s}: {where}")
        for c in range(gamma.order):
            rep.check(
                d.act2[s][d.eta_values[c]] == d.eta_values[gamma.conj(s, c)],
                f"^s eta_c != eta_(s c s^-1) at s={s}, c={c}: {where}",
            )
    try:
        GammaGroup(gamma, d.group, d.act2)
        rep.check(True, "")
    except Exception as exc:  # noqa: BLE001 - reported, not raised
        rep.fail(f"second action invalid ({exc}): {where}")
    homs = equivariant_homs(d)
    rep.check(len(homs) == z.order, f"|Hom_Gamma(G, A)| = {len(homs)} != |Z1| = {z.order}: {where}")
    hom_set = set(homs)
    eta = np.asarray(d.eta_values)
    # lambda(alpha) = column alpha of Phi; mu(psi) = psi o eta
    for a in range(z.order):
        lam = tuple(Phi[:, a].tolist())
        rep.check(lam in hom_set, f"lambda(alpha_{a}) is not an equivariant hom: {where}")
        rep.check(bool((Phi[eta, a] == z.V[a]).all()), f"mu(lambda(alpha_{a})) != alpha_{a}: {where}")
    mus = set()
    for psi in homs:
        mu = np.asarray(psi)[eta]
        try:
            j = int(z.lookup(mu[None, :])[0])
        except TheoremViolation:
            rep.fail(f"mu(psi) is not a cocycle: {where}")
            continue
        mus.add(j)
        rep.check(tuple(Phi[:, j].tolist()) == tuple(psi), f"lambda(mu(psi)) != psi: {where}")
    rep.check(len(mus) == len(homs), f"mu is not injective: {where}")
    # lambda is equivariant: lambda(s alpha) = ^s lambda(alpha), (^s psi)(phi) = s psi(^{s^-1} phi)
    for s in gamma.generators:
        si = gamma.inverse[s]
        back = np.asarray(d.act2[si])
        for a in range(z.order):
            lhs = Phi[:, perm[s][a]]
            rhs = A[s][Phi[back, a]]
            rep.check(bool((lhs == rhs).all()), f"lambda not equivariant at s={s}, alpha_{a}: {where}")
    return rep


def _vanish(X: np.ndarray, nonzero: np.ndarray) -> np.ndarray:
    """Row i of the result marks the columns of ``nonzero`` with no hit in row i of X."""
    return (X.astype(np.int64) @ nonzero.astype(np.int64)) == 0


def composition_check(d: DualModule, report: Optional[Report] = None) -> Report:
    """Both Galois connexions, their equivariance, and the composition identities."""
    rep = report if report is not None else Report("composition")
    z, gamma = d.z1, d.gamma
    t = d.triple
    where = f"{gamma.name} on {z.A.name} {z.base.act}"
    m = gamma.order
    nz = z.V != 0  # (Z1, Gamma)
    nphi = d.Phi != 0  # (dual, Z1)
    eta = np.asarray(d.eta_values)
    perm = z.gamma_perm
    conj = np.asarray([[gamma.conj(s, c) for c in range(m)] for s in range(m)])
    act2 = np.asarray(d.act2)
    gens = gamma.generators

    def relabel(X: np.ndarray, p: np.ndarray) -> np.ndarray:
        out = np.empty_like(X)
        out[:, p] = X
        return out

    def expect(ok: np.ndarray, msg: str) -> None:
        ok = np.asarray(ok)
        rep.checked += int(ok.size)
        if not ok.all():
            rep.fail(f"{msg}: {where}")

    # subgroups of Gamma
    lams = gamma.subgroup_masks()
    L = np.zeros((len(lams), m), dtype=bool)
    for i, lam in enumerate(lams):
        L[i, bits(lam)] = True
    up = _vanish(L, nz.T)  # L^perp, rows over Z1
    expect(~L | _vanish(up, nz), "L not inside L^perp^perp")
    jl = np.zeros((len(lams), d.order), dtype=bool)
    for i, lam in enumerate(lams):
        jl[i, bits(t.J(lam))] = True
    expect(up == _vanish(jl, nphi), "L^perp != J(L)_perp")
    contained = (L.astype(np.int64) @ (~L).T.astype(np.int64)) == 0  # [i, j]: L_i inside L_j
    reversed_ok = (up.astype(np.int64) @ (~up).T.astype(np.int64)) == 0  # [i, j]: up_i inside up_j
    expect(~contained | reversed_ok.T, "perp is not order reversing")
    pos = {lam: i for i, lam in enumerate(lams)}
    for s in gens:
        sl = relabel(L, conj[s])
        idx = [pos[_rows_to_mask(r)] for r in sl]
        expect(up[idx] == relabel(up, perm[s]), f"(sLs^-1)^perp != s.L^perp for s={s}")
        expect(jl[idx] == relabel(jl, act2[s]), f"J(sLs^-1) != ^s J(L) for s={s}")

    # subgroups of Z1
    G = z.subgroup_matrix
    down = _vanish(G, nz)  # G^perp over Gamma
    low = _vanish(G, nphi.T)  # G_perp over the dual
    expect(~G | _vanish(down, nz.T), "G not inside G^perp^perp")
    expect(~G | _vanish(low, nphi), "G not inside G_perp_perp")
    expect(down == low[:, eta], "G^perp != S(G_perp)")
    for row in np.unique(low, axis=0):
        rep.check(d.gamma_group.is_ideal_mask(_rows_to_mask(row)), f"G_perp is not a submodule: {where}")
    for s in gens:
        sg = relabel(G, perm[s])
        expect(_vanish(sg, nz) == relabel(down, conj[s]), f"(sG)^perp != s G^perp s^-1 for s={s}")
        expect(_vanish(sg, nphi.T) == relabel(low, act2[s]), f"(sG)_perp != ^s(G_perp) for s={s}")

    # submodules of the dual
    ideals = d.ideal_masks
    Y = np.zeros((len(ideals), d.order), dtype=bool)
    for i, a in enumerate(ideals):
        Y[i, bits(a)] = True
    yl = _vanish(Y, nphi)  # a_perp over Z1
    expect(~Y | _vanish(yl, nphi.T), "a not inside a_perp_perp")
    ipos = {a: i for i, a in enumerate(ideals)}
    for s in gens:
        sy = relabel(Y, act2[s])
        idx = [ipos.get(_rows_to_mask(r), -1) for r in sy]
        rep.check(min(idx) >= 0, f"^s a is not a submodule for s={s}: {where}")
        if min(idx) < 0:
            continue
        expect(yl[idx] == relabel(yl, perm[s]), f"(^s a)_perp != s.(a_perp) for s={s}")
        expect(Y[idx][:, eta] == relabel(Y[:, eta], conj[s]), f"S(^s a) != s S(a) s^-1 for s={s}")
    return rep


# the augmentation ideal ----------------------------------------------------------


def fp_rank(M: np.ndarray, p: int) -> int:
    """Rank of an integer matrix over F_p."""
    M = np.array(M, dtype=np.int64) % p
    rows, cols = M.shape
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i, c]), None)
        if piv is None:
            continue
        M[[r, piv]] = M[[piv, r]]
        M[r] = (M[r] * pow(int(M[r, c]), -1, p)) % p
        others = np.nonzero(M[:, c])[0]
        for i in others:
            if i != r:
                M[i] = (M[i] - M[i, c] * M[r]) % p
        r += 1
        if r == rows:
            break
    return r


def augmentation_matrices(gamma: FiniteGroup, p: int) -> list[np.ndarray]:
    """Matrices of left multiplication on I = ker(F_p[Gamma] -> F_p) in the basis (g - 1), g != 1."""
    n = gamma.order
    mats = []
    for s in range(n):
        M = np.zeros((n - 1, n - 1), dtype=np.int64)
        for h in range(1, n):
            # s(h - 1) = (sh - 1) - (s - 1)
            sh = gamma.table[s][h]
            if sh:
                M[sh - 1, h - 1] += 1
            if s:
                M[s - 1, h - 1] -= 1
        mats.append(M % p)
    return mats


@dataclass(frozen=True)
class ElementaryCoordinates:
    """Coordinates of an elementary abelian p-group in a fixed basis."""

    p: int
    basis: tuple[int, ...]
    coords: np.ndarray  # coords[x] = coordinate vector of x

    @property
    def dim(self) -> int:
        return len(self.basis)


def elementary_coordinates(A: FiniteGroup) -> ElementaryCoordinates:
    exps = set(A.element_orders) - {1}
    if not A.is_abelian or len(exps) > 1:
        raise NotAbelian("not an elementary abelian group")
    p = exps.pop() if exps else 2
    basis = list(A.generators)
    d = len(basis)
    coords = np.zeros((A.order, d), dtype=np.int64)
    from itertools import product

    for c in product(range(p), repeat=d):
        x = 0
        for b, k in zip(basis, c):
            x = A.table[x][A.power(b, k)]
        coords[x] = c
    return ElementaryCoordinates(p, tuple(basis), coords)


def hom_gamma_count(m: GammaGroup, p: int) -> int:
    """|Hom_Gamma(I, A)| by F_p linear algebra on the intertwining equations."""
    gamma = m.gamma
    ec = elementary_coordinates(m.g)
    d, n1 = ec.dim, gamma.order - 1
    if d == 0 or n1 == 0:
        return 1
    rho_i = augmentation_matrices(gamma, p)
    eqs = []
    for s in gamma.generators:
        rho_a = np.stack([ec.coords[m.act[s][b]] for b in ec.basis], axis=1)  # columns = images of basis
        # vec(M R) - vec(P M) = (R^T (x) I_d - I_n1 (x) P) vec(M)
        eqs.append(np.kron(rho_i[s].T, np.eye(d, dtype=np.int64)) - np.kron(np.eye(n1, dtype=np.int64), rho_a))
    if not eqs:
        return p ** (d * n1)
    rank = fp_rank(np.vstack(eqs), p)
    return p ** (d * n1 - rank)


def augmentation_model(gamma: FiniteGroup, p: int, bound: int = 729) -> tuple[GammaGroup, Triple]:
    """I as a table Gamma-module with the universal cocycle g -> g - 1.

    Element with coordinates c (in the basis g - 1, g != 1) is coded sum c_i p^i.
    """
    n1 = gamma.order - 1
    size = p**n1
    if size > bound:
        raise OrderBoundExceeded(f"|I| = {size} exceeds bound {bound}")
    digits = np.asarray([[(x // p**i) % p for i in range(n1)] for x in range(size)], dtype=np.int64).reshape(
        size, n1
    )
    w = p ** np.arange(n1, dtype=np.int64)
    table = ((digits[:, None, :] + digits[None, :, :]) % p) @ w
    I = FiniteGroup(table.tolist(), f"I_{p}({gamma.name})")
    mats = augmentation_matrices(gamma, p)
    act = [(((digits @ M.T) % p) @ w).tolist() for M in mats]
    gg = GammaGroup(gamma, I, act)
    omega = [0] + [p**i for i in range(n1)]
    t = Triple(gg, omega)
    if not t.is_generating:
        raise TheoremViolation("universal cocycle is not generating")
    return gg, t


def augmentation_check(m: GammaGroup, report: Optional[Report] = None) -> Report:
    """Z1(Gamma, A) <-> Hom_Gamma(I, A) for an elementary abelian module A."""
    rep = report if report is not None else Report("augmentation")
    gamma = m.gamma
    ec = elementary_coordinates(m.g)
    p = ec.p
    z1 = cocycle_value_lists(m)
    count = hom_gamma_count(m, p)
    where = f"{gamma.name} on {m.g.name} {m.act}"
    rep.check(len(z1) == count, f"|Z1| = {len(z1)} but |Hom_Gamma(I, A)| = {count}: {where}")
    if gamma.order == 1 or ec.dim == 0:
        return rep
    rho_i = augmentation_matrices(gamma, p)
    rho_a = {
        s: np.stack([ec.coords[m.act[s][b]] for b in ec.basis], axis=1) for s in range(gamma.order)
    }
    for vals in z1:
        M = np.stack([ec.coords[vals[h]] for h in range(1, gamma.order)], axis=1)
        ok = all(((M @ rho_i[s] - rho_a[s] @ M) % p == 0).all() for s in gamma.generators)
        rep.check(ok, f"the extension of a cocycle is not Gamma-linear: {where}")
    return rep


# coGalois group of a module ----------------------------------------------------------


@dataclass
class CoGData:
    invariants: int
    cog: FiniteGroup
    theta: list[int]
    image: int
    z1: Z1Module


def cog_group(m: GammaGroup) -> CoGData:
    """E^Gamma, coG(E) = E/E^Gamma and theta: E -> Z1(Gamma, E), x -> (g -> gx - x)."""
    E = m.g
    if not E.is_abelian:
        raise NotAbelian("coG needs an abelian module")
    z = Z1Module(m)
    inv = m.invariants_mask
    cog, _ = quotient(E, inv, "coG")
    rows = z.T[z.act[:, np.arange(E.order)].T, z.inv[:, None]]
    theta = z.lookup(rows).tolist()
    ker = to_mask(x for x, v in enumerate(theta) if v == 0)
    if ker != inv:
        raise TheoremViolation("kernel of theta differs from the invariants")
    perm = z.gamma_perm
    for s in range(m.gamma.order):
        for x in range(E.order):
            if theta[m.act[s][x]] != perm[s][theta[x]]:
                raise TheoremViolation("theta is not equivariant")
    image = to_mask(theta)
    if image != z.coboundary_mask:
        raise TheoremViolation("image of theta differs from the coboundaries")
    return CoGData(inv, cog, theta, image, z)


def cog_lemma_check(m: GammaGroup) -> bool:
    """coG(E) isomorphic to Z1(Gamma, E) iff H^1(Gamma, E) = 0; returns the common verdict."""
    data = cog_group(m)
    iso = data.cog.order == data.z1.order and find_isomorphism(data.cog, data.z1.group) is not None
    h1_zero = data.z1.h1_order == 1
    if iso != h1_zero:
        raise TheoremViolation("coG(E) = Z1 does not match H^1 = 0")
    return iso
