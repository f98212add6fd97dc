"""Minimal non-Kneser / minimal non-coGalois triples: detection, isomorphism, enumeration."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import gcd
from multiprocessing import Pool
from typing import Iterable, Iterator, Optional, Sequence

from .catalog import abelian, by_name, catalog_groups, cyclic, dicyclic, dihedral, semidirect_by_unit, small_groups
from .cocycle import Triple, cocycle_value_lists, kernel_invariants, make_cocycle, triple_to_json
from .errors import BoundError, BoundExceeded, NotGenerating, NotSurjective, TheoremViolation
from .groups import FiniteGroup, GroupMorphism, bits, isomorphisms, popcount, prime_factors, to_mask
from .kneser import _all_images_ideal, classify_ideals, first_non_ideal_image, is_cogalois_triple
from .operators import GammaGroup, all_actions, character_action, characters, quotient_gamma, unit_group
from .report import Report

FILTERS = ("all", "abelian", "character")


# building blocks ---------------------------------------------------------------


def hom_from_generators(
    G: FiniteGroup, gens: Sequence[int], images: Sequence[int], H: FiniteGroup
) -> GroupMorphism:
    """The homomorphism G -> H with gens[i] -> images[i]; ValueError if none exists."""
    m = [-1] * G.order
    m[0] = 0
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for g, h in zip(gens, images):
            y = G.table[x][g]
            v = H.table[m[x]][h]
            if m[y] < 0:
                m[y] = v
                queue.append(y)
            elif m[y] != v:
                raise ValueError("generator images do not define a homomorphism")
    if min(m) < 0:
        raise ValueError("elements do not generate the group")
    f = GroupMorphism(G, H, tuple(m))
    if not f.is_homomorphism():
        raise ValueError("generator images do not define a homomorphism")
    return f


def action_from_generators(
    gamma: FiniteGroup, g: FiniteGroup, gens: Sequence[int], auts: Sequence[Sequence[int]]
) -> GammaGroup:
    act: list[Optional[list[int]]] = [None] * gamma.order
    act[0] = list(range(g.order))
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for s, a in zip(gens, auts):
            y = gamma.table[x][s]
            comp = [act[x][a[z]] for z in range(g.order)]
            if act[y] is None:
                act[y] = comp
                queue.append(y)
            elif act[y] != comp:
                raise ValueError("generator automorphisms do not define an action")
    return GammaGroup(gamma, g, act)


def cocycle_from_generators(gg: GammaGroup, gens: Sequence[int], values: Sequence[int]) -> Triple:
    """Extend eta(s t) = eta(s) s(eta(t)) from generator values and validate the law."""
    gamma, g = gg.gamma, gg.g
    eta = [-1] * gamma.order
    eta[0] = 0
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for s, v in zip(gens, values):
            y = gamma.table[x][s]
            w = g.table[eta[x]][gg.act[x][v]]
            if eta[y] < 0:
                eta[y] = w
                queue.append(y)
            elif eta[y] != w:
                raise ValueError("generator values do not define a cocycle")
    return Triple(gg, make_cocycle(gg, eta))


# detection --------------------------------------------------------------------------


@dataclass
class Verdict:
    value: bool
    certificate: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.value


def is_mnk(t: Triple) -> Verdict:
    if not t.is_generating:
        raise NotGenerating(f"{t!r} is not generating")
    cert: dict = {"surjective": t.is_surjective, "normalized": t.is_normalized, "indices": []}
    ok_index = True
    for a in t.gg.ideal_masks:
        if a == 1:
            continue
        pair = (t.gamma.order // popcount(t.S(a)), t.g.order // popcount(a))
        cert["indices"].append({"ideal": bits(a), "gamma_index": pair[0], "g_index": pair[1]})
        ok_index = ok_index and pair[0] == pair[1]
    value = not t.is_surjective and ok_index and t.is_normalized
    cls = classify_ideals(t)
    nk = [a for a in cls.ideals if not cls.kneser[a]]
    if value != (t.is_normalized and nk == [1]):
        raise TheoremViolation(f"mnK conditions disagree with the non-Kneser ideal set on {t!r}")
    cert["nk"] = [bits(a) for a in nk]
    return Verdict(value, cert)


def is_mncg(t: Triple) -> Verdict:
    if not t.is_surjective:
        raise NotSurjective(f"{t!r} is not Kneser")
    k = t.kernel_mask
    witness = None
    for m in t.subgroups_over_kernel:
        if m in (k, t.gamma.full_mask):
            continue
        if not t.gg.is_ideal_mask(t.image_of(m)):
            witness = m
            break
    cls = classify_ideals(t)
    quotients_ok = all(cls.cogalois[a] for a in cls.ideals if a != 1)
    value = witness is not None and quotients_ok and t.is_normalized
    ncg = [a for a in cls.ideals if not cls.cogalois[a]]
    if value != (t.is_normalized and ncg == [1]):
        raise TheoremViolation(f"mncG conditions disagree with the non-coGalois ideal set on {t!r}")
    if value and bool(is_cogalois_triple(t)):
        raise TheoremViolation(f"mncG triple reported coGalois: {t!r}")
    cert = {
        "normalized": t.is_normalized,
        "non_ideal_image": bits(witness) if witness is not None else None,
        "ncg": [bits(a) for a in ncg],
    }
    return Verdict(value, cert)


# isomorphism of triples --------------------------------------------------------------


@dataclass(frozen=True)
class TripleIso:
    phi: GroupMorphism
    psi: GroupMorphism


def triple_invariants(t: Triple) -> tuple:
    ki = kernel_invariants(t)
    ideals = t.gg.ideal_masks
    return (
        t.gamma.order,
        t.g.order,
        t.gamma.order_statistics,
        t.g.order_statistics,
        t.gamma.is_abelian,
        t.g.is_abelian,
        popcount(t.kernel_mask),
        popcount(t.fix_mask),
        popcount(t.image_mask),
        popcount(t.gg.invariants_mask),
        tuple(sorted((popcount(a), popcount(t.S(a))) for a in ideals)),
        tuple(popcount(s.mask) for s in (ki.delta_second, ki.delta_bar, ki.delta_tilde)),
    )


def _psi_from_phi(t1: Triple, t2: Triple, phi: Sequence[int]) -> Optional[list[int]]:
    """psi on G1 forced by psi(eta1(s)) = eta2(phi(s)) and multiplicativity."""
    g1, g2 = t1.g, t2.g
    psi = [-1] * g1.order
    for s in range(t1.gamma.order):
        x, y = t1.values[s], t2.values[phi[s]]
        if psi[x] < 0:
            psi[x] = y
        elif psi[x] != y:
            return None
    seeds = [x for x in range(g1.order) if psi[x] >= 0]
    queue = deque(seeds)
    while queue:
        x = queue.popleft()
        for h in seeds:
            z = g1.table[x][h]
            w = g2.table[psi[x]][psi[h]]
            if psi[z] < 0:
                psi[z] = w
                queue.append(z)
            elif psi[z] != w:
                return None
    if min(psi) < 0:
        return None
    return psi


def triples_isomorphic(t1: Triple, t2: Triple, prescreen: bool = True) -> Optional[TripleIso]:
    if prescreen and triple_invariants(t1) != triple_invariants(t2):
        return None
    a1, a2 = t1.gg.act, t2.gg.act
    for phi in isomorphisms(t1.gamma, t2.gamma):
        if t1.is_generating:
            psis: Iterable[Sequence[int]] = [p for p in [_psi_from_phi(t1, t2, phi.map)] if p is not None]
        else:
            psis = (f.map for f in isomorphisms(t1.g, t2.g))
        for psi in psis:
            f = GroupMorphism(t1.g, t2.g, tuple(psi))
            if not (f.is_bijective() and f.is_homomorphism()):
                continue
            if any(psi[t1.values[s]] != t2.values[phi.map[s]] for s in range(t1.gamma.order)):
                continue
            if all(psi[a1[s][x]] == a2[phi.map[s]][psi[x]] for s in t1.gamma.generators for x in range(t1.g.order)):
                return TripleIso(phi, f)
    return None


# enumeration --------------------------------------------------------------------------


@dataclass
class FoundClass:
    triple: Triple
    certificate: dict
    count: int = 1


@dataclass
class ClassificationRun:
    kind: str
    bounds: dict
    filter: str
    classes: list[FoundClass]
    examined: int = 0
    skipped: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "bounds": self.bounds,
            "filter": self.filter,
            "examined": self.examined,
            "skipped": self.skipped,
            "classes": [
                {
                    "gamma": c.triple.gamma.name,
                    "g": c.triple.g.name,
                    "action": [list(r) for r in c.triple.gg.act],
                    "cocycle": list(c.triple.values),
                    "triple": triple_to_json(c.triple),
                    "count": c.count,
                    "certificate": c.certificate,
                }
                for c in self.classes
            ],
        }


def _gamma_names(max_gamma: int) -> list[str]:
    return [G.name for G in small_groups(min(max_gamma, 16))]


def _g_names(max_g: int, flt: str, max_exponent: Optional[int]) -> list[str]:
    out = []
    for G in catalog_groups(min(max_g, 24)):
        if G.order > max_g or G.order == 1:
            continue
        if flt != "all" and not G.is_abelian:
            continue
        if max_exponent is not None and G.exponent > max_exponent:
            continue
        out.append(G.name)
    return out


def _actions(gamma: FiniteGroup, g: FiniteGroup, flt: str) -> list[list[list[int]]]:
    if flt == "character":
        k = g.exponent
        acts = {tuple(map(tuple, character_action(gamma, g, chi).act)) for chi in characters(gamma, k)}
        return [list(map(list, a)) for a in sorted(acts)]
    return all_actions(gamma, g)


def _quick_filter(kind: str, values: Sequence[int], n_g: int, fix_mask: int) -> bool:
    image = len(set(values))
    kernel = to_mask(s for s, v in enumerate(values) if v == 0)
    if kernel & fix_mask != 1:
        return False
    return image < n_g if kind == "mnk" else image == n_g


def _minimal_ideals(gg: GammaGroup) -> list[int]:
    nontrivial = [a for a in gg.ideal_masks if a != 1]
    return [a for a in nontrivial if not any(b != a and a & b == b for b in nontrivial)]


def _may_be_minimal(kind: str, t: Triple, quotients: list[tuple[GammaGroup, GroupMorphism]]) -> bool:
    """Necessary conditions only: a False here means the full verdict is False too.

    ``quotients`` are the quotients of G by its minimal nontrivial ideals.
    """
    if not t.is_normalized:
        return False
    induced = (Triple(qg, [proj.map[v] for v in t.values]) for qg, proj in quotients)
    if kind == "mnk":
        return all(q.is_surjective for q in induced)
    if first_non_ideal_image(t) is None:
        return False
    return all(_all_images_ideal(q) for q in induced)


def _scan_task(task: tuple[str, str, str, str]) -> tuple[int, list[tuple[list[list[int]], tuple[int, ...], dict]], Optional[str]]:
    kind, gname, hname, flt = task
    gamma, g = by_name(gname), by_name(hname)
    try:
        acts = _actions(gamma, g, flt)
    except BoundError as exc:
        return 0, [], f"{gname} on {hname}: {exc}"
    found = []
    examined = 0
    test = is_mnk if kind == "mnk" else is_mncg
    for act in acts:
        gg = GammaGroup(gamma, g, act, validate=False)
        fix = gg.fix_mask
        quotients = [quotient_gamma(gg, a) for a in _minimal_ideals(gg)]
        for vals in cocycle_value_lists(gg, bound=1 << 20):
            examined += 1
            if not _quick_filter(kind, vals, g.order, fix):
                continue
            t = Triple(gg, vals)
            if kind == "mnk" and not t.is_generating:
                continue
            if not _may_be_minimal(kind, t, quotients):
                continue
            v = test(t)
            if v:
                found.append((act, vals, v.certificate))
    return examined, found, None


def enumerate_triples(
    kind: str,
    max_gamma: int = 16,
    max_g: int = 16,
    flt: str = "character",
    workers: int = 1,
    max_exponent: Optional[int] = None,
) -> ClassificationRun:
    if kind not in ("mnk", "mncg"):
        raise ValueError(kind)
    if flt not in FILTERS:
        raise ValueError(f"unknown filter {flt!r}")
    if max_gamma < 1 or max_g < 1 or max_gamma > 16 or max_g > 24:
        raise BoundExceeded("bounds must satisfy 1 <= max_gamma <= 16 and 1 <= max_g <= 24")
    tasks = [(kind, a, b, flt) for a in _gamma_names(max_gamma) for b in _g_names(max_g, flt, max_exponent)]
    if workers > 1:
        with Pool(workers) as pool:
            results = pool.map(_scan_task, tasks, chunksize=1)
    else:
        results = [_scan_task(t) for t in tasks]
    bounds = {"max_gamma": max_gamma, "max_g": max_g}
    if max_exponent is not None:
        bounds["max_exponent"] = max_exponent
    run = ClassificationRun(kind, bounds, flt, [])
    for (k, a, b, _), (examined, found, skipped) in zip(tasks, results):
        run.examined += examined
        if skipped:
            run.skipped.append(skipped)
        gamma, g = by_name(a), by_name(b)
        for act, vals, cert in found:
            t = Triple(GammaGroup(gamma, g, act, validate=False), vals)
            for c in run.classes:
                if triples_isomorphic(c.triple, t) is not None:
                    c.count += 1
                    break
            else:
                run.classes.append(FoundClass(t, cert))
    _check_buckets(run)
    return run


def _check_buckets(run: ClassificationRun) -> None:
    reps = [c.triple for c in run.classes]
    for i, a in enumerate(reps):
        for b in reps[i + 1 :]:
            if triples_isomorphic(a, b) is not None:
                raise TheoremViolation("two class representatives are isomorphic")


def enumerate_mnk(max_gamma: int = 16, max_g: int = 16, flt: str = "character", workers: int = 1) -> ClassificationRun:
    return enumerate_triples("mnk", max_gamma, max_g, flt, workers)


def enumerate_mncg(
    max_gamma: int = 16, max_g: int = 16, flt: str = "character", workers: int = 1, max_exponent: Optional[int] = None
) -> ClassificationRun:
    return enumerate_triples("mncg", max_gamma, max_g, flt, workers, max_exponent)


# known families -------------------------------------------------------------------------


def remark_triple() -> Triple:
    """Z/2 acting on Z/4 by negation, eta(1) = 1: not Kneser, every proper quotient is."""
    gg = GammaGroup(cyclic(2), cyclic(4), [[0, 1, 2, 3], [0, 3, 2, 1]])
    return Triple(gg, make_cocycle(gg, [0, 1]))


def family_i() -> Triple:
    V = abelian(2, 2, name="C2^2")
    sigma, tau = 2, 1
    chi = {0: 1, sigma: 3, tau: 1, 3: 3}
    gg = character_action(V, cyclic(4), [chi[s] for s in range(4)])
    return cocycle_from_generators(gg, [sigma, tau], [1, 2])


def family_ii() -> Triple:
    D = dihedral(8)
    sigma, tau = 1, 2  # reflection, rotation
    G = abelian(2, 4, name="C2xC4")
    neg = [G.inverse[x] for x in range(G.order)]
    gg = action_from_generators(D, G, [sigma, tau], [neg, list(range(G.order))])
    e1, e2 = 4, 1
    return cocycle_from_generators(gg, [sigma, tau], [e2, G.table[e1][e2]])


def family_iii_units(p: int, r: int) -> list[int]:
    k = p * r
    out = []
    for u in range(1, k):
        if gcd(u, k) != 1 or _order_mod(u, p) != r:
            continue
        ls = [l for l in prime_factors(r) if l != 2] + ([4] if r % 4 == 0 else [])
        if all((u - 1) % l == 0 for l in ls):
            out.append(u)
    return out


def _order_mod(u: int, m: int) -> int:
    k, x = 1, u % m
    while x != 1 % m:
        x = (x * u) % m
        k += 1
    return k


def family_iii(p: int, r: int, u: Optional[int] = None) -> Triple:
    """<s, t | s^r = t^p = 1, s t s^-1 = t^u> acting on Z/pr through s -> u."""
    if u is None:
        us = family_iii_units(p, r)
        if not us:
            raise ValueError(f"no admissible unit for (p, r) = ({p}, {r})")
        u = us[0]
    k = p * r
    gamma = semidirect_by_unit(p, r, u % p, f"C{p}:C{r}")
    sigma, tau = 1, r
    U = unit_group(k)
    pos = {x: i for i, x in enumerate(U.units)}
    chi = hom_from_generators(gamma, [sigma, tau], [pos[u], pos[1]], U.group)
    gg = character_action(gamma, cyclic(k), [U.units[c] for c in chi.map])
    return cocycle_from_generators(gg, [sigma, tau], [p, r])


def family_iii_instances(max_k: int = 15, max_gamma: int = 16) -> list[tuple[int, int]]:
    out = []
    for p in (3, 5, 7, 11, 13):
        for r in range(2, p):
            if (p - 1) % r == 0 and p * r <= min(max_k, max_gamma) and family_iii_units(p, r):
                out.append((p, r))
    return out


def expected_mncg(max_k: int = 15, max_gamma: int = 16) -> list[tuple[str, Triple]]:
    out = [("i", family_i()), ("ii", family_ii())]
    out += [(f"iii({p},{r})", family_iii(p, r)) for p, r in family_iii_instances(max_k, max_gamma)]
    return out


def d8_q_triples() -> tuple[Triple, Triple]:
    """D8 acting on Q8 and back, with eta(reflection) = rho, eta(rotation) = theta."""
    D = dihedral(8)
    Q = dicyclic(8, "Q8")
    sigma, tau = 1, 2  # reflection, rotation in D8
    rho, theta = 1, 2  # x and a in Q8
    # D8 on Q: sigma inverts rho and fixes theta; tau is trivial
    a_sigma = hom_from_generators(Q, [rho, theta], [Q.inverse[rho], theta], Q).map
    gg = action_from_generators(D, Q, [sigma, tau], [a_sigma, list(range(8))])
    fwd = cocycle_from_generators(gg, [sigma, tau], [rho, theta])
    # Q on D8: rho sends sigma to tau^2 sigma and fixes tau; theta is trivial
    tau2 = D.table[tau][tau]
    a_rho = hom_from_generators(D, [sigma, tau], [D.table[tau2][sigma], tau], D).map
    gh = action_from_generators(Q, D, [rho, theta], [a_rho, list(range(8))])
    inv = [0] * 8
    for s, v in enumerate(fwd.values):
        inv[v] = s
    back = Triple(gh, make_cocycle(gh, inv))
    return fwd, back


# audits ---------------------------------------------------------------------------------


def _is_p_group(n: int) -> Optional[int]:
    ps = prime_factors(n)
    return ps[0] if len(ps) == 1 else None


def endomorphism_ring(gg: GammaGroup) -> list[tuple[int, ...]]:
    """Subring of End(G) generated by the action maps (G abelian)."""
    g = gg.g
    T = g.table
    ident = tuple(range(g.order))
    gens = {tuple(a) for a in gg.act} | {ident}
    elems = {tuple([0] * g.order)}
    frontier = list(gens)
    elems |= gens
    while frontier:
        new = []
        for a in frontier:
            for b in list(gens):
                for c in (tuple(T[a[x]][b[x]] for x in range(g.order)), tuple(a[b[x]] for x in range(g.order))):
                    if c not in elems:
                        elems.add(c)
                        new.append(c)
        frontier = new
    return sorted(elems)


def ring_is_local(ring: list[tuple[int, ...]], g: FiniteGroup) -> bool:
    n = g.order
    non_units = [r for r in ring if len(set(r)) != n]
    nu = set(non_units)
    return all(tuple(g.table[a[x]][b[x]] for x in range(n)) in nu for a in non_units for b in non_units)


def minimal_submodules(gg: GammaGroup) -> list[int]:
    ideals = [a for a in gg.ideal_masks if a != 1]
    return [a for a in ideals if not any(b != a and b & a == b for b in ideals)]


def mnk_audit_triple(t: Triple, rep: Report) -> None:
    where = repr(t)
    g, gamma = t.g, t.gamma
    inv = t.fix_mask & t.preimage(g.center_mask)
    rep.check(inv == 1, f"fixer meets preimage of the center nontrivially: {where}")
    if not g.is_nilpotent:
        return
    p = _is_p_group(g.order)
    rep.check(p is not None, f"nilpotent G is not a p-group: {where}")
    if p is None or not g.is_abelian:
        return
    rep.check(t.fix_mask == 1, f"action not faithful: {where}")
    rep.check(t.is_injective, f"eta not injective: {where}")
    fixed = popcount(t.gg.invariants_mask)
    conds = {
        "order": g.order == p * gamma.order,
        "gamma_p_group": _is_p_group(gamma.order) == p or gamma.order == 1,
        "invariants_cyclic_p": fixed == p,
        "invariants_nonzero": fixed > 1,
    }
    rep.check(len(set(conds.values())) == 1, f"p-group equivalences disagree {conds}: {where}")
    rep.check(len(minimal_submodules(t.gg)) == 1, f"minimal submodule not unique: {where}")
    rep.check(ring_is_local(endomorphism_ring(t.gg), g), f"endomorphism ring not local: {where}")


def mnk_invariant_audit(triples: Iterable[Triple] | ClassificationRun) -> Report:
    rep = Report("mnk-audit")
    items = [c.triple for c in triples.classes] if isinstance(triples, ClassificationRun) else list(triples)
    for t in items:
        mnk_audit_triple(t, rep)
    return rep


def family_iii_flags(run: ClassificationRun) -> list[dict]:
    """mncG classes of shape (cyclic-by-cyclic, cyclic G) whose unit violates the family condition."""
    flags = []
    for c in run.classes:
        t = c.triple
        g, gamma = t.g, t.gamma
        if not (g.is_abelian and len(set(g.element_orders)) and max(g.element_orders) == g.order):
            continue
        k = g.order
        # recover the character from the action on the generator 1 of Z/k
        gen = next(x for x in range(k) if g.element_orders[x] == k)
        vals = sorted({_mult_of(g, gen, t.gg.act[s][gen]) for s in range(gamma.order)})
        ps = [p for p in prime_factors(k) if p != 2]
        if not ps or k == 4:
            continue
        ok = False
        for p in ps:
            r = k // p
            if gamma.order != k or r < 2 or (p - 1) % r:
                continue
            for u in vals:
                if _order_mod(u, p) == r and u in family_iii_units(p, r):
                    ok = True
        if not ok:
            flags.append({"gamma": gamma.name, "g": g.name, "units": vals})
    return flags


def _mult_of(g: FiniteGroup, gen: int, y: int) -> int:
    x, k = 0, 0
    while x != y:
        x = g.table[x][gen]
        k += 1
    return k
