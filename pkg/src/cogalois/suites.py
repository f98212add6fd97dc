"""Named verification suites run by ``cogalois verify``.

Each suite sweeps a fixed, bounded family of inputs and returns a Report.
"""
from __future__ import annotations

import itertools
import random
import time
from typing import Callable, Optional

from .catalog import abelian_groups, by_name, catalog_groups, cyclic, small_groups
from .classify import (
    ClassificationRun,
    d8_q_triples,
    enumerate_mncg,
    enumerate_mnk,
    expected_mncg,
    family_iii_flags,
    is_mncg,
    is_mnk,
    mnk_invariant_audit,
    remark_triple,
    triples_isomorphic,
)
from .cocycle import Triple, generating_triples, kernel_invariants
from .connexion import augmentation_check, composition_check, dual_module, pairing_check, verify_cogalois_connexion
from .errors import CogaloisError, SuiteUnknown, TheoremViolation
from .groups import find_isomorphism, prime_factors
from .kneser import (
    classify_ideals,
    cogalois_criterion,
    is_cogalois_triple,
    is_surjective_multi,
    kneser_criterion,
    pronil_criterion,
)
from .operators import GammaGroup, all_actions
from .report import Report
from .rings import (
    EisensteinData,
    build_local_ring,
    field_triple,
    principal_unit_triples,
    quadratic_family,
    quadratic_orbits,
    truncated_polynomial_ring,
)
from .selfaction import adequate_units, deform, deformation_classes, unit_self_action


def _guard(rep: Report, fn: Callable[[], object], where: str) -> object:
    """Run fn, turning a theorem violation into a recorded failure."""
    try:
        return fn()
    except TheoremViolation as exc:
        rep.fail(f"{where}: {exc}")
        return None


# sweep over small triples (criteria 1 to 3) -------------------------------------------


def small_triple_sweep(max_order: int = 8) -> dict[str, Report]:
    laws = Report("connexion-laws")
    crit = Report("omitting-criteria")
    index = Report("surjectivity-witnesses")
    n_actions = n_triples = 0
    for gamma in small_groups(max_order):
        for g in small_groups(max_order):
            for act in all_actions(gamma, g):
                gg = GammaGroup(gamma, g, act, validate=False)
                n_actions += 1
                for t in generating_triples(gg):
                    n_triples += 1
                    verify_cogalois_connexion(t, laws)
                    _check_criteria(t, crit)
                    index.checked += 1
                    _guard(index, lambda: is_surjective_multi(t), repr(t))
                    _guard(index, lambda: kernel_invariants(t), repr(t))
    for r in (laws, crit, index):
        r.data.update({"actions": n_actions, "triples": n_triples})
    return {"laws": laws, "criteria": crit, "index": index}


def _check_criteria(t: Triple, rep: Report) -> None:
    try:
        cls = classify_ideals(t)
        for a in cls.ideals:
            kneser_criterion(t, a)
            rep.checked += 1
            if t.is_surjective:
                cogalois_criterion(t, a)
                rep.checked += 1
        is_cogalois_triple(t)
        rep.checked += 1
    except TheoremViolation as exc:
        rep.fail(str(exc))


def suite_connexion_laws() -> Report:
    out = small_triple_sweep()
    rep = Report("connexion-laws")
    for r in out.values():
        rep.merge(r)
    return rep


# abelian modules (criterion 12) ---------------------------------------------------------


def abelian_module_sweep(parts: tuple[str, ...] = ("pairing", "composition", "augmentation")) -> Report:
    rep = Report("+".join(parts))
    n = 0
    for gamma in small_groups(8):
        for a in abelian_groups(9):
            elementary = len(set(a.element_orders) - {1}) <= 1
            for act in all_actions(gamma, a):
                gg = GammaGroup(gamma, a, act, validate=False)
                n += 1
                if "pairing" in parts or "composition" in parts:
                    d = dual_module(gg)
                    if "pairing" in parts:
                        pairing_check(d, rep)
                    if "composition" in parts:
                        composition_check(d, rep)
                if "augmentation" in parts and elementary:
                    augmentation_check(gg, rep)
    rep.data["modules"] = n
    return rep


# pronilpotent criterion (criterion 4) ---------------------------------------------------


def suite_pronil(max_gamma: int = 8, max_g: int = 24) -> Report:
    rep = Report("pronil")
    targets = [g for g in catalog_groups(max_g) if g.is_nilpotent and len(prime_factors(g.order)) > 1]
    for gamma in small_groups(max_gamma):
        for g in targets:
            for act in all_actions(gamma, g):
                for t in generating_triples(GammaGroup(gamma, g, act, validate=False)):
                    rep.checked += 1
                    _guard(rep, lambda: pronil_criterion(t), repr(t))
    rep.data["groups"] = [g.name for g in targets]
    return rep


# adequate units (criterion 5) ------------------------------------------------------------


def suite_adequate_units(max_n: int = 500) -> Report:
    rep = Report("adequate-units")
    for n in range(2, max_n + 1):
        rep.checked += 1
        _guard(rep, lambda: adequate_units(n, "both"), f"n = {n}")
    rep.check(adequate_units(4) == [1, 3], "U_4 adequate units differ from {1, 3}")
    rep.check(adequate_units(8) == [1, 3, 5, 7], "U_8 adequate units differ from {1, 3, 5, 7}")
    return rep


# self-action deformations (criterion 6) ------------------------------------------------


def _class_names(gamma_name: str) -> list[str]:
    return [c.representative.name for c in deformation_classes(by_name(gamma_name))]


def suite_selfact(rep: Optional[Report] = None) -> Report:
    rep = rep if rep is not None else Report("selfact-8")
    for gname, expected in (("C4", ["C4", "C2^2"]), ("C8", ["C8", "D8", "Q8"])):
        classes = deformation_classes(by_name(gname))
        found = []
        for c in classes:
            match = next((e for e in expected if find_isomorphism(by_name(e), c.representative)), None)
            found.append(match)
        rep.check(sorted(map(str, found)) == sorted(expected), f"deformation classes of {gname}: {found}, expected {expected}")
        rep.data[gname] = found
    for u, target in ((7, "D8"), (3, "Q8")):
        d = deform(unit_self_action(8, u, cyclic(8)))
        rep.check(find_isomorphism(by_name(target), d.group) is not None, f"deforming Z/8 by {u} does not give {target}")
        rep.check(bool(is_cogalois_triple(d.forward)), f"forward triple for u = {u} is not coGalois")
        rep.check(d.backward.is_surjective, f"backward triple for u = {u} is not Kneser")
        rep.check(not is_cogalois_triple(d.backward), f"backward triple for u = {u} is coGalois")
    return rep


# D8 and the quaternions (criterion 7) --------------------------------------------------


def suite_d8q() -> Report:
    rep = Report("d8q")
    fwd, back = d8_q_triples()
    rep.check(fwd.is_bijective, "eta: D8 -> Q is not bijective")
    rep.check(back.is_bijective, "inverse of eta is not a bijective cocycle")
    for label, t in (("(D8, Q, eta)", fwd), ("(Q, D8, eta^-1)", back)):
        try:
            v = is_mncg(t)
            rep.check(bool(v), f"{label} is not mncG: {v.certificate}")
            rep.data[label] = bool(v)
        except CogaloisError as exc:
            rep.fail(f"{label}: {exc}")
    return rep


# classification runs (criteria 8, 9) ----------------------------------------------------


def expected_mnk(max_gamma: int = 16, max_g: int = 16) -> list[tuple[str, Triple]]:
    out = [("Z/2 on Z/4", remark_triple())]
    for p in (3, 5, 7, 11, 13):
        if p > max_g:
            continue
        for r in range(2, min(p - 1, max_gamma, 16) + 1):
            if (p - 1) % r == 0:
                out.append((f"F{p}, r={r}", field_triple(p, r)))
    return out


def compare_run(run: ClassificationRun, expected: list[tuple[str, Triple]], rep: Report) -> None:
    """Exact set equality between found classes and the expected list."""
    matched: dict[str, int] = {}
    for i, c in enumerate(run.classes):
        hits = [name for name, t in expected if triples_isomorphic(c.triple, t) is not None]
        rep.check(len(hits) == 1, f"class {i} ({c.triple.gamma.name} on {c.triple.g.name}) matches {hits}")
        for h in hits:
            matched[h] = matched.get(h, 0) + 1
    for name, _ in expected:
        rep.check(matched.get(name) == 1, f"expected class {name} found {matched.get(name, 0)} times")
    rep.data["found"] = len(run.classes)
    rep.data["expected"] = [name for name, _ in expected]


def suite_character(workers: int = 1, run: Optional[ClassificationRun] = None) -> Report:
    rep = Report("character")
    t0 = time.perf_counter()
    run = run if run is not None else enumerate_mnk(16, 16, "character", workers)
    rep.data["seconds"] = round(time.perf_counter() - t0, 1)
    expected = expected_mnk()
    for name, t in expected:
        rep.check(bool(is_mnk(t)), f"expected class {name} is not mnK")
    compare_run(run, expected, rep)
    return rep


def suite_mncg(workers: int = 1, run: Optional[ClassificationRun] = None) -> Report:
    rep = Report("mncg")
    t0 = time.perf_counter()
    run = run if run is not None else enumerate_mncg(16, 16, "character", workers, max_exponent=15)
    rep.data["seconds"] = round(time.perf_counter() - t0, 1)
    expected = expected_mncg()
    for name, t in expected:
        rep.check(bool(is_mncg(t)), f"expected family {name} is not mncG")
    compare_run(run, expected, rep)
    rep.data["family_iii_flags"] = family_iii_flags(run)
    return rep


# principal rings (criterion 10) ------------------------------------------------------------


def ring_spot_rings() -> dict[str, object]:
    return {
        "F3[x]/(x^2)": truncated_polynomial_ring(3, 2),
        "F5[x]/(x^2)": truncated_polynomial_ring(5, 2),
        "F3[x]/(x^3)": truncated_polynomial_ring(3, 3),
        "Z/4": build_local_ring(EisensteinData(2, 2, 1, 1, (1,))),
    }


def suite_rings(rep: Optional[Report] = None, collect: Optional[list[Triple]] = None) -> Report:
    rep = rep if rep is not None else Report("ab2")
    results = {}
    for name, R in ring_spot_rings().items():
        res = _guard(rep, lambda: principal_unit_triples(R), name)
        rep.checked += 1
        if res is None:
            continue
        results[name] = res
        rep.data[name] = res.to_json()
        if collect is not None:
            collect.extend(t for t, flag in zip(res.triples, res.mnk) if flag)
    for name in ("F3[x]/(x^2)", "F5[x]/(x^2)"):
        if name in results:
            rep.check(results[name].case == "i" and results[name].has_mnk, f"{name} has no mnK injective triple")
    if "F3[x]/(x^3)" in results:
        rep.check(not results["F3[x]/(x^3)"].has_mnk, "F3[x]/(x^3) admits an mnK triple")
    if "Z/4" in results:
        z4 = results["Z/4"]
        rep.check(z4.case == "ii" and len(z4.orbits) == 1, "Z/4 does not give a single class")
        rep.check(
            all(triples_isomorphic(t, remark_triple()) is not None for t in z4.triples),
            "Z/4 class differs from the Z/2 on Z/4 triple",
        )
    for name, res in results.items():
        if res.predicted_count is not None:
            rep.check(res.predicted_count == len(res.injective), f"{name}: redundancy count mismatch")
    return rep


# quadratic family (criterion 11) ----------------------------------------------------------


def _symmetric(p: int, s: int, flat: tuple[int, ...]) -> list[list[int]]:
    M = [[0] * s for _ in range(s)]
    it = iter(flat)
    for i in range(s):
        for j in range(i, s):
            M[i][j] = M[j][i] = next(it)
    return M


def _rank_deficient_shapes(p: int, s: int) -> list[list[list[int]]]:
    """Diagonal forms of each rank below s, with every square class of entries."""
    out = []
    for rank in range(s):
        for entries in itertools.product(range(1, p), repeat=rank):
            M = [[0] * s for _ in range(s)]
            for i, e in enumerate(entries):
                M[i][i] = e
            out.append(M)
    return out


def suite_quad_family(seed: int = 0, samples: int = 200, rep: Optional[Report] = None, collect: Optional[list[Triple]] = None) -> Report:
    rep = rep if rep is not None else Report("quad-family")
    p = 3
    # s = 2: every symmetric matrix and every lambda0
    s = 2
    found = []
    for flat in itertools.product(range(p), repeat=s * (s + 1) // 2):
        L = _symmetric(p, s, flat)
        for lam0 in itertools.product(range(p), repeat=s):
            q = _guard(rep, lambda: quadratic_family(p, s, lam0, L), f"s=2, {L}, {lam0}")
            rep.checked += 1
            if q is not None and q.verdict:
                found.append(q.triple)
    orbits = quadratic_orbits(p, s, [t.values for t in found])
    reps = [found[o[0]] for o in orbits]
    for i, a in enumerate(reps):
        for b in reps[i + 1 :]:
            rep.check(triples_isomorphic(a, b) is None, "two s=2 orbits are isomorphic triples")
    rep.check(len(reps) == 2, f"s=2 gives {len(reps)} classes, expected 2")
    rep.data["s2"] = {"inputs": p ** (s * (s + 1) // 2 + s), "mnk": len(found), "classes": len(reps)}
    if collect is not None:
        collect.extend(reps)
    # s = 3: seeded random sample plus the rank-deficient shapes
    s = 3
    rng = random.Random(seed)
    mats = [_symmetric(p, s, tuple(rng.randrange(p) for _ in range(6))) for _ in range(samples)]
    mats += _rank_deficient_shapes(p, s)
    canon = None
    n_mnk = 0
    for L in mats:
        lam0 = [rng.randrange(p) for _ in range(s)]
        q = _guard(rep, lambda: quadratic_family(p, s, lam0, L), f"s=3, {L}, {lam0}")
        rep.checked += 1
        if q is None or not q.verdict:
            continue
        n_mnk += 1
        if canon is None:
            canon = q.triple
            if collect is not None:
                collect.append(canon)
        else:
            rep.check(triples_isomorphic(canon, q.triple) is not None, f"s=3 triple for {L} is a second class")
    rep.data["s3"] = {"inputs": len(mats), "mnk": n_mnk, "classes": int(canon is not None), "seed": seed}
    return rep


# mnK audit (criterion 13) ---------------------------------------------------------------


def suite_audit(workers: int = 1, run: Optional[ClassificationRun] = None, seed: int = 0) -> Report:
    rep = Report("ab1")
    run = run if run is not None else enumerate_mnk(16, 16, "character", workers)
    triples = [c.triple for c in run.classes]
    extra: list[Triple] = []
    suite_rings(Report(), extra)
    suite_quad_family(seed, samples=20, rep=Report(), collect=extra)
    rep.merge(mnk_invariant_audit(triples + extra))
    rep.data["audited"] = len(triples) + len(extra)
    return rep


SUITES: dict[str, Callable[..., Report]] = {
    "connexion-laws": lambda **kw: suite_connexion_laws(),
    "pairing": lambda **kw: abelian_module_sweep(("pairing",)),
    "composition": lambda **kw: abelian_module_sweep(("composition",)),
    "augmentation": lambda **kw: abelian_module_sweep(("augmentation",)),
    "adequate-units": lambda **kw: suite_adequate_units(),
    "pronil": lambda **kw: suite_pronil(),
    "ab1": lambda workers=1, seed=0, **kw: suite_audit(workers, seed=seed),
    "ab2": lambda **kw: suite_rings(),
    "character": lambda workers=1, **kw: suite_character(workers),
    "mncg": lambda workers=1, **kw: suite_mncg(workers),
    "d8q": lambda **kw: suite_d8q(),
    "selfact-8": lambda **kw: suite_selfact(),
    "quad-family": lambda seed=0, **kw: suite_quad_family(seed),
}


def run_suite(name: str, workers: int = 1, seed: int = 0) -> Report:
    if name not in SUITES:
        raise SuiteUnknown(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    rep = SUITES[name](workers=workers, seed=seed)
    rep.name = name
    return rep
