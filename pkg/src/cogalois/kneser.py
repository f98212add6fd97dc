"""Surjectivity of cocycles: equivalent tests, criteria, and Kneser/coGalois ideals."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .cocycle import Triple, induced_cocycle, kernel_invariants
from .errors import (
    ImageNotIdeal,
    NotGenerating,
    NotNilpotent,
    NotSurjective,
    TheoremViolation,
)
from .groups import Subgroup, bits, popcount, prime_factors, to_mask
from .operators import Ideal, as_ideal, semidirect


@dataclass
class KneserReport:
    triple: Triple
    is_kneser: bool
    witnesses: dict = field(default_factory=dict)


def _coset_test(t: Triple) -> tuple[bool, dict]:
    """Gamma/Delta -> G, s Delta -> eta(s): well defined, injective; bijective iff Kneser."""
    gamma, v = t.gamma, t.values
    k = bits(t.kernel_mask)
    label: dict[int, int] = {}
    cosets = 0
    for s in range(gamma.order):
        if s in label:
            continue
        for d in k:
            label[gamma.table[s][d]] = cosets
        vals = {v[gamma.table[s][d]] for d in k}
        if len(vals) != 1:
            raise TheoremViolation(f"eta not constant on the coset of {s}")
        cosets += 1
    images = {}
    for s, c in label.items():
        if images.setdefault(v[s], c) != c:
            raise TheoremViolation("eta identifies two distinct cosets")
    return cosets == t.g.order, {"cosets": cosets}


def _factorization_test(t: Triple) -> tuple[bool, dict]:
    """E = Gamma1 * Gamma2 in the semidirect product, with the index identities."""
    sd = semidirect(t.gg)
    E, m = sd.e, t.gamma.order
    g1 = list(range(m))  # zero section
    g2 = [t.values[s] * m + s for s in range(m)]
    prod = to_mask(E.table[a][b] for a in g1 for b in g2)
    ok = prod == E.full_mask
    meet = to_mask(g1) & to_mask(g2)
    if meet != to_mask(sd.s1(d) for d in bits(t.kernel_mask)):
        raise TheoremViolation("Gamma1 meet Gamma2 differs from s1(Delta)")
    return ok, {"product_size": popcount(prod), "meet": popcount(meet), "e": E.order}


def _orbit_test(t: Triple) -> tuple[bool, dict]:
    """s * x = eta(s) s(x) is an action; the orbit of 1 and its stabilizer."""
    gamma, g, act, v = t.gamma, t.g, t.gg.act, t.values
    T = g.table

    def star(s: int, x: int) -> int:
        return T[v[s]][act[s][x]]

    for s in gamma.generators:
        for r in gamma.generators:
            for x in range(g.order):
                if star(gamma.table[s][r], x) != star(s, star(r, x)):
                    raise TheoremViolation(f"twisted action fails at ({s}, {r}, {x})")
    orbit, seen = [0], 1
    i = 0
    while i < len(orbit):
        for s in gamma.generators:
            y = star(s, orbit[i])
            if not (seen >> y) & 1:
                seen |= 1 << y
                orbit.append(y)
        i += 1
    stab = to_mask(s for s in range(gamma.order) if star(s, 0) == 0)
    if stab != t.kernel_mask:
        raise TheoremViolation("stabilizer of 1 differs from the kernel")
    return len(orbit) == g.order, {"orbit": len(orbit)}


def is_surjective_multi(t: Triple) -> KneserReport:
    direct = t.is_surjective
    rep = KneserReport(t, direct)
    if not direct:
        rep.witnesses["missing"] = min(x for x in range(t.g.order) if not (t.image_mask >> x) & 1)
    tests = {"coset": _coset_test, "factorization": _factorization_test, "orbit": _orbit_test}
    for name, fn in tests.items():
        ok, info = fn(t)
        rep.witnesses[name] = info
        if ok != direct:
            raise TheoremViolation(f"surjectivity test {name!r} disagrees on {t!r}")
    index = t.gamma.order // popcount(t.kernel_mask)
    rep.witnesses["index"] = index
    if (index >= t.g.order) != direct:
        raise TheoremViolation(f"index test disagrees on {t!r}")
    if direct:
        f = rep.witnesses["factorization"]
        m, e = t.gamma.order, f["e"]
        idx = {
            "gamma:delta": index,
            "gamma1:meet": m // f["meet"],
            "gamma2:meet": m // f["meet"],
            "g": t.g.order,
            "e:gamma1": e // m,
            "e:gamma2": e // m,
        }
        if len(set(idx.values())) != 1:
            raise TheoremViolation(f"index identities fail on {t!r}: {idx}")
    return rep


def pronil_criterion(t: Triple) -> bool:
    """Surjectivity of eta through the primary components of a nilpotent G."""
    g = t.g
    if not g.is_nilpotent:
        raise NotNilpotent(f"{g.name} is not nilpotent")
    verdict = True
    for p in prime_factors(g.order):
        tp = induced_cocycle(t, g.coprime_mask(p))
        if tp.g.order != g.order // popcount(g.coprime_mask(p)):
            raise TheoremViolation("primary quotient has the wrong order")
        verdict = verdict and tp.is_surjective
    if verdict != t.is_surjective:
        raise TheoremViolation(f"primary-component criterion disagrees on {t!r}")
    return verdict


def ideal_surjectivity_criterion(t: Triple, lam: Subgroup | int) -> bool:
    mask = lam.mask if isinstance(lam, Subgroup) else lam
    a = t.image_of(mask)
    if not t.gg.is_ideal_mask(a):
        raise ImageNotIdeal(f"image of {bits(mask)} is not an ideal")
    verdict = induced_cocycle(t, a).is_surjective
    if verdict != t.is_surjective:
        raise TheoremViolation(f"ideal-image criterion disagrees on {t!r}")
    return verdict


def central_image_criterion(t: Triple) -> bool:
    """The special case with the subgroup of elements fixing G with central, equivariant image."""
    return ideal_surjectivity_criterion(t, kernel_invariants(t).delta_bar)


# Kneser and coGalois ideals ------------------------------------------------------


def _all_images_ideal(t: Triple) -> bool:
    k = t.kernel_mask
    return all(t.gg.is_ideal_mask(t.image_of(m)) for m in t.gamma.subgroup_masks() if m & k == k)


def _maximal(masks: list[int]) -> list[int]:
    return [a for a in masks if not any(b != a and a & b == a for b in masks)]


def _minimal(masks: list[int]) -> list[int]:
    return [a for a in masks if not any(b != a and a & b == b for b in masks)]


@dataclass
class IdealClassification:
    triple: Triple
    ideals: list[int]
    kneser: dict[int, bool]
    cogalois: dict[int, bool]
    nk_max: list[int]
    ncg_max: list[int]

    @property
    def kneser_set(self) -> list[int]:
        return [a for a in self.ideals if self.kneser[a]]

    @property
    def cogalois_set(self) -> list[int]:
        return [a for a in self.ideals if self.cogalois[a]]

    def to_json(self) -> dict:
        return {
            "ideals": [{"members": bits(a), "kneser": self.kneser[a], "cogalois": self.cogalois[a]} for a in self.ideals],
            "nk_max": [bits(a) for a in self.nk_max],
            "ncg_max": [bits(a) for a in self.ncg_max],
        }


def classify_ideals(t: Triple) -> IdealClassification:
    cached = t.__dict__.get("_ideal_classification")
    if cached is not None:
        return cached
    if not t.is_generating:
        raise NotGenerating(f"{t!r} is not generating")
    ideals = list(t.gg.ideal_masks)
    kn: dict[int, bool] = {}
    cg: dict[int, bool] = {}
    for a in ideals:
        ta = induced_cocycle(t, a)
        kn[a] = ta.is_surjective
        cg[a] = _all_images_ideal(ta)
    for a in ideals:
        if cg[a] and not kn[a]:
            raise TheoremViolation("coGalois ideal that is not Kneser")
        for b in ideals:
            if a & b == a and (kn[a] and not kn[b] or cg[a] and not cg[b]):
                raise TheoremViolation("Kneser/coGalois ideals do not form an upper set")
    kset = [a for a in ideals if kn[a]]
    mins = _minimal(kset)
    for a in kset:
        if not any(m & a == m for m in mins):
            raise TheoremViolation("Kneser ideal above no minimal Kneser ideal")
    nk = _maximal([a for a in ideals if not kn[a]])
    ncg = _maximal([a for a in ideals if not cg[a]])
    out = IdealClassification(t, ideals, kn, cg, nk, ncg)
    t.__dict__["_ideal_classification"] = out
    return out


def _mask_of(t: Triple, a: Ideal | Subgroup | int) -> int:
    return as_ideal(t.gg, a).mask


def kneser_criterion(t: Triple, a: Ideal | Subgroup | int) -> bool:
    cls = classify_ideals(t)
    mask = _mask_of(t, a)
    verdict = all(mask & ~m for m in cls.nk_max)
    if verdict != cls.kneser[mask]:
        raise TheoremViolation(f"Kneser omitting criterion disagrees at {bits(mask)} on {t!r}")
    return verdict


def cogalois_criterion(t: Triple, a: Ideal | Subgroup | int) -> bool:
    if not t.is_surjective:
        raise NotSurjective(f"{t!r} is not Kneser")
    cls = classify_ideals(t)
    mask = _mask_of(t, a)
    verdict = all(mask & ~m for m in cls.ncg_max)
    if verdict != cls.cogalois[mask]:
        raise TheoremViolation(f"coGalois omitting criterion disagrees at {bits(mask)} on {t!r}")
    return verdict


@dataclass
class CoGaloisVerdict:
    value: bool
    items: dict[str, bool]

    def __bool__(self) -> bool:
        return self.value


def is_cogalois_triple(t: Triple) -> CoGaloisVerdict:
    """Several equivalent characterizations, computed separately and required to agree.

    Only generating cocycles are considered; for others the verdict is False.
    """
    if not t.is_generating:
        return CoGaloisVerdict(False, {})
    over = t.subgroups_over_kernel
    ideals = t.gg.ideal_masks
    J = {m: t.J(m) for m in over}
    S = {a: t.S(a) for a in ideals}
    surj = t.is_surjective
    items = {
        "perfect": surj and all(S[J[m]] == m for m in over) and all(J[S[a]] == a for a in ideals),
        "section": surj and all(S[J[m]] == m for m in over),
        "j_injective": surj and len(set(J.values())) == len(over),
        "s_surjective": surj and set(S.values()) == set(over),
        "image_is_j": all(t.image_of(m) == J[m] for m in over),
        "images_ideal": all(t.gg.is_ideal_mask(t.image_of(m)) for m in over),
    }
    if len(set(items.values())) != 1:
        raise TheoremViolation(f"coGalois characterizations disagree on {t!r}: {items}")
    return CoGaloisVerdict(items["perfect"], items)


def triple_summary(t: Triple) -> dict:
    out: dict = {
        "generating": t.is_generating,
        "normalized": t.is_normalized,
        "kneser": t.is_surjective,
        "cogalois": bool(is_cogalois_triple(t)),
    }
    if t.is_generating:
        out.update(classify_ideals(t).to_json())
    return out


def check_triple_theorems(t: Triple, report=None):
    """Surjectivity equivalences and both omitting criteria on every ideal."""
    from .report import Report

    rep = report if report is not None else Report("kneser")
    try:
        is_surjective_multi(t)
        rep.check(True, "")
        if t.is_generating:
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
    return rep


def nk_set(t: Triple) -> list[int]:
    cls = classify_ideals(t)
    return [a for a in cls.ideals if not cls.kneser[a]]


def ncg_set(t: Triple) -> list[int]:
    cls = classify_ideals(t)
    return [a for a in cls.ideals if not cls.cogalois[a]]


def first_non_ideal_image(t: Triple) -> Optional[int]:
    for m in t.subgroups_over_kernel:
        if not t.gg.is_ideal_mask(t.image_of(m)):
            return m
    return None
