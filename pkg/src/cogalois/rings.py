"""Finite local rings and the cocycle families built from them."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .catalog import abelian, cyclic
from .classify import Verdict, cocycle_from_generators, is_mnk
from .cocycle import Triple, cocycle_value_lists, make_cocycle
from .errors import BadParameters, BadShape, BoundExceeded, ModelUnavailable, NotGenerating, NotLocal, TheoremViolation
from .groups import FiniteGroup, GroupMorphism, bits, homomorphisms, popcount, prime_factors, to_mask
from .operators import GammaGroup

RING_BOUND = 729


def _is_prime(p: int) -> bool:
    return p >= 2 and prime_factors(p) == [p]


@dataclass
class FiniteLocalRing:
    """Commutative ring on 0..N-1 with 0 and 1 at indices 0 and 1 (when N > 1)."""

    add: np.ndarray
    mul: np.ndarray
    labels: list[tuple]
    name: str = "R"
    theta: Optional[int] = None

    def __post_init__(self) -> None:
        n = len(self.labels)
        if self.add.shape != (n, n) or self.mul.shape != (n, n):
            raise BadShape("ring tables have the wrong shape")
        idx = np.arange(n)
        if not (self.add[0] == idx).all() or not (self.mul[1] == idx).all():
            raise BadShape("0 and 1 must sit at indices 0 and 1")
        if not (self.add == self.add.T).all() or not (self.mul == self.mul.T).all():
            raise BadShape("ring is not commutative")
        units = self.units
        maxi = [x for x in range(n) if x not in set(units)]
        mm = np.array(maxi)
        if not np.isin(self.add[np.ix_(mm, mm)], mm).all():
            raise NotLocal(f"non-units of {self.name} are not closed under addition")
        self._check_nilpotency()

    @property
    def order(self) -> int:
        return len(self.labels)

    @cached_property
    def units(self) -> list[int]:
        return [x for x in range(self.order) if (self.mul[x] == 1).any()]

    @cached_property
    def maximal_ideal(self) -> list[int]:
        u = set(self.units)
        return [x for x in range(self.order) if x not in u]

    @cached_property
    def characteristic(self) -> int:
        k, x = 1, 1
        while x != 0:  # k counts the summands in x = 1 + ... + 1
            x = int(self.add[x, 1])
            k += 1
        return k

    @cached_property
    def residue_order(self) -> int:
        return self.order // len(self.maximal_ideal)

    @cached_property
    def _powers(self) -> list[frozenset[int]]:
        """m^0, m^1, ... down to the zero ideal."""
        out = [frozenset(range(self.order))]
        m = self.maximal_ideal
        cur = {1}
        while True:
            nxt = frozenset(_additive_closure(self, {int(self.mul[a, b]) for a in cur for b in m}))
            if nxt == out[-1]:
                if nxt != {0}:
                    raise NotLocal(f"maximal ideal of {self.name} is not nilpotent")
                return out
            out.append(nxt)
            cur = set(nxt)

    def ideal_power(self, k: int) -> list[int]:
        pw = self._powers
        return sorted(pw[k]) if k < len(pw) else [0]

    @property
    def nilpotency_index(self) -> int:
        return len(self._powers) - 1

    def _check_nilpotency(self) -> None:
        self._powers
        if len(prime_factors(self.residue_order)) != 1:
            raise NotLocal("residue ring is not a field")

    @cached_property
    def is_principal(self) -> bool:
        return self.generator_of_maximal_ideal() is not None

    def generator_of_maximal_ideal(self) -> Optional[int]:
        if self.theta is not None:
            return self.theta
        m = set(self.maximal_ideal)
        for x in self.maximal_ideal:
            if {int(self.mul[x, y]) for y in range(self.order)} == m:
                return x
        return None

    def valuation(self, x: int) -> int:
        """Largest i with x in m^i (nilpotency index for 0)."""
        pw = self._powers
        i = 0
        while i + 1 < len(pw) and x in pw[i + 1]:
            i += 1
        return i

    @cached_property
    def additive_group(self) -> FiniteGroup:
        return FiniteGroup(self.add.tolist(), f"{self.name}^+")

    @cached_property
    def principal_units(self) -> list[int]:
        """1 + m, listed with 1 first."""
        return sorted(int(self.add[1, x]) for x in self.maximal_ideal)

    @cached_property
    def principal_unit_group(self) -> FiniteGroup:
        return self._mult_group(self.principal_units, f"1+m({self.name})")

    @cached_property
    def unit_group(self) -> FiniteGroup:
        return self._mult_group(self.units, f"{self.name}^x")

    def _mult_group(self, elems: list[int], name: str) -> FiniteGroup:
        elems = sorted(elems, key=lambda x: (x != 1, x))
        pos = {x: i for i, x in enumerate(elems)}
        return FiniteGroup([[pos[int(self.mul[a, b])] for b in elems] for a in elems], name)

    def multiplication_gamma_group(self, elems: list[int]) -> GammaGroup:
        """Multiplicative subgroup (listed 1 first) acting on R^+ by multiplication."""
        elems = sorted(elems, key=lambda x: (x != 1, x))
        gamma = self._mult_group(elems, f"1+m({self.name})")
        act = [self.mul[e].tolist() for e in elems]
        return GammaGroup(gamma, self.additive_group, act)


def _additive_closure(R: FiniteLocalRing, gens: set[int]) -> set[int]:
    out = {0}
    frontier = [0]
    gens = set(gens)
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = int(R.add[x, g])
                if y not in out:
                    out.add(y)
                    new.append(y)
        frontier = new
    return out


def ring_from_vectors(
    elements: list[tuple[int, ...]],
    add_fn,
    mul_fn,
    one: tuple[int, ...],
    name: str,
    theta: Optional[tuple[int, ...]] = None,
) -> FiniteLocalRing:
    zero = tuple([0] * len(one))
    rest = [e for e in elements if e not in (zero, one)]
    order = [zero, one] + rest if len(elements) > 1 else [zero]
    pos = {e: i for i, e in enumerate(order)}
    n = len(order)
    add = np.array([[pos[add_fn(a, b)] for b in order] for a in order], dtype=np.int64)
    mul = np.array([[pos[mul_fn(a, b)] for b in order] for a in order], dtype=np.int64)
    return FiniteLocalRing(add, mul, order, name, pos[theta] if theta is not None else None)


# Eisenstein data -------------------------------------------------------------------


@dataclass(frozen=True)
class EisensteinData:
    """x^e - p(a_{e-1} x^{e-1} + ... + a_0) over Z/p^n, truncated by p^{n-1} x^t."""

    p: int
    n: int
    e: int
    t: int
    coefficients: tuple[int, ...]

    def __post_init__(self) -> None:
        if not _is_prime(self.p) or self.n < 1 or self.e < 1 or not 1 <= self.t <= self.e:
            raise BadParameters("need p prime, n, e >= 1 and 1 <= t <= e")
        if len(self.coefficients) != self.e:
            raise BadParameters("need exactly e coefficients a_0 .. a_{e-1}")
        if self.n > 1 and self.coefficients[0] % self.p == 0:
            raise BadParameters("a_0 must be a unit")

    @property
    def m(self) -> int:
        return (self.n - 1) * self.e + self.t

    @property
    def order(self) -> int:
        return self.p**self.m

    @classmethod
    def parse(cls, text: str) -> "EisensteinData":
        try:
            nums = [int(x) for x in text.replace(" ", "").split(",") if x]
        except ValueError as exc:
            raise BadParameters(f"cannot parse Eisenstein data {text!r}") from exc
        if len(nums) < 5:
            raise BadParameters("expected p,n,e,t,a0,...")
        p, n, e, t, *a = nums
        return cls(p, n, e, t, tuple(a))


def build_local_ring(d: EisensteinData, bound: int = RING_BOUND) -> FiniteLocalRing:
    if d.order > bound:
        raise BoundExceeded(f"ring of order {d.order} exceeds bound {bound}")
    p, n, e, t = d.p, d.n, d.e, d.t
    q = p**n
    # coefficient of x^j is taken mod p^n for j < t and mod p^(n-1) for j >= t
    mods = [q if j < t else p ** (n - 1) for j in range(e)]

    def reduce(c: list[int]) -> tuple[int, ...]:
        c = list(c)
        for k in range(len(c) - 1, e - 1, -1):
            top, c[k] = c[k], 0
            for i in range(e):
                c[k - e + i] += top * p * d.coefficients[i]
        return tuple(c[j] % mods[j] for j in range(e))

    def add(a, b):
        return reduce([x + y for x, y in zip(a, b)])

    def mul(a, b):
        c = [0] * (2 * e - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    c[i + j] += x * y
        return reduce(c)

    elements = list(itertools.product(*[range(m) for m in mods]))
    one = reduce([1] + [0] * (e - 1))
    theta = reduce([0, 1] + [0] * (e - 2)) if e > 1 else reduce([p])
    label = f"R({p},{n},{e},{t};{','.join(map(str, d.coefficients))})"
    R = ring_from_vectors(elements, add, mul, one, label, theta)
    if R.order != d.order:
        raise TheoremViolation("ring order differs from p^m")
    if R.nilpotency_index != d.m:
        raise TheoremViolation(f"nilpotency index {R.nilpotency_index} differs from {d.m}")
    if R.residue_order != p or R.characteristic != p**n:
        raise TheoremViolation("residue field or characteristic is wrong")
    th = R.theta
    if {int(R.mul[th, y]) for y in range(R.order)} != set(R.maximal_ideal):
        raise TheoremViolation("theta does not generate the maximal ideal")
    return R


def truncated_polynomial_ring(p: int, m: int) -> FiniteLocalRing:
    """F_p[x]/(x^m)."""
    return build_local_ring(EisensteinData(p, 1, m, m, tuple([1] * m)))


def prop_case(R: FiniteLocalRing, d: Optional[EisensteinData] = None) -> Optional[str]:
    """Which of the three principal-ring cases R falls into, or None."""
    p = prime_factors(R.residue_order)[0]
    char, m = R.characteristic, R.nilpotency_index
    if char == p:
        return "i" if m >= 2 and m % p else None
    if p == 2 and char == 4:
        e = d.e if d is not None else _ramification(R)
        if m == 2 * e:
            return "ii"
        if e >= 2 and e < m < 2 * e and m % 2:
            return "iii"
    return None


def _ramification(R: FiniteLocalRing) -> int:
    p = prime_factors(R.residue_order)[0]
    x = 0
    for _ in range(p):
        x = int(R.add[x, 1])
    return R.valuation(x)


# fields -----------------------------------------------------------------------------


def _mult_order(a: int, r: int) -> int:
    k, x = 1, a % r
    while x != 1:
        x = (x * a) % r
        k += 1
    return k


def _irreducible(p: int, f: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree f over F_p (low coefficients first)."""
    for coeffs in itertools.product(range(p), repeat=f):
        poly = list(coeffs) + [1]
        if coeffs[0] == 0 and f > 1:
            continue
        if f == 1 or not any(_has_factor(poly, g, p) for d in range(1, f // 2 + 1) for g in _monic(p, d)):
            return tuple(coeffs)
    raise TheoremViolation("no irreducible polynomial found")


def _monic(p: int, d: int):
    for c in itertools.product(range(p), repeat=d):
        yield list(c) + [1]


def _has_factor(f: list[int], g: list[int], p: int) -> bool:
    r = list(f)
    dg = len(g) - 1
    for k in range(len(r) - 1, dg - 1, -1):
        c = r[k]
        if c:
            for i in range(dg + 1):
                r[k - dg + i] = (r[k - dg + i] - c * g[i]) % p
    return not any(r[:dg])


def finite_field(p: int, f: int) -> FiniteLocalRing:
    if p**f > RING_BOUND:
        raise BoundExceeded(f"field of order {p ** f} exceeds bound")
    low = _irreducible(p, f)

    def add(a, b):
        return tuple((x + y) % p for x, y in zip(a, b))

    def mul(a, b):
        c = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                c[i + j] += x * y
        for k in range(2 * f - 2, f - 1, -1):
            top, c[k] = c[k], 0
            for i in range(f):
                c[k - f + i] -= top * low[i]
        return tuple(v % p for v in c[:f])

    one = tuple([1] + [0] * (f - 1))
    return ring_from_vectors(list(itertools.product(range(p), repeat=f)), add, mul, one, f"F{p ** f}")


def field_triple(p: int, r: int) -> Triple:
    """The order-r subgroup of F_q^x acting on F_q^+, with eta(u) = u - 1."""
    if not _is_prime(p) or r < 2 or r % p == 0:
        raise BadParameters("need p prime and r >= 2 prime to p")
    f = _mult_order(p, r)
    if p == 2 and f < 2:
        raise BadParameters("p = 2 needs f >= 2")
    if p**f > RING_BOUND:
        raise BadParameters(f"q = {p ** f} exceeds the bound")
    K = finite_field(p, f)
    U = K.units
    sub = [u for u in U if _elem_order(K, u) <= r and r % _elem_order(K, u) == 0]
    if len(sub) != r:
        raise TheoremViolation("unit subgroup of order r not found")
    gg = K.multiplication_gamma_group(sub)
    minus_one = next(x for x in range(K.order) if int(K.add[x, 1]) == 0)
    elems = sorted(sub, key=lambda x: (x != 1, x))
    t = Triple(gg, make_cocycle(gg, [int(K.add[u, minus_one]) for u in elems]))
    if not is_mnk(t):
        raise TheoremViolation(f"field triple ({p}, {r}) is not mnK")
    return t


def _elem_order(K: FiniteLocalRing, u: int) -> int:
    k, x = 1, u
    while x != 1:
        x = int(K.mul[x, u])
        k += 1
    return k


# principal unit triples -------------------------------------------------------------


@dataclass
class PrincipalUnitResult:
    ring: FiniteLocalRing
    gamma_group: GammaGroup
    injective: list[tuple[int, ...]]  # injective and generating
    mnk: list[bool]
    orbits: list[list[int]]
    predicted_count: Optional[int]
    case: Optional[str]
    classification: str = "PRINCIPAL"

    @property
    def triples(self) -> list[Triple]:
        return [Triple(self.gamma_group, self.injective[o[0]]) for o in self.orbits]

    @property
    def has_mnk(self) -> bool:
        return any(self.mnk)

    def to_json(self) -> dict:
        return {
            "ring": self.ring.name,
            "order": self.ring.order,
            "case": self.case,
            "classification": self.classification,
            "injective_cocycles": len(self.injective),
            "mnk": sum(self.mnk),
            "orbits": len(self.orbits),
            "predicted_count": self.predicted_count,
        }


def _invariant_homs(gg: GammaGroup) -> list[tuple[int, ...]]:
    inv = bits(gg.invariants_mask)
    H = gg.g
    return [f.map for f in homomorphisms(gg.gamma, H) if all(v in set(inv) for v in f.map)]


def principal_unit_triples(R: FiniteLocalRing, bound: int = RING_BOUND) -> PrincipalUnitResult:
    if R.order > bound:
        raise BoundExceeded(f"ring of order {R.order} exceeds bound {bound}")
    gg = R.multiplication_gamma_group(R.principal_units)
    z1 = cocycle_value_lists(gg)
    n = gg.gamma.order
    inj = [v for v in z1 if len(set(v)) == n and Triple(gg, v).is_generating]
    flags = [bool(is_mnk(Triple(gg, v))) for v in inj]
    # redundancy group: multiplication by units and addition of homs into the invariants
    homs = _invariant_homs(gg)
    index = {v: i for i, v in enumerate(inj)}
    seen: set[int] = set()
    orbits = []
    add = R.add
    for i, v in enumerate(inj):
        if i in seen:
            continue
        orbit = set()
        for u in R.units:
            uv = [int(R.mul[u, x]) for x in v]
            for h in homs:
                w = tuple(int(add[a, b]) for a, b in zip(uv, h))
                if w not in index:
                    raise TheoremViolation("redundancy move left the set of injective cocycles")
                orbit.add(index[w])
        seen |= orbit
        orbits.append(sorted(orbit))
    case = prop_case(R) if R.is_principal else None
    predicted = None
    if R.is_principal and inj:
        predicted = len(R.units) * len(_t_dual(R, gg))
    res = PrincipalUnitResult(R, gg, inj, flags, orbits, predicted, case, "PRINCIPAL" if R.is_principal else "UNCLASSIFIED")
    if R.is_principal and (case is not None) != res.has_mnk:
        raise TheoremViolation(f"principal-ring case {case!r} disagrees with the enumeration on {R.name}")
    if case is not None and not all(flags):
        raise TheoremViolation(f"an injective generating cocycle on {R.name} is not mnK")
    if predicted is not None and predicted != len(inj):
        raise TheoremViolation(f"{len(inj)} injective cocycles, parametrization predicts {predicted}")
    return res


def _t_dual(R: FiniteLocalRing, gg: GammaGroup) -> list[tuple[int, ...]]:
    """Homs Gamma -> F_p killing 1 + theta and all p-th powers."""
    p = prime_factors(R.residue_order)[0]
    gamma = gg.gamma
    elems = sorted(R.principal_units, key=lambda x: (x != 1, x))
    one_theta = elems.index(int(R.add[1, R.generator_of_maximal_ideal()]))
    out = []
    for f in homomorphisms(gamma, cyclic(p)):
        if f.map[one_theta] == 0:
            out.append(f.map)
    return out


# truncated local-field model --------------------------------------------------------


@dataclass
class LocalModel:
    """U^(n)/U^(n+m) acting on O/p^m, realized inside O/p^(n+m)."""

    kind: str
    p: int
    n: int
    m: int
    ring: FiniteLocalRing
    gamma_elems: list[int]
    reduce: list[int]  # ring element -> representative mod p^m
    om: list[int]  # representatives of O_m
    div: dict[int, int]  # x - 1 -> (x - 1)/pi^n mod p^m, keyed by ring element

    @cached_property
    def gamma(self) -> FiniteGroup:
        return self.ring._mult_group(self.gamma_elems, f"U({self.n})/U({self.n + self.m})")

    @cached_property
    def g(self) -> FiniteGroup:
        pos = {x: i for i, x in enumerate(self.om)}
        add = self.ring.add
        return FiniteGroup([[pos[self.reduce[int(add[a, b])]] for b in self.om] for a in self.om], f"O_{self.m}")

    @cached_property
    def gamma_group(self) -> GammaGroup:
        pos = {x: i for i, x in enumerate(self.om)}
        mul = self.ring.mul
        act = [[pos[self.reduce[int(mul[u, a])]] for a in self.om] for u in self.gamma_elems]
        return GammaGroup(self.gamma, self.g, act)

    def valuation_m(self, a: int) -> int:
        """Truncated valuation on O_m, with index a into om."""
        x = self.om[a]
        return min(self.ring.valuation(x), self.m)

    def level(self, u: int) -> int:
        """Largest r with the Gamma element u in U^(r)."""
        x = self.gamma_elems[u]
        y = int(self.ring.add[x, _neg(self.ring, 1)])
        return self.ring.valuation(y)


def _neg(R: FiniteLocalRing, x: int) -> int:
    return int(np.nonzero(R.add[x] == 0)[0][0])


def local_model(kind: str, p: int, n: int, m: int, bound: int = RING_BOUND) -> LocalModel:
    if not (m > n >= 1) or not _is_prime(p):
        raise ModelUnavailable("need a prime p and m > n >= 1")
    L = n + m
    if p**L > bound:
        raise ModelUnavailable(f"model ring of order {p ** L} exceeds bound")
    if kind == "fp":
        R = build_local_ring(EisensteinData(p, 1, L, L, tuple([1] * L)))
    elif kind == "zp":
        R = build_local_ring(EisensteinData(p, L, 1, 1, (1,)))
    else:
        raise ModelUnavailable(f"unknown local model {kind!r}")
    th = R.generator_of_maximal_ideal()
    pin = 1
    for _ in range(n):
        pin = int(R.mul[pin, th])
    ideal_m = set(R.ideal_power(m))
    reduce = [0] * R.order
    canon: dict[frozenset, int] = {}
    for x in range(R.order):
        coset = frozenset(int(R.add[x, y]) for y in ideal_m)
        rep = canon.setdefault(coset, min(coset))
        reduce[x] = rep
    om = sorted(set(reduce))
    level_n = set(R.ideal_power(n))
    gamma_elems = sorted((int(R.add[1, y]) for y in level_n), key=lambda x: (x != 1, x))
    div: dict[int, int] = {}
    for y in range(R.order):
        k = int(R.mul[pin, y])
        r = reduce[y]
        if div.setdefault(k, r) != r:
            raise TheoremViolation("division by pi^n is not well defined mod p^m")
    return LocalModel(kind, p, n, m, R, gamma_elems, reduce, om, div)


@dataclass
class ParamKernel:
    kernel: int
    predicted: int
    level_mask: int
    r: int
    is_hom: bool
    eta: Triple


def local_alphas(model: LocalModel) -> list[tuple[int, ...]]:
    """Homs Gamma -> p^(m-n) O_m killing 1 + pi^n, as value tuples in O_m indices."""
    pos = {x: i for i, x in enumerate(model.om)}
    target = {pos[model.reduce[x]] for x in model.ring.ideal_power(model.m - model.n)}
    R = model.ring
    th = R.generator_of_maximal_ideal()
    pin = 1
    for _ in range(model.n):
        pin = int(R.mul[pin, th])
    gen = model.gamma_elems.index(int(R.add[1, pin]))
    return [f.map for f in homomorphisms(model.gamma, model.g) if set(f.map) <= target and f.map[gen] == 0]


def eta_param_kernel(model: LocalModel, a: int, alpha: Optional[Sequence[int]] = None) -> ParamKernel:
    """eta(x) = alpha(x) + pi^-n (x - 1) a, its kernel, and the predicted kernel bound.

    ``a`` indexes O_m (model.om); ``alpha`` is a value tuple from local_alphas or None for 0.
    """
    R = model.ring
    pos = {x: i for i, x in enumerate(model.om)}
    G = model.g
    if alpha is None:
        alpha = (0,) * model.gamma.order
    if tuple(alpha) not in set(local_alphas(model)):
        raise BadParameters("alpha is not a homomorphism into p^(m-n) O_m killing 1 + pi^n")
    minus1 = _neg(R, 1)
    av = model.om[a]
    vals, neg_vals = [], []
    for x in model.gamma_elems:
        q = model.div[int(R.add[x, minus1])]
        qa = pos[model.reduce[int(R.mul[q, av])]]
        vals.append(G.table[alpha[len(vals)]][qa])
        neg_vals.append(G.inverse[qa])
    gg = model.gamma_group
    eta = Triple(gg, make_cocycle(gg, vals))
    kernel = eta.kernel_mask
    predicted = to_mask(s for s in range(len(vals)) if alpha[s] == neg_vals[s])
    v = model.valuation_m(a)
    r = max(model.n, model.m - v)
    level = to_mask(s for s in range(len(vals)) if model.level(s) >= r)
    if kernel != predicted:
        raise TheoremViolation("kernel differs from the equalizer formula")
    if kernel & level != kernel:
        raise TheoremViolation(f"kernel not inside U^({r})")
    top = {pos[model.reduce[x]] for x in R.ideal_power(model.m - model.n)}
    if eta.preimage(to_mask(top)) != level:
        raise TheoremViolation(f"U^({r}) is not the preimage of p^(m-n) O_m")
    is_hom = GroupMorphism(model.gamma, G, tuple(vals)).is_homomorphism()
    if is_hom != (a in top):
        raise TheoremViolation("homomorphism criterion fails")
    return ParamKernel(kernel, predicted, level, r, is_hom, eta)


def unit_cocycle(model: LocalModel, a: int) -> Triple:
    """eta_a(x) = pi^-n (x - 1) a on U^(n)/U^(n+m) -> O_m; bijective for units a."""
    return eta_param_kernel(model, a).eta


# the non-principal quadratic family ---------------------------------------------------


def _vec(code: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        code, d = divmod(code, p)
        out.append(d)
    return out[::-1]


def _code(v: Sequence[int], p: int) -> int:
    c = 0
    for d in v:
        c = c * p + d % p
    return c


@dataclass
class QuadraticTriple:
    p: int
    s: int
    lambda0: tuple[int, ...]
    Lam: tuple[tuple[int, ...], ...]
    triple: Triple
    det: int
    verdict: bool
    classify_verdict: Optional[bool]


def quadratic_ring(p: int, s: int) -> FiniteLocalRing:
    """F_p + W with W^2 = 0; non-principal for s >= 2."""

    def add(a, b):
        return tuple((x + y) % p for x, y in zip(a, b))

    def mul(a, b):
        return tuple([(a[0] * b[0]) % p] + [(a[0] * y + b[0] * x) % p for x, y in zip(a[1:], b[1:])])

    one = tuple([1] + [0] * s)
    return ring_from_vectors(list(itertools.product(range(p), repeat=s + 1)), add, mul, one, f"F{p}+W{s}")


def quadratic_gamma_group(p: int, s: int) -> GammaGroup:
    """Gamma = 1 + W (coded by W) acting on the dual of F_p + W in the dual basis."""
    if not _is_prime(p) or p == 2 or s < 1:
        raise BadShape("need an odd prime p and s >= 1")
    if p ** (s + 1) > 4096:
        raise BoundExceeded("quadratic family too large")
    gamma = abelian(*([p] * s), name=f"C{p}^{s}")
    g = abelian(*([p] * (s + 1)), name=f"C{p}^{s + 1}")
    act = []
    for y in range(gamma.order):
        yv = _vec(y, p, s)
        row = []
        for c in range(g.order):
            cv = _vec(c, p, s + 1)
            cv[0] = (cv[0] + sum(a * b for a, b in zip(yv, cv[1:]))) % p
            row.append(_code(cv, p))
        act.append(row)
    return GammaGroup(gamma, g, act)


def _det_mod(M: list[list[int]], p: int) -> int:
    A = [list(r) for r in M]
    n = len(A)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] % p), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det = det * A[c][c] % p
        inv = pow(A[c][c], -1, p)
        for r in range(c + 1, n):
            f = A[r][c] * inv % p
            A[r] = [(x - f * y) % p for x, y in zip(A[r], A[c])]
    return det % p


def quadratic_family(p: int, s: int, lambda0: Sequence[int], Lam: Sequence[Sequence[int]]) -> QuadraticTriple:
    if s < 2:
        raise BadShape("s must be at least 2")
    if len(lambda0) != s or len(Lam) != s or any(len(r) != s for r in Lam):
        raise BadShape("lambda0 must have length s and Lam must be s x s")
    L = [[x % p for x in r] for r in Lam]
    if any(L[i][j] != L[j][i] for i in range(s) for j in range(s)):
        raise BadShape("Lam must be symmetric")
    gg = quadratic_gamma_group(p, s)
    gens = [_code([int(i == j) for j in range(s)], p) for i in range(s)]
    values = [_code([lambda0[i] % p] + L[i], p) for i in range(s)]
    t = cocycle_from_generators(gg, gens, values)
    det = _det_mod(L, p)
    verdict = det != 0
    # a singular Lam can still give an injective eta, but then eta(Gamma) does not generate
    if (t.is_injective and t.is_generating) != verdict:
        raise TheoremViolation("injective generating eta disagrees with det Lam")
    try:
        cv: Optional[bool] = bool(is_mnk(t))
    except NotGenerating:
        cv = None
    if (cv is True) != verdict:
        raise TheoremViolation(f"mnK verdict disagrees with det Lam for {L}")
    return QuadraticTriple(p, s, tuple(x % p for x in lambda0), tuple(map(tuple, L)), t, det, verdict, cv)


def quadratic_symmetry(p: int, s: int, A: Sequence[Sequence[int]], b0: int, b: Sequence[int]) -> tuple[list[int], list[int]]:
    """The pair (phi on Gamma, psi on G) attached to (A, b0, b), as element maps."""
    if _det_mod([list(r) for r in A], p) == 0 or b0 % p == 0:
        raise BadParameters("A must be invertible and b0 nonzero")
    gamma_n, g_n = p**s, p ** (s + 1)
    phi = []
    for y in range(gamma_n):
        yv = _vec(y, p, s)
        phi.append(_code([sum(yv[i] * A[i][j] for i in range(s)) for j in range(s)], p))
    psi = []
    for c in range(g_n):
        cv = _vec(c, p, s + 1)
        out = [b0 * cv[0]] + [0] * s
        for i in range(1, s + 1):
            out[0] += cv[i] * b0 * b[i - 1]
            for j in range(1, s + 1):
                out[j] += cv[i] * b0 * A[j - 1][i - 1]
        psi.append(_code(out, p))
    return phi, psi


def quadratic_symmetries(p: int, s: int):
    mats = itertools.product(range(p), repeat=s * s)
    for flat in mats:
        A = [list(flat[i * s : (i + 1) * s]) for i in range(s)]
        if _det_mod(A, p) == 0:
            continue
        for b0 in range(1, p):
            for b in itertools.product(range(p), repeat=s):
                yield quadratic_symmetry(p, s, A, b0, b)


def transform(values: Sequence[int], phi: Sequence[int], psi: Sequence[int]) -> tuple[int, ...]:
    """The cocycle psi o eta o phi."""
    return tuple(psi[values[phi[x]]] for x in range(len(values)))


def quadratic_orbits(p: int, s: int, cocycles: Sequence[Sequence[int]]) -> list[list[int]]:
    """Orbits of the given cocycles under the pairs (phi, psi)."""
    index = {tuple(v): i for i, v in enumerate(cocycles)}
    syms = list(quadratic_symmetries(p, s))
    gg = quadratic_gamma_group(p, s)
    for phi, psi in syms[:: max(1, len(syms) // 16)]:
        for x in range(gg.gamma.order):
            for c in range(gg.g.order):
                if psi[gg.act[phi[x]][c]] != gg.act[x][psi[c]]:
                    raise TheoremViolation("symmetry does not intertwine the actions")
    seen: set[int] = set()
    orbits = []
    for i, v in enumerate(cocycles):
        if i in seen:
            continue
        orbit = {i}
        for phi, psi in syms:
            w = transform(v, phi, psi)
            if w in index:
                orbit.add(index[w])
        seen |= orbit
        orbits.append(sorted(orbit))
    return orbits
