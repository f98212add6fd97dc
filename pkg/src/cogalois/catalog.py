"""Built-in small groups: every group of order at most 16 plus a few larger ones.

Groups are built from a handful of constructions (cyclic, direct and
semidirect products, dicyclic groups, permutation groups, one central
product) and cached by name.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Callable, Optional

from .groups import (
    FiniteGroup,
    direct_product,
    group_from_permutations,
    quotient,
    semidirect_product,
)


def cyclic(n: int, name: Optional[str] = None) -> FiniteGroup:
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)], name or f"C{n}")


def abelian(*orders: int, name: Optional[str] = None) -> FiniteGroup:
    """C_{n1} x C_{n2} x ...; element (x1, x2, ...) coded in mixed radix, last fastest."""
    G = cyclic(orders[0])
    for n in orders[1:]:
        G = direct_product(G, cyclic(n))
    G.name = name or "x".join(f"C{n}" for n in orders)
    return G


def semidirect_by_unit(n: int, m: int, u: int, name: Optional[str] = None) -> FiniteGroup:
    """C_n x| C_m where the generator of C_m acts by multiplication with u.

    Element (x, g) is coded x*m + g, so x = 1, g = 0 is the rotation-type generator
    and x = 0, g = 1 the complement generator.
    """
    if pow(u, m, n) != 1 % n:
        raise ValueError(f"{u}^{m} is not 1 mod {n}")
    act = [[(pow(u, g, n) * x) % n for x in range(n)] for g in range(m)]
    return semidirect_product(cyclic(n), cyclic(m), act, name or f"C{n}:{m}[{u}]")


def dihedral(order: int) -> FiniteGroup:
    n = order // 2
    return semidirect_by_unit(n, 2, n - 1, f"D{order}")


def dicyclic(order: int, name: Optional[str] = None) -> FiniteGroup:
    """<a, x | a^(2n) = 1, x^2 = a^n, x a x^-1 = a^-1>, order 4n; a^i x^j coded 2i + j."""
    n = order // 4
    m = 2 * n
    table = []
    for p in range(order):
        i, j = divmod(p, 2)
        row = []
        for q in range(order):
            k, l = divmod(q, 2)
            e = i + (k if j == 0 else -k)
            if j and l:
                e += n
                jl = 0
            else:
                jl = j + l
            row.append((e % m) * 2 + jl)
        table.append(row)
    return FiniteGroup(table, name or f"Dic{order}")


def _c4_c2_by_c2() -> FiniteGroup:
    # <a, b, c | a^4 = b^2 = c^2 = 1, [a, b] = [b, c] = 1, c a c^-1 = a b>
    N = abelian(4, 2)
    act = [list(range(8)), [(i * 2 + (j + i) % 2) for i in range(4) for j in range(2)]]
    return semidirect_product(N, cyclic(2), act, "C2^2:C4")


def _central_product_c4_d8() -> FiniteGroup:
    D8 = dihedral(8)
    P = direct_product(D8, cyclic(4))
    # identify r^2 in D8 (code 4) with 2 in C4
    Q, _ = quotient(P, P.subgroup([0, 4 * 4 + 2]), "C4oD8")
    return Q


def _builders() -> dict[str, Callable[[], FiniteGroup]]:
    b: dict[str, Callable[[], FiniteGroup]] = {}
    for n in range(1, 17):
        b[f"C{n}"] = lambda n=n: cyclic(n)
    b.update(
        {
            "C2^2": lambda: abelian(2, 2, name="C2^2"),
            "S3": lambda: group_from_permutations([(1, 0, 2), (1, 2, 0)], "S3"),
            "C2xC4": lambda: abelian(2, 4, name="C2xC4"),
            "C2^3": lambda: abelian(2, 2, 2, name="C2^3"),
            "D8": lambda: dihedral(8),
            "Q8": lambda: dicyclic(8, "Q8"),
            "C3^2": lambda: abelian(3, 3, name="C3^2"),
            "D10": lambda: dihedral(10),
            "C2xC6": lambda: abelian(2, 6, name="C2xC6"),
            "A4": lambda: group_from_permutations([(1, 2, 0, 3), (1, 0, 3, 2)], "A4"),
            "D12": lambda: dihedral(12),
            "Dic12": lambda: dicyclic(12),
            "D14": lambda: dihedral(14),
            "C4^2": lambda: abelian(4, 4, name="C4^2"),
            "C2xC8": lambda: abelian(2, 8, name="C2xC8"),
            "C2^2xC4": lambda: abelian(2, 2, 4, name="C2^2xC4"),
            "C2^4": lambda: abelian(2, 2, 2, 2, name="C2^4"),
            "C2xD8": lambda: _named(direct_product(cyclic(2), dihedral(8)), "C2xD8"),
            "C2xQ8": lambda: _named(direct_product(cyclic(2), dicyclic(8)), "C2xQ8"),
            "D16": lambda: dihedral(16),
            "Q16": lambda: dicyclic(16, "Q16"),
            "SD16": lambda: semidirect_by_unit(8, 2, 3, "SD16"),
            "M16": lambda: semidirect_by_unit(8, 2, 5, "M16"),
            "C4:C4": lambda: semidirect_by_unit(4, 4, 3, "C4:C4"),
            "C2^2:C4": _c4_c2_by_c2,
            "C4oD8": _central_product_c4_d8,
            # nilpotent groups of order 17..24 that are not of prime-power order
            "C18": lambda: cyclic(18),
            "C3xC6": lambda: abelian(3, 6, name="C3xC6"),
            "C20": lambda: cyclic(20),
            "C2xC10": lambda: abelian(2, 10, name="C2xC10"),
            "C21": lambda: cyclic(21),
            "C22": lambda: cyclic(22),
            "C24": lambda: cyclic(24),
            "C2xC12": lambda: abelian(2, 12, name="C2xC12"),
            "C2^2xC6": lambda: abelian(2, 2, 6, name="C2^2xC6"),
            "C3xD8": lambda: _named(direct_product(cyclic(3), dihedral(8)), "C3xD8"),
            "C3xQ8": lambda: _named(direct_product(cyclic(3), dicyclic(8)), "C3xQ8"),
        }
    )
    return b


def _named(G: FiniteGroup, name: str) -> FiniteGroup:
    G.name = name
    return G


SMALL_ORDER_NAMES: dict[int, list[str]] = {
    1: ["C1"],
    2: ["C2"],
    3: ["C3"],
    4: ["C4", "C2^2"],
    5: ["C5"],
    6: ["C6", "S3"],
    7: ["C7"],
    8: ["C8", "C2xC4", "C2^3", "D8", "Q8"],
    9: ["C9", "C3^2"],
    10: ["C10", "D10"],
    11: ["C11"],
    12: ["C12", "C2xC6", "A4", "D12", "Dic12"],
    13: ["C13"],
    14: ["C14", "D14"],
    15: ["C15"],
    16: [
        "C16", "C4^2", "C2xC8", "C2^2xC4", "C2^4", "C2xD8", "C2xQ8",
        "D16", "Q16", "SD16", "M16", "C4:C4", "C2^2:C4", "C4oD8",
    ],
}

EXTRA_NAMES: list[str] = [
    "C18", "C3xC6", "C20", "C2xC10", "C21", "C22",
    "C24", "C2xC12", "C2^2xC6", "C3xD8", "C3xQ8",
]


@lru_cache(maxsize=None)
def by_name(name: str) -> FiniteGroup:
    builders = _builders()
    if name not in builders:
        raise KeyError(f"unknown catalog group {name!r}")
    G = builders[name]()
    G.name = name
    return G


def small_groups(max_order: int = 16, min_order: int = 1) -> list[FiniteGroup]:
    """Every group of order in [min_order, max_order] (max_order <= 16), one per class."""
    if max_order > 16:
        raise ValueError("the complete list only covers orders up to 16")
    return [by_name(n) for o in range(min_order, max_order + 1) for n in SMALL_ORDER_NAMES[o]]


def catalog_groups(max_order: int = 24) -> list[FiniteGroup]:
    """Complete list up to 16 plus the extra nilpotent groups up to ``max_order``."""
    out = small_groups(min(max_order, 16))
    out += [G for G in (by_name(n) for n in EXTRA_NAMES) if G.order <= max_order]
    return out


def abelian_groups(max_order: int = 16) -> list[FiniteGroup]:
    return [G for G in small_groups(min(max_order, 16)) if G.is_abelian]
