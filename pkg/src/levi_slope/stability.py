"""Existence of stable bundles of a given degree.

Two independent routes are offered.  The first asks whether the minimal
admissible parabolic is the whole group.  The second only looks at the
Dynkin diagram: every component must be of type ``A_{k-1}`` and the degree's
image in ``pi_1(PGL_k) = Z/k`` must be a generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .lattice import dot, inverse_rational
from .parabolic import minimal_admissible
from .root_datum import RootDatum, classify_cartan

RatMatrix = list[list[Fraction]]


@dataclass(frozen=True)
class StabilityVerdict:
    exists_stable: bool
    route_minimal: bool
    route_typeA: bool
    adjoint_factors: tuple[tuple[int, int], ...] | None  # (n_k, d_k) per PGL factor

    @property
    def consistent(self) -> bool:
        return self.route_minimal == self.route_typeA


def stable_exists_minimal(d: RootDatum, lift: Sequence[int]) -> bool:
    return minimal_admissible(d, lift).parabolic.is_full(d)


def _chain_order(d: RootDatum, comp: list[int]) -> list[int]:
    """Nodes of a type-A component listed from one end of the chain."""
    c = d.cartan
    nbrs = {p: [q for q in comp if q != p and c[p, q] != 0] for p in comp}
    start = min(p for p in comp if len(nbrs[p]) <= 1)
    order, prev = [start], None
    while len(order) < len(comp):
        cur = order[-1]
        nxt = [q for q in nbrs[cur] if q != prev]
        prev = cur
        order.append(nxt[0])
    return order


def adjoint_factors(d: RootDatum, lift: Sequence[int]) -> tuple[tuple[int, int], ...] | None:
    """``(k, class in Z/k)`` for each ``A_{k-1}`` component, or ``None`` if some component is not of type A.

    With the chain numbered ``1..k-1`` from one end, the fundamental coweight
    of node ``i`` has class ``i`` in ``Z/k``, so the class of the lift is
    ``sum_i i <alpha_i, lift> mod k``.
    """
    out = []
    for comp in d.components:
        kind, r = classify_cartan(d.cartan.submatrix(comp, comp))
        if kind != "A":
            return None
        k = r + 1
        cls = sum((pos + 1) * dot(d.root(i), lift) for pos, i in enumerate(_chain_order(d, comp)))
        out.append((k, cls % k))
    return tuple(sorted(out))


def _route_typeA(d: RootDatum, lift: Sequence[int]) -> tuple[bool, tuple[tuple[int, int], ...] | None]:
    factors = adjoint_factors(d, lift)
    if factors is None:
        return False, None
    return all(gcd(cls, k) == 1 for k, cls in factors), factors


def stable_exists_typeA(d: RootDatum, lift: Sequence[int], check: bool = True) -> StabilityVerdict:
    """Both routes side by side; a disagreement raises unless ``check`` is off."""
    lift = tuple(int(x) for x in lift)
    route_a, factors = _route_typeA(d, lift)
    route_m = stable_exists_minimal(d, lift)
    verdict = StabilityVerdict(route_a, route_m, route_a, factors)
    if check and not verdict.consistent:
        raise AssertionError(
            f"stability routes disagree on {d.name} lift {lift}: minimal={route_m}, typeA={route_a}"
        )
    return verdict


def inverse_cartan(d: RootDatum) -> RatMatrix:
    if not d.num_simple:
        return []
    return inverse_rational(d.cartan)


def typeA_inverse_cartan(k: int) -> RatMatrix:
    """Closed form of the inverse Cartan matrix of ``A_{k-1}``."""
    return [
        [Fraction(i * (k - j), k) if i <= j else Fraction(j * (k - i), k) for j in range(1, k)]
        for i in range(1, k)
    ]


def rows_with_integral_inverse(d: RootDatum) -> list[int]:
    """Nodes whose row of ``C^{-1}`` is integral; such nodes never enter a minimal Levi."""
    return [i + 1 for i, row in enumerate(inverse_cartan(d)) if all(x.denominator == 1 for x in row)]
