"""Minimal admissible parabolic reduction of a G-degree.

For a lift ``lam`` of a G-degree write ``phi_G = lam - sum_i s_i coroot_i``
with ``C s = (<alpha_j, lam>)_j``.  The smallest parabolic carrying an
admissible degree has Levi nodes ``{i : s_i not in Z}``; the degree itself
is obtained by absorbing the integral ``s_i`` into the lift.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lattice import (
    IntMatrix,
    QuotientLattice,
    RatVector,
    dot,
    integer_kernel,
    rank,
    solve_rational,
)
from .root_datum import RootDatum, fundamental_weights
from .slope import Degree, Parabolic, SlopeVector, g_slope, levi_quotient, slope

BRUTE_FORCE_MAX_NODES = 9


@dataclass(frozen=True)
class MinimalReduction:
    parabolic: Parabolic
    degree: Degree
    g_slope: SlopeVector
    s_coeffs: RatVector  # phi_G = degree.lift - sum s_i coroot_i

    @property
    def lift(self) -> tuple[int, ...]:
        return self.degree.lift


def inverse_cartan_coefficients(d: RootDatum, lift: Sequence[int]) -> RatVector:
    """``s`` with ``phi_G(lift) = lift - sum_i s_i coroot_i``."""
    if len(lift) != d.rank:
        raise ValueError(f"lift has length {len(lift)}, datum rank is {d.rank}")
    if not d.num_simple:
        return ()
    b = [dot(d.root(j), lift) for j in range(d.num_simple)]
    s = solve_rational(d.cartan, b)
    assert s is not None
    return s


def minimal_admissible(d: RootDatum, lift: Sequence[int]) -> MinimalReduction:
    lift = tuple(int(x) for x in lift)
    s = inverse_cartan_coefficients(d, lift)
    nodes = {i + 1 for i, si in enumerate(s) if si.denominator != 1}
    adjusted = list(lift)
    for i, si in enumerate(s):
        if si.denominator == 1 and si:
            c = d.coroot(i)
            for k in range(d.rank):
                adjusted[k] -= int(si) * c[k]
    p = Parabolic(nodes)
    degree = Degree(p, adjusted).canonical(d)
    phi = g_slope(d, lift)
    s_final = inverse_cartan_coefficients(d, degree.lift)
    return MinimalReduction(p, degree, phi, s_final)


def parabolic_via_weights(
    d: RootDatum, lift: Sequence[int], omegas: Sequence[Sequence[Fraction]] | None = None
) -> Parabolic:
    """``{i : <phi_G - lift, omega_i> not in Z}`` evaluated with explicit weights."""
    if omegas is None:
        omegas = fundamental_weights(d)
    phi = g_slope(d, lift)
    diff = [p - x for p, x in zip(phi, lift)]
    return Parabolic(
        i + 1 for i, w in enumerate(omegas) if Fraction(dot(diff, w)).denominator != 1
    )


# --------------------------------------------------------------------------
# Independent oracle
# --------------------------------------------------------------------------


class RankCapError(ValueError):
    pass


def admissible_degree_at(d: RootDatum, j: Parabolic, lift: Sequence[int],
                         target: SlopeVector) -> Degree | None:
    """A degree at ``j`` over the class of ``lift`` with slope ``target``, if any.

    Candidates are ``lift + sum_{k not in J} t_k coroot_k`` with integer t
    (every lift of every degree over the class has this form modulo the Levi
    coroots).  The slope is affine in t, so t is found by one rational solve.
    """
    outside = [k for k in range(d.num_simple) if k not in j.indices]
    base = slope(d, Degree(j, lift))
    rhs = [a - b for a, b in zip(target, base)]
    if not outside:
        return Degree(j, lift) if not any(rhs) else None
    cols = [slope(d, Degree(j, d.coroot(k))) for k in outside]
    a = [[c[row] for c in cols] for row in range(d.rank)]
    t = solve_rational(a, rhs)
    if t is None or any(x.denominator != 1 for x in t):
        return None
    new = list(lift)
    for tk, k in zip(t, outside):
        c = d.coroot(k)
        for row in range(d.rank):
            new[row] += int(tk) * c[row]
    return Degree(j, new)


def brute_force_minimal(d: RootDatum, lift: Sequence[int],
                        max_nodes: int = BRUTE_FORCE_MAX_NODES) -> MinimalReduction:
    """Enumerate every standard parabolic and keep the admissible ones.

    Asserts that the admissible family is closed under intersection and
    upward closed, then returns its minimum.
    """
    r = d.num_simple
    if r > max_nodes:
        raise RankCapError(f"{r} simple roots exceed the brute-force cap {max_nodes}")
    lift = tuple(int(x) for x in lift)
    target = g_slope(d, lift)
    admissible: dict[frozenset[int], Degree] = {}
    for size in range(r + 1):
        for nodes in itertools.combinations(range(1, r + 1), size):
            j = Parabolic(nodes)
            deg = admissible_degree_at(d, j, lift, target)
            if deg is not None:
                admissible[j.nodes] = deg
    fam = set(admissible)
    for a, b in itertools.combinations(fam, 2):
        if a & b not in fam:
            raise AssertionError(f"admissible sets {sorted(a)}, {sorted(b)} not closed under meet")
    minimum = frozenset.intersection(*fam) if fam else None
    if minimum is None or minimum not in fam:
        raise AssertionError("no admissible parabolic found")
    for size in range(r + 1):
        for nodes in itertools.combinations(range(1, r + 1), size):
            if (frozenset(nodes) >= minimum) != (frozenset(nodes) in fam):
                raise AssertionError("admissible family is not the up-set of its minimum")
    deg = admissible[minimum].canonical(d)
    phi = target
    s_final = solve_rational(d.cartan, [dot(d.root(k), deg.lift) for k in range(r)]) if r else ()
    return MinimalReduction(Parabolic(minimum), deg, phi, s_final)


# --------------------------------------------------------------------------
# Uniqueness and degree fixing
# --------------------------------------------------------------------------


def uniqueness_certificate(d: RootDatum, p: Parabolic) -> bool:
    """``ker(pi)`` meets the torsion of the Levi quotient only in 0.

    ``ker(pi)`` is the subgroup of ``Z^n / span(coroot_i, i in I_P)``
    generated by the images of the other coroots.  Two checks: that subgroup
    is free (relations among the images computed by SNF), and the slopes of
    the generating images are rationally independent so that no nonzero
    element of it is killed by the slope map.
    """
    p.check(d)
    inside = list(p.indices)
    outside = [k for k in range(d.num_simple) if k not in inside]
    m = len(outside)
    if m == 0:
        return True
    # c in Z^m is a relation iff sum c_k coroot_k + sum t_i coroot_i = 0
    cols = [d.coroot(k) for k in outside] + [d.coroot(i) for i in inside]
    big = IntMatrix.from_columns(cols, d.rank)
    rel = [v[:m] for v in integer_kernel(big)]
    sub = QuotientLattice.from_generators(m, rel) if rel else QuotientLattice(m, IntMatrix.zeros(m, 0))
    if sub.torsion_invariants() or sub.free_rank != m:
        return False
    images = [slope(d, Degree(p, d.coroot(k))) for k in outside]
    return rank(images) == m


def fixes_degree(d: RootDatum, elements, deg: Degree) -> bool:
    """Every integer matrix in ``elements`` fixes ``deg`` in its Levi quotient."""
    import numpy as np

    q = levi_quotient(d, deg.parabolic)
    lift = np.array(deg.lift, dtype=np.int64)
    elements = np.asarray(elements, dtype=np.int64)
    if not len(elements):
        return True
    images = elements @ lift  # (N, n)
    diffs = images - lift[None]
    return all(q.contains(tuple(int(x) for x in row)) for row in _unique(diffs))


def _unique(a):
    import numpy as np

    return np.unique(a, axis=0) if len(a) else a


def w_fixes_minimal_degree(d: RootDatum, mr: MinimalReduction, rw) -> bool:
    if rw.levi != mr.parabolic:
        raise ValueError("relative Weyl group computed for a different Levi")
    return fixes_degree(d, rw.representatives, mr.degree)
