"""Slope map on parabolic degrees and the lemmas it satisfies.

A degree for the standard parabolic with Levi nodes ``I_P`` is an element of
``Z^n / span(coroot_i : i in I_P)``, carried as an integer lift.  Its slope is
the unique ``lift - sum_{i in I_P} q_i coroot_i`` killed by every Levi simple
root.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .lattice import (
    IntMatrix,
    IntVector,
    QuotientLattice,
    RatVector,
    dot,
    integer_kernel,
    solve_rational,
    unimodular_inverse,
)
from .root_datum import RootDatum

SlopeVector = RatVector


@dataclass(frozen=True)
class Parabolic:
    """Standard parabolic, given by its Levi's simple nodes (1-based)."""

    nodes: frozenset[int]

    def __init__(self, nodes: Iterable[int] = ()) -> None:
        object.__setattr__(self, "nodes", frozenset(int(i) for i in nodes))

    @classmethod
    def full(cls, d: RootDatum) -> Parabolic:
        return cls(d.nodes)

    @classmethod
    def borel(cls) -> Parabolic:
        return cls()

    @property
    def indices(self) -> tuple[int, ...]:
        """Sorted 0-based node indices."""
        return tuple(sorted(i - 1 for i in self.nodes))

    def check(self, d: RootDatum) -> None:
        if not self.nodes <= d.nodes:
            raise ValueError(f"parabolic nodes {sorted(self.nodes)} not in 1..{d.num_simple}")

    def is_full(self, d: RootDatum) -> bool:
        return self.nodes == d.nodes

    def __le__(self, other: Parabolic) -> bool:
        return self.nodes <= other.nodes

    def __repr__(self) -> str:
        return f"Parabolic({sorted(self.nodes)})"


@dataclass(frozen=True)
class Degree:
    parabolic: Parabolic
    lift: tuple  # ints; Fractions only for the rational-lift slope solve

    def __init__(self, parabolic: Parabolic | Iterable[int], lift: Sequence) -> None:
        if not isinstance(parabolic, Parabolic):
            parabolic = Parabolic(parabolic)
        object.__setattr__(self, "parabolic", parabolic)
        object.__setattr__(self, "lift", tuple(lift))

    def quotient(self, d: RootDatum) -> QuotientLattice:
        return levi_quotient(d, self.parabolic)

    def canonical(self, d: RootDatum) -> Degree:
        return Degree(self.parabolic, self.quotient(d).canonical(self.lift))

    def same_class(self, d: RootDatum, other: Degree) -> bool:
        return (
            self.parabolic == other.parabolic
            and self.quotient(d).equal(self.lift, other.lift)
        )


def levi_quotient(d: RootDatum, p: Parabolic) -> QuotientLattice:
    """``Z^n / span(coroot_i : i in I_P)``."""
    return QuotientLattice(d.rank, d.coroots.select_columns(p.indices))


def levi_cartan(d: RootDatum, p: Parabolic) -> IntMatrix:
    idx = p.indices
    return d.cartan.submatrix(idx, idx)


def levi_type(d: RootDatum, p: Parabolic) -> list[tuple[str, int]]:
    from .root_datum import cartan_components, classify_cartan

    c = levi_cartan(d, p)
    return sorted(classify_cartan(c.submatrix(k, k)) for k in cartan_components(c))


def _check_lift(d: RootDatum, lift: Sequence) -> None:
    if len(lift) != d.rank:
        raise ValueError(f"lift has length {len(lift)}, datum rank is {d.rank}")


def levi_coefficients(d: RootDatum, p: Parabolic, lift: Sequence) -> RatVector:
    """The ``q`` solving ``C_P q = (<alpha_j, lift>)_{j in I_P}``."""
    idx = p.indices
    b = [dot(d.root(j), lift) for j in idx]
    if not idx:
        return ()
    q = solve_rational(levi_cartan(d, p), b)
    assert q is not None  # finite-type Cartan submatrices are invertible
    return q


def slope(d: RootDatum, deg: Degree) -> SlopeVector:
    _check_lift(d, deg.lift)
    deg.parabolic.check(d)
    idx = deg.parabolic.indices
    q = levi_coefficients(d, deg.parabolic, deg.lift)
    phi = [Fraction(x) for x in deg.lift]
    for qi, i in zip(q, idx):
        if qi:
            c = d.coroot(i)
            for k in range(d.rank):
                phi[k] -= qi * c[k]
    return tuple(phi)


def g_slope(d: RootDatum, lift: Sequence) -> SlopeVector:
    return slope(d, Degree(Parabolic.full(d), lift))


def coroot_coordinates(d: RootDatum, v: Sequence) -> RatVector | None:
    """Coefficients of ``v`` in the simple coroots, or ``None`` outside their span."""
    if d.num_simple == 0:
        return () if not any(v) else None
    return solve_rational(d.coroots, list(v))


def leq_pos_cone(d: RootDatum, x: Sequence, y: Sequence) -> bool:
    """``x <= y`` iff ``y - x`` is a nonnegative rational combination of coroots."""
    diff = [Fraction(b) - Fraction(a) for a, b in zip(x, y)]
    c = coroot_coordinates(d, diff)
    if c is None:
        return False
    return all(ci >= 0 for ci in c)


def project_degree(d: RootDatum, deg: Degree, larger: Parabolic) -> Degree:
    if not deg.parabolic <= larger:
        raise ValueError("target parabolic must contain the degree's parabolic")
    larger.check(d)
    return Degree(larger, deg.lift)


def is_admissible(d: RootDatum, deg: Degree, target: Degree) -> bool:
    if not target.parabolic.is_full(d):
        raise ValueError("admissibility target must be a degree of G")
    projected = project_degree(d, deg, target.parabolic)
    if not projected.same_class(d, target):
        return False
    return slope(d, deg) == slope(d, target)


# --------------------------------------------------------------------------
# Lemma checks
# --------------------------------------------------------------------------


def levi_characters(d: RootDatum, p: Parabolic) -> list[IntVector]:
    """Integral basis of characters vanishing on the Levi coroots."""
    idx = p.indices
    if not idx:
        return [tuple(int(i == j) for j in range(d.rank)) for i in range(d.rank)]
    m = IntMatrix.from_rows([d.coroot(i) for i in idx], cols=d.rank)
    return integer_kernel(m)


def check_slope_scalar(d: RootDatum, deg: Degree) -> bool:
    phi = slope(d, deg)
    for lam in levi_characters(d, deg.parabolic):
        if dot(lam, phi) != dot(lam, deg.lift):
            return False
    return all(dot(d.root(i), phi) == 0 for i in deg.parabolic.indices)


def check_slope_proj(d: RootDatum, deg_big: Degree, smaller: Parabolic) -> bool:
    """Slope at a smaller parabolic of the (rational) slope of a bigger one."""
    if not smaller <= deg_big.parabolic:
        raise ValueError("smaller parabolic must be contained in the degree's parabolic")
    phi = slope(d, deg_big)
    return slope(d, Degree(smaller, phi)) == phi


def deeper_reduction_sets(
    d: RootDatum, w: IntMatrix, i1: Parabolic, i2: Parabolic
) -> tuple[Parabolic, Parabolic]:
    """Root subsets cut out by relative position ``w``.

    ``w`` acts on covectors contragrediently: ``w(alpha) = alpha o w^{-1}``.
    """
    winv = unimodular_inverse(w)

    def act(m: IntMatrix, alpha: IntVector) -> IntVector:
        # row vector alpha times m
        return tuple(sum(alpha[p] * m[p, q] for p in range(d.rank)) for q in range(d.rank))

    roots = {i + 1: d.root(i) for i in range(d.num_simple)}
    out1 = {i for i in i1.nodes if any(act(winv, roots[j]) == roots[i] for j in i2.nodes)}
    out2 = {i for i in i2.nodes if any(act(w, roots[j]) == roots[i] for j in i1.nodes)}
    return Parabolic(out1), Parabolic(out2)
