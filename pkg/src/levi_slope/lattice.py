"""Exact integer and rational linear algebra.

Everything here works on Python ints and :class:`fractions.Fraction`; there is
no floating point.  Matrices are small (desk-scale root data), so the
algorithms are the textbook ones, written for clarity rather than speed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

IntVector = tuple[int, ...]
RatVector = tuple[Fraction, ...]


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored row-major.

    Zero-sized shapes are legal (an ``n x 0`` coroot matrix describes a torus).
    """

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix shape")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged matrix")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        return cls.from_rows(
            [[c[i] for c in columns] for i in range(rows)], cols=len(columns)
        )

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> IntVector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> IntVector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_lists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self) -> IntMatrix:
        return IntMatrix.from_rows(
            [self.column(j) for j in range(self.cols)], cols=self.rows
        )

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = [other.column(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            out.append([sum(a * b for a, b in zip(r, c)) for c in cols])
        return IntMatrix.from_rows(out, cols=other.cols)

    def apply(self, v: Sequence) -> tuple:
        """Matrix times column vector (works for int or Fraction entries)."""
        if len(v) != self.cols:
            raise ValueError("vector length does not match matrix")
        return tuple(sum(a * b for a, b in zip(self.row(i), v)) for i in range(self.rows))

    def select_columns(self, idx: Iterable[int]) -> IntMatrix:
        idx = list(idx)
        return IntMatrix.from_rows(
            [[self[i, j] for j in idx] for i in range(self.rows)], cols=len(idx)
        )

    def select_rows(self, idx: Iterable[int]) -> IntMatrix:
        idx = list(idx)
        return IntMatrix.from_rows([self.row(i) for i in idx], cols=self.cols)

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> IntMatrix:
        cols = list(cols)
        return IntMatrix.from_rows(
            [[self[i, j] for j in cols] for i in rows], cols=len(cols)
        )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __repr__(self) -> str:
        return f"IntMatrix({self.to_lists()!r})"


def block_diagonal(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    rows = [list(a.row(i)) + [0] * b.cols for i in range(a.rows)]
    rows += [[0] * a.cols + list(b.row(i)) for i in range(b.rows)]
    return IntMatrix.from_rows(rows, cols=a.cols + b.cols)


def rat_vector(values: Iterable) -> RatVector:
    return tuple(Fraction(x) for x in values)


def is_integral(values: Iterable[Fraction]) -> bool:
    return all(Fraction(x).denominator == 1 for x in values)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


# --------------------------------------------------------------------------
# Smith and Hermite normal forms
# --------------------------------------------------------------------------


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ m @ V == D``.

    ``U`` and ``V`` are unimodular and ``D`` is diagonal with nonnegative
    entries ``d_1 | d_2 | ...`` (zeros last).
    """
    rows, cols = m.rows, m.cols
    a = m.to_lists()
    u = IntMatrix.identity(rows).to_lists()
    v = IntMatrix.identity(cols).to_lists()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):  # col_dst += k * col_src
        for r in a:
            r[dst] += k * r[src]
        for r in v:
            r[dst] += k * r[src]

    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remainder in row/column t onto the pivot
                cand = [(abs(a[i][t]), i, t) for i in range(t, rows) if a[i][t]]
                cand += [(abs(a[t][j]), t, j) for j in range(t, cols) if a[t][j]]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    return (
        IntMatrix.from_rows(u, cols=rows),
        IntMatrix.from_rows(a, cols=cols),
        IntMatrix.from_rows(v, cols=cols),
    )


def invariant_factors(m: IntMatrix) -> list[int]:
    _, d, _ = smith_normal_form(m)
    return [d[i, i] for i in range(min(d.rows, d.cols))]


def hermite_row_basis(vectors: Sequence[Sequence[int]], dim: int) -> list[IntVector]:
    """Row-style Hermite normal form of the lattice spanned by ``vectors``.

    Returns basis rows with strictly increasing pivot columns, positive
    pivots, and entries above each pivot reduced into ``[0, pivot)``.
    """
    rows = [list(v) for v in vectors if any(v)]
    for r in rows:
        if len(r) != dim:
            raise ValueError("vector length does not match lattice dimension")
    basis: list[list[int]] = []
    col = 0
    while rows and col < dim:
        nz = [r for r in rows if r[col]]
        if not nz:
            col += 1
            continue
        rest = [r for r in rows if not r[col]]
        # Euclid on column `col` across all rows with a nonzero entry there
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            new = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r = [x - q * y for x, y in zip(r, piv)]
                if r[col]:
                    new.append(r)
                elif any(r):
                    rest.append(r)
            nz = new
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        rows = rest
        col += 1
    for k, b in enumerate(basis):
        p = _pivot(b)
        for k2 in range(k):
            q = basis[k2][p] // b[p]
            if q:
                basis[k2] = [x - q * y for x, y in zip(basis[k2], b)]
    return [tuple(b) for b in basis]


def _pivot(v: Sequence[int]) -> int:
    return next(i for i, x in enumerate(v) if x)


# --------------------------------------------------------------------------
# Rational linear algebra
# --------------------------------------------------------------------------


def solve_rational(a: IntMatrix | Sequence[Sequence], b: Sequence) -> RatVector | None:
    """Solve ``a x = b`` over Q.

    Returns the unique solution when ``a`` has full column rank, a particular
    solution (free variables set to 0) otherwise, or ``None`` when the system
    is inconsistent.
    """
    rows = a.to_lists() if isinstance(a, IntMatrix) else [list(r) for r in a]
    ncols = a.cols if isinstance(a, IntMatrix) else (len(rows[0]) if rows else 0)
    if len(rows) != len(b):
        raise ValueError(f"system has {len(rows)} equations but rhs has {len(b)} entries")
    aug = [[Fraction(x) for x in r] + [Fraction(y)] for r, y in zip(rows, b)]
    pivots = _rref(aug, ncols)
    for r in aug[len(pivots):]:
        if r[ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for k, c in enumerate(pivots):
        x[c] = aug[k][ncols]
    return tuple(x)


def _rref(m: list[list[Fraction]], ncols: int) -> list[int]:
    """In-place reduced row echelon form on the first ``ncols`` columns."""
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return pivots


def rank(rows: Sequence[Sequence]) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return 0
    return len(_rref(m, len(m[0])))


def inverse_rational(m: IntMatrix | Sequence[Sequence]) -> list[list[Fraction]]:
    rows = m.to_lists() if isinstance(m, IntMatrix) else [list(r) for r in m]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("inverse of a non-square matrix")
    aug = [
        [Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
        for i, r in enumerate(rows)
    ]
    if len(_rref(aug, n)) != n:
        raise ZeroDivisionError("matrix is singular")
    return [r[n:] for r in aug]


def determinant(m: IntMatrix | Sequence[Sequence[int]]) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    a = m.to_lists() if isinstance(m, IntMatrix) else [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k]), None)
            if p is None:
                return 0
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def integer_kernel(m: IntMatrix) -> list[IntVector]:
    """Basis of the lattice ``{x in Z^cols : m x = 0}`` (saturated)."""
    _, d, v = smith_normal_form(m)
    r = sum(1 for i in range(min(d.rows, d.cols)) if d[i, i])
    return [v.column(j) for j in range(r, m.cols)]


def unimodular_inverse(m: IntMatrix) -> IntMatrix:
    inv = inverse_rational(m)
    if not all(x.denominator == 1 for r in inv for x in r):
        raise ValueError("matrix is not unimodular")
    return IntMatrix.from_rows([[int(x) for x in r] for r in inv], cols=m.rows)


# --------------------------------------------------------------------------
# Quotient lattices
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class QuotientLattice:
    """The finitely generated abelian group ``Z^n / span(columns of relations)``."""

    ambient_rank: int
    relations: IntMatrix
    _snf: tuple[IntMatrix, IntMatrix, IntMatrix] = field(init=False, repr=False, compare=False)
    _hnf: tuple[IntVector, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.relations.rows != self.ambient_rank:
            raise ValueError("relation matrix rows must equal the ambient rank")
        object.__setattr__(self, "_snf", smith_normal_form(self.relations))
        cols = [self.relations.column(j) for j in range(self.relations.cols)]
        object.__setattr__(self, "_hnf", tuple(hermite_row_basis(cols, self.ambient_rank)))

    @classmethod
    def from_generators(cls, ambient_rank: int, gens: Sequence[Sequence[int]]) -> QuotientLattice:
        return cls(ambient_rank, IntMatrix.from_columns(gens, ambient_rank))

    @property
    def snf(self) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
        return self._snf

    @cached_property
    def diagonal(self) -> tuple[int, ...]:
        _, d, _ = self._snf
        diag = [d[i, i] for i in range(min(d.rows, d.cols))]
        return tuple(diag) + (0,) * (self.ambient_rank - len(diag))

    def canonical(self, v: Sequence[int]) -> IntVector:
        """Deterministic coset representative of ``v``."""
        if len(v) != self.ambient_rank:
            raise ValueError("vector length does not match ambient rank")
        w = [int(x) for x in v]
        for b in self._hnf:
            p = _pivot(b)
            q = w[p] // b[p]
            if q:
                w = [x - q * y for x, y in zip(w, b)]
        return tuple(w)

    def contains(self, v: Sequence[int]) -> bool:
        """True iff ``v`` lies in the relation sublattice."""
        return not any(self.canonical(v))

    def equal(self, u: Sequence[int], v: Sequence[int]) -> bool:
        return self.contains(tuple(a - b for a, b in zip(u, v)))

    def torsion_invariants(self) -> list[int]:
        return [d for d in self.diagonal if d > 1]

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.diagonal if d == 0)

    def coordinates(self, v: Sequence[int]) -> IntVector:
        """Coordinates of the class of ``v`` in ``(+) Z/d_i (+) Z^f``.

        Unit invariant factors are dropped; torsion coordinates are reduced
        into ``[0, d_i)``.
        """
        u, _, _ = self._snf
        y = u.apply(tuple(v))
        out = []
        for yi, d in zip(y, self.diagonal):
            if d == 1:
                continue
            out.append(yi % d if d else yi)
        return tuple(out)

    def generators(self) -> list[IntVector]:
        """Canonical lifts of the SNF generators, one per non-unit factor."""
        u, _, _ = self._snf
        uinv = unimodular_inverse(u)
        return [
            self.canonical(uinv.column(i))
            for i, d in enumerate(self.diagonal)
            if d != 1
        ]

    def is_trivial(self) -> bool:
        return all(d == 1 for d in self.diagonal)

    def order(self) -> int | None:
        """Group order, or ``None`` when infinite."""
        if self.free_rank:
            return None
        out = 1
        for d in self.diagonal:
            out *= d
        return out


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b) if a and b else 0
