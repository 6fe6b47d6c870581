"""Root data of reductive groups.

A root datum is stored concretely: the cocharacter lattice is ``Z^n``, the
simple coroots are the columns of an ``n x r`` integer matrix and the simple
roots are the rows of an ``r x n`` integer matrix (covectors on ``Z^n``).
The Cartan matrix is ``C[i][j] = <alpha_i, coroot_j>`` (row = root index,
column = coroot index), so for B_n the entry ``C[n-1][n] = -2``.

Node numbering follows Bourbaki and is 1-based wherever a node set is
exposed (``Parabolic``, CLI, JSON); lattice-level arrays are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Any, Iterator, Sequence

import numpy as np

from .lattice import (
    IntMatrix,
    IntVector,
    QuotientLattice,
    RatVector,
    block_diagonal,
    determinant,
    dot,
    inverse_rational,
    rank,
    smith_normal_form,
    unimodular_inverse,
)

DEFAULT_WEYL_CAP = 10**7


class InvalidRootDatum(ValueError):
    """Raised when matrices do not describe a finite-type root datum."""


class EnumerationCapError(RuntimeError):
    """Raised instead of silently truncating a group or orbit enumeration."""


# --------------------------------------------------------------------------
# Simple root systems in Euclidean coordinates (Bourbaki)
# --------------------------------------------------------------------------

_H = Fraction(1, 2)


def _e(n: int, *terms: tuple[int, Fraction | int]) -> tuple[Fraction, ...]:
    v = [Fraction(0)] * n
    for i, c in terms:
        v[i] += c
    return tuple(v)


def euclidean_simple_roots(kind: str, rank: int) -> list[tuple[Fraction, ...]]:
    if kind == "A":
        n = rank + 1
        return [_e(n, (i, 1), (i + 1, -1)) for i in range(rank)]
    if kind in "BCD":
        n = rank
        roots = [_e(n, (i, 1), (i + 1, -1)) for i in range(rank - 1)]
        if kind == "B":
            roots.append(_e(n, (n - 1, 1)))
        elif kind == "C":
            roots.append(_e(n, (n - 1, 2)))
        else:
            roots.append(_e(n, (n - 2, 1), (n - 1, 1)))
        return roots
    if kind == "E":
        e8 = [
            tuple([_H] + [-_H] * 6 + [_H]),
            _e(8, (0, 1), (1, 1)),
            _e(8, (0, -1), (1, 1)),
            _e(8, (1, -1), (2, 1)),
            _e(8, (2, -1), (3, 1)),
            _e(8, (3, -1), (4, 1)),
            _e(8, (4, -1), (5, 1)),
            _e(8, (5, -1), (6, 1)),
        ]
        return [tuple(Fraction(x) for x in r) for r in e8[:rank]]
    if kind == "F":
        return [
            _e(4, (1, 1), (2, -1)),
            _e(4, (2, 1), (3, -1)),
            _e(4, (3, 1)),
            (_H, -_H, -_H, -_H),
        ]
    if kind == "G":
        return [_e(3, (0, 1), (1, -1)), _e(3, (0, -2), (1, 1), (2, 1))]
    raise InvalidRootDatum(f"unknown type {kind!r}")


def check_type_rank(kind: str, rank: int) -> None:
    ok = {
        "A": rank >= 1,
        "B": rank >= 2,
        "C": rank >= 2,
        "D": rank >= 3,
        "E": rank in (6, 7, 8),
        "F": rank == 4,
        "G": rank == 2,
    }
    if kind not in ok:
        raise InvalidRootDatum(f"unknown type {kind!r}")
    if not ok[kind]:
        raise InvalidRootDatum(f"invalid rank {rank} for type {kind}")


def standard_cartan(kind: str, rank: int) -> IntMatrix:
    """Cartan matrix computed from Euclidean simple roots."""
    check_type_rank(kind, rank)
    roots = euclidean_simple_roots(kind, rank)
    rows = []
    for a in roots:
        rows.append([int(2 * dot(a, b) / dot(b, b)) for b in roots])
    return IntMatrix.from_rows(rows)


# --------------------------------------------------------------------------
# Dynkin / Cartan classification
# --------------------------------------------------------------------------


def cartan_components(c: IntMatrix) -> list[list[int]]:
    """Connected components (0-based index lists) of the Dynkin diagram."""
    r = c.rows
    seen: set[int] = set()
    comps = []
    for s in range(r):
        if s in seen:
            continue
        comp, todo = [], [s]
        seen.add(s)
        while todo:
            i = todo.pop()
            comp.append(i)
            for j in range(r):
                if j not in seen and c[i, j]:
                    seen.add(j)
                    todo.append(j)
        comps.append(sorted(comp))
    return comps


def classify_cartan(c: IntMatrix) -> tuple[str, int]:
    """Finite type ``(letter, rank)`` of an irreducible Cartan matrix."""
    r = c.rows
    if r == 0:
        raise InvalidRootDatum("empty Cartan matrix")
    adj = {i: [j for j in range(r) if j != i and c[i, j]] for i in range(r)}
    mult = {(i, j): c[i, j] * c[j, i] for i in range(r) for j in adj[i]}
    edges = sum(len(v) for v in adj.values()) // 2
    if edges != r - 1:
        raise InvalidRootDatum("Dynkin diagram is not a tree")
    if r == 1:
        return ("A", 1)
    degrees = {i: len(adj[i]) for i in range(r)}
    heavy = [(i, j) for (i, j), m in mult.items() if m > 1 and i < j]
    branch = [i for i, d in degrees.items() if d == 3]
    if any(d > 3 for d in degrees.values()) or len(branch) > 1:
        raise InvalidRootDatum("not a finite-type Dynkin diagram")
    if branch:
        if heavy:
            raise InvalidRootDatum("branched diagram with multiple edge")
        b = branch[0]
        legs = sorted(_leg_length(adj, b, n) for n in adj[b])
        if legs[0] == 1 and legs[1] == 1:
            return ("D", r)
        if legs[:2] == [1, 2] and legs[2] in (2, 3, 4):
            return ("E", r)
        raise InvalidRootDatum("branched diagram of infinite type")
    if not heavy:
        return ("A", r)
    if len(heavy) > 1:
        raise InvalidRootDatum("several multiple edges")
    i, j = heavy[0]
    m = mult[(i, j)]
    if m == 3:
        if r == 2:
            return ("G", 2)
        raise InvalidRootDatum("triple edge in rank > 2")
    if m != 2:
        raise InvalidRootDatum("edge multiplicity of infinite type")
    ends = [k for k, d in degrees.items() if d == 1]
    if r == 2:
        return ("B", 2)
    if i in ends or j in ends:
        end = i if i in ends else j
        other = j if end == i else i
        # |C[other][end]| = 2 means alpha_end is short: type B
        return ("B", r) if abs(c[other, end]) == 2 else ("C", r)
    if r == 4:
        return ("F", 4)
    raise InvalidRootDatum("double edge in the interior of a long chain")


def _leg_length(adj: dict[int, list[int]], root: int, start: int) -> int:
    length, prev, cur = 1, root, start
    while True:
        nxt = [k for k in adj[cur] if k != prev]
        if not nxt:
            return length
        prev, cur = cur, nxt[0]
        length += 1


def weyl_order_formula(kind: str, rank: int) -> int:
    """Classical order of the Weyl group of an irreducible type."""
    if kind == "A":
        return factorial(rank + 1)
    if kind in "BC":
        return 2**rank * factorial(rank)
    if kind == "D":
        return 2 ** (rank - 1) * factorial(rank)
    return {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600,
            ("F", 4): 1152, ("G", 2): 12}[(kind, rank)]


def format_type(components: Sequence[tuple[str, int]]) -> str:
    """``[("A", 2), ("A", 2)] -> "A2xA2"``; the empty product is ``"T"``."""
    if not components:
        return "T"
    return "x".join(f"{k}{n}" for k, n in sorted(components))


def validate_cartan(c: IntMatrix) -> None:
    r = c.rows
    if c.cols != r:
        raise InvalidRootDatum("Cartan matrix is not square")
    for i in range(r):
        if c[i, i] != 2:
            raise InvalidRootDatum(f"Cartan diagonal entry {i} is {c[i, i]}, not 2")
        for j in range(r):
            if i != j:
                if c[i, j] > 0:
                    raise InvalidRootDatum(f"positive off-diagonal Cartan entry ({i},{j})")
                if (c[i, j] == 0) != (c[j, i] == 0):
                    raise InvalidRootDatum(f"Cartan entries ({i},{j}) and ({j},{i}) disagree on zero")
    for comp in cartan_components(c):
        for k in range(1, len(comp) + 1):
            if determinant(c.submatrix(comp[:k], comp[:k])) <= 0:
                raise InvalidRootDatum("Cartan matrix is not of finite type")
        classify_cartan(c.submatrix(comp, comp))


# --------------------------------------------------------------------------
# Root datum
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RootDatum:
    name: str
    coroots: IntMatrix  # n x r, column j = coroot_j
    roots: IntMatrix  # r x n, row i = root_i

    def __post_init__(self) -> None:
        n, r = self.coroots.rows, self.coroots.cols
        if self.roots.shape != (r, n):
            raise InvalidRootDatum(
                f"roots shape {self.roots.shape} does not match coroots shape {self.coroots.shape}"
            )
        if r and rank(self.coroots.T.to_lists()) != r:
            raise InvalidRootDatum("simple coroots are linearly dependent")
        if r and rank(self.roots.to_lists()) != r:
            raise InvalidRootDatum("simple roots are linearly dependent")
        validate_cartan(self.roots @ self.coroots)

    @property
    def rank(self) -> int:
        return self.coroots.rows

    @property
    def num_simple(self) -> int:
        return self.coroots.cols

    @property
    def nodes(self) -> frozenset[int]:
        return frozenset(range(1, self.num_simple + 1))

    def coroot(self, i: int) -> IntVector:
        return self.coroots.column(i)

    def root(self, i: int) -> IntVector:
        return self.roots.row(i)

    @cached_property
    def cartan(self) -> IntMatrix:
        return self.roots @ self.coroots

    @cached_property
    def components(self) -> list[list[int]]:
        return cartan_components(self.cartan)

    @cached_property
    def component_types(self) -> list[tuple[str, int]]:
        c = self.cartan
        return [classify_cartan(c.submatrix(k, k)) for k in self.components]

    def type_string(self) -> str:
        return format_type(self.component_types)

    @cached_property
    def weyl_order(self) -> int:
        out = 1
        for kind, r in self.component_types:
            out *= weyl_order_formula(kind, r)
        return out

    @cached_property
    def rho_check(self) -> IntVector:
        """Integral vector ``v`` with ``<alpha_i, v>`` equal and positive for all i.

        Used as a height functional: a root covector is positive iff it pairs
        positively with this vector.
        """
        if not self.num_simple:
            return (0,) * self.rank
        # v = sum_j x_j coroot_j with C x = (1,...,1)
        x = inverse_rational(self.cartan)
        coeff = [sum(row) for row in x]
        den = 1
        for f in coeff:
            den = den * f.denominator // _gcd(den, f.denominator)
        ints = [int(f * den) for f in coeff]
        return tuple(
            sum(ints[j] * self.coroots[k, j] for j in range(self.num_simple))
            for k in range(self.rank)
        )

    def pairing(self, covector: Sequence, vector: Sequence):
        return dot(covector, vector)

    def reflection_matrix(self, i: int) -> IntMatrix:
        """``s_i(v) = v - <alpha_i, v> coroot_i`` as an ``n x n`` matrix."""
        n = self.rank
        a, c = self.root(i), self.coroot(i)
        return IntMatrix.from_rows(
            [[int(p == q) - c[p] * a[q] for q in range(n)] for p in range(n)]
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "builder": "explicit",
            "name": self.name,
            "coroots": self.coroots.to_lists(),
            "roots": self.roots.to_lists(),
        }


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def build_simple(kind: str, rank: int, isogeny: str = "adjoint") -> RootDatum:
    """Root datum of a simple group in adjoint or simply connected form."""
    kind = kind.upper()
    c = standard_cartan(kind, rank)
    if isogeny == "simply_connected":
        # cocharacter lattice = coroot lattice
        return RootDatum(f"{kind}{rank}_sc", IntMatrix.identity(rank), c)
    if isogeny == "adjoint":
        # cocharacter lattice = coweight lattice; roots are the dual basis
        return RootDatum(f"{kind}{rank}_ad", c, IntMatrix.identity(rank))
    raise InvalidRootDatum(f"unknown isogeny {isogeny!r}")


def build_gl(n: int) -> RootDatum:
    if n < 1:
        raise InvalidRootDatum("GL_n needs n >= 1")
    cols = []
    for i in range(n - 1):
        v = [0] * n
        v[i], v[i + 1] = 1, -1
        cols.append(v)
    coroots = IntMatrix.from_columns(cols, n)
    return RootDatum(f"GL{n}", coroots, coroots.T)


def product(d1: RootDatum, d2: RootDatum) -> RootDatum:
    return RootDatum(
        f"{d1.name}*{d2.name}",
        block_diagonal(d1.coroots, d2.coroots),
        block_diagonal(d1.roots, d2.roots),
    )


def torus(n: int) -> RootDatum:
    return RootDatum(f"T{n}", IntMatrix.zeros(n, 0), IntMatrix.zeros(0, n))


def cartan_matrix(d: RootDatum) -> IntMatrix:
    return d.cartan


def from_json(data: dict[str, Any]) -> RootDatum:
    """Build a datum from the JSON schema used by the CLI."""
    try:
        builder = data["builder"]
        if builder == "simple":
            return build_simple(data["type"], int(data["rank"]), data.get("isogeny", "adjoint"))
        if builder == "gl":
            return build_gl(int(data["n"]))
        if builder == "product":
            factors = [from_json(f) for f in data["factors"]]
            if not factors:
                raise InvalidRootDatum("product needs at least one factor")
            out = factors[0]
            for f in factors[1:]:
                out = product(out, f)
            return out
        if builder == "explicit":
            coroots = data["coroots"]
            roots = data["roots"]
            n = len(coroots)
            r = len(roots)
            return RootDatum(
                data.get("name", "explicit"),
                IntMatrix.from_rows(coroots, cols=r) if n else IntMatrix.zeros(0, r),
                IntMatrix.from_rows(roots, cols=n) if r else IntMatrix.zeros(0, n),
            )
    except (KeyError, TypeError) as exc:
        raise InvalidRootDatum(f"malformed datum description: {exc}") from exc
    raise InvalidRootDatum(f"unknown builder {builder!r}")


# --------------------------------------------------------------------------
# Roots, weights, fundamental group
# --------------------------------------------------------------------------


def positive_root_coefficients(c: IntMatrix) -> list[IntVector]:
    """Positive roots in simple-root coordinates, by root strings.

    Uses ``<beta, coroot_i> = sum_j beta_j C[j][i]``; ``beta + alpha_i`` is a
    root iff ``p - <beta, coroot_i> > 0`` where ``p`` is the length of the
    downward alpha_i-string through beta.
    """
    r = c.rows
    simple = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    found = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(r):
                p = 0
                cur = list(beta)
                while True:
                    cur[i] -= 1
                    if tuple(cur) in found:
                        p += 1
                    else:
                        break
                pairing = sum(beta[j] * c[j, i] for j in range(r))
                if p - pairing > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in found:
                        found.add(up)
                        nxt.append(up)
        layer = nxt
    return sorted(found, key=lambda b: (sum(b), b))


def positive_roots(d: RootDatum) -> list[IntVector]:
    """Positive roots as covectors on the cocharacter lattice."""
    out = []
    for coeff in positive_root_coefficients(d.cartan):
        out.append(tuple(
            sum(coeff[i] * d.roots[i, k] for i in range(d.num_simple))
            for k in range(d.rank)
        ))
    return out


def positive_coroots(d: RootDatum) -> list[IntVector]:
    """Positive coroots as vectors (roots of the dual datum)."""
    out = []
    for coeff in positive_root_coefficients(d.cartan.T):
        out.append(tuple(
            sum(coeff[j] * d.coroots[k, j] for j in range(d.num_simple))
            for k in range(d.rank)
        ))
    return out


def fundamental_weights(d: RootDatum) -> list[RatVector]:
    """Covectors ``omega_i`` with ``<omega_i, coroot_j> = delta_ij``.

    When the coroots do not span the rational cocharacter space the weights
    are normalised to vanish on a fixed integral complement of that span.
    """
    n, r = d.rank, d.num_simple
    if r == 0:
        return []
    u, _, _ = smith_normal_form(d.coroots)
    uinv = unimodular_inverse(u)
    complement = [uinv.column(j) for j in range(r, n)]
    # columns: coroots followed by complement; solve Omega @ M = [I | 0]
    m = [list(d.coroot(j)) for j in range(r)] + [list(v) for v in complement]
    minv = inverse_rational([[m[j][k] for j in range(n)] for k in range(n)])
    # Omega = [I | 0] @ M^{-1}: the first r rows of M^{-1}
    return [tuple(minv[i]) for i in range(r)]


def pi1(d: RootDatum) -> QuotientLattice:
    """Cocharacters modulo the coroot lattice."""
    return QuotientLattice(d.rank, d.coroots)


def pi1_classes(d: RootDatum, free_range: int | None = None) -> list[IntVector]:
    """One canonical lift per element of the fundamental group.

    The free part (reductive case) is cut off at ``free_range`` multiples of
    each free generator; ``None`` means the torsion part only.
    """
    q = pi1(d)
    gens = q.generators()
    orders = [x for x in q.diagonal if x != 1]
    ranges = []
    for o in orders:
        if o == 0:
            ranges.append(range(free_range or 1))
        else:
            ranges.append(range(o))
    out = []

    def rec(k: int, acc: list[int]) -> None:
        if k == len(gens):
            out.append(q.canonical(acc))
            return
        for m in ranges[k]:
            rec(k + 1, [a + m * g for a, g in zip(acc, gens[k])])

    rec(0, [0] * d.rank)
    return out


# --------------------------------------------------------------------------
# Weyl group
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class WeylGroup:
    datum: RootDatum
    generators: tuple[IntMatrix, ...]
    order: int
    elements: np.ndarray | None = None  # (order, n, n) integer matrices

    def __iter__(self) -> Iterator[np.ndarray]:
        if self.elements is None:
            raise ValueError("Weyl group was not enumerated")
        return iter(self.elements)


def weyl_group(d: RootDatum, enumerate: bool = False, cap: int = DEFAULT_WEYL_CAP) -> WeylGroup:
    gens = tuple(d.reflection_matrix(i) for i in range(d.num_simple))
    order = d.weyl_order
    elements = None
    if enumerate:
        if order > cap:
            raise EnumerationCapError(f"|W| = {order} exceeds the enumeration cap {cap}")
        elements = closure([np.array(g.to_lists(), dtype=np.int64) for g in gens], d.rank, cap)
    return WeylGroup(d, gens, order, elements)


def closure(gens: Sequence[np.ndarray], n: int, cap: int = DEFAULT_WEYL_CAP,
            dtype=np.int16) -> np.ndarray:
    """All products of ``gens`` (a finite matrix group), by breadth-first search.

    Elements are deduplicated by hashing their exact byte encodings.
    """
    ident = np.eye(n, dtype=dtype)
    gens = [np.asarray(g, dtype=np.int64) for g in gens]
    seen = {ident.tobytes()}
    chunks = [ident[None]]
    frontier = ident[None]
    size = n * n * np.dtype(dtype).itemsize
    info = np.iinfo(dtype)
    while len(frontier):
        new_parts = []
        for g in gens:
            cand = np.matmul(frontier.astype(np.int64), g)
            if cand.size and (cand.max() > info.max or cand.min() < info.min):
                raise OverflowError("group element entries exceed the storage type")
            cand = cand.astype(dtype)
            raw = cand.tobytes()
            keep = []
            for k in range(len(cand)):
                key = raw[k * size:(k + 1) * size]
                if key not in seen:
                    seen.add(key)
                    keep.append(k)
            if keep:
                new_parts.append(cand[keep])
            if len(seen) > cap:
                raise EnumerationCapError(f"group closure exceeds the cap {cap}")
        frontier = np.concatenate(new_parts) if new_parts else np.empty((0, n, n), dtype)
        if len(frontier):
            chunks.append(frontier)
    return np.concatenate(chunks)


def regular_orbit_size(d: RootDatum) -> int:
    """|W| counted as the orbit of a regular dominant vector.

    Walks the orbit one length layer at a time (``s_i`` applied where
    ``<alpha_i, v> > 0``), deduplicating only within a layer, so memory stays
    proportional to the largest layer.
    """
    if not d.num_simple:
        return 1
    v = np.array(d.rho_check, dtype=np.int64)
    roots = np.array(d.roots.to_lists(), dtype=np.int64)
    coroots = np.array(d.coroots.to_lists(), dtype=np.int64)
    layer = v[None]
    total = 0
    while len(layer):
        total += len(layer)
        pair = layer @ roots.T  # (m, r)
        parts = []
        for i in range(d.num_simple):
            mask = pair[:, i] > 0
            if mask.any():
                parts.append(layer[mask] - pair[mask, i:i + 1] * coroots[:, i][None])
        if not parts:
            break
        layer = _unique_rows(np.concatenate(parts))
    return total


def _unique_rows(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    keys = a.view(np.dtype((np.void, a.dtype.itemsize * a.shape[1]))).ravel()
    _, idx = np.unique(keys, return_index=True)
    return a[np.sort(idx)]
