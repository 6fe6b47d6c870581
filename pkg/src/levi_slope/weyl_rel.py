"""Relative Weyl groups of standard Levi subgroups.

``W_{M,G}`` is realised as the setwise stabiliser in ``W`` of the Levi's
simple roots ``Delta_J``.  It is computed by orbit-stabiliser: the orbit of
the Levi root subsystem ``Phi_J`` under ``W`` gives Schreier generators of
``N_W(W_J) = W_J x Stab(Delta_J)``, and each generator is pushed into
``Stab(Delta_J)`` by descent in ``W_J``.

Weyl group elements are integer ``n x n`` matrices acting on cocharacters;
a root covector ``alpha`` is moved to ``alpha @ w^{-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .lattice import IntMatrix, integer_kernel, smith_normal_form
from .root_datum import (
    DEFAULT_WEYL_CAP,
    EnumerationCapError,
    RootDatum,
    _unique_rows,
    closure,
    positive_root_coefficients,
    weyl_order_formula,
)
from .slope import Degree, Parabolic, levi_type

DEFAULT_ORBIT_CAP = 10**6


class ClassificationError(RuntimeError):
    """The reflection data of a group does not match any finite Coxeter type."""


# --------------------------------------------------------------------------
# Coxeter types
# --------------------------------------------------------------------------


def coxeter_order(kind: str, rank: int) -> int:
    if kind in "ABCDEFG":
        return weyl_order_formula(kind, rank) if rank else 1
    if kind == "H":
        return {3: 120, 4: 14400}[rank]
    if kind.startswith("I2("):
        return 2 * int(kind[3:-1])
    raise ValueError(f"unknown Coxeter kind {kind!r}")


def canonical_component(kind: str, rank: int) -> list[tuple[str, int]]:
    """Normal form up to isomorphism of Coxeter groups.

    ``B_k`` and ``C_k`` merge into ``B_k``; low-rank coincidences collapse
    (``B_1 = C_1 = A_1``, ``D_2 = A_1 x A_1``, ``D_3 = A_3``, ``I_2(3) = A_2``,
    ``I_2(4) = B_2``, ``I_2(6) = G_2``) and rank-0 factors vanish.
    """
    if rank == 0:
        return []
    if kind == "C":
        kind = "B"
    if kind == "B" and rank == 1:
        return [("A", 1)]
    if kind == "D" and rank == 2:
        return [("A", 1), ("A", 1)]
    if kind == "D" and rank == 3:
        return [("A", 3)]
    if kind.startswith("I2("):
        m = int(kind[3:-1])
        return {2: [("A", 1), ("A", 1)], 3: [("A", 2)], 4: [("B", 2)], 6: [("G", 2)]}.get(
            m, [(kind, 2)]
        )
    return [(kind, rank)]


def canonical_components(components: Sequence[tuple[str, int]]) -> tuple[tuple[str, int], ...]:
    out: list[tuple[str, int]] = []
    for kind, rank in components:
        out.extend(canonical_component(kind, rank))
    return tuple(sorted(out))


def _label(components: Sequence[tuple[str, int]]) -> str:
    if not components:
        return "1"
    return "x".join(k if k.startswith("I2(") else f"{k}{r}" for k, r in components)


@dataclass(frozen=True)
class CoxeterType:
    """Coxeter type of a finite group generated by reflections.

    ``components`` uses abstract labels (``B`` for the B/C family).
    ``reflection_group`` is false when the reflections of the group do not
    generate it; the label is then meaningless and reported as such.
    """

    components: tuple[tuple[str, int], ...]
    reflection_group: bool = True
    dimension: int = 0

    @property
    def order(self) -> int:
        out = 1
        for kind, rank in self.components:
            out *= coxeter_order(kind, rank)
        return out

    @property
    def abstract_label(self) -> str:
        if not self.reflection_group:
            return "non-reflection"
        return _label(self.components)

    @property
    def convention_label(self) -> str:
        """Label with the B/C family written as ``C`` (the table's notation)."""
        if not self.reflection_group:
            return "non-reflection"
        return _label([("C" if k == "B" else k, r) for k, r in self.components])

    @property
    def canonical(self) -> tuple[tuple[str, int], ...]:
        return canonical_components(self.components)


def parse_type_label(label: str) -> tuple[tuple[str, int], ...]:
    """Inverse of the labels above, e.g. ``"A1xA1xA3"`` or ``"1"``."""
    label = label.strip()
    if label in ("", "1", "T", "trivial"):
        return ()
    out = []
    for part in label.split("x"):
        if part.startswith("I2("):
            out.append((part, 2))
        else:
            out.append((part[0].upper(), int(part[1:])))
    return tuple(out)


# --------------------------------------------------------------------------
# The stabiliser
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RelativeWeylGroup:
    levi: Parabolic
    representatives: np.ndarray = field(repr=False)  # (order, n, n) int16
    order: int
    coxeter_type: CoxeterType | None
    orbit_size: int = 1

    def __iter__(self):
        return iter(self.representatives)


def _levi_root_covectors(d: RootDatum, j: Parabolic) -> np.ndarray:
    idx = set(j.indices)
    if not idx:
        return np.zeros((0, d.rank), dtype=np.int64)
    roots = np.array(d.roots.to_lists(), dtype=np.int64)
    coeffs = [c for c in positive_root_coefficients(d.cartan)
              if all(ci == 0 or i in idx for i, ci in enumerate(c))]
    return np.array(coeffs, dtype=np.int64) @ roots


def _set_key(rows: np.ndarray, height: np.ndarray) -> bytes:
    """Order- and sign-independent encoding of a set of root lines."""
    if not len(rows):
        return b""
    signs = np.sign(rows @ height)
    rows = rows * signs[:, None]
    rows = rows[np.lexsort(rows.T[::-1])]
    return rows.tobytes()


def _reflections(d: RootDatum) -> list[np.ndarray]:
    return [np.array(d.reflection_matrix(i).to_lists(), dtype=np.int64)
            for i in range(d.num_simple)]


def levi_weyl_order(d: RootDatum, j: Parabolic) -> int:
    out = 1
    for kind, rank in levi_type(d, j):
        out *= weyl_order_formula(kind, rank)
    return out


def relative_weyl(d: RootDatum, j: Parabolic, orbit_cap: int = DEFAULT_ORBIT_CAP,
                  weyl_cap: int = DEFAULT_WEYL_CAP, identify: bool = True) -> RelativeWeylGroup:
    j.check(d)
    n = d.rank
    height = np.array(d.rho_check, dtype=np.int64)
    gens = _reflections(d)
    phi_j = _levi_root_covectors(d, j)

    # orbit of Phi_J with transversal t_x (t_x . Phi_J = x)
    ident = np.eye(n, dtype=np.int64)
    keys = {_set_key(phi_j, height): 0}
    points = [phi_j]
    trans = [ident]
    trans_inv = [ident]
    edges: list[tuple[int, int, int]] = []  # (x, i, s_i x)
    k = 0
    while k < len(points):
        x = points[k]
        for i, s in enumerate(gens):
            y = x @ s
            key = _set_key(y, height)
            idx = keys.get(key)
            if idx is None:
                idx = len(points)
                keys[key] = idx
                if idx >= orbit_cap:
                    raise EnumerationCapError(f"root-subsystem orbit exceeds the cap {orbit_cap}")
                points.append(y)
                trans.append(s @ trans[k])
                trans_inv.append(trans_inv[k] @ s)
            edges.append((k, i, idx))
        k += 1
    orbit = len(points)

    w_j = levi_weyl_order(d, j)
    expected, rem = divmod(d.weyl_order, orbit * w_j)
    if rem:
        raise AssertionError(f"orbit size {orbit} times |W_J| = {w_j} does not divide |W|")
    if expected > weyl_cap:
        raise EnumerationCapError(f"relative Weyl group of order {expected} exceeds the cap {weyl_cap}")

    # Schreier generators t_{s x}^{-1} s t_x, batched
    t = np.stack(trans)
    tinv = np.stack(trans_inv)
    e = np.array(edges, dtype=np.int64).reshape(-1, 3)
    s_stack = np.stack(gens) if gens else np.zeros((0, n, n), dtype=np.int64)
    schreier = tinv[e[:, 2]] @ s_stack[e[:, 1]] @ t[e[:, 0]]
    schreier = _normalize_into_stabilizer(d, j, schreier, height)
    schreier = _unique_matrices(schreier)

    elements = _greedy_closure(schreier, n, weyl_cap)
    if len(elements) != expected:
        raise AssertionError(
            f"orbit-stabiliser mismatch: {orbit} x {w_j} x {len(elements)} != {d.weyl_order}"
        )
    elements.setflags(write=False)
    rw = RelativeWeylGroup(j, elements, len(elements), None, orbit)
    _check_permutes_simple_roots(d, rw)
    if identify:
        rw = RelativeWeylGroup(j, elements, len(elements), identify_coxeter_type(rw, d), orbit)
    return rw


def _normalize_into_stabilizer(d: RootDatum, j: Parabolic, ks: np.ndarray,
                               height: np.ndarray) -> np.ndarray:
    """Left-multiply each element of ``N_W(W_J)`` by ``W_J`` until it fixes ``Delta_J``.

    While some ``i in J`` has ``k^{-1}(alpha_i) = alpha_i @ k`` negative,
    replace ``k`` by ``s_i k``; each step removes one positive root of
    ``Phi_J`` from the inversion set.
    """
    idx = list(j.indices)
    if not idx or not len(ks):
        return ks
    ks = ks.copy()
    roots = np.array([d.root(i) for i in idx], dtype=np.int64)  # (m, n)
    refl = np.stack([np.array(d.reflection_matrix(i).to_lists(), dtype=np.int64) for i in idx])
    while True:
        h = np.einsum("mn,knp,p->km", roots, ks, height)  # (K, m)
        neg = h < 0
        bad = neg.any(axis=1)
        if not bad.any():
            return ks
        first = neg.argmax(axis=1)
        sel = np.nonzero(bad)[0]
        ks[sel] = refl[first[sel]] @ ks[sel]


def _unique_matrices(a: np.ndarray) -> np.ndarray:
    if not len(a):
        return a
    flat = _unique_rows(a.reshape(len(a), -1))
    return flat.reshape(-1, a.shape[1], a.shape[2])


def _keys(a: np.ndarray) -> list[bytes]:
    raw = np.ascontiguousarray(a).tobytes()
    size = a.shape[1] * a.shape[2] * a.dtype.itemsize
    return [raw[i * size:(i + 1) * size] for i in range(len(a))]


def _greedy_closure(cands: np.ndarray, n: int, cap: int) -> np.ndarray:
    chosen: list[np.ndarray] = []
    elements = np.eye(n, dtype=np.int16)[None]
    members = set(_keys(elements))
    for g in cands:
        if g.astype(np.int16).tobytes() in members:
            continue
        chosen.append(g)
        elements = closure(chosen, n, cap)
        members = set(_keys(elements))
    return elements


def _check_permutes_simple_roots(d: RootDatum, rw: RelativeWeylGroup) -> None:
    idx = list(rw.levi.indices)
    if not idx:
        return
    simple = np.array([d.root(i) for i in idx], dtype=np.int64)
    images = np.einsum("mn,knp->kmp", simple, rw.representatives.astype(np.int64))
    target = {r.tobytes() for r in simple}
    for img in images:
        if {r.tobytes() for r in img} != target:
            raise AssertionError("stabiliser element does not permute the Levi simple roots")


# --------------------------------------------------------------------------
# Coxeter type identification
# --------------------------------------------------------------------------


def _invariant_subspace_basis(d: RootDatum, j: Parabolic) -> IntMatrix | None:
    """Saturated integral basis (columns) of ``{v : <alpha_J, v> = 0} cap coroot span``."""
    rows = [list(d.root(i)) for i in j.indices]
    if d.num_simple < d.rank:
        # covectors vanishing on every coroot cut out the coroot span
        rows += [list(v) for v in integer_kernel(d.coroots.T)]
    if not rows:
        return IntMatrix.identity(d.rank)
    basis = integer_kernel(IntMatrix.from_rows(rows, cols=d.rank))
    if not basis:
        return None
    return IntMatrix.from_columns(basis, d.rank)


def _left_inverse(b: IntMatrix) -> np.ndarray:
    """Integer ``L`` with ``L b = I`` for a saturated basis matrix ``b``."""
    u, diag, v = smith_normal_form(b)
    k = b.cols
    if any(diag[i, i] != 1 for i in range(k)):
        raise AssertionError("basis of the invariant subspace is not saturated")
    un = np.array(u.to_lists(), dtype=np.int64)
    vn = np.array(v.to_lists(), dtype=np.int64)
    return vn @ un[:k]


def restricted_action(d: RootDatum, rw: RelativeWeylGroup) -> np.ndarray:
    """Matrices of the representatives on the lattice basis of ``V``."""
    b = _invariant_subspace_basis(d, rw.levi)
    if b is None:
        return np.ones((rw.order, 0, 0), dtype=np.int64)
    bn = np.array(b.to_lists(), dtype=np.int64)
    left = _left_inverse(b)
    g = rw.representatives.astype(np.int64)
    x = left @ g @ bn
    if not np.array_equal(g @ bn, bn @ x):
        raise AssertionError("representative does not preserve the invariant subspace")
    return x


def _lex_sign(v: np.ndarray) -> int:
    nz = np.nonzero(v)[0]
    return int(np.sign(v[nz[0]])) if len(nz) else 0


def _element_order(x: np.ndarray) -> int:
    k = len(x)
    ident = np.eye(k, dtype=np.int64)
    p = x.copy()
    m = 1
    while not np.array_equal(p, ident):
        p = p @ x
        m += 1
        if m > 10**4:
            raise ClassificationError("element of unexpectedly large order")
    return m


_COS2 = {2: Fraction(0), 3: Fraction(1, 4), 4: Fraction(1, 2), 6: Fraction(3, 4)}


def identify_coxeter_type(rw: RelativeWeylGroup, d: RootDatum) -> CoxeterType:
    x = restricted_action(d, rw)
    dim = x.shape[1]
    if rw.order == 1:
        return CoxeterType((), True, dim)
    ident = np.eye(dim, dtype=np.int64)
    sq = np.einsum("kab,kbc->kac", x, x)
    is_inv = (sq == ident).all(axis=(1, 2))
    traces = np.trace(x, axis1=1, axis2=2)
    refl_idx = np.nonzero(is_inv & (traces == dim - 2))[0]

    roots: list[np.ndarray] = []
    mats: list[np.ndarray] = []
    for k in refl_idx:
        diff = x[k] - ident
        col = diff[:, np.nonzero(diff.any(axis=0))[0][0]]
        g = int(np.gcd.reduce(np.abs(col)))
        r = col // g
        r = r * _lex_sign(r)
        roots.append(r)
        mats.append(x[k])
    if not roots:
        return CoxeterType((), False, dim)

    # simple reflections: exactly one positive root line turned negative
    simple = []
    for a, (r, m) in enumerate(zip(roots, mats)):
        flipped = sum(1 for beta in roots if _lex_sign(m @ beta) < 0)
        if flipped == 1:
            simple.append(a)
    sr = [roots[a] for a in simple]
    sm = [mats[a] for a in simple]
    k = len(simple)
    coxeter = [[1 if p == q else _element_order(sm[p] @ sm[q]) for q in range(k)]
               for p in range(k)]

    # invariant form by averaging, used to cross-check the angles
    form = np.einsum("kba,kbc->ac", x, x)
    for p in range(k):
        for q in range(p + 1, k):
            m = coxeter[p][q]
            num = int(sr[p] @ form @ sr[q]) ** 2
            den = int(sr[p] @ form @ sr[p]) * int(sr[q] @ form @ sr[q])
            if m in _COS2 and Fraction(num, den) != _COS2[m]:
                raise ClassificationError(f"angle between simple roots disagrees with m = {m}")

    comps = _classify_coxeter_matrix(coxeter)
    ctype = CoxeterType(tuple(sorted(comps)), True, dim)
    if ctype.order != rw.order:
        return CoxeterType(ctype.components, False, dim)
    return ctype


def _classify_coxeter_matrix(m: list[list[int]]) -> list[tuple[str, int]]:
    k = len(m)
    seen: set[int] = set()
    out = []
    for start in range(k):
        if start in seen:
            continue
        comp, stack = [], [start]
        seen.add(start)
        while stack:
            p = stack.pop()
            comp.append(p)
            for q in range(k):
                if q not in seen and m[p][q] > 2:
                    seen.add(q)
                    stack.append(q)
        out.append(_classify_component(m, sorted(comp)))
    return out


def _classify_component(m: list[list[int]], nodes: list[int]) -> tuple[str, int]:
    r = len(nodes)
    if r == 1:
        return ("A", 1)
    edges = [(p, q, m[p][q]) for a, p in enumerate(nodes) for q in nodes[a + 1:] if m[p][q] > 2]
    if len(edges) != r - 1:
        raise ClassificationError("Coxeter graph has a cycle")
    deg = {p: 0 for p in nodes}
    for p, q, _ in edges:
        deg[p] += 1
        deg[q] += 1
    labels = sorted(w for _, _, w in edges)
    big = [w for w in labels if w > 3]
    if r == 2:
        w = labels[0]
        return {3: ("A", 2), 4: ("B", 2), 6: ("G", 2)}.get(w, (f"I2({w})", 2))
    branch = [p for p in nodes if deg[p] >= 3]
    if not big:
        if not branch:
            return ("A", r)
        if len(branch) == 1 and deg[branch[0]] == 3:
            legs = sorted(_leg(m, nodes, branch[0], q) for p, q, _ in _incident(edges, branch[0]))
            if legs[0] == legs[1] == 1:
                return ("D", r)
            if legs[:2] == [1, 2] and legs[2] in (2, 3, 4):
                return ("E", r)
        raise ClassificationError(f"simply laced graph with branch data {deg}")
    if branch or len(big) > 1:
        raise ClassificationError("Coxeter graph outside the finite catalogue")
    (p, q, w) = next(e for e in edges if e[2] > 3)
    at_end = deg[p] == 1 or deg[q] == 1
    if w == 4:
        if at_end:
            return ("B", r)
        if r == 4:
            return ("F", 4)
    if w == 5 and at_end and r in (3, 4):
        return ("H", r)
    raise ClassificationError(f"no finite Coxeter group with label {w} in rank {r}")


def _incident(edges, p):
    for a, b, w in edges:
        if a == p:
            yield (a, b, w)
        elif b == p:
            yield (b, a, w)


def _leg(m, nodes, root, start) -> int:
    prev, cur, length = root, start, 1
    while True:
        nxt = [q for q in nodes if q not in (prev, cur) and m[cur][q] > 2]
        if not nxt:
            return length
        prev, cur, length = cur, nxt[0], length + 1


# --------------------------------------------------------------------------
# Action on the degree quotient
# --------------------------------------------------------------------------


def acts_faithfully_on_quotient(d: RootDatum, rw: RelativeWeylGroup) -> bool:
    """No non-identity representative is trivial on ``Q^n / Q-span(coroot_J)``."""
    idx = list(rw.levi.indices)
    n = d.rank
    if idx:
        ann = integer_kernel(d.coroots.select_columns(idx).T)
        p = np.array(ann, dtype=np.int64).reshape(-1, n)
    else:
        p = np.eye(n, dtype=np.int64)
    g = rw.representatives.astype(np.int64) - np.eye(n, dtype=np.int64)
    trivial = ~(np.einsum("an,knp->kap", p, g).any(axis=(1, 2)))
    return int(trivial.sum()) == 1


def degree_invariance_condition(d: RootDatum, rw: RelativeWeylGroup, deg: Degree) -> bool:
    from .parabolic import fixes_degree

    if deg.parabolic != rw.levi:
        raise ValueError("degree lives on a different parabolic")
    return fixes_degree(d, rw.representatives, deg)
