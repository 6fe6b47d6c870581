from __future__ import annotations

import numpy as np
import pytest

from levi_slope.lattice import IntMatrix, dot
from levi_slope.root_datum import (
    EnumerationCapError,
    InvalidRootDatum,
    RootDatum,
    build_gl,
    build_simple,
    fundamental_weights,
    from_json,
    pi1,
    pi1_classes,
    positive_coroots,
    positive_roots,
    product,
    regular_orbit_size,
    torus,
    weyl_group,
)

# number of positive roots, by the classical counts
POSITIVE_ROOTS = {
    **{("A", n): n * (n + 1) // 2 for n in range(1, 9)},
    **{("B", n): n * n for n in range(2, 9)},
    **{("C", n): n * n for n in range(2, 9)},
    **{("D", n): n * (n - 1) for n in range(3, 9)},
    ("E", 6): 36, ("E", 7): 63, ("E", 8): 120, ("F", 4): 24, ("G", 2): 6,
}


@pytest.mark.parametrize("kind,rank", sorted(POSITIVE_ROOTS))
def test_positive_root_counts_and_type(kind, rank):
    for iso in ("adjoint", "simply_connected"):
        d = build_simple(kind, rank, iso)
        assert len(positive_roots(d)) == POSITIVE_ROOTS[kind, rank]
        assert len(positive_coroots(d)) == POSITIVE_ROOTS[kind, rank]
        expected = {"D3": "A3", "C2": "B2"}.get(f"{kind}{rank}", f"{kind}{rank}")
        assert d.type_string() == expected


def test_cartan_conventions():
    b4 = build_simple("B", 4)
    assert b4.cartan[2, 3] == -2 and b4.cartan[3, 2] == -1
    assert build_simple("G", 2).cartan.to_lists() == [[2, -1], [-3, 2]]
    c3 = build_simple("C", 3)
    assert c3.cartan[2, 1] == -2


@pytest.mark.parametrize("kind,rank", [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("B", 2), ("B", 3),
                                       ("B", 4), ("C", 3), ("C", 4), ("D", 4), ("F", 4),
                                       ("G", 2), ("E", 6)])
def test_weyl_enumeration_matches_formula(kind, rank):
    d = build_simple(kind, rank)
    w = weyl_group(d, enumerate=True)
    assert len(w.elements) == d.weyl_order


def test_e7_weyl_order_by_regular_orbit():
    d = build_simple("E", 7)
    assert d.weyl_order == 2903040
    assert regular_orbit_size(d) == 2903040


def test_weyl_cap_is_explicit():
    with pytest.raises(EnumerationCapError):
        weyl_group(build_simple("E", 8), enumerate=True)


@pytest.mark.parametrize("d,invariants", [
    (build_simple("A", 3, "adjoint"), [4]),
    (build_simple("B", 3, "adjoint"), [2]),
    (build_simple("C", 4, "adjoint"), [2]),
    (build_simple("D", 4, "adjoint"), [2, 2]),
    (build_simple("D", 6, "adjoint"), [2, 2]),
    (build_simple("D", 5, "adjoint"), [4]),
    (build_simple("E", 6, "adjoint"), [3]),
    (build_simple("E", 7, "adjoint"), [2]),
    (build_simple("E", 8, "adjoint"), []),
    (build_simple("E", 7, "simply_connected"), []),
    (build_simple("D", 6, "simply_connected"), []),
])
def test_fundamental_group(d, invariants):
    q = pi1(d)
    assert q.torsion_invariants() == invariants and q.free_rank == 0
    order = 1
    for x in invariants:
        order *= x
    assert len(pi1_classes(d)) == order


def test_gl_fundamental_group_is_free():
    for n in range(1, 7):
        q = pi1(build_gl(n))
        assert q.free_rank == 1 and q.torsion_invariants() == []
        assert q.coordinates((0,) * (n - 1) + (5,)) in ((5,), (-5,))


@pytest.mark.parametrize("d", [build_simple("B", 3), build_simple("E", 6, "simply_connected"),
                               build_gl(5), product(build_gl(2), build_simple("G", 2)),
                               torus(2)])
def test_fundamental_weights_duality(d):
    omegas = fundamental_weights(d)
    assert len(omegas) == d.num_simple
    for i, om in enumerate(omegas):
        for j in range(d.num_simple):
            assert dot(om, d.coroot(j)) == (1 if i == j else 0)


@pytest.mark.parametrize("d", [build_simple("C", 3), build_simple("D", 4, "simply_connected"),
                               build_gl(4), build_simple("G", 2)])
def test_simple_reflection_properties(d):
    roots = positive_roots(d)
    for i in range(d.num_simple):
        s = np.array(d.reflection_matrix(i).to_lists())
        assert tuple(s @ np.array(d.coroot(i))) == tuple(-x for x in d.coroot(i))
        others = {r for r in roots if r != d.root(i)}
        # contragredient action of an involution on covectors: alpha -> alpha @ s
        moved = {tuple(int(x) for x in np.array(r) @ s) for r in others}
        assert moved == others


def test_invalid_data_rejected():
    with pytest.raises(InvalidRootDatum):
        RootDatum("bad", IntMatrix.from_rows([[1, 0], [0, 1]]),
                  IntMatrix.from_rows([[2, 1], [1, 2]]))
    with pytest.raises(InvalidRootDatum):
        build_simple("E", 5)
    with pytest.raises(InvalidRootDatum):
        build_simple("B", 3, "intermediate")
    with pytest.raises(InvalidRootDatum):
        from_json({"builder": "simple"})


def test_json_round_trip():
    d = product(build_gl(3), build_simple("B", 2, "simply_connected"))
    again = from_json(d.to_json())
    assert again.coroots == d.coroots and again.roots == d.roots
    assert from_json({"builder": "product", "factors": [
        {"builder": "gl", "n": 3}, {"builder": "simple", "type": "B", "rank": 2,
                                    "isogeny": "simply_connected"}]}).cartan == d.cartan


def test_product_and_torus_types():
    d = product(build_simple("A", 2), build_simple("A", 1))
    assert d.type_string() == "A1xA2"
    assert torus(3).num_simple == 0 and torus(3).weyl_order == 1
