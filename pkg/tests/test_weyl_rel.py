from __future__ import annotations

from math import factorial

import numpy as np
import pytest

from levi_slope.parabolic import minimal_admissible
from levi_slope.root_datum import (
    EnumerationCapError,
    build_gl,
    build_simple,
    cartan_components,
    classify_cartan,
    weyl_group,
)
from levi_slope.slope import Parabolic
from levi_slope.verify import simple_catalogue
from levi_slope.weyl_rel import (
    CoxeterType,
    RelativeWeylGroup,
    _classify_coxeter_matrix,
    acts_faithfully_on_quotient,
    canonical_components,
    identify_coxeter_type,
    parse_type_label,
    relative_weyl,
)


def stabilizer_by_enumeration(d, j):
    """Elements of W sending the simple coroots of J onto themselves, found by
    running through the whole Weyl group."""
    w = weyl_group(d, enumerate=True).elements.astype(np.int64)
    cols = [np.array(d.coroot(i), dtype=np.int64) for i in j.indices]
    if not cols:
        return w
    c = np.stack(cols, axis=1)
    images = w @ c  # (|W|, n, |J|)
    target = {tuple(v) for v in c.T}
    keep = [k for k in range(len(w))
            if {tuple(v) for v in images[k].T} == target]
    return w[keep]


def as_set(mats):
    return {np.asarray(m, dtype=np.int64).tobytes() for m in mats}


@pytest.mark.parametrize("d,nodes", [
    (build_simple("A", 3), {1, 3}),
    (build_simple("B", 3), {3}),
    (build_simple("C", 4), {2, 4}),
    (build_simple("D", 4), {1, 3}),
    (build_simple("D", 5), {4, 5}),
    (build_simple("D", 5, "simply_connected"), {1}),
    (build_simple("F", 4), {3}),
    (build_simple("G", 2), {2}),
    (build_gl(4), {1, 3}),
    (build_simple("E", 6), {1, 3, 5, 6}),
])
def test_matches_full_weyl_enumeration(d, nodes):
    j = Parabolic(nodes)
    rw = relative_weyl(d, j)
    oracle = stabilizer_by_enumeration(d, j)
    assert rw.order == len(oracle)
    assert as_set(rw.representatives) == as_set(oracle)


def test_full_levi_gives_trivial_group():
    for d in simple_catalogue(4):
        rw = relative_weyl(d, Parabolic.full(d))
        assert rw.order == 1 and rw.coxeter_type.abstract_label == "1"


def test_borel_gives_whole_weyl_group():
    d = build_simple("B", 3)
    rw = relative_weyl(d, Parabolic())
    assert rw.order == 48 and rw.coxeter_type.canonical == (("B", 3),)


def test_gl6_two_blocks():
    rw = relative_weyl(build_gl(6), Parabolic({1, 2, 4, 5}))
    assert rw.order == 2 and rw.coxeter_type.abstract_label == "A1"


@pytest.mark.parametrize("iso", ["adjoint", "simply_connected"])
def test_e7_example(iso):
    rw = relative_weyl(build_simple("E", 7, iso), Parabolic({2, 5, 7}))
    assert rw.order == 1152 and rw.coxeter_type.abstract_label == "F4"


def test_e6_example():
    rw = relative_weyl(build_simple("E", 6), Parabolic({1, 3, 5, 6}))
    assert rw.order == 12 and rw.coxeter_type.abstract_label == "G2"


@pytest.mark.parametrize("n", range(2, 7))
def test_bn_last_node_is_bc_type(n):
    rw = relative_weyl(build_simple("B", n), Parabolic({n}))
    expected = "A1" if n == 2 else f"B{n - 1}"
    assert rw.coxeter_type.abstract_label == expected
    assert rw.order == 2 ** (n - 1) * factorial(n - 1)
    if n > 2:
        assert rw.coxeter_type.convention_label == f"C{n - 1}"


@pytest.mark.parametrize("m", [2, 3])
def test_odd_d_degree_two_is_bc(m):
    # For D_{2m+1} and the degree of order two the stabiliser has the order of
    # W(B_{2m-1}), not that of a rank m-1 group.
    n = 2 * m + 1
    d = build_simple("D", n)
    mr = minimal_admissible(d, (0,) * (n - 1) + (2,))
    assert set(mr.parabolic.nodes) == {n - 1, n}
    rw = relative_weyl(d, mr.parabolic)
    assert rw.order == 2 ** (n - 2) * factorial(n - 2)
    assert rw.coxeter_type.canonical == ((("B", n - 2),))


def test_d5_degree_two_by_enumeration():
    d = build_simple("D", 5)
    j = Parabolic({4, 5})
    assert len(stabilizer_by_enumeration(d, j)) == 48
    assert relative_weyl(d, j).coxeter_type.abstract_label == "B3"


def test_non_reflection_group_reported():
    d = build_simple("A", 2)
    reps = np.stack([np.eye(2, dtype=np.int16), -np.eye(2, dtype=np.int16)])
    ctype = identify_coxeter_type(RelativeWeylGroup(Parabolic(), reps, 2, None), d)
    assert not ctype.reflection_group
    assert ctype.abstract_label == "non-reflection"


def _coxeter_matrix_from_cartan(c):
    k = c.rows
    m = {0: 2, 1: 3, 2: 4, 3: 6}
    return [[1 if p == q else m[c[p, q] * c[q, p]] for q in range(k)] for p in range(k)]


@pytest.mark.parametrize("d", list(simple_catalogue(8)), ids=lambda d: d.name)
def test_classifier_on_cartan_types(d):
    got = canonical_components(_classify_coxeter_matrix(_coxeter_matrix_from_cartan(d.cartan)))
    want = []
    for comp in cartan_components(d.cartan):
        kind, rank = classify_cartan(d.cartan.submatrix(comp, comp))
        want.append(("B" if kind == "C" else kind, rank))
    assert got == canonical_components(want)


def test_classifier_non_crystallographic():
    i2 = [[1, 5], [5, 1]]
    assert _classify_coxeter_matrix(i2) == [("I2(5)", 2)]
    h3 = [[1, 5, 2], [5, 1, 3], [2, 3, 1]]
    assert _classify_coxeter_matrix(h3) == [("H", 3)]
    h4 = [[1, 5, 2, 2], [5, 1, 3, 2], [2, 3, 1, 3], [2, 2, 3, 1]]
    assert _classify_coxeter_matrix(h4) == [("H", 4)]
    assert CoxeterType((("H", 3),)).order == 120
    assert CoxeterType((("I2(5)", 2),)).order == 10


def test_canonical_labels():
    assert canonical_components([("C", 3)]) == (("B", 3),)
    assert canonical_components([("D", 3)]) == (("A", 3),)
    assert canonical_components([("D", 2)]) == (("A", 1), ("A", 1))
    assert canonical_components([("I2(6)", 2), ("A", 0)]) == (("G", 2),)
    assert canonical_components([("B", 1), ("C", 1)]) == (("A", 1), ("A", 1))
    assert parse_type_label("1") == ()
    assert canonical_components(parse_type_label("A1xC3")) == (("A", 1), ("B", 3))


@pytest.mark.parametrize("d,nodes", [
    (build_gl(6), {1, 2, 4, 5}),
    (build_simple("B", 4), {4}),
    (build_simple("D", 6), {1, 3, 5}),
    (build_simple("E", 6, "simply_connected"), {1, 3, 5, 6}),
])
def test_faithful_on_quotient(d, nodes):
    assert acts_faithfully_on_quotient(d, relative_weyl(d, Parabolic(nodes)))


def test_caps_raise():
    with pytest.raises(EnumerationCapError):
        relative_weyl(build_simple("E", 8), Parabolic(), weyl_cap=10**5)
    with pytest.raises(EnumerationCapError):
        relative_weyl(build_simple("A", 3), Parabolic({1}), orbit_cap=2)


def test_representatives_are_read_only():
    rw = relative_weyl(build_simple("A", 3), Parabolic({2}))
    with pytest.raises(ValueError):
        rw.representatives[0, 0, 0] = 5
