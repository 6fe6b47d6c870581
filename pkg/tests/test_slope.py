from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from levi_slope.root_datum import build_gl, build_simple, product, weyl_group
from levi_slope.slope import (
    Degree,
    Parabolic,
    check_slope_proj,
    check_slope_scalar,
    deeper_reduction_sets,
    g_slope,
    is_admissible,
    leq_pos_cone,
    project_degree,
    slope,
)
from levi_slope.lattice import IntMatrix

DATA = [
    build_simple("A", 3), build_simple("B", 3, "simply_connected"), build_simple("C", 3),
    build_simple("G", 2), build_simple("D", 4), build_gl(5),
    product(build_gl(2), build_simple("B", 2)),
]


@st.composite
def degrees(draw):
    d = draw(st.sampled_from(DATA))
    nodes = draw(st.sets(st.sampled_from(sorted(d.nodes))))
    lift = draw(st.lists(st.integers(-9, 9), min_size=d.rank, max_size=d.rank))
    return d, Degree(Parabolic(nodes), lift)


def test_gl_full_slope_is_average():
    for n in range(1, 7):
        for k in range(-3, 8):
            phi = g_slope(build_gl(n), (0,) * (n - 1) + (k,))
            assert phi == (Fraction(k, n),) * n


def test_gl_two_block_slope():
    d = build_gl(5)
    # blocks of ranks 2 and 3 with degrees 3 and 4
    deg = Degree(Parabolic({1, 3, 4}), (3, 0, 4, 0, 0))
    assert slope(d, deg) == (Fraction(3, 2),) * 2 + (Fraction(4, 3),) * 3


def test_borel_slope_is_lift():
    d = build_simple("B", 3)
    assert slope(d, Degree(Parabolic(), (1, -2, 3))) == (1, -2, 3)


def test_leq_pos_cone_examples():
    d = build_simple("A", 2, "simply_connected")
    assert leq_pos_cone(d, (0, 0), (0, 0))
    assert leq_pos_cone(d, (0, 0), (1, 2))
    assert not leq_pos_cone(d, (0, 0), (1, -1))
    assert not leq_pos_cone(build_gl(2), (0, 0), (1, 0))  # outside the coroot span


def test_project_and_admissible_gl6():
    d = build_gl(6)
    deg = Degree(Parabolic({1, 2, 4, 5}), (1, 0, 0, 1, 0, 0))
    assert project_degree(d, deg, deg.parabolic) == deg
    g_deg = project_degree(d, deg, Parabolic.full(d))
    assert g_deg.same_class(d, Degree(Parabolic.full(d), (0, 0, 0, 0, 0, 2)))
    assert is_admissible(d, deg, Degree(Parabolic.full(d), (0, 0, 0, 0, 0, 2)))
    with pytest.raises(ValueError):
        project_degree(d, deg, Parabolic({1}))


def test_gl2_sub_line_not_admissible():
    d = build_gl(2)
    assert not is_admissible(d, Degree(Parabolic(), (1, -1)), Degree(Parabolic.full(d), (0, 0)))


def test_slope_proj_examples():
    assert check_slope_proj(build_gl(6), Degree(Parabolic({1, 2, 4, 5}), (0, 0, 1, 0, 0, 1)),
                            Parabolic())
    assert check_slope_proj(build_simple("B", 3), Degree(Parabolic({3}), (1, 1, 1)), Parabolic())


@given(degrees())
def test_slope_scalar_lemma(data):
    d, deg = data
    assert check_slope_scalar(d, deg)


@given(degrees(), st.data())
def test_slope_proj_lemma(data, draw):
    d, deg = data
    smaller = draw.draw(st.sets(st.sampled_from(sorted(deg.parabolic.nodes))) if deg.parabolic.nodes
                        else st.just(set()))
    assert check_slope_proj(d, deg, Parabolic(smaller))


@given(degrees(), st.data())
def test_slope_lift_independence(data, draw):
    d, deg = data
    shifted = list(deg.lift)
    for i in deg.parabolic.indices:
        c = draw.draw(st.integers(-5, 5))
        shifted = [a + c * b for a, b in zip(shifted, d.coroot(i))]
    assert slope(d, Degree(deg.parabolic, shifted)) == slope(d, deg)


@given(degrees(), st.data())
def test_slope_order_preservation(data, draw):
    d, x = data
    y = list(x.lift)
    for j in range(d.num_simple):
        if j not in x.parabolic.indices:
            c = draw.draw(st.integers(0, 4))
            y = [a + c * b for a, b in zip(y, d.coroot(j))]
    assert leq_pos_cone(d, slope(d, x), slope(d, Degree(x.parabolic, y)))


@pytest.mark.parametrize("d", [build_simple("A", 2), build_simple("B", 3, "simply_connected"),
                               build_simple("G", 2), build_gl(3)])
def test_g_slope_is_weyl_invariant(d):
    w = weyl_group(d, enumerate=True).elements.astype(np.int64)
    for lift in itertools.product(range(-2, 3), repeat=d.rank):
        phi = g_slope(d, lift)
        den = max(x.denominator for x in phi)
        v = np.array([int(x * den) for x in phi])
        assert (w @ v == v).all()


def test_gl_vector_representation_slope():
    for n in range(1, 7):
        for k in range(0, 2 * n):
            phi = g_slope(build_gl(n), (0,) * (n - 1) + (k,))
            weights = [phi[i] for i in range(n)]  # <e_i^*, phi>
            assert sum(weights) / n == Fraction(k, n)
            assert weights[0] == Fraction(k, n)


def test_deeper_reduction_sets_identity():
    d = build_simple("A", 3)
    j = Parabolic({1, 3})
    assert deeper_reduction_sets(d, IntMatrix.identity(d.rank), j, j) == (j, j)


def test_deeper_reduction_sets_longest_a2():
    d = build_simple("A", 2, "simply_connected")
    w = weyl_group(d, enumerate=True)
    longest = next(g for g in w.elements if (np.array(g) == -np.eye(2)[::-1]).all())
    res = deeper_reduction_sets(d, IntMatrix.from_rows(np.array(longest).tolist()),
                                Parabolic({1}), Parabolic({2}))
    assert res == (Parabolic(), Parabolic())


def test_deeper_reduction_sets_against_coroot_action():
    # independent oracle: w(alpha_j) = alpha_i iff w(coroot_j) = coroot_i
    d = build_simple("A", 3)
    coroots = [np.array(d.coroot(i)) for i in range(3)]
    for g in weyl_group(d, enumerate=True).elements:
        g = np.array(g, dtype=np.int64)
        w = IntMatrix.from_rows(g.tolist())
        for i1 in [{1}, {1, 3}, {2, 3}, {1, 2, 3}]:
            for i2 in [{1, 3}, {2}, {1, 2, 3}]:
                e1 = {i for i in i1 if any((g @ coroots[j - 1] == coroots[i - 1]).all() for j in i2)}
                e2 = {i for i in i2 if any((g @ coroots[i - 1] == coroots[j - 1]).all() for j in i1)}
                assert deeper_reduction_sets(d, w, Parabolic(i1), Parabolic(i2)) == (
                    Parabolic(e1), Parabolic(e2))
