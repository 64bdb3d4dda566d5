"""Pairing bound, extremizer constructions, and the stopping forest."""

import math

import numpy as np
import pytest

import naive
from carleson.duality import (
    UPPER_BOUND_CONSTANT,
    check_pairing_upper,
    extremal_f_for_carleson,
    extremal_g_for_ntmax,
    extremal_g_for_ntmax_p1,
    multiplier_norm_estimate,
    pairing,
    pairing_grid,
    stopping_forest,
)
from carleson.fields import (
    BoundaryFunction,
    DyadicField,
    GridFunction,
    boundary_lp_norm,
    conjugate,
    grid_from_field,
    random_field,
    random_grid,
)
from carleson.functionals import carleson_dyadic, maximal_dyadic, nt_max_dyadic
from carleson.geometry import TreeConfig, tree_tables

T11 = TreeConfig(1, 1)
A132 = DyadicField(T11, [1.0, 3.0, 2.0])

TREES = [TreeConfig(1, 2), TreeConfig(1, 4), TreeConfig(2, 2)]
SPECS = ["uniform", "lognormal", "sparse:6"]


def _pairs(count=8):
    for tree in TREES:
        for seed in range(count):
            spec = SPECS[seed % len(SPECS)]
            yield (
                random_field(seed, tree, spec),
                random_field(seed + 1000, tree, spec),
            )


def test_pairing_basics():
    b = DyadicField(T11, [0.5, 1.0, 2.0])
    assert pairing(A132, b) == pytest.approx(0.5 + 3.0 + 4.0)
    with pytest.raises(ValueError):
        pairing(A132, DyadicField(TreeConfig(1, 2), np.ones(7)))


def test_pairing_grid():
    tree = TreeConfig(1, 2)
    f = random_grid(0, tree, 2, "uniform")
    g = random_grid(1, tree, 2, "uniform")
    v = pairing_grid(f, g)
    want = naive.box_integral(1, 2, 2, f.values * g.values)
    assert v == pytest.approx(want, rel=1e-13)
    # r > 1 takes the r-th power inside
    v2 = pairing_grid(f, g, r=2.0)
    want2 = math.sqrt(naive.box_integral(1, 2, 2, (f.values * g.values) ** 2))
    assert v2 == pytest.approx(want2, rel=1e-13)
    with pytest.raises(ValueError):
        pairing_grid(f, random_grid(0, tree, 3, "uniform"))
    with pytest.raises(ValueError):
        pairing_grid(f, g, r=math.inf)


def test_upper_bound_suite():
    for a, b in _pairs():
        for p in (1.0, 1.5, 2.0, 3.0):
            rep = check_pairing_upper(a, b, p)
            assert rep.upper_bound_ok
            assert rep.pairing <= UPPER_BOUND_CONSTANT * rep.nt_norm * rep.carleson_norm * (1 + 1e-12)
    with pytest.raises(ValueError):
        check_pairing_upper(A132, A132, math.inf)
    with pytest.raises(ValueError):
        check_pairing_upper(A132, A132, 0.5)


def test_extremal_f_infty_worked():
    b = DyadicField(T11, [0.0, 1.0, 0.0])
    a, rep = extremal_f_for_carleson(b, math.inf)
    assert np.array_equal(a.values, [0.0, 2.0, 0.0])
    assert rep.nt_norm == pytest.approx(1.0, rel=1e-15)
    assert rep.pairing == pytest.approx(2.0, rel=1e-15)
    assert rep.carleson_norm == pytest.approx(2.0, rel=1e-15)
    assert rep.construction == "carleson-extremal"


def test_extremal_f_infty_suite():
    for _, b in _pairs(6):
        a, rep = extremal_f_for_carleson(b, math.inf)
        if rep.degenerate:
            assert not b.values.any()
            continue
        assert rep.nt_norm == pytest.approx(1.0, rel=1e-12)
        assert rep.pairing == pytest.approx(rep.carleson_norm, rel=1e-12)


def test_extremal_f_finite_worked():
    b = DyadicField(T11, [0.0, 1.0, 0.0])
    a, rep = extremal_f_for_carleson(b, 2.0)
    assert np.allclose(a.values, [1.5, 2.0, 1.0], rtol=1e-15)
    assert rep.pairing == pytest.approx(2.0, rel=1e-15)
    assert rep.nt_norm == pytest.approx(math.sqrt(3.125), rel=1e-14)
    assert rep.carleson_norm == pytest.approx(math.sqrt(2.5), rel=1e-14)
    assert rep.ratio == pytest.approx(2.0 / math.sqrt(3.125 * 2.5), rel=1e-13)


@pytest.mark.parametrize("p_prime", [1.5, 2.0, 4.0])
def test_extremal_f_finite_identity(p_prime):
    # N a equals (M_D(C b))^(p'-1) bit for bit, and the trapping inequality
    trap = (2.0**p_prime - 1.0) / (1.0 - 2.0 ** (1.0 - p_prime))
    for _, b in _pairs(5):
        a, rep = extremal_f_for_carleson(b, p_prime)
        if rep.degenerate:
            continue
        lhs = nt_max_dyadic(a).values
        rhs = maximal_dyadic(carleson_dyadic(b)).values ** (p_prime - 1.0)
        assert np.array_equal(lhs, rhs)
        assert rep.carleson_norm**p_prime <= trap * rep.pairing * (1 + 1e-12)


def test_extremal_f_validation():
    with pytest.raises(ValueError):
        extremal_f_for_carleson(A132, 1.0)
    zero = DyadicField(T11, np.zeros(3))
    _, rep = extremal_f_for_carleson(zero, 2.0)
    assert rep.degenerate


def test_extremal_g_worked():
    b, rep = extremal_g_for_ntmax(A132, 2.0)
    assert np.allclose(b.values, [1.0, 1.5, 0.5], rtol=1e-15)
    assert rep.pairing == pytest.approx(6.5, rel=1e-15)
    assert rep.carleson_norm == pytest.approx(3.0, rel=1e-14)
    assert rep.nt_norm == pytest.approx(math.sqrt(6.5), rel=1e-14)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_extremal_g_guarantees(p):
    for a, _ in _pairs(5):
        b, rep = extremal_g_for_ntmax(a, p)
        if not a.values.any():
            continue
        # pairing controls the maximal norm from below
        assert rep.pairing >= rep.nt_norm**p / (2.0**p - 1.0) * (1 - 1e-12)
        # pointwise domination of C b by the maximal function of (N a)^(p-1)
        cb = carleson_dyadic(b).values
        na = nt_max_dyadic(a)
        m = maximal_dyadic(BoundaryFunction(a.tree, na.values ** (p - 1.0))).values
        assert np.all(cb <= m / (1.0 - 2.0 ** (1.0 - p)) + 1e-12 * np.maximum(m, 1.0))


def test_extremal_g_validation():
    with pytest.raises(ValueError):
        extremal_g_for_ntmax(A132, 1.0)
    with pytest.raises(ValueError):
        extremal_g_for_ntmax(A132, math.inf)


def test_stopping_forest_worked():
    forest = stopping_forest(A132)
    assert forest.generations == ((0,), (1,))
    assert forest.children == {0: (1,), 1: ()}
    assert forest.remainder[0] == pytest.approx(0.5)
    assert forest.remainder[1] == pytest.approx(0.5)
    assert forest.dense == {0, 1}
    assert forest.selected == (0, 1)
    assert forest.sparse == frozenset()
    with pytest.raises(ValueError):
        stopping_forest(A132, threshold=0.0)
    with pytest.raises(ValueError):
        stopping_forest(A132, threshold=1.0)


def test_stopping_forest_invariants():
    for a, _ in _pairs(4):
        forest = stopping_forest(a)
        t = tree_tables(a.tree)
        seen = set()
        for q in forest.selected:
            assert q not in seen
            seen.add(q)
            kids = forest.children[q]
            # measure splits into remainder plus selected children
            assert forest.remainder[q] + t.volume[list(kids)].sum() == pytest.approx(
                float(t.volume[q]), rel=1e-12
            )
            for r in kids:
                # child strictly inside, value more than doubled
                assert naive.contains(
                    int(t.level[q]),
                    tuple(int(k) for k in t.index[q]),
                    int(t.level[r]),
                    tuple(int(k) for k in t.index[r]),
                )
                assert r != q
                assert a.values[r] > 2.0 * a.values[q]
        assert forest.dense <= set(forest.selected)


def test_extremal_p1_worked():
    b, rep = extremal_g_for_ntmax_p1(A132)
    assert np.allclose(b.values, [1.0, 0.5, 0.0], rtol=1e-15)
    assert rep.pairing == pytest.approx(2.5, rel=1e-15)
    assert rep.nt_norm == pytest.approx(2.5, rel=1e-15)
    assert rep.carleson_norm == pytest.approx(1.5, rel=1e-15)
    assert rep.construction == "stopping-forest"


def test_extremal_p1_guarantees():
    for a, _ in _pairs(6):
        b, rep = extremal_g_for_ntmax_p1(a)
        if rep.degenerate:
            continue
        assert rep.carleson_norm <= 8.0 * (1 + 1e-12)
        assert rep.pairing >= 0.25 * rep.nt_norm * (1 - 1e-12)


def test_extremal_p1_zero():
    zero = DyadicField(T11, np.zeros(3))
    _, rep = extremal_g_for_ntmax_p1(zero)
    assert rep.degenerate


def test_multiplier_report():
    tree = TreeConfig(1, 2)
    g = random_grid(3, tree, 2, "lognormal")
    rep = multiplier_norm_estimate(g, 2.0, 2.0, 2.0, budget=6, stride=2)
    assert rep.certified_upper_ok
    assert len(rep.candidate_values) == 6
    assert rep.lower_estimate == max(rep.candidate_values)
    assert rep.modified_carleson is not None
    assert rep.certified_constant == pytest.approx(math.sqrt(2.0))
    rep2 = multiplier_norm_estimate(g, 4.0, 4.0, 2.0, budget=3, stride=2)
    assert rep2.modified_carleson is None
    assert rep2.certified_upper_ok
    with pytest.raises(ValueError):
        multiplier_norm_estimate(g, 2.0, 2.0, 2.0, budget=0)
    zero = GridFunction(tree, 2, np.zeros_like(g.values))
    repz = multiplier_norm_estimate(zero, 2.0, 2.0, 2.0, budget=2, stride=2)
    assert repz.degenerate and repz.certified_upper_ok
