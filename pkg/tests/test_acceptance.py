"""Acceptance checklist, one test per numbered criterion.

Run `pytest -v tests/test_acceptance.py` to get a one-line verdict per
criterion; each body also prints its own PASS/FAIL line so the log of a
full run reads as a checklist.  Tolerances are part of the contract and
are stated inline, next to the assertion they guard.
"""

import json
import math
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import pytest

from carleson.continuum import (
    carleson_equivalence_suite,
    nt_equivalence_suite,
    refinement_ratio,
    tent_suite,
)
from carleson.duality import (
    check_pairing_upper,
    extremal_f_for_carleson,
    extremal_g_for_ntmax,
    extremal_g_for_ntmax_p1,
    pairing,
)
from carleson.fields import (
    BoundaryFunction,
    DyadicField,
    boundary_lp_norm,
    conjugate,
    random_field,
    random_grid,
)
from carleson.functionals import (
    carleson_dyadic,
    carleson_r_dyadic,
    largest_cover_mean,
    maximal_dyadic,
    nt_max_dyadic,
)
from carleson.geometry import Box, TreeConfig
from carleson.oracle import (
    OracleConfig,
    dual_norm_wrt_cball,
    dual_norm_wrt_ntball,
    exhaustive_dual_norm,
    oracle_vs_extremizer,
)

DATA_DIR = Path(__file__).parent / "data"

SUITE_TREES = (TreeConfig(1, 4), TreeConfig(1, 6), TreeConfig(2, 3))
SUITE_SEEDS = range(200)
P_GRID = (1.0, 1.5, 2.0, 3.0)
REL = 1e-12

T11 = TreeConfig(1, 1)


@contextmanager
def _verdict(label):
    try:
        yield
    except BaseException:
        print(f"{label}: FAIL")
        raise
    print(f"{label}: PASS")


def _dist(seed: int) -> str:
    return ("uniform", "lognormal", "sparse:8")[seed % 3]


def _suite_pair(tree: TreeConfig, seed: int):
    a = random_field(seed, tree, _dist(seed))
    b = random_field(seed + 10_000_019, tree, _dist(seed))
    return a, b


def test_criterion_01_pairing_upper_bound():
    with _verdict("criterion 01 pairing upper bound"):
        t0 = time.monotonic()
        checked = 0
        for tree in SUITE_TREES:
            for seed in SUITE_SEEDS:
                a, b = _suite_pair(tree, seed)
                pair = pairing(a, b)
                na = nt_max_dyadic(a)
                cb = carleson_dyadic(b)
                for p in P_GRID:
                    bound = 2.0 * boundary_lp_norm(na, p) * boundary_lp_norm(cb, conjugate(p))
                    assert pair <= bound * (1 + REL)
                    checked += 1
        elapsed = time.monotonic() - t0
        assert checked == len(SUITE_TREES) * len(SUITE_SEEDS) * len(P_GRID)
        assert elapsed < 30.0, f"suite took {elapsed:.1f}s"


def test_criterion_02_extremizer_pprime_inf():
    with _verdict("criterion 02 p'=inf extremizer identities"):
        for tree in SUITE_TREES:
            for seed in SUITE_SEEDS:
                _, b = _suite_pair(tree, seed)
                _, rep = extremal_f_for_carleson(b, math.inf)
                assert not rep.degenerate
                assert abs(rep.nt_norm - 1.0) <= REL
                assert abs(rep.pairing - rep.carleson_norm) <= REL * max(1.0, rep.carleson_norm)


def test_criterion_03_extremizer_pprime_finite():
    with _verdict("criterion 03 finite p' extremizer"):
        for tree in SUITE_TREES:
            for seed in SUITE_SEEDS:
                _, b = _suite_pair(tree, seed)
                cb = carleson_dyadic(b)
                for p_prime in (1.5, 2.0, 4.0):
                    a_ext, rep = extremal_f_for_carleson(b, p_prime)
                    assert not rep.degenerate
                    lhs = nt_max_dyadic(a_ext).values
                    rhs = maximal_dyadic(cb).values ** (p_prime - 1.0)
                    assert np.array_equal(lhs, rhs)  # exact, no tolerance
                    trap = (2.0**p_prime - 1.0) / (1.0 - 2.0 ** (1.0 - p_prime))
                    assert rep.carleson_norm**p_prime <= trap * rep.pairing * (1 + REL)


def test_criterion_04_levelset_construction():
    with _verdict("criterion 04 level-set construction"):
        for tree in SUITE_TREES:
            for seed in SUITE_SEEDS:
                a, _ = _suite_pair(tree, seed)
                na = nt_max_dyadic(a)
                for p in (1.5, 2.0, 3.0):
                    b_ext, rep = extremal_g_for_ntmax(a, p)
                    assert not rep.degenerate
                    lower = rep.nt_norm**p / (2.0**p - 1.0)
                    assert rep.pairing >= lower * (1 - REL)
                    cap = (1.0 - 2.0 ** (1.0 - p)) ** -1 * maximal_dyadic(
                        BoundaryFunction(tree, na.values ** (p - 1.0))
                    ).values
                    cyb = carleson_dyadic(b_ext).values
                    assert np.all(cyb <= cap * (1 + REL))
        # worked example, hand enumerated
        a = DyadicField(T11, [1.0, 3.0, 2.0])
        b_ext, rep = extremal_g_for_ntmax(a, 2.0)
        assert np.allclose(b_ext.values, [1.0, 1.5, 0.5], rtol=REL, atol=0)
        assert rep.pairing == pytest.approx(6.5, rel=REL)
        assert boundary_lp_norm(carleson_dyadic(b_ext), 2.0) == pytest.approx(3.0, rel=REL)


def test_criterion_05_stopping_forest():
    with _verdict("criterion 05 stopping forest"):
        for tree in SUITE_TREES:
            for seed in SUITE_SEEDS:
                a, _ = _suite_pair(tree, seed)
                _, rep = extremal_g_for_ntmax_p1(a)
                assert not rep.degenerate
                assert rep.carleson_norm <= 8.0 * (1 + REL)
                assert rep.pairing >= 0.25 * rep.nt_norm * (1 - REL)
        a = DyadicField(T11, [1.0, 3.0, 2.0])
        _, rep = extremal_g_for_ntmax_p1(a)
        assert rep.pairing == pytest.approx(2.5, rel=REL)
        assert rep.nt_norm == pytest.approx(2.5, rel=REL)


def test_criterion_06_oracle_agreement():
    with _verdict("criterion 06 oracle agreement"):
        assert dual_norm_wrt_ntball(DyadicField(T11, [0.0, 1.0, 0.0]), 1.0) == pytest.approx(2.0, rel=1e-6)
        assert dual_norm_wrt_ntball(DyadicField(T11, [1.0, 0.0, 0.0]), 2.0) == pytest.approx(1.0, rel=1e-6)
        assert dual_norm_wrt_cball(DyadicField(T11, [0.0, 1.0, 0.0]), math.inf) == pytest.approx(0.5, rel=1e-6)

        cfg = OracleConfig(starts=24)
        shapes = (TreeConfig(1, 1), TreeConfig(1, 2), TreeConfig(2, 1), TreeConfig(2, 2))
        combos = (
            ("ntball", 1.0), ("ntball", 2.0), ("ntball", 1.5),
            ("cball", 2.0), ("cball", math.inf), ("cball", 3.0),
        )
        for seed in range(100):
            tree = shapes[seed % len(shapes)]
            field = random_field(seed, tree, ("uniform", "lognormal", "sparse:3")[seed % 3])
            direction, exponent = combos[seed % len(combos)]
            cmp = oracle_vs_extremizer(field, exponent, direction, cfg)
            assert not cmp.degenerate
            assert cmp.oracle_value >= cmp.extremizer_value * (1 - 1e-9)

        small = (TreeConfig(1, 1), TreeConfig(1, 2), TreeConfig(2, 1))
        certs = (("ntball", 1.0), ("ntball", 2.0), ("cball", 2.0), ("cball", math.inf))
        k = 0
        for shape in small:
            for i in range(8):
                field = random_field(200 + k, shape, ("uniform", "lognormal")[i % 2])
                direction, exponent = certs[k % len(certs)]
                res = exhaustive_dual_norm(field, exponent, direction)
                if direction == "ntball":
                    opt = dual_norm_wrt_ntball(field, exponent, cfg)
                else:
                    opt = dual_norm_wrt_cball(field, exponent, cfg)
                assert res.certified
                assert opt <= res.upper * (1 + 1e-3)
                assert opt >= res.lower * (1 - 1e-3)
                k += 1
        assert k == 24


def test_criterion_07_weak_type():
    with _verdict("criterion 07 weak type (1,1)"):
        for tree in (TreeConfig(1, 4), TreeConfig(2, 2)):
            leaves = 2 ** (tree.n * tree.depth)
            leaf_vol = 2.0 ** -(tree.n * tree.depth)
            for k in range(50):
                rng = np.random.default_rng(700 + k)
                vals = rng.lognormal(0.0, 1.5, leaves) if k % 2 else rng.random(leaves)
                h = BoundaryFunction(tree, vals)
                m_vals = maximal_dyadic(h).values
                l1 = boundary_lp_norm(h, 1.0)
                for lam in rng.uniform(0.0, m_vals.max(), 20):
                    measure = leaf_vol * np.count_nonzero(m_vals > lam)
                    assert lam * measure <= l1 * (1 + REL)


def test_criterion_08_r_reduction():
    with _verdict("criterion 08 r-reduction identity"):
        grids = ((1, 2, 2), (1, 3, 2), (2, 2, 2))
        for r, q_tilde in ((1.0, 1.0), (2.0, 2.0), (2.0, 4.0), (2.0, math.inf)):
            for n, depth, m in grids:
                for seed in range(3):
                    g = random_grid(seed, TreeConfig(n, depth), m, ("uniform", "lognormal", "sparse:5")[seed % 3])
                    direct = carleson_r_dyadic(g, r, q_tilde).values
                    reduced = carleson_r_dyadic(g.power(r), 1.0, q_tilde / r).values ** (1.0 / r)
                    assert np.allclose(direct, reduced, rtol=REL, atol=0)


def _envelope(rows, key_of):
    out = {}
    for row in rows:
        key = key_of(row)
        e = out.setdefault(key, {"min": math.inf, "max": -math.inf})
        e["min"] = min(e["min"], row["ratio"])
        e["max"] = max(e["max"], row["ratio"])
    return out


def _assert_envelopes_match(frozen, fresh):
    assert set(frozen) == set(fresh)
    for key, e in frozen.items():
        assert fresh[key]["min"] == pytest.approx(e["min"], rel=REL)
        assert fresh[key]["max"] == pytest.approx(e["max"], rel=REL)


def test_criterion_09_equivalence_envelopes():
    with _verdict("criterion 09 equivalence envelopes"):
        doc = json.loads((DATA_DIR / "equivalence_envelope.json").read_text())
        ncfg, ccfg = doc["nt_config"], doc["carleson_config"]
        nt_rows = nt_equivalence_suite(
            seeds=range(ncfg["seeds"]), depths=tuple(ncfg["depths"]),
            n=ncfg["n"], m=ncfg["m"], spec=ncfg["spec"],
        )
        ca_rows = carleson_equivalence_suite(
            seeds=range(ccfg["seeds"]), depths=tuple(ccfg["depths"]),
            n=ccfg["n"], m=ccfg["m"], stride=ccfg["stride"], spec=ccfg["spec"],
        )
        _assert_envelopes_match(
            doc["nt"],
            _envelope(nt_rows, lambda r: f"depth={r['depth']} p={r['p']:g} q={r['q']:g}"),
        )
        _assert_envelopes_match(
            doc["carleson"],
            _envelope(ca_rows, lambda r: f"depth={r['depth']} pp={r['p_prime']:g} qp={r['q_prime']:g}"),
        )
        # refinement moves any single ratio by less than 20 percent
        for seed in range(6):
            for kind in ("nt", "carleson"):
                base, fine = refinement_ratio(seed, 4, kind, 2.0, 2.0, stride=2)
                assert base > 0
                assert abs(fine - base) < 0.20 * base


def test_criterion_10_cover_mean():
    with _verdict("criterion 10 cover mean lower bound"):
        rng = np.random.default_rng(1010)
        trees = (TreeConfig(1, 2), TreeConfig(1, 3))
        for trial in range(1000):
            tree = trees[trial % 2]
            g = random_grid(trial, tree, 2, ("uniform", "lognormal", "sparse:4")[trial % 3])
            t_min = 2.0 ** -(tree.depth + 1)
            t0 = rng.uniform(t_min, 0.4)
            t1 = t0 + rng.uniform(0.2, 0.5)
            base = Box(t0, t1, (0.0,), (1.0,))
            if trial % 2:
                cuts = np.sort(rng.uniform(t0, t1, rng.integers(1, 4)))
                edges = [t0, *cuts, t1]
                cover = [
                    Box(lo, hi + rng.uniform(0.0, 0.05), (0.0,), (1.0,))
                    for lo, hi in zip(edges, edges[1:])
                ]
            else:
                cuts = np.sort(rng.uniform(0.1, 0.9, rng.integers(1, 4)))
                edges = [0.0, *cuts, 1.0]
                cover = [Box(t0, t1, (lo,), (hi,)) for lo, hi in zip(edges, edges[1:])]
            assert largest_cover_mean(g, base, cover).satisfied


def test_criterion_11_tent_envelope():
    with _verdict("criterion 11 tent envelope"):
        doc = json.loads((DATA_DIR / "tent_envelope.json").read_text())
        tcfg = doc["tent_config"]
        rows = tent_suite(
            seeds=range(tcfg["seeds"]), depths=tuple(tcfg["depths"]),
            n=tcfg["n"], m=tcfg["m"], p=tcfg["p"], stride=tcfg["stride"], spec=tcfg["spec"],
        )
        _assert_envelopes_match(
            doc["tent"],
            _envelope(rows, lambda r: f"depth={r['depth']} p={r['p']:g}"),
        )
