"""Dyadic vs continuum norm comparisons.

Each comparison pits an exact dyadic norm against its continuum counterpart
evaluated on a finite node set, and reports the ratio.  The suites freeze a
seeded collection of such ratios so their envelope can be recorded and
regression-tested; nothing here certifies an equivalence constant, the
ratios are empirical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .fields import (
    GridFunction,
    boundary_lp_norm,
    random_grid,
    refine,
    to_sequence,
)
from .functionals import (
    area_integral,
    carleson_continuum,
    carleson_dyadic,
    nt_max_continuum,
    nt_max_dyadic,
    whitney_sample,
)
from .geometry import GeometryConfig, TreeConfig, test_cube_family

__all__ = [
    "NormComparison",
    "compare_nt_norms",
    "compare_carleson_norms",
    "tent_space_check",
    "nt_equivalence_suite",
    "carleson_equivalence_suite",
    "tent_suite",
    "refinement_ratio",
]

_DEFAULT_GEO = GeometryConfig()

_MIXED_CYCLE = ("uniform", "lognormal", "sparse:8")


def _dist_for_seed(seed: int, spec: str) -> str:
    """"mixed" cycles the value distributions so the suites see both
    root-dominated fields and spiky ones where the functional scale varies
    from leaf to leaf."""
    if spec == "mixed":
        return _MIXED_CYCLE[seed % len(_MIXED_CYCLE)]
    return spec




@dataclass(frozen=True)
class NormComparison:
    continuum_norm: float
    dyadic_norm: float
    ratio: float
    label: str
    degenerate: bool = False


def _compare(cont: float, dyad: float, label: str) -> NormComparison:
    degenerate = dyad == 0.0
    ratio = 0.0 if degenerate else cont / dyad
    return NormComparison(cont, dyad, ratio, label, degenerate)


def compare_nt_norms(
    f: GridFunction,
    p: float,
    q: float,
    geo: GeometryConfig = _DEFAULT_GEO,
) -> NormComparison:
    """||N(W_q f)||_p over the node set vs the exact dyadic ||N_{L_q} f||_p."""
    cont = boundary_lp_norm(nt_max_continuum(f, q, geo), p)
    dyad = boundary_lp_norm(nt_max_dyadic(to_sequence(f, q)), p)
    return _compare(cont, dyad, f"nt p={p} q={q}")


def compare_carleson_norms(
    g: GridFunction,
    p_prime: float,
    q_prime: float,
    geo: GeometryConfig = _DEFAULT_GEO,
    stride: int = 1,
) -> NormComparison:
    """||C(W_q' g)||_p' over the test-cube family vs the dyadic version."""
    family = test_cube_family(g.tree, stride)
    cont = boundary_lp_norm(carleson_continuum(g, 1.0, q_prime, family, geo), p_prime)
    dyad = boundary_lp_norm(carleson_dyadic(to_sequence(g, q_prime, weight="mass")), p_prime)
    return _compare(cont, dyad, f"carleson p'={p_prime} q'={q_prime} stride={stride}")


def tent_space_check(
    g: GridFunction,
    p: float,
    geo: GeometryConfig = _DEFAULT_GEO,
    stride: int = 1,
) -> NormComparison:
    """||C^2(W_2 g)||_p vs the area-integral norm ||A g||_p, for p > 2."""
    if not p > 2:
        raise ValueError(f"tent-space comparison requires p > 2, got {p}")
    family = test_cube_family(g.tree, stride)
    cont = boundary_lp_norm(carleson_continuum(g, 2.0, 2.0, family, geo), p)
    area = boundary_lp_norm(area_integral(g), p)
    return _compare(cont, area, f"tent p={p} stride={stride}")


NT_EXPONENTS: tuple[tuple[float, float], ...] = tuple(
    (p, q) for p in (1.0, 2.0, 3.0) for q in (1.0, 2.0, math.inf)
)
CARLESON_EXPONENTS: tuple[tuple[float, float], ...] = tuple(
    (pp, qp) for pp in (1.0, 2.0, 3.0) for qp in (1.0, 2.0, math.inf)
)


def nt_equivalence_suite(
    seeds=range(50),
    depths=(4, 6),
    n: int = 1,
    m: int = 2,
    exponents=NT_EXPONENTS,
    geo: GeometryConfig = _DEFAULT_GEO,
    spec: str = "mixed",
) -> list[dict]:
    """Frozen comparison suite for the maximal-function equivalence.

    One row per (seed, depth, p, q); node samples are shared across the p
    grid for each q, which keeps the suite cheap without changing any value.
    """
    rows = []
    for depth in depths:
        tree = TreeConfig(n, depth)
        for seed in seeds:
            f = random_grid(seed, tree, m, _dist_for_seed(seed, spec))
            by_q: dict[float, tuple] = {}
            for q in sorted({q for _, q in exponents}):
                samples = whitney_sample(f, q, geo)
                nc = nt_max_continuum(f, q, geo, samples=samples)
                nd = nt_max_dyadic(to_sequence(f, q))
                by_q[q] = (nc, nd)
            for p, q in exponents:
                nc, nd = by_q[q]
                cmp = _compare(
                    boundary_lp_norm(nc, p),
                    boundary_lp_norm(nd, p),
                    f"nt p={p} q={q}",
                )
                rows.append(
                    {
                        "suite": "nt",
                        "seed": seed,
                        "n": n,
                        "depth": depth,
                        "m": m,
                        "p": p,
                        "q": q,
                        "continuum": cmp.continuum_norm,
                        "dyadic": cmp.dyadic_norm,
                        "ratio": cmp.ratio,
                    }
                )
    return rows


def carleson_equivalence_suite(
    seeds=range(50),
    depths=(4, 6),
    n: int = 1,
    m: int = 2,
    exponents=CARLESON_EXPONENTS,
    geo: GeometryConfig = _DEFAULT_GEO,
    stride: int = 2,
    spec: str = "mixed",
) -> list[dict]:
    """Frozen comparison suite for the Carleson-functional equivalence."""
    rows = []
    for depth in depths:
        tree = TreeConfig(n, depth)
        family = test_cube_family(tree, stride)
        for seed in seeds:
            g = random_grid(seed, tree, m, _dist_for_seed(seed, spec))
            by_q: dict[float, tuple] = {}
            for qp in sorted({qp for _, qp in exponents}):
                samples = whitney_sample(g, qp, geo)
                cc = carleson_continuum(g, 1.0, qp, family, geo, samples=samples)
                cd = carleson_dyadic(to_sequence(g, qp, weight="mass"))
                by_q[qp] = (cc, cd)
            for pp, qp in exponents:
                cc, cd = by_q[qp]
                cmp = _compare(
                    boundary_lp_norm(cc, pp),
                    boundary_lp_norm(cd, pp),
                    f"carleson p'={pp} q'={qp}",
                )
                rows.append(
                    {
                        "suite": "carleson",
                        "seed": seed,
                        "n": n,
                        "depth": depth,
                        "m": m,
                        "stride": stride,
                        "p_prime": pp,
                        "q_prime": qp,
                        "continuum": cmp.continuum_norm,
                        "dyadic": cmp.dyadic_norm,
                        "ratio": cmp.ratio,
                    }
                )
    return rows


def tent_suite(
    seeds=range(20),
    depths=(4, 6),
    n: int = 1,
    m: int = 2,
    p: float = 4.0,
    geo: GeometryConfig = _DEFAULT_GEO,
    stride: int = 2,
    spec: str = "mixed",
) -> list[dict]:
    """Frozen suite comparing the square-function and Carleson tent norms."""
    rows = []
    for depth in depths:
        tree = TreeConfig(n, depth)
        for seed in seeds:
            g = random_grid(seed, tree, m, _dist_for_seed(seed, spec))
            cmp = tent_space_check(g, p, geo, stride)
            rows.append(
                {
                    "suite": "tent",
                    "seed": seed,
                    "n": n,
                    "depth": depth,
                    "m": m,
                    "stride": stride,
                    "p": p,
                    "carleson": cmp.continuum_norm,
                    "area": cmp.dyadic_norm,
                    "ratio": cmp.ratio,
                }
            )
    return rows


def refinement_ratio(
    seed: int,
    depth: int,
    kind: str,
    p: float,
    q: float,
    n: int = 1,
    m: int = 2,
    geo: GeometryConfig = _DEFAULT_GEO,
    stride: int = 2,
    spec: str = "mixed",
) -> tuple[float, float]:
    """Comparison ratio at the base resolution and at the refined one.

    kind="nt" doubles m; kind="carleson" halves the stride (and the ratio
    can only move up, the refined family is a superset).
    """
    tree = TreeConfig(n, depth)
    if kind == "nt":
        f = random_grid(seed, tree, m, _dist_for_seed(seed, spec))
        base = compare_nt_norms(f, p, q, geo).ratio
        fine = compare_nt_norms(refine(f, 2), p, q, geo).ratio
        return base, fine
    if kind == "carleson":
        g = random_grid(seed, tree, m, _dist_for_seed(seed, spec))
        base = compare_carleson_norms(g, p, q, geo, stride=stride).ratio
        fine = compare_carleson_norms(g, p, q, geo, stride=max(1, stride // 2)).ratio
        return base, fine
    raise ValueError(f"kind must be 'nt' or 'carleson', got {kind!r}")
