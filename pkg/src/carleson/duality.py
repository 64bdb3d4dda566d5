"""Constructive duality between maximal and Carleson norms.

The pairing sum_Q a_Q b_Q of two fields is controlled by
2 * ||N a||_p * ||C b||_p' (upper bound with an explicit constant), and the
constructions here produce near-extremal partners witnessing the reverse
direction: a maximal-side field built from cube averages of C b, a
Carleson-side field built from level sets of N a, and a stopping-time
forest that handles p = 1 with the pair of exact guarantees
||C b||_inf <= 8 and pairing >= ||N a||_1 / 4.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .fields import (
    BoundaryFunction,
    DyadicField,
    GridFunction,
    boundary_lp_norm,
    conjugate,
    grid_from_field,
    to_sequence,
)
from .functionals import (
    carleson_dyadic,
    carleson_r_dyadic,
    cube_averages,
    modified_carleson_norm,
    nt_max_continuum,
    nt_max_dyadic,
    subtree_sums,
)
from .geometry import GeometryConfig, TreeConfig, test_cube_family, tree_tables

__all__ = [
    "PairingReport",
    "StoppingForest",
    "MultiplierReport",
    "pairing",
    "pairing_grid",
    "check_pairing_upper",
    "extremal_f_for_carleson",
    "extremal_g_for_ntmax",
    "stopping_forest",
    "extremal_g_for_ntmax_p1",
    "multiplier_norm_estimate",
]

UPPER_BOUND_CONSTANT = 2.0


@dataclass(frozen=True)
class PairingReport:
    """Pairing value with the two dual norms it is squeezed between."""

    pairing: float
    nt_norm: float
    carleson_norm: float
    ratio: float
    p: float
    p_prime: float
    construction: str = ""
    degenerate: bool = False

    @property
    def upper_bound_ok(self) -> bool:
        bound = UPPER_BOUND_CONSTANT * self.nt_norm * self.carleson_norm
        return self.pairing <= bound * (1 + 1e-12) or self.degenerate


def _check_same_tree(x, y) -> None:
    if x.tree != y.tree:
        raise ValueError(f"tree mismatch: {x.tree} vs {y.tree}")


def pairing(a: DyadicField, b: DyadicField) -> float:
    """sum_Q a_Q b_Q in flat tree order."""
    _check_same_tree(a, b)
    return float(np.dot(a.values, b.values))


def pairing_grid(f: GridFunction, g: GridFunction, r: float = 1.0) -> float:
    """(iint (f g)^r)^(1/r) over the common data domain, exact per cell."""
    _check_same_tree(f, g)
    if f.m != g.m:
        raise ValueError(f"grid refinement mismatch: {f.m} vs {g.m}")
    if not 1 <= r or math.isinf(r):
        raise ValueError(f"r must satisfy 1 <= r < inf, got {r}")
    from .fields import cell_tables

    vol = cell_tables(f).vol
    prod = (f.values.reshape(-1) * g.values.reshape(-1)) ** r
    return float(np.dot(prod, vol) ** (1.0 / r))


def _report(a: DyadicField, b: DyadicField, p: float, construction: str) -> PairingReport:
    pair = pairing(a, b)
    p_prime = conjugate(p)
    nt = boundary_lp_norm(nt_max_dyadic(a), p)
    car = boundary_lp_norm(carleson_dyadic(b), p_prime)
    denom = nt * car
    degenerate = denom == 0.0
    ratio = 0.0 if degenerate else pair / denom
    return PairingReport(
        pairing=pair,
        nt_norm=nt,
        carleson_norm=car,
        ratio=ratio,
        p=p,
        p_prime=p_prime,
        construction=construction,
        degenerate=degenerate,
    )


def check_pairing_upper(a: DyadicField, b: DyadicField, p: float) -> PairingReport:
    """Report the pairing against the bound 2 ||N a||_p ||C b||_p'."""
    if p < 1 or math.isinf(p):
        raise ValueError(f"p must satisfy 1 <= p < inf, got {p}")
    return _report(a, b, p, construction="random-pair")


def _descendant_mask(tree: TreeConfig, i: int) -> np.ndarray:
    t = tree_tables(tree)
    j = int(t.level[i])
    return t.ancestor_at_level(j) == i


def extremal_f_for_carleson(b: DyadicField, p_prime: float) -> tuple[DyadicField, PairingReport]:
    """Maximal-side partner witnessing the Carleson norm of b.

    p' = inf: a charges 1/|Q*| on the subtree of a cube attaining
    ||C b||_inf, so ||N a||_1 = 1 and the pairing equals ||C b||_inf.
    1 < p' < inf: a_R = (mean_R C b)^(p'-1), which makes N a equal to
    (M (C b))^(p'-1) pointwise and traps ||C b||_p'^p' within an explicit
    constant times the pairing.
    """
    if p_prime <= 1:
        raise ValueError(f"p_prime must satisfy 1 < p_prime <= inf, got {p_prime}")
    tree = b.tree
    p = conjugate(p_prime)
    if not b.values.any():
        a = DyadicField(tree, np.zeros(tree.num_cubes))
        rep = _report(a, b, p, construction="carleson-extremal")
        return a, replace(rep, degenerate=True)

    if math.isinf(p_prime):
        t = tree_tables(tree)
        avg = subtree_sums(tree, b.values) / t.volume
        star = int(np.argmax(avg))
        vals = np.where(_descendant_mask(tree, star), 1.0 / t.volume[star], 0.0)
        a = DyadicField(tree, vals)
        return a, _report(a, b, p, construction="carleson-extremal")

    cb = carleson_dyadic(b)
    hats = cube_averages(cb)
    a = DyadicField(tree, hats ** (p_prime - 1.0))
    return a, _report(a, b, p, construction="carleson-extremal")


def _frexp_bounds(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """k1(x) = max{k: 2^k < x} and k0(x) = min{k: 2^k >= x}, elementwise.

    Only valid where x > 0; callers mask zeros.  Uses exact mantissa
    comparisons, so powers of two land on the right side of both fences.
    """
    mant, exp = np.frexp(x)  # x = mant * 2^exp, mant in [0.5, 1)
    k1 = np.where(mant == 0.5, exp - 2, exp - 1)
    k0 = np.where(mant == 0.5, exp - 1, exp)
    return k1.astype(float), k0.astype(float)


def extremal_g_for_ntmax(a: DyadicField, p: float) -> tuple[DyadicField, PairingReport]:
    """Carleson-side partner built from the level sets of N a (1 < p < inf).

    Q sits in generation k when a_Q > 2^k but every strict ancestor stays
    <= 2^k; summing the geometric series 2^(k(p-1)) over that k-range in
    closed form gives b_Q / |Q|.
    """
    if not 1 < p or math.isinf(p):
        raise ValueError(f"p must satisfy 1 < p < inf, got {p}")
    tree = a.tree
    t = tree_tables(tree)
    vals = a.values
    # strict-ancestor running max, top-down
    anc_max = np.zeros(tree.num_cubes)
    for j in range(1, tree.depth + 1):
        sl = t.level_slice(j)
        par = t.parent[sl]
        anc_max[sl] = np.maximum(anc_max[par], vals[par])

    s = p - 1.0
    ratio = 2.0**s
    b_vals = np.zeros(tree.num_cubes)
    pos = vals > 0
    if pos.any():
        k1, _ = _frexp_bounds(vals[pos])
        upper = np.exp2((k1 + 1) * s)
        amax = anc_max[pos]
        lower = np.zeros_like(upper)
        has_floor = amax > 0
        if has_floor.any():
            _, k0 = _frexp_bounds(amax[has_floor])
            lower[has_floor] = np.exp2(k0 * s)
        geom = np.clip(upper - lower, 0.0, None) / (ratio - 1.0)
        b_vals[pos] = t.volume[pos] * geom
    b = DyadicField(tree, b_vals)
    return b, _report(a, b, p, construction="ntmax-extremal")


@dataclass(frozen=True)
class StoppingForest:
    """Stopping-time decomposition of a field.

    generations[j] lists the flat indices selected at stage j (stage 0 is
    the root); children maps each selected cube to the maximal strictly
    contained cubes whose value more than doubles it; remainder[Q] is the
    measure of Q minus its selected children; dense collects the cubes
    whose remainder exceeds threshold * |Q|.
    """

    tree: TreeConfig
    threshold: float
    generations: tuple[tuple[int, ...], ...]
    children: dict[int, tuple[int, ...]] = field(repr=False)
    remainder: dict[int, float] = field(repr=False)
    dense: frozenset[int] = frozenset()

    @property
    def selected(self) -> tuple[int, ...]:
        return tuple(i for gen in self.generations for i in gen)

    @property
    def sparse(self) -> frozenset[int]:
        return frozenset(self.selected) - self.dense


def _maximal_exceeding(tree: TreeConfig, vals: np.ndarray, root: int, cutoff: float) -> list[int]:
    """Maximal cubes strictly inside root with value > cutoff, DFS order."""
    t = tree_tables(tree)
    out: list[int] = []
    stack = list(_child_indices(t, tree, root))
    while stack:
        i = stack.pop()
        if vals[i] > cutoff:
            out.append(i)
        else:
            stack.extend(_child_indices(t, tree, i))
    out.sort()
    return out


def _child_indices(t, tree: TreeConfig, i: int) -> list[int]:
    j = int(t.level[i])
    if j == tree.depth:
        return []
    base = 2 * t.index[i]
    size = 2 ** (j + 1)
    idx = []
    for shift in itertools.product((0, 1), repeat=tree.n):
        kk = tuple(int(base[d] + shift[d]) for d in range(tree.n))
        idx.append(int(t.offsets[j + 1] + np.ravel_multi_index(kk, (size,) * tree.n)))
    return idx


def stopping_forest(a: DyadicField, threshold: float = 0.125) -> StoppingForest:
    """Iterated stopping decomposition starting from the root.

    Each selected Q spawns the maximal cubes R strictly inside it with
    a_R > 2 a_Q; Q is dense when the unselected remainder keeps more than
    threshold * |Q| of its measure.
    """
    if not 0 < threshold < 1:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")
    tree = a.tree
    t = tree_tables(tree)
    vals = a.values
    generations: list[tuple[int, ...]] = [(0,)]
    children: dict[int, tuple[int, ...]] = {}
    remainder: dict[int, float] = {}
    dense: set[int] = set()
    current = [0]
    while current:
        nxt: list[int] = []
        for q in current:
            picks = _maximal_exceeding(tree, vals, q, 2.0 * float(vals[q]))
            children[q] = tuple(picks)
            rem = float(t.volume[q]) - float(t.volume[picks].sum()) if picks else float(t.volume[q])
            remainder[q] = rem
            if rem > threshold * float(t.volume[q]):
                dense.add(q)
            nxt.extend(picks)
        if nxt:
            generations.append(tuple(nxt))
        current = nxt
    return StoppingForest(
        tree=tree,
        threshold=threshold,
        generations=tuple(generations),
        children=children,
        remainder=remainder,
        dense=frozenset(dense),
    )


def extremal_g_for_ntmax_p1(a: DyadicField, threshold: float = 0.125) -> tuple[DyadicField, PairingReport]:
    """Carleson-side partner for p = 1 via the stopping forest.

    b charges |Q| on every dense selected cube.  With the default threshold
    1/8 this guarantees ||C b||_inf <= 8 and pairing >= ||N a||_1 / 4, both
    exactly on the truncated tree.
    """
    tree = a.tree
    if not a.values.any():
        b = DyadicField(tree, np.zeros(tree.num_cubes))
        rep = _report(a, b, 1.0, construction="stopping-forest")
        return b, replace(rep, degenerate=True)
    forest = stopping_forest(a, threshold)
    t = tree_tables(tree)
    vals = np.zeros(tree.num_cubes)
    idx = np.fromiter(forest.dense, dtype=np.int64) if forest.dense else np.empty(0, np.int64)
    vals[idx] = t.volume[idx]
    b = DyadicField(tree, vals)
    return b, _report(a, b, 1.0, construction="stopping-forest")


@dataclass(frozen=True)
class MultiplierReport:
    """Lower estimate of a multiplier norm with its Carleson-side comparisons."""

    lower_estimate: float
    lower_estimate_dyadic: float
    best_candidate: str
    candidate_values: tuple[float, ...]
    carleson_r_dyadic_norm: float
    carleson_r_continuum_norm: float
    modified_carleson: float | None
    certified_constant: float
    p: float
    q: float
    r: float
    degenerate: bool = False

    @property
    def certified_upper_ok(self) -> bool:
        bound = self.certified_constant * self.carleson_r_dyadic_norm
        return self.lower_estimate_dyadic <= bound * (1 + 1e-12)


def multiplier_norm_estimate(
    g: GridFunction,
    p: float,
    q: float,
    r: float,
    budget: int = 16,
    geo: GeometryConfig = GeometryConfig(),
    stride: int = 1,
    seed: int = 0,
) -> MultiplierReport:
    """Estimate sup_f ||f g||_r / ||N(W_q f)||_p from below over candidates.

    Candidates are the constant function, random grids, and a lift of the
    dyadic Carleson-side extremizer.  Every candidate yields a valid lower
    bound; the report also carries the dyadic-normalized estimate, which is
    certified to stay below 2^(1/r) times the dyadic generalized Carleson
    norm of g.
    """
    from .fields import ExponentConfig

    exps = ExponentConfig.from_pqr(p, q, r)
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    tree = g.tree
    p_tilde, q_tilde = exps.p_tilde, exps.q_tilde

    car_dyadic = boundary_lp_norm(carleson_r_dyadic(g, r, q_tilde), p_tilde)
    family = test_cube_family(tree, stride)
    from .functionals import carleson_continuum

    car_cont = boundary_lp_norm(carleson_continuum(g, r, q_tilde, family, geo), p_tilde)
    modified = modified_carleson_norm(g, geo) if (p == 2 and q == 2 and r == 2) else None

    candidates: list[tuple[str, GridFunction]] = []
    ones = DyadicField(tree, np.ones(tree.num_cubes))
    candidates.append(("ones", grid_from_field(ones, g.m)))
    # lift of the dyadic extremal field for the weight sequence of g
    w_avg = to_sequence(g, q_tilde).values ** r
    w = DyadicField(tree, tree_tables(tree).whitney_volume * w_avg)
    if w.values.any():
        p_big = p / r  # exponent pairing the weight sequence with (W_q f)^r
        a_ext, _ = extremal_f_for_carleson(w, conjugate(p_big))
        candidates.append(("extremal-lift", grid_from_field(DyadicField(tree, a_ext.values ** (1.0 / r)), g.m)))
    from .fields import random_grid

    i = 0
    while len(candidates) < budget:
        candidates.append((f"random-{i}", random_grid(seed + i, tree, g.m, "uniform")))
        i += 1
    candidates = candidates[:budget]

    values = []
    values_dyadic = []
    for _, f in candidates:
        num = pairing_grid(f, g, r)
        den_cont = boundary_lp_norm(nt_max_continuum(f, q, geo), p)
        den_dyad = boundary_lp_norm(nt_max_dyadic(to_sequence(f, q)), p)
        values.append(num / den_cont if den_cont > 0 else 0.0)
        values_dyadic.append(num / den_dyad if den_dyad > 0 else 0.0)

    best = int(np.argmax(values))
    return MultiplierReport(
        lower_estimate=float(values[best]),
        lower_estimate_dyadic=float(max(values_dyadic)),
        best_candidate=candidates[best][0],
        candidate_values=tuple(float(v) for v in values),
        carleson_r_dyadic_norm=float(car_dyadic),
        carleson_r_continuum_norm=float(car_cont),
        modified_carleson=modified,
        certified_constant=2.0 ** (1.0 / r),
        p=p,
        q=q,
        r=r,
        degenerate=not g.values.any(),
    )
