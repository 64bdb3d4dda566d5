"""The maximal and Carleson functionals, dyadic and continuum.

Dyadic versions are exact finite computations on the tree: the
non-tangential maximal function takes the sup of a field along ancestor
chains, the Carleson functional takes the sup of normalized subtree sums,
and the dyadic Hardy-Littlewood maximal function takes the sup of
cube averages.  Continuum versions evaluate Whitney averages of a grid
function at cell centers and approximate the underlying sups from below
over a finite family of evaluation nodes and test cubes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fields import (
    BoundaryFunction,
    DyadicField,
    GridFunction,
    cell_tables,
    whitney_average,
    _overlaps,
)
from .geometry import Box, GeometryConfig, GridCube, TreeConfig, tree_tables

__all__ = [
    "nt_max_dyadic",
    "carleson_dyadic",
    "carleson_r_dyadic",
    "maximal_dyadic",
    "subtree_sums",
    "cube_averages",
    "whitney_sample",
    "nt_max_continuum",
    "carleson_continuum",
    "maximal_continuum",
    "area_integral",
    "modified_carleson_norm",
    "CoverMeanCheck",
    "largest_cover_mean",
]

_DEFAULT_GEO = GeometryConfig()


def subtree_sums(tree: TreeConfig, values: np.ndarray) -> np.ndarray:
    """sum_{R subset Q} values_R for every cube Q, accumulated bottom-up."""
    t = tree_tables(tree)
    sums = np.array(values, dtype=float)
    for j in range(tree.depth, 0, -1):
        sl = t.level_slice(j)
        np.add.at(sums, t.parent[sl], sums[sl])
    return sums


def cube_averages(h: BoundaryFunction) -> np.ndarray:
    """Mean of h over every cube, in flat tree order."""
    tree = h.tree
    t = tree_tables(tree)
    sums = np.zeros(tree.num_cubes)
    sums[t.level_slice(tree.depth)] = h.values
    for j in range(tree.depth, 0, -1):
        sl = t.level_slice(j)
        np.add.at(sums, t.parent[sl], sums[sl])
    counts = np.exp2(((tree.depth - t.level) * tree.n).astype(float))
    return sums / counts


def nt_max_dyadic(a: DyadicField) -> BoundaryFunction:
    """N a(x) = max of a over the ancestor chain of x."""
    t = tree_tables(a.tree)
    return BoundaryFunction(a.tree, a.values[t.leaf_anc].max(axis=1))


def carleson_dyadic(b: DyadicField) -> BoundaryFunction:
    """C b(x) = max over cubes Q containing x of |Q|^-1 * sum_{R subset Q} b_R."""
    t = tree_tables(b.tree)
    avg = subtree_sums(b.tree, b.values) / t.volume
    return BoundaryFunction(b.tree, avg[t.leaf_anc].max(axis=1))


def maximal_dyadic(h: BoundaryFunction) -> BoundaryFunction:
    """Dyadic Hardy-Littlewood maximal function (sup of cube averages)."""
    t = tree_tables(h.tree)
    return BoundaryFunction(h.tree, cube_averages(h)[t.leaf_anc].max(axis=1))


def carleson_r_dyadic(g: GridFunction, r: float, q_tilde: float) -> BoundaryFunction:
    """Generalized Carleson functional of a grid function.

    C(x) = sup_{Q owns x} ( |Q|^-1 * sum_{R subset Q} |W_R| *
           (|W_R|^(-1/q_tilde) ||g||_{L_q_tilde(W_R)})^r )^(1/r).
    """
    if not 1 <= r or math.isinf(r):
        raise ValueError(f"r must satisfy 1 <= r < inf, got {r}")
    if q_tilde < r:
        raise ValueError(f"q_tilde must be >= r, got q_tilde={q_tilde}, r={r}")
    from .fields import to_sequence

    avg = to_sequence(g, q_tilde).values
    w = DyadicField(g.tree, tree_tables(g.tree).whitney_volume * avg**r)
    c1 = carleson_dyadic(w)
    return BoundaryFunction(g.tree, c1.values ** (1.0 / r))


def whitney_sample(f: GridFunction, q: float, geo: GeometryConfig = _DEFAULT_GEO) -> np.ndarray:
    """Whitney average W_q f at every cell center, in flat cell order."""
    from .geometry import continuum_whitney

    cells = cell_tables(f)
    out = np.empty(len(cells.t_mid))
    for i in range(len(out)):
        region = continuum_whitney(float(cells.t_mid[i]), cells.x_mid[i], geo)
        out[i] = whitney_average(f, q, region)
    return out


def nt_max_continuum(
    f: GridFunction,
    q: float,
    geo: GeometryConfig = _DEFAULT_GEO,
    samples: np.ndarray | None = None,
) -> BoundaryFunction:
    """Non-tangential maximal function of W_q f, from below.

    The sup over the cone {(t, x): |x - z| <= aperture * t} is replaced by a
    max over the finite set of cell centers inside the cone; an empty cone
    contributes 0.
    """
    if samples is None:
        samples = whitney_sample(f, q, geo)
    cells = cell_tables(f)
    t = tree_tables(f.tree)
    z = t.leaf_centers  # (L, n)
    dist = np.abs(cells.x_mid[None, :, :] - z[:, None, :]).max(axis=2)
    mask = dist <= geo.aperture * cells.t_mid[None, :]
    vals = np.where(mask, samples[None, :], 0.0).max(axis=1)
    return BoundaryFunction(f.tree, vals)


def _family_integrals(
    integrand: np.ndarray,
    f: GridFunction,
    family: Sequence[GridCube],
) -> np.ndarray:
    """integral over Q_hat of the piecewise-constant integrand, per test cube."""
    cells = cell_tables(f)
    out = np.empty(len(family))
    for i, cube in enumerate(family):
        ov = _overlaps(cells, cube.carleson_box(), f.tree)
        out[i] = np.dot(integrand, ov)
    return out


def _leafwise_max(
    values: np.ndarray, family: Sequence[GridCube], tree: TreeConfig
) -> np.ndarray:
    """Pointwise max over the test cubes containing each leaf center."""
    res = 2**tree.depth
    grid = np.zeros((res,) * tree.n)
    for val, cube in zip(values, family):
        sl = tuple(slice(k, k + cube.size) for k in cube.offset)
        np.maximum(grid[sl], val, out=grid[sl])
    return grid.reshape(-1)


def carleson_continuum(
    g: GridFunction,
    r: float,
    q_prime: float,
    family: Sequence[GridCube],
    geo: GeometryConfig = _DEFAULT_GEO,
    samples: np.ndarray | None = None,
) -> BoundaryFunction:
    """Carleson functional of W_q' g over a finite test-cube family.

    C(z) = max over family cubes Q owning z of
    ( |Q|^-1 * integral_{Q_hat} (W_q' g)(t, x)^r dt dx )^(1/r), with the
    integrand sampled at cell centers and integrated exactly per cell.
    """
    if not 1 <= r or math.isinf(r):
        raise ValueError(f"r must satisfy 1 <= r < inf, got {r}")
    if samples is None:
        samples = whitney_sample(g, q_prime, geo)
    integrals = _family_integrals(samples**r, g, family)
    vols = np.array([c.volume for c in family])
    vals = (integrals / vols) ** (1.0 / r)
    return BoundaryFunction(g.tree, _leafwise_max(vals, family, g.tree))


def maximal_continuum(h: BoundaryFunction, family: Sequence[GridCube]) -> BoundaryFunction:
    """Hardy-Littlewood maximal function over a finite test-cube family.

    Test cubes are unions of leaf cells, so every average is exact.
    """
    tree = h.tree
    res = 2**tree.depth
    grid = h.values.reshape((res,) * tree.n)
    # integral image with a zero border, one cumsum per axis
    padded = np.pad(grid, [(1, 0)] * tree.n)
    for axis in range(tree.n):
        padded = padded.cumsum(axis=axis)
    avgs = np.empty(len(family))
    for i, cube in enumerate(family):
        lo = cube.offset
        hi = tuple(k + cube.size for k in lo)
        total = 0.0
        for corner in itertools.product((0, 1), repeat=tree.n):
            idx = tuple(hi[d] if corner[d] else lo[d] for d in range(tree.n))
            total += (-1) ** (tree.n - sum(corner)) * padded[idx]
        avgs[i] = total / cube.size**tree.n
    return BoundaryFunction(tree, _leafwise_max(avgs, family, tree))


def area_integral(g: GridFunction, t_substeps: int = 8) -> BoundaryFunction:
    """Square (area) integral A g(z) = (iint_{|x-z| < t} g^2 dx dt/t^n)^(1/2).

    The x overlap of each cell with the cone is exact; the dt/t^n factor is
    integrated with a midpoint rule on t_substeps sub-intervals per cell.
    """
    if t_substeps < 1:
        raise ValueError(f"t_substeps must be >= 1, got {t_substeps}")
    cells = cell_tables(g)
    tree = g.tree
    z = tree_tables(tree).leaf_centers
    v2 = g.values.reshape(-1) ** 2
    nonzero = v2 > 0
    if not nonzero.any():
        return BoundaryFunction(tree, np.zeros(tree.num_leaves))
    v2 = v2[nonzero]
    t_lo = cells.t_lo[nonzero]
    dt = (cells.t_hi[nonzero] - t_lo) / t_substeps
    # midpoints: (cells, K)
    tk = t_lo[:, None] + dt[:, None] * (np.arange(t_substeps) + 0.5)
    x_lo = cells.x_lo[nonzero]
    x_hi = cells.x_hi[nonzero]
    weight = dt[:, None] / tk**tree.n
    out = np.empty(tree.num_leaves)
    for i in range(tree.num_leaves):
        ov = np.ones_like(tk)
        for d in range(tree.n):
            lo = np.maximum(x_lo[:, d, None], z[i, d] - tk)
            hi = np.minimum(x_hi[:, d, None], z[i, d] + tk)
            ov *= np.clip(hi - lo, 0.0, None)
        out[i] = np.dot(v2, (ov * weight).sum(axis=1))
    return BoundaryFunction(tree, np.sqrt(out))


def modified_carleson_norm(g: GridFunction, geo: GeometryConfig = _DEFAULT_GEO) -> float:
    """sup over dyadic cubes Q of (|Q|^-1 iint_{Q_hat} (W_inf g)^2 dt dx)^(1/2)."""
    samples = whitney_sample(g, math.inf, geo)
    integrand = samples**2
    cells = cell_tables(g)
    t = tree_tables(g.tree)
    best = 0.0
    for i in range(g.tree.num_cubes):
        box = Box(
            0.0,
            float(t.side[i]),
            tuple(t.origin[i]),
            tuple(t.origin[i] + t.side[i]),
        )
        ov = _overlaps(cells, box, g.tree)
        best = max(best, float(np.dot(integrand, ov)) / float(t.volume[i]))
    return math.sqrt(best)


@dataclass(frozen=True)
class CoverMeanCheck:
    """Witness that some cover element carries a proportionally large mean."""

    best_index: int
    best_mean: float
    base_mean: float
    cover_constant: float
    count: int

    @property
    def bound(self) -> float:
        return self.base_mean / (self.cover_constant * self.count)

    @property
    def satisfied(self) -> bool:
        return self.best_mean >= self.bound * (1 - 1e-12)


def largest_cover_mean(u: GridFunction, base: Box, cover: Sequence[Box]) -> CoverMeanCheck:
    """Locate the cover element with the largest mean of u.

    If the cover elements W_j cover the base region W (up to the data
    domain), the largest mean is at least mean_W(u) / (C * N) where N is the
    number of elements and C = max_j |W_j| / |W| on clipped volumes.
    """
    from .fields import clipped_volume

    if not cover:
        raise ValueError("cover must be nonempty")
    base_vol = clipped_volume(u, base)
    base_mean = whitney_average(u, 1, base)
    means = [whitney_average(u, 1, w) for w in cover]
    vols = [clipped_volume(u, w) for w in cover]
    c = max(v / base_vol for v in vols)
    best = int(np.argmax(means))
    return CoverMeanCheck(
        best_index=best,
        best_mean=float(means[best]),
        base_mean=float(base_mean),
        cover_constant=float(c),
        count=len(cover),
    )
