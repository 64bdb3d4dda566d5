"""Data carried by the dyadic tree.

Three value types: a DyadicField assigns one nonnegative scalar to every
cube, a BoundaryFunction is piecewise constant on the leaf cells of the base
cube, and a GridFunction is piecewise constant on a uniform m x m^n
refinement of every Whitney region.  A grid function therefore lives on
t in (2^-(depth+1), 1], and every integral against it is an exact finite sum
over cells.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .geometry import Box, DyadicCube, TreeConfig, flat_index, tree_tables

__all__ = [
    "DyadicField",
    "BoundaryFunction",
    "GridFunction",
    "ExponentConfig",
    "conjugate",
    "boundary_lp_norm",
    "whitney_average",
    "clipped_volume",
    "data_domain",
    "to_sequence",
    "grid_from_field",
    "refine",
    "random_field",
    "random_grid",
]

_INF = math.inf


def conjugate(p: float) -> float:
    """Hoelder conjugate with the conventions 1' = inf and inf' = 1."""
    if p < 1:
        raise ValueError(f"exponent must be >= 1, got {p}")
    if p == 1:
        return _INF
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def _inv(p: float) -> float:
    return 0.0 if math.isinf(p) else 1.0 / p


@dataclass(frozen=True)
class ExponentConfig:
    """Exponent tuple tied together by 1/p + 1/p_tilde = 1/q + 1/q_tilde = 1/r.

    Requires r <= p < inf, r <= q <= inf and 1 <= r < inf.
    """

    p: float
    p_tilde: float
    q: float
    q_tilde: float
    r: float = 1.0

    def __post_init__(self) -> None:
        if not 1 <= self.r or math.isinf(self.r):
            raise ValueError(f"r must satisfy 1 <= r < inf, got {self.r}")
        if not (self.r <= self.p and not math.isinf(self.p)):
            raise ValueError(f"p must satisfy r <= p < inf, got p={self.p}, r={self.r}")
        if not self.r <= self.q:
            raise ValueError(f"q must satisfy r <= q <= inf, got q={self.q}, r={self.r}")
        for name, value in (("p_tilde", self.p_tilde), ("q_tilde", self.q_tilde)):
            if value < 1:
                raise ValueError(f"{name} must be >= 1, got {value}")
        lhs = _inv(self.p) + _inv(self.p_tilde)
        mid = _inv(self.q) + _inv(self.q_tilde)
        rhs = _inv(self.r)
        if abs(lhs - rhs) > 1e-12 or abs(mid - rhs) > 1e-12:
            raise ValueError(
                f"exponents do not satisfy 1/p + 1/p_tilde = 1/q + 1/q_tilde = 1/r: "
                f"{lhs} vs {mid} vs {rhs}"
            )

    @classmethod
    def from_pqr(cls, p: float, q: float, r: float = 1.0) -> "ExponentConfig":
        def tilde(s: float) -> float:
            d = _inv(r) - _inv(s)
            return _INF if d == 0 else 1.0 / d

        return cls(p=p, p_tilde=tilde(p), q=q, q_tilde=tilde(q), r=r)


def _as_values(values, size: int, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.shape != (size,):
        raise ValueError(f"{what} must have shape ({size},), got {arr.shape}")
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} must be finite and nonnegative")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DyadicField:
    """One nonnegative value per cube, in flat tree order."""

    tree: TreeConfig
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _as_values(self.values, self.tree.num_cubes, "field values"))

    def value(self, cube: DyadicCube) -> float:
        return float(self.values[flat_index(self.tree, cube)])


@dataclass(frozen=True, eq=False)
class BoundaryFunction:
    """Piecewise-constant function on the leaf cells of [0,1)^n."""

    tree: TreeConfig
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _as_values(self.values, self.tree.num_leaves, "boundary values"))

    def value_at(self, z) -> float:
        t = tree_tables(self.tree)
        z = np.atleast_1d(np.asarray(z, dtype=float))
        k = np.minimum(np.floor(z * 2**self.tree.depth).astype(np.int64), 2**self.tree.depth - 1)
        i = np.ravel_multi_index(k, (2**self.tree.depth,) * self.tree.n)
        del t
        return float(self.values[i])


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Piecewise-constant function on the refined Whitney cells.

    values has one row per cube; row Q lists the m^(1+n) cell values of W_Q
    in C order over (t, x_1, ..., x_n), t index first.
    """

    tree: TreeConfig
    m: int
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        arr = np.asarray(self.values, dtype=float)
        shape = (self.tree.num_cubes, self.cells_per_cube)
        if arr.shape != shape:
            raise ValueError(f"grid values must have shape {shape}, got {arr.shape}")
        if np.any(arr < 0) or not np.all(np.isfinite(arr)):
            raise ValueError("grid values must be finite and nonnegative")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def cells_per_cube(self) -> int:
        return self.m ** (1 + self.tree.n)

    def power(self, r: float) -> "GridFunction":
        return GridFunction(self.tree, self.m, self.values**r)


def data_domain(tree: TreeConfig) -> Box:
    """The region covered by grid data: (2^-(depth+1), 1] x [0,1)^n."""
    return Box(2.0 ** -(tree.depth + 1), 1.0, (0.0,) * tree.n, (1.0,) * tree.n)


class _CellTables:
    """Geometry of every grid cell, flattened cube-major in value order."""

    __slots__ = ("t_lo", "t_hi", "x_lo", "x_hi", "vol", "t_mid", "x_mid", "cube")

    def __init__(self, n: int, depth: int, m: int) -> None:
        trees = tree_tables(TreeConfig(n, depth))
        mc = m ** (1 + n)
        total = trees.offsets[-1] * mc
        t_lo = np.empty(total)
        t_hi = np.empty(total)
        x_lo = np.empty((total, n))
        x_hi = np.empty((total, n))
        cube = np.repeat(np.arange(trees.offsets[-1]), mc)

        frac = np.arange(m) / m
        for j in range(depth + 1):
            sl = trees.level_slice(j)
            side = 2.0**-j
            ncubes = sl.stop - sl.start
            # t edges of the m slabs of (side/2, side]
            tl = side / 2 + (side / 2) * frac
            th = side / 2 + (side / 2) * (np.arange(1, m + 1) / m)
            # x edges per axis, per cube
            origins = trees.origin[sl]  # (ncubes, n)
            xl = origins[:, None, :] + side * frac[None, :, None]  # (ncubes, m, n)
            xh = origins[:, None, :] + side * (np.arange(1, m + 1) / m)[None, :, None]
            # assemble per-cube cell blocks in C order (t, x_1, ..., x_n)
            grid_shape = (m,) * (1 + n)
            tt = np.broadcast_to(tl.reshape((m,) + (1,) * n), grid_shape).reshape(-1)
            tth = np.broadcast_to(th.reshape((m,) + (1,) * n), grid_shape).reshape(-1)
            lo0 = sl.start * mc
            hi0 = sl.stop * mc
            t_lo[lo0:hi0] = np.tile(tt, ncubes)
            t_hi[lo0:hi0] = np.tile(tth, ncubes)
            for d in range(n):
                ax_shape = (1,) * (1 + d) + (m,) + (1,) * (n - 1 - d)
                xld = np.broadcast_to(
                    xl[:, :, d].reshape(ncubes, *ax_shape), (ncubes,) + grid_shape
                ).reshape(-1)
                xhd = np.broadcast_to(
                    xh[:, :, d].reshape(ncubes, *ax_shape), (ncubes,) + grid_shape
                ).reshape(-1)
                x_lo[lo0:hi0, d] = xld
                x_hi[lo0:hi0, d] = xhd

        self.t_lo = t_lo
        self.t_hi = t_hi
        self.x_lo = x_lo
        self.x_hi = x_hi
        self.vol = (t_hi - t_lo) * np.prod(x_hi - x_lo, axis=1)
        self.t_mid = 0.5 * (t_lo + t_hi)
        self.x_mid = 0.5 * (x_lo + x_hi)
        self.cube = cube


@functools.lru_cache(maxsize=64)
def _cells_cached(n: int, depth: int, m: int) -> _CellTables:
    return _CellTables(n, depth, m)


def cell_tables(f: GridFunction) -> _CellTables:
    return _cells_cached(f.tree.n, f.tree.depth, f.m)


def _overlaps(cells: _CellTables, region: Box, tree: TreeConfig) -> np.ndarray:
    """Exact cell-by-cell overlap volumes with region clipped to the data domain."""
    t_lo = max(region.t_lo, 2.0 ** -(tree.depth + 1))
    t_hi = min(region.t_hi, 1.0)
    dt = np.clip(np.minimum(cells.t_hi, t_hi) - np.maximum(cells.t_lo, t_lo), 0.0, None)
    ov = dt
    for d in range(tree.n):
        lo = max(region.x_lo[d], 0.0)
        hi = min(region.x_hi[d], 1.0)
        dx = np.clip(np.minimum(cells.x_hi[:, d], hi) - np.maximum(cells.x_lo[:, d], lo), 0.0, None)
        ov = ov * dx
    return ov


def clipped_volume(f: GridFunction, region: Box) -> float:
    """Volume of region intersected with the data domain of f."""
    return float(_overlaps(cell_tables(f), region, f.tree).sum())


def whitney_average(f: GridFunction, q: float, region: Box) -> float:
    """Normalized L_q average of f over the region, clipped to the data domain.

    For q < inf this is (|R|^-1 * integral_R |f|^q)^(1/q) as an exact cell
    sum; q = inf takes the essential sup over the cells the region meets.
    Raises if the clipped region has zero volume.
    """
    if q < 1:
        raise ValueError(f"exponent q must be >= 1, got {q}")
    cells = cell_tables(f)
    ov = _overlaps(cells, region, f.tree)
    total = float(ov.sum())
    if total <= 0.0:
        raise ValueError("region does not meet the data domain")
    v = f.values.reshape(-1)
    if math.isinf(q):
        return float(v[ov > 0].max())
    if q == 1:
        return float(np.dot(v, ov) / total)
    return float((np.dot(v**q, ov) / total) ** (1.0 / q))


def to_sequence(f: GridFunction, q: float, weight: str = "average") -> DyadicField:
    """Per-cube Whitney averages of f as a dyadic field.

    weight="average" gives a_Q = (|W_Q|^-1 * integral_{W_Q} |f|^q)^(1/q);
    weight="mass" multiplies by |W_Q|, i.e. |W_Q|^(1 - 1/q) * ||f||_{L_q(W_Q)},
    the normalization the Carleson functional consumes.
    """
    if q < 1:
        raise ValueError(f"exponent q must be >= 1, got {q}")
    if weight not in ("average", "mass"):
        raise ValueError(f"weight must be 'average' or 'mass', got {weight!r}")
    vals = f.values
    if math.isinf(q):
        avg = vals.max(axis=1)
    elif q == 1:
        avg = vals.mean(axis=1)
    else:
        avg = (vals**q).mean(axis=1) ** (1.0 / q)
    if weight == "mass":
        avg = avg * tree_tables(f.tree).whitney_volume
    return DyadicField(f.tree, avg)


def grid_from_field(a: DyadicField, m: int = 2) -> GridFunction:
    """Lift a field to the grid function that is constant a_Q on each W_Q."""
    mc = m ** (1 + a.tree.n)
    return GridFunction(a.tree, m, np.repeat(a.values[:, None], mc, axis=1))


def refine(f: GridFunction, factor: int = 2) -> GridFunction:
    """The same function rendered with each cell split factor-fold per axis."""
    if factor < 1:
        raise ValueError(f"factor must be >= 1, got {factor}")
    if factor == 1:
        return f
    d = 1 + f.tree.n
    shape = (f.m,) * d
    ones = np.ones((factor,) * d)
    rows = [np.kron(row.reshape(shape), ones).reshape(-1) for row in f.values]
    return GridFunction(f.tree, f.m * factor, np.array(rows))


def boundary_lp_norm(h: BoundaryFunction, p: float) -> float:
    """L_p norm of a boundary function against Lebesgue measure on [0,1)^n."""
    if p < 1:
        raise ValueError(f"exponent p must be >= 1, got {p}")
    v = h.values
    if math.isinf(p):
        return float(v.max(initial=0.0))
    mu = h.tree.leaf_volume
    if p == 1:
        return float(v.sum() * mu)
    return float((np.sum(v**p) * mu) ** (1.0 / p))


def _parse_spec(spec: str) -> tuple[str, list[str]]:
    parts = spec.split(":")
    return parts[0], parts[1:]


def _sample_values(rng: np.random.Generator, tree: TreeConfig, count: int, spec: str, row_size: int) -> np.ndarray:
    """Draw (count, row_size) nonnegative samples according to a spec string.

    Grammar: "zero" | "uniform" | "lognormal" | "delta:<level>:<k0>[,k1...]"
    | "sparse:<ncubes>".  delta marks one cube's rows with ones; sparse picks
    ncubes distinct cubes and fills their rows with uniforms.
    """
    kind, args = _parse_spec(spec)
    shape = (count, row_size)
    if kind == "zero":
        return np.zeros(shape)
    if kind == "uniform":
        return rng.random(shape)
    if kind == "lognormal":
        return rng.lognormal(0.0, 1.0, shape)
    if kind == "delta":
        if len(args) != 2:
            raise ValueError(f"delta spec needs level and index, got {spec!r}")
        level = int(args[0])
        index = tuple(int(s) for s in args[1].split(","))
        i = flat_index(tree, DyadicCube(level, index))
        out = np.zeros(shape)
        out[i] = 1.0
        return out
    if kind == "sparse":
        if len(args) != 1:
            raise ValueError(f"sparse spec needs a count, got {spec!r}")
        k = min(int(args[0]), count)
        picks = rng.choice(count, size=k, replace=False)
        out = np.zeros(shape)
        out[picks] = rng.random((k, row_size))
        return out
    raise ValueError(f"unknown distribution spec {spec!r}")


def random_field(seed: int, tree: TreeConfig, spec: str = "uniform") -> DyadicField:
    rng = np.random.default_rng(seed)
    vals = _sample_values(rng, tree, tree.num_cubes, spec, 1)[:, 0]
    return DyadicField(tree, vals)


def random_grid(seed: int, tree: TreeConfig, m: int = 2, spec: str = "uniform") -> GridFunction:
    rng = np.random.default_rng(seed)
    mc = m ** (1 + tree.n)
    vals = _sample_values(rng, tree, tree.num_cubes, spec, mc)
    return GridFunction(tree, m, vals)
