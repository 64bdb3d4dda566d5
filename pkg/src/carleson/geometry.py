"""Dyadic geometry over the unit cube.

The base object is the dyadic tree on [0,1)^n truncated at a finite depth:
level j holds the 2^(jn) half-open cubes of side 2^-j.  On top of the tree
sit the Whitney regions W_Q = (side/2, side] x Q, the Carleson boxes
Q_hat = (0, side] x Q, continuum Whitney regions around a point of the upper
half-space, and a finite family of axis-parallel test cubes used by the
continuum functionals.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

__all__ = [
    "TreeConfig",
    "DyadicCube",
    "Box",
    "GeometryConfig",
    "GridCube",
    "tree_tables",
    "flat_index",
    "cube_at",
    "children",
    "ancestors_of_point",
    "whitney_region",
    "carleson_box",
    "continuum_whitney",
    "test_cube_family",
]


@dataclass(frozen=True)
class TreeConfig:
    """Dyadic tree on [0,1)^n with levels 0..depth (level depth = leaves)."""

    n: int
    depth: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"spatial dimension must be >= 1, got {self.n}")
        if self.depth < 0:
            raise ValueError(f"depth must be >= 0, got {self.depth}")

    def level_size(self, level: int) -> int:
        return 2 ** (level * self.n)

    @property
    def num_cubes(self) -> int:
        return sum(self.level_size(j) for j in range(self.depth + 1))

    @property
    def num_leaves(self) -> int:
        return self.level_size(self.depth)

    @property
    def leaf_side(self) -> float:
        return 2.0 ** (-self.depth)

    @property
    def leaf_volume(self) -> float:
        return 2.0 ** (-self.depth * self.n)


@dataclass(frozen=True)
class DyadicCube:
    """Cube 2^-level * ([0,1)^n + index) of the tree."""

    level: int
    index: tuple[int, ...]

    def __post_init__(self) -> None:
        if isinstance(self.index, (int, np.integer)):
            object.__setattr__(self, "index", (int(self.index),))
        else:
            object.__setattr__(self, "index", tuple(int(k) for k in self.index))
        if self.level < 0:
            raise ValueError(f"level must be >= 0, got {self.level}")
        size = 2**self.level
        for k in self.index:
            if not 0 <= k < size:
                raise ValueError(f"index {self.index} out of range at level {self.level}")

    @property
    def n(self) -> int:
        return len(self.index)

    @property
    def side(self) -> float:
        return 2.0**-self.level

    @property
    def volume(self) -> float:
        return self.side ** self.n

    @property
    def origin(self) -> tuple[float, ...]:
        return tuple(k * self.side for k in self.index)

    def contains_point(self, z) -> bool:
        z = np.atleast_1d(np.asarray(z, dtype=float))
        lo = np.asarray(self.origin)
        return bool(np.all(z >= lo) and np.all(z < lo + self.side))


@dataclass(frozen=True)
class Box:
    """Axis-parallel box (t_lo, t_hi] x prod_d [x_lo_d, x_hi_d).

    Only the measure of the box matters to the integrals downstream, so the
    open/closed conventions are bookkeeping; an empty box has volume 0.
    """

    t_lo: float
    t_hi: float
    x_lo: tuple[float, ...]
    x_hi: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "x_lo", tuple(float(v) for v in self.x_lo))
        object.__setattr__(self, "x_hi", tuple(float(v) for v in self.x_hi))
        if len(self.x_lo) != len(self.x_hi):
            raise ValueError("x_lo and x_hi must have the same dimension")

    @property
    def n(self) -> int:
        return len(self.x_lo)

    @property
    def volume(self) -> float:
        dt = max(0.0, self.t_hi - self.t_lo)
        v = dt
        for lo, hi in zip(self.x_lo, self.x_hi):
            v *= max(0.0, hi - lo)
        return v


@dataclass(frozen=True)
class GeometryConfig:
    """Cone aperture and Whitney-region shape constants.

    aperture: half-width of the cone |x - z| <= aperture * t (sup-norm);
        aperture = 0 degenerates to the vertical maximal function.
    c0, c1: W(t, x) = {(s, y): t/c0 < s < c0*t, |y - x| < c1*t}.
    """

    aperture: float = 1.0
    c0: float = 2.0
    c1: float = 0.5

    def __post_init__(self) -> None:
        if self.aperture < 0:
            raise ValueError(f"aperture must be >= 0, got {self.aperture}")
        if self.c0 <= 1:
            raise ValueError(f"c0 must be > 1, got {self.c0}")
        if self.c1 <= 0:
            raise ValueError(f"c1 must be > 0, got {self.c1}")


class _TreeTables:
    """Flat-array view of a truncated dyadic tree.

    Cubes are numbered level by level, row-major in the index within each
    level.  Leaves are the last block, in the same row-major order.
    """

    __slots__ = (
        "n",
        "depth",
        "offsets",
        "level",
        "index",
        "side",
        "volume",
        "origin",
        "parent",
        "leaf_anc",
        "leaf_centers",
        "whitney_volume",
    )

    def __init__(self, n: int, depth: int) -> None:
        self.n = n
        self.depth = depth
        sizes = [2 ** (j * n) for j in range(depth + 1)]
        self.offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
        total = int(self.offsets[-1])

        level = np.empty(total, dtype=np.int64)
        index = np.empty((total, n), dtype=np.int64)
        parent = np.full(total, -1, dtype=np.int64)
        for j in range(depth + 1):
            lo, hi = self.offsets[j], self.offsets[j + 1]
            level[lo:hi] = j
            idx = np.indices((2**j,) * n).reshape(n, -1).T
            index[lo:hi] = idx
            if j > 0:
                pk = idx >> 1
                parent[lo:hi] = self.offsets[j - 1] + np.ravel_multi_index(
                    pk.T, (2 ** (j - 1),) * n
                )
        self.level = level
        self.index = index
        self.parent = parent
        self.side = np.exp2(-level.astype(float))
        self.volume = np.exp2(-(level * n).astype(float))
        self.origin = index * self.side[:, None]
        # |W_Q| = (side/2) * |Q|
        self.whitney_volume = 0.5 * self.side * self.volume

        leaf_idx = index[self.offsets[depth]:]
        anc = np.empty((len(leaf_idx), depth + 1), dtype=np.int64)
        for j in range(depth + 1):
            kj = leaf_idx >> (depth - j)
            anc[:, j] = self.offsets[j] + np.ravel_multi_index(kj.T, (2**j,) * n)
        self.leaf_anc = anc
        self.leaf_centers = (leaf_idx + 0.5) * 2.0**-depth

    def ancestor_at_level(self, j: int) -> np.ndarray:
        """Flat index of the level-j ancestor of every cube (-1 above level j)."""
        out = np.full(len(self.level), -1, dtype=np.int64)
        for l in range(j, self.depth + 1):
            lo, hi = self.offsets[l], self.offsets[l + 1]
            kj = self.index[lo:hi] >> (l - j)
            out[lo:hi] = self.offsets[j] + np.ravel_multi_index(kj.T, (2**j,) * self.n)
        return out

    def level_slice(self, j: int) -> slice:
        return slice(int(self.offsets[j]), int(self.offsets[j + 1]))


@functools.lru_cache(maxsize=128)
def _tables_cached(n: int, depth: int) -> _TreeTables:
    return _TreeTables(n, depth)


def tree_tables(tree: TreeConfig) -> _TreeTables:
    return _tables_cached(tree.n, tree.depth)


def flat_index(tree: TreeConfig, cube: DyadicCube) -> int:
    if cube.n != tree.n:
        raise ValueError(f"cube dimension {cube.n} != tree dimension {tree.n}")
    if cube.level > tree.depth:
        raise ValueError(f"cube level {cube.level} exceeds tree depth {tree.depth}")
    t = tree_tables(tree)
    return int(t.offsets[cube.level] + np.ravel_multi_index(cube.index, (2**cube.level,) * tree.n))


def cube_at(tree: TreeConfig, i: int) -> DyadicCube:
    t = tree_tables(tree)
    if not 0 <= i < tree.num_cubes:
        raise ValueError(f"flat index {i} out of range")
    return DyadicCube(int(t.level[i]), tuple(int(k) for k in t.index[i]))


def children(tree: TreeConfig, cube: DyadicCube) -> list[DyadicCube]:
    """The 2^n children one level down, row-major; a leaf has none."""
    flat_index(tree, cube)  # validates membership
    if cube.level == tree.depth:
        return []
    return [
        DyadicCube(cube.level + 1, tuple(2 * k + e for k, e in zip(cube.index, shift)))
        for shift in itertools.product((0, 1), repeat=tree.n)
    ]


def ancestors_of_point(tree: TreeConfig, z) -> list[DyadicCube]:
    """The chain of cubes containing z, coarsest first (depth+1 cubes)."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if z.shape != (tree.n,):
        raise ValueError(f"point has shape {z.shape}, expected ({tree.n},)")
    if np.any(z < 0) or np.any(z >= 1):
        raise ValueError(f"point {z.tolist()} outside [0,1)^{tree.n}")
    k = np.floor(z * 2**tree.depth).astype(np.int64)
    # guard against z*2^D rounding up to the right boundary
    k = np.minimum(k, 2**tree.depth - 1)
    return [DyadicCube(j, tuple(int(v) for v in (k >> (tree.depth - j)))) for j in range(tree.depth + 1)]


def whitney_region(cube: DyadicCube) -> Box:
    """W_Q = (side/2, side] x Q."""
    lo = cube.origin
    return Box(cube.side / 2, cube.side, lo, tuple(v + cube.side for v in lo))


def carleson_box(cube: DyadicCube) -> Box:
    """Q_hat = (0, side] x Q."""
    lo = cube.origin
    return Box(0.0, cube.side, lo, tuple(v + cube.side for v in lo))


def continuum_whitney(t: float, x, geo: GeometryConfig = GeometryConfig(), clip: bool = True) -> Box:
    """Whitney region around (t, x): s in (t/c0, c0*t), |y - x| < c1*t sup-norm.

    With clip=True (the default) the region is intersected with the
    computational domain (0, 1] x [0,1)^n, which only shrinks it.
    """
    if t <= 0:
        raise ValueError(f"t must be > 0, got {t}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    s_lo, s_hi = t / geo.c0, geo.c0 * t
    y_lo, y_hi = x - geo.c1 * t, x + geo.c1 * t
    if clip:
        s_hi = min(s_hi, 1.0)
        y_lo = np.maximum(y_lo, 0.0)
        y_hi = np.minimum(y_hi, 1.0)
    return Box(s_lo, s_hi, tuple(y_lo), tuple(y_hi))


@dataclass(frozen=True)
class GridCube:
    """Axis-parallel cube with corners on the 2^-depth grid.

    offset and size are in leaf-cell units; resolution = 2^depth cells per
    side.  The dyadic cubes are the special case size = 2^i with aligned
    offsets.
    """

    offset: tuple[int, ...]
    size: int
    resolution: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "offset", tuple(int(k) for k in self.offset))
        if self.size < 1 or self.size > self.resolution:
            raise ValueError(f"size {self.size} out of range for resolution {self.resolution}")
        for k in self.offset:
            if not 0 <= k <= self.resolution - self.size:
                raise ValueError(f"offset {self.offset} puts the cube outside [0,1)^n")

    @property
    def n(self) -> int:
        return len(self.offset)

    @property
    def side(self) -> float:
        return self.size / self.resolution

    @property
    def volume(self) -> float:
        return self.side**self.n

    @property
    def x_lo(self) -> tuple[float, ...]:
        return tuple(k / self.resolution for k in self.offset)

    @property
    def x_hi(self) -> tuple[float, ...]:
        return tuple((k + self.size) / self.resolution for k in self.offset)

    def carleson_box(self) -> Box:
        return Box(0.0, self.side, self.x_lo, self.x_hi)


def test_cube_family(tree: TreeConfig, stride: int = 1) -> list[GridCube]:
    """Axis-parallel test cubes on the leaf grid, subsampled by stride.

    Sizes and offsets both step by ``stride``; the full dyadic family is
    always included regardless of the stride.  stride=1 enumerates every
    cube with corners on the 2^-depth grid.
    """
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    res = 2**tree.depth
    seen: set[tuple[tuple[int, ...], int]] = set()
    out: list[GridCube] = []

    def add(offset: tuple[int, ...], size: int) -> None:
        key = (offset, size)
        if key not in seen:
            seen.add(key)
            out.append(GridCube(offset, size, res))

    for size in range(1, res + 1, stride):
        hi = res - size
        offs = range(0, hi + 1, stride)
        for offset in itertools.product(offs, repeat=tree.n):
            add(offset, size)
    for j in range(tree.depth + 1):
        size = res >> j
        for offset in itertools.product(range(0, res - size + 1, size), repeat=tree.n):
            add(offset, size)
    out.sort(key=lambda c: (c.size, c.offset))
    return out
