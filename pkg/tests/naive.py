"""Slow reference implementations used to cross-check the library.

Everything here recomputes functionals from cube coordinates with plain
loops: no shared ancestor tables, no vectorized scatter, no reuse of the
library's traversal order.  Keep these dumb; they are the measuring stick.
"""

from __future__ import annotations

import numpy as np


def cube_list(n: int, depth: int) -> list[tuple[int, tuple[int, ...]]]:
    """All (level, coords) pairs in the library's flat order.

    Flat order is level-major with row-major coordinates inside a level
    (last axis fastest), matching numpy's C order.
    """
    out = []
    for level in range(depth + 1):
        side = 2**level
        for flat in range(side**n):
            coords = []
            rem = flat
            for _ in range(n):
                coords.append(rem % side)
                rem //= side
            out.append((level, tuple(reversed(coords))))
    return out


def contains(level_q: int, idx_q: tuple[int, ...], level_r: int, idx_r: tuple[int, ...]) -> bool:
    """Does cube Q (coarser) contain cube R?"""
    if level_r < level_q:
        return False
    shift = level_r - level_q
    return all((c >> shift) == q for c, q in zip(idx_r, idx_q))


def leaf_coords(n: int, depth: int) -> list[tuple[int, ...]]:
    side = 2**depth
    out = []
    for flat in range(side**n):
        coords = []
        rem = flat
        for _ in range(n):
            coords.append(rem % side)
            rem //= side
        out.append(tuple(reversed(coords)))
    return out


def nt_max(n: int, depth: int, values: np.ndarray) -> np.ndarray:
    """Leafwise max over the ancestor chain, from coordinates."""
    cubes = cube_list(n, depth)
    lookup = {c: v for c, v in zip(cubes, values)}
    out = []
    for leaf in leaf_coords(n, depth):
        m = 0.0
        for level in range(depth + 1):
            shift = depth - level
            key = (level, tuple(c >> shift for c in leaf))
            m = max(m, lookup[key])
        out.append(m)
    return np.array(out)


def subtree_sum(n: int, depth: int, values: np.ndarray, level_q: int, idx_q: tuple[int, ...]) -> float:
    cubes = cube_list(n, depth)
    return float(sum(v for (lev, idx), v in zip(cubes, values) if contains(level_q, idx_q, lev, idx)))


def carleson(n: int, depth: int, values: np.ndarray) -> np.ndarray:
    """Leafwise max of subtree sums over volume, from coordinates."""
    out = []
    for leaf in leaf_coords(n, depth):
        m = 0.0
        for level in range(depth + 1):
            shift = depth - level
            idx_q = tuple(c >> shift for c in leaf)
            vol = 2.0 ** (-level * n)
            m = max(m, subtree_sum(n, depth, values, level, idx_q) / vol)
        out.append(m)
    return np.array(out)


def maximal(n: int, depth: int, leaf_values: np.ndarray) -> np.ndarray:
    """Leafwise max of ancestor cube averages of a boundary function."""
    leaves = leaf_coords(n, depth)
    out = []
    for leaf in leaves:
        m = 0.0
        for level in range(depth + 1):
            shift = depth - level
            idx_q = tuple(c >> shift for c in leaf)
            members = [
                v
                for other, v in zip(leaves, leaf_values)
                if all((c >> shift) == q for c, q in zip(other, idx_q))
            ]
            m = max(m, sum(members) / len(members))
        out.append(m)
    return np.array(out)


def boundary_lp(leaf_values: np.ndarray, p: float, leaf_volume: float) -> float:
    if np.isinf(p):
        return float(np.max(np.abs(leaf_values), initial=0.0))
    return float((np.sum(np.abs(leaf_values) ** p) * leaf_volume) ** (1.0 / p))


def cell_bounds(n: int, depth: int, m: int, cube_level: int, cube_idx: tuple[int, ...], cell: int):
    """(t_lo, t_hi, x_lo tuple, x_hi tuple) of one cell, from coordinates."""
    side = 2.0**-cube_level
    sub = []
    rem = cell
    for _ in range(1 + n):
        sub.append(rem % m)
        rem //= m
    sub = tuple(reversed(sub))  # (t, x1, ..., xn)
    t_lo = side / 2.0 + sub[0] * (side / 2.0) / m
    t_hi = t_lo + (side / 2.0) / m
    x_lo = tuple(c * side + sub[1 + k] * side / m for k, c in enumerate(cube_idx))
    x_hi = tuple(lo + side / m for lo in x_lo)
    return t_lo, t_hi, x_lo, x_hi


def whitney_average(n, depth, m, values, q, region):
    """L_q average over the intersection of a box with the data domain.

    region = (t_lo, t_hi, x_lo tuple, x_hi tuple); loops every cell of
    every cube and intersects rectangles directly.
    """
    rt_lo, rt_hi, rx_lo, rx_hi = region
    num = 0.0
    vol = 0.0
    sup = 0.0
    for i, (level, idx) in enumerate(cube_list(n, depth)):
        for cell in range(m ** (1 + n)):
            t_lo, t_hi, x_lo, x_hi = cell_bounds(n, depth, m, level, idx, cell)
            dt = min(t_hi, rt_hi) - max(t_lo, rt_lo)
            if dt <= 0:
                continue
            dx = 1.0
            for k in range(n):
                d = min(x_hi[k], rx_hi[k]) - max(x_lo[k], rx_lo[k])
                if d <= 0:
                    dx = 0.0
                    break
                dx *= d
            if dx <= 0:
                continue
            v = values[i, cell]
            w = dt * dx
            vol += w
            sup = max(sup, v)
            if not np.isinf(q):
                num += w * v**q
    if vol == 0.0:
        raise ValueError("region misses the data domain")
    if np.isinf(q):
        return sup
    return (num / vol) ** (1.0 / q)


def box_integral(n, depth, m, values, power=1.0):
    """integrand -> exact integral over the whole data domain per cell sum."""
    total = 0.0
    for i, (level, idx) in enumerate(cube_list(n, depth)):
        for cell in range(m ** (1 + n)):
            t_lo, t_hi, x_lo, x_hi = cell_bounds(n, depth, m, level, idx, cell)
            w = (t_hi - t_lo) * float(np.prod([h - l for l, h in zip(x_lo, x_hi)]))
            total += w * values[i, cell] ** power
    return total


def area_integral_1d(depth, m, values, x, t_steps=4000):
    """Riemann quadrature of the clipped-cone square integral at one point.

    One spatial dimension only; integrates width-weighted g^2 over the cone
    |y - x| < t for t in (2^-(depth+1), 1] with a fine uniform t grid,
    computing the x-overlap of every cell exactly at each t sample.
    """
    t_min = 2.0 ** -(depth + 1)
    ts = np.linspace(t_min, 1.0, t_steps + 1)
    mids = 0.5 * (ts[1:] + ts[:-1])
    dt = ts[1] - ts[0]
    cells = []
    for i, (level, idx) in enumerate(cube_list(1, depth)):
        for cell in range(m**2):
            t_lo, t_hi, x_lo, x_hi = cell_bounds(1, depth, m, level, idx, cell)
            cells.append((t_lo, t_hi, x_lo[0], x_hi[0], values[i, cell]))
    total = 0.0
    for t in mids:
        y_lo = max(x - t, 0.0)
        y_hi = min(x + t, 1.0)
        acc = 0.0
        for t_lo, t_hi, cx_lo, cx_hi, v in cells:
            if t_lo < t <= t_hi and v:
                ov = min(cx_hi, y_hi) - max(cx_lo, y_lo)
                if ov > 0:
                    acc += ov * v * v
        total += acc / t * dt
    return float(np.sqrt(total))
