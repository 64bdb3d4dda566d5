"""Brute-force dual norms on small trees.

dual_norm_wrt_ntball(b, p) searches sup { <a, b> : ||N a||_p <= 1, a >= 0 }
and dual_norm_wrt_cball(a, p') the mirror image with the Carleson ball.
Both are computed as scale-invariant ratio maximizations over the simplex
with multi-start projected ascent; the duality-module extremizers serve as
warm starts.  A second, independent layer certifies the optimum on trees
with at most 7 cubes by branch and bound over dyadic sub-boxes, using the
coordinatewise monotonicity of the pairing and of both ball norms.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .fields import DyadicField, conjugate
from .geometry import TreeConfig, tree_tables

__all__ = [
    "OracleConfig",
    "OracleComparison",
    "ExhaustiveResult",
    "dual_norm_wrt_ntball",
    "dual_norm_wrt_cball",
    "exhaustive_dual_norm",
    "oracle_vs_extremizer",
]


@dataclass(frozen=True)
class OracleConfig:
    max_cubes: int = 31
    starts: int = 64
    max_iters: int = 10_000
    rel_tol: float = 1e-10
    seed: int = 0


_DEFAULT = OracleConfig()


def _project_simplex(v: np.ndarray) -> np.ndarray:
    # Euclidean projection onto {x >= 0, sum x = 1} (sort and clip)
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    rho = np.nonzero(u * np.arange(1, len(v) + 1) > (css - 1.0))[0][-1]
    theta = (css[rho] - 1.0) / (rho + 1)
    return np.maximum(v - theta, 0.0)


class _NtBallProblem:
    """ratio(x) = <b, x> / ||N x||_p over x >= 0."""

    def __init__(self, b: DyadicField, p: float) -> None:
        self.tree = b.tree
        self.b = b.values
        self.p = p
        t = tree_tables(b.tree)
        self.leaf_anc = t.leaf_anc
        self.mu = b.tree.leaf_volume
        self.size = b.tree.num_cubes

    def norm(self, x: np.ndarray) -> float:
        na = x[self.leaf_anc].max(axis=1)
        if math.isinf(self.p):
            return float(na.max(initial=0.0))
        return float((np.sum(na**self.p) * self.mu) ** (1.0 / self.p))

    def norm_batch(self, xs: np.ndarray) -> np.ndarray:
        na = xs[:, self.leaf_anc].max(axis=2)
        if math.isinf(self.p):
            return na.max(axis=1)
        return (np.sum(na**self.p, axis=1) * self.mu) ** (1.0 / self.p)

    def pair(self, x: np.ndarray) -> float:
        return float(np.dot(self.b, x))

    def pair_batch(self, xs: np.ndarray) -> np.ndarray:
        return xs @ self.b

    def ratio(self, x: np.ndarray) -> float:
        v = self.norm(x)
        return self.pair(x) / v if v > 0 else 0.0

    def norm_and_grad(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        """Ball norm and one subgradient (zero vector at the origin)."""
        vals = x[self.leaf_anc]
        arg = vals.argmax(axis=1)
        na = vals[np.arange(len(arg)), arg]
        winners = self.leaf_anc[np.arange(len(arg)), arg]
        gv = np.zeros(self.size)
        if math.isinf(self.p):
            v = float(na.max(initial=0.0))
            if v > 0:
                gv[winners[int(na.argmax())]] = 1.0
        else:
            v = float((np.sum(na**self.p) * self.mu) ** (1.0 / self.p))
            if v > 0:
                coef = self.mu * na ** (self.p - 1.0) * v ** (1.0 - self.p)
                np.add.at(gv, winners, coef)
        return v, gv

    @property
    def linear(self) -> np.ndarray:
        return self.b

    def ratio_grad(self, x: np.ndarray) -> np.ndarray:
        v, gv = self.norm_and_grad(x)
        if v <= 0:
            return self.b.copy()
        u = self.pair(x)
        return (self.b * v - u * gv) / (v * v)

    def convex_start(self, x_init: np.ndarray) -> np.ndarray | None:
        """Solve max <b, x> over the unit ball as a convex program.

        Auxiliary leaf variables u_j >= x_Q for every ancestor turn the max
        inside the ball norm into linear constraints, leaving a smooth
        problem (an LP when p = 1).  The returned point is only a candidate;
        the caller re-evaluates the exact ratio, so solver hiccups cost
        nothing but the candidate.
        """
        n_leaves, depth1 = self.leaf_anc.shape
        size = self.size
        dim = size + n_leaves
        rows = []
        for j in range(n_leaves):
            for k in range(depth1):
                row = np.zeros(dim)
                row[self.leaf_anc[j, k]] = 1.0
                row[size + j] = -1.0
                rows.append(row)
        a_lin = np.array(rows)  # a_lin @ z <= 0  <=>  x_Q <= u_j
        cost = np.zeros(dim)
        cost[:size] = -self.b
        try:
            if self.p == 1.0:
                norm_row = np.zeros(dim)
                norm_row[size:] = self.mu
                res = optimize.linprog(
                    cost,
                    A_ub=np.vstack([a_lin, norm_row]),
                    b_ub=np.concatenate([np.zeros(len(a_lin)), [1.0]]),
                    bounds=(0.0, None),
                    method="highs",
                )
                if not res.success:
                    return None
                return np.maximum(res.x[:size], 0.0)
            cap = self.mu ** (-1.0 / self.p)
            x0 = np.asarray(x_init, dtype=float)
            u0 = x0[self.leaf_anc].max(axis=1)
            scale = float((np.sum(u0**self.p) * self.mu) ** (1.0 / self.p))
            if scale <= 0:
                return None
            z0 = np.concatenate([x0, u0]) * (0.9 / scale)
            p = self.p
            mu = self.mu

            def ball(z):
                return 1.0 - mu * np.sum(z[size:] ** p)

            def ball_jac(z):
                out = np.zeros(dim)
                out[size:] = -p * mu * z[size:] ** (p - 1.0)
                return out

            res = optimize.minimize(
                lambda z: float(cost @ z),
                z0,
                jac=lambda z: cost,
                bounds=[(0.0, cap)] * dim,
                constraints=[
                    {"type": "ineq", "fun": lambda z: -(a_lin @ z), "jac": lambda z: -a_lin},
                    {"type": "ineq", "fun": ball, "jac": ball_jac},
                ],
                method="SLSQP",
                options={"maxiter": 200, "ftol": 1e-14},
            )
            x = np.maximum(res.x[:size], 0.0)
            return x if np.all(np.isfinite(x)) else None
        except (ValueError, optimize.OptimizeWarning):
            return None


class _CBallProblem:
    """ratio(x) = <a, x> / ||C x||_p' over x >= 0."""

    def __init__(self, a: DyadicField, p_prime: float) -> None:
        self.tree = a.tree
        self.a = a.values
        self.p = p_prime
        t = tree_tables(a.tree)
        self.leaf_anc = t.leaf_anc
        self.volume = t.volume
        self.mu = a.tree.leaf_volume
        self.size = a.tree.num_cubes
        # dense descendant matrix: D[i, j] = 1 iff cube j lies inside cube i
        d = np.zeros((self.size, self.size))
        for j_level in range(a.tree.depth + 1):
            anc = t.ancestor_at_level(j_level)
            rows = anc[anc >= 0]
            cols = np.nonzero(anc >= 0)[0]
            d[rows, cols] = 1.0
        self.desc = d
        self.desc_lists = [np.nonzero(d[i])[0] for i in range(self.size)]

    def _cb(self, x: np.ndarray) -> np.ndarray:
        s = (self.desc @ x) / self.volume
        return s[self.leaf_anc].max(axis=1)

    def norm(self, x: np.ndarray) -> float:
        cb = self._cb(x)
        if math.isinf(self.p):
            return float(cb.max(initial=0.0))
        return float((np.sum(cb**self.p) * self.mu) ** (1.0 / self.p))

    def norm_batch(self, xs: np.ndarray) -> np.ndarray:
        s = (xs @ self.desc.T) / self.volume
        cb = s[:, self.leaf_anc].max(axis=2)
        if math.isinf(self.p):
            return cb.max(axis=1)
        return (np.sum(cb**self.p, axis=1) * self.mu) ** (1.0 / self.p)

    def pair(self, x: np.ndarray) -> float:
        return float(np.dot(self.a, x))

    def pair_batch(self, xs: np.ndarray) -> np.ndarray:
        return xs @ self.a

    def ratio(self, x: np.ndarray) -> float:
        v = self.norm(x)
        return self.pair(x) / v if v > 0 else 0.0

    def norm_and_grad(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        """Ball norm and one subgradient (zero vector at the origin)."""
        s = (self.desc @ x) / self.volume
        vals = s[self.leaf_anc]
        arg = vals.argmax(axis=1)
        cb = vals[np.arange(len(arg)), arg]
        winners = self.leaf_anc[np.arange(len(arg)), arg]
        gv = np.zeros(self.size)
        if math.isinf(self.p):
            v = float(cb.max(initial=0.0))
            if v > 0:
                q = winners[int(cb.argmax())]
                gv[self.desc_lists[q]] = 1.0 / self.volume[q]
        else:
            v = float((np.sum(cb**self.p) * self.mu) ** (1.0 / self.p))
            if v > 0:
                coef = self.mu * cb ** (self.p - 1.0) * v ** (1.0 - self.p)
                for i, q in enumerate(winners):
                    gv[self.desc_lists[q]] += coef[i] / self.volume[q]
        return v, gv

    @property
    def linear(self) -> np.ndarray:
        return self.a

    def ratio_grad(self, x: np.ndarray) -> np.ndarray:
        v, gv = self.norm_and_grad(x)
        if v <= 0:
            return self.a.copy()
        u = self.pair(x)
        return (self.a * v - u * gv) / (v * v)

    def convex_start(self, x_init: np.ndarray) -> np.ndarray | None:
        """Convex-program candidate, mirror image of the maximal-side one.

        Leaf variables v_j bound the subtree averages of every ancestor, so
        the constraint set is linear plus one smooth ball (an LP outright
        when p' = inf, where the ball turns into per-cube average caps).
        """
        n_leaves, depth1 = self.leaf_anc.shape
        size = self.size
        avg_rows = self.desc / self.volume[:, None]
        try:
            if math.isinf(self.p):
                res = optimize.linprog(
                    -self.a,
                    A_ub=avg_rows,
                    b_ub=np.ones(size),
                    bounds=(0.0, None),
                    method="highs",
                )
                if not res.success:
                    return None
                return np.maximum(res.x, 0.0)
            dim = size + n_leaves
            rows = []
            for j in range(n_leaves):
                for k in range(depth1):
                    row = np.zeros(dim)
                    row[:size] = avg_rows[self.leaf_anc[j, k]]
                    row[size + j] -= 1.0
                    rows.append(row)
            a_lin = np.array(rows)  # a_lin @ z <= 0  <=>  avg_Q(b) <= v_j
            cost = np.zeros(dim)
            cost[:size] = -self.a
            cap = self.mu ** (-1.0 / self.p)
            x0 = np.asarray(x_init, dtype=float)
            v0 = self._cb(x0)
            scale = float((np.sum(v0**self.p) * self.mu) ** (1.0 / self.p))
            if scale <= 0:
                return None
            z0 = np.concatenate([x0, v0]) * (0.9 / scale)
            p = self.p
            mu = self.mu

            def ball(z):
                return 1.0 - mu * np.sum(z[size:] ** p)

            def ball_jac(z):
                out = np.zeros(dim)
                out[size:] = -p * mu * z[size:] ** (p - 1.0)
                return out

            res = optimize.minimize(
                lambda z: float(cost @ z),
                z0,
                jac=lambda z: cost,
                bounds=[(0.0, cap)] * dim,
                constraints=[
                    {"type": "ineq", "fun": lambda z: -(a_lin @ z), "jac": lambda z: -a_lin},
                    {"type": "ineq", "fun": ball, "jac": ball_jac},
                ],
                method="SLSQP",
                options={"maxiter": 200, "ftol": 1e-14},
            )
            x = np.maximum(res.x[:size], 0.0)
            return x if np.all(np.isfinite(x)) else None
        except (ValueError, optimize.OptimizeWarning):
            return None


def _ascend(problem, x0: np.ndarray, cfg: OracleConfig) -> tuple[np.ndarray, float]:
    x = _project_simplex(np.asarray(x0, dtype=float))
    best = problem.ratio(x)
    step = 1.0
    stall = 0
    for _ in range(cfg.max_iters):
        g = problem.ratio_grad(x)
        gn = float(np.linalg.norm(g))
        if gn == 0.0:
            break
        moved = False
        s = step
        while s > 1e-14:
            cand = _project_simplex(x + (s / gn) * g)
            val = problem.ratio(cand)
            if val > best:
                gain = val - best
                x, best = cand, val
                step = min(2.0 * s, 1.0)
                moved = True
                if gain <= cfg.rel_tol * max(best, 1e-300):
                    stall += 1
                else:
                    stall = 0
                break
            s /= 2.0
        if not moved or stall >= 5:
            break
    return x, best


def _polish(problem, x: np.ndarray, best: float, cfg: OracleConfig) -> tuple[np.ndarray, float]:
    """Parametric polish: anchor t at the current ratio and push the concave
    surrogate pair(y) - t * norm(y) above zero with projected subgradients.

    The plain ratio ascent can stall on a kink of the ball norm; the
    surrogate is concave, so diminishing-step subgradient moves still make
    progress there, and any point with a positive surrogate value strictly
    improves the ratio.
    """
    c = problem.linear
    for _ in range(24):
        t = best
        y = x.copy()
        improved = False
        base = 0.25
        for k in range(300):
            v, gv = problem.norm_and_grad(y)
            g = c - t * gv
            gn = float(np.linalg.norm(g))
            if gn == 0.0:
                break
            y = _project_simplex(y + (base / math.sqrt(k + 1.0) / gn) * g)
            r = problem.ratio(y)
            if r > best:
                x, best = y.copy(), r
                improved = True
        if not improved:
            break
        x, best = _ascend(problem, x, cfg)
    return x, best


def _search(problem, cfg: OracleConfig, warm_starts) -> float:
    size = problem.size
    # every vertex is a candidate and a potential basin
    eye = np.eye(size)
    vertex_vals = np.array([problem.ratio(eye[i]) for i in range(size)])
    best = float(vertex_vals.max(initial=0.0))
    best_x = eye[int(vertex_vals.argmax())] if size else np.zeros(0)
    starts = [eye[i] for i in np.argsort(vertex_vals)[::-1][:4]]
    if warm_starts is not None:
        for w in warm_starts:
            w = np.asarray(w, dtype=float)
            if w.shape == (size,) and w.sum() > 0:
                starts.append(w / w.sum())
    rng = np.random.default_rng(cfg.seed)
    for _ in range(max(0, cfg.starts - len(starts))):
        starts.append(rng.dirichlet(np.ones(size)))
    for x0 in starts:
        x, val = _ascend(problem, x0, cfg)
        if val > best:
            best_x, best = x, val
    cx = problem.convex_start(best_x)
    if cx is not None and cx.sum() > 0:
        x, val = _ascend(problem, cx / cx.sum(), cfg)
        if val > best:
            best_x, best = x, val
    _, best = _polish(problem, best_x, best, cfg)
    return best


def _guard_size(tree: TreeConfig, cfg: OracleConfig) -> None:
    if tree.num_cubes > cfg.max_cubes:
        raise ValueError(
            f"tree has {tree.num_cubes} cubes, oracle is capped at {cfg.max_cubes}"
        )


def dual_norm_wrt_ntball(
    b: DyadicField,
    p: float,
    config: OracleConfig = _DEFAULT,
    warm_starts=None,
) -> float:
    """sup of <a, b> over a >= 0 with ||N a||_p <= 1 (p finite)."""
    if p < 1 or math.isinf(p):
        raise ValueError(f"p must satisfy 1 <= p < inf, got {p}")
    _guard_size(b.tree, config)
    if not b.values.any():
        return 0.0
    return _search(_NtBallProblem(b, p), config, warm_starts)


def dual_norm_wrt_cball(
    a: DyadicField,
    p_prime: float,
    config: OracleConfig = _DEFAULT,
    warm_starts=None,
) -> float:
    """sup of <a, b> over b >= 0 with ||C b||_p' <= 1 (1 < p' <= inf)."""
    if p_prime <= 1:
        raise ValueError(f"p_prime must satisfy 1 < p_prime <= inf, got {p_prime}")
    _guard_size(a.tree, config)
    if not a.values.any():
        return 0.0
    return _search(_CBallProblem(a, p_prime), config, warm_starts)


@dataclass(frozen=True)
class ExhaustiveResult:
    lower: float
    upper: float
    nodes: int
    certified: bool


class _EnvelopeAdapter:
    """Maximal-side dual norm written over leaf envelopes.

    For u >= 0 on the leaves put x_Q = min over the leaves of Q of u; then
    the pairing equals sum_Q b_Q min_leaf u and the ball norm is a plain
    weighted p-norm of u, while every x arises this way from u = N x with
    the same or better ratio.  The numerator is concave (a sum of mins), so
    tangents overestimate it; the denominator is a smooth convex norm, so
    tangents underestimate it.  Branching runs over the leaves only.
    """

    def __init__(self, b: DyadicField, p: float) -> None:
        t = tree_tables(b.tree)
        self.b = b.values
        self.p = p
        self.mu = b.tree.leaf_volume
        self.dim = b.tree.num_leaves
        depth, n = b.tree.depth, b.tree.n
        starts, counts = [], []
        for i in range(b.tree.num_cubes):
            lev = int(t.level[i])
            per = 2 ** ((depth - lev) * n)
            starts.append((i - t.offsets[lev]) * per)
            counts.append(per)
        self.slices = [slice(s, s + c) for s, c in zip(starts, counts)]

    def num_exact(self, u: np.ndarray) -> float:
        return float(sum(w * u[s].min() for w, s in zip(self.b, self.slices) if w))

    def num_batch(self, us: np.ndarray) -> np.ndarray:
        out = np.zeros(len(us))
        for w, s in zip(self.b, self.slices):
            if w:
                out += w * us[:, s].min(axis=1)
        return out

    def num_tangent(self, u0: np.ndarray) -> tuple[float, np.ndarray]:
        g = np.zeros(self.dim)
        val = 0.0
        for w, s in zip(self.b, self.slices):
            if w:
                j = int(np.argmin(u0[s]))
                g[s.start + j] += w
                val += w * u0[s.start + j]
        return val, g

    def den_exact(self, u: np.ndarray) -> float:
        return float((np.sum(u**self.p) * self.mu) ** (1.0 / self.p))

    def den_batch(self, us: np.ndarray) -> np.ndarray:
        return (np.sum(us**self.p, axis=1) * self.mu) ** (1.0 / self.p)

    def den_tangent(self, u0: np.ndarray) -> tuple[float, np.ndarray]:
        v = self.den_exact(u0)
        if v <= 0:
            return 0.0, np.zeros(self.dim)
        return v, self.mu * u0 ** (self.p - 1.0) * v ** (1.0 - self.p)

    def ratio(self, u: np.ndarray) -> float:
        v = self.den_exact(u)
        return self.num_exact(u) / v if v > 0 else 0.0


class _BoxAdapter:
    """Plain-coordinate view of a ball problem for the branch and bound."""

    def __init__(self, problem) -> None:
        self.problem = problem
        self.c = problem.linear
        self.dim = problem.size
        # every subtree average is one piece of the Carleson envelope, so
        # each row is a global linear lower bound on the ball norm (times
        # the single-leaf mass for finite exponents)
        if math.isinf(problem.p):
            factor = 1.0
        else:
            factor = problem.mu ** (1.0 / problem.p)
        self.den_rows = factor * problem.desc / problem.volume[:, None]

    def num_exact(self, x: np.ndarray) -> float:
        return float(self.c @ x)

    def num_batch(self, xs: np.ndarray) -> np.ndarray:
        return xs @ self.c

    def num_tangent(self, x0: np.ndarray) -> tuple[float, np.ndarray]:
        return float(self.c @ x0), self.c

    def den_exact(self, x: np.ndarray) -> float:
        return self.problem.norm(x)

    def den_batch(self, xs: np.ndarray) -> np.ndarray:
        return self.problem.norm_batch(xs)

    def den_tangent(self, x0: np.ndarray) -> tuple[float, np.ndarray]:
        return self.problem.norm_and_grad(x0)

    def ratio(self, x: np.ndarray) -> float:
        return self.problem.ratio(x)


def exhaustive_dual_norm(
    field: DyadicField,
    exponent: float,
    direction: str,
    rel_gap: float = 1e-4,
    max_nodes: int = 400_000,
) -> ExhaustiveResult:
    """Certified enclosure of the dual norm on trees with <= 7 cubes.

    Branch and bound over dyadic sub-boxes of the faces {x_i = 1} of the
    unit cube (the ratio is scale invariant, so the faces see every
    direction).  Upper bounds per box come from the monotone envelope
    num(hi) / den(lo) and from linear-fractional bounds with the numerator
    linearized from above and the denominator from below at three anchors;
    lower bounds from exact ratios at the box corners and midpoint.
    """
    if field.tree.num_cubes > 7:
        raise ValueError("exhaustive check is limited to trees with <= 7 cubes")
    if direction == "ntball":
        if exponent < 1 or math.isinf(exponent):
            raise ValueError(f"p must satisfy 1 <= p < inf, got {exponent}")
        adapter = _EnvelopeAdapter(field, exponent)
    elif direction == "cball":
        if exponent <= 1:
            raise ValueError(f"p_prime must satisfy 1 < p_prime <= inf, got {exponent}")
        adapter = _BoxAdapter(_CBallProblem(field, exponent))
    else:
        raise ValueError(f"direction must be 'ntball' or 'cball', got {direction!r}")
    if not field.values.any():
        return ExhaustiveResult(0.0, 0.0, 0, True)
    dim = adapter.dim
    # all 0/1 corners, reused for every box
    corners = ((np.arange(2**dim)[:, None] >> np.arange(dim)) & 1).astype(float)

    heap: list[tuple[float, int, np.ndarray, np.ndarray]] = []
    counter = 0
    best = 0.0

    def push(lo: np.ndarray, hi: np.ndarray) -> None:
        nonlocal counter, best
        num_hi = adapter.num_exact(hi)
        if num_hi <= 0.0:
            return
        mid = 0.5 * (lo + hi)
        verts = lo + corners * (hi - lo)
        num = adapter.num_batch(verts)
        den = adapter.den_batch(verts)
        pos = den > 0.0
        if np.any(pos):
            best = max(best, float((num[pos] / den[pos]).max()))
        best = max(best, adapter.ratio(mid))
        v_lo = adapter.den_exact(lo)
        upper = num_hi / v_lo if v_lo > 0.0 else math.inf
        for anchor in (mid, lo, hi):
            n_a, gn = adapter.num_tangent(anchor)
            d_a, gd = adapter.den_tangent(anchor)
            den_lb = d_a + (verts - anchor) @ gd
            if den_lb.min() <= 0.0:
                continue
            num_ub = n_a + (verts - anchor) @ gn
            upper = min(upper, float((num_ub / den_lb).max()))
        rows = getattr(adapter, "den_rows", None)
        if rows is not None:
            # single pieces, plus mixtures of the pieces that tie near the
            # top at the midpoint (a tie is where single-piece tangents go
            # loose, and any convex combination stays a valid lower bound)
            cand = [rows]
            piece_mid = rows @ mid
            top = piece_mid.max()
            if top > 0:
                active = piece_mid >= 0.9 * top
                if active.sum() > 1:
                    cand.append(rows[active].mean(axis=0)[None, :])
            all_rows = np.vstack(cand)
            den_lb = verts @ all_rows.T
            ok = den_lb.min(axis=0) > 0.0
            if np.any(ok):
                # the numerator is linear here, so each column gives a
                # vertex-attained linear-fractional bound
                upper = min(upper, float((num[:, None] / den_lb[:, ok]).max(axis=0).min()))
        if upper <= best:
            return
        heapq.heappush(heap, (-upper, counter, lo, hi))
        counter += 1

    for i in range(dim):
        lo = np.zeros(dim)
        hi = np.ones(dim)
        lo[i] = 1.0
        push(lo, hi)

    nodes = 0
    certified = False
    top_upper = best
    while heap and nodes < max_nodes:
        neg_upper, _, lo, hi = heapq.heappop(heap)
        top_upper = -neg_upper
        if top_upper <= best * (1.0 + rel_gap):
            certified = True
            break
        nodes += 1
        width = hi - lo
        # split where the bound is most sensitive, but keep every wide
        # coordinate eligible so all of them shrink eventually
        mid_point = 0.5 * (lo + hi)
        _, gn = adapter.num_tangent(mid_point)
        _, gd = adapter.den_tangent(mid_point)
        sens = np.abs(gn - best * gd)
        score = width * (sens + sens.mean() + 1e-300)
        d = int(np.argmax(score))
        mid = 0.5 * (lo[d] + hi[d])
        hi_left = hi.copy()
        hi_left[d] = mid
        lo_right = lo.copy()
        lo_right[d] = mid
        push(lo, hi_left)
        push(lo_right, hi)
    if not heap:
        certified = True
        top_upper = best
    return ExhaustiveResult(lower=best, upper=max(best, top_upper), nodes=nodes, certified=certified)


@dataclass(frozen=True)
class OracleComparison:
    oracle_value: float
    extremizer_value: float
    efficiency: float
    degenerate: bool


def oracle_vs_extremizer(
    field: DyadicField,
    exponent: float,
    direction: str,
    config: OracleConfig = _DEFAULT,
) -> OracleComparison:
    """Optimizer value vs the value achieved by the matching construction.

    direction="ntball": field is the Carleson-side b, exponent is p, and the
    construction is the maximal-side extremizer; direction="cball": field is
    the maximal-side a, exponent is p', construction per 1 < p' < inf or
    p' = inf (stopping forest).
    """
    from .duality import extremal_f_for_carleson, extremal_g_for_ntmax, extremal_g_for_ntmax_p1

    if direction == "ntball":
        p = exponent
        a, rep = extremal_f_for_carleson(field, conjugate(p))
        achieved = rep.pairing / rep.nt_norm if rep.nt_norm > 0 else 0.0
        oracle = dual_norm_wrt_ntball(field, p, config, warm_starts=[a.values])
    elif direction == "cball":
        p_prime = exponent
        if math.isinf(p_prime):
            b, rep = extremal_g_for_ntmax_p1(field)
        else:
            b, rep = extremal_g_for_ntmax(field, conjugate(p_prime))
        achieved = rep.pairing / rep.carleson_norm if rep.carleson_norm > 0 else 0.0
        oracle = dual_norm_wrt_cball(field, p_prime, config, warm_starts=[b.values])
    else:
        raise ValueError(f"direction must be 'ntball' or 'cball', got {direction!r}")
    degenerate = not field.values.any()
    eff = achieved / oracle if oracle > 0 else math.nan
    return OracleComparison(
        oracle_value=float(oracle),
        extremizer_value=float(achieved),
        efficiency=float(eff),
        degenerate=degenerate,
    )
