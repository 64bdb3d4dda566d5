"""Command-line interface.

Subcommands: norms, duality, equivalence, tent, multiplier, plus gen-field
and gen-grid to produce input files in the documented formats.  Reports go
to --out as deterministic JSON (and CSV for the suite commands, which also
render PNG figures next to the data unless --no-figures).

Exit codes: 0 success, 1 invariant failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import continuum as cont
from . import report as rpt
from . import serialize as ser
from .duality import (
    check_pairing_upper,
    extremal_f_for_carleson,
    extremal_g_for_ntmax,
    extremal_g_for_ntmax_p1,
    multiplier_norm_estimate,
)
from .fields import (
    BoundaryFunction,
    DyadicField,
    GridFunction,
    boundary_lp_norm,
    conjugate,
    random_field,
    random_grid,
    to_sequence,
)
from .functionals import (
    area_integral,
    carleson_continuum,
    carleson_dyadic,
    carleson_r_dyadic,
    maximal_dyadic,
    modified_carleson_norm,
    nt_max_continuum,
    nt_max_dyadic,
)
from .geometry import GeometryConfig, TreeConfig, test_cube_family
from .oracle import OracleConfig, oracle_vs_extremizer

REL_SLACK = 1e-12


def _float_or_inf(s: str) -> float:
    if s in ("inf", "infinity", "Inf"):
        return math.inf
    return float(s)


def _add_geometry(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--aperture", type=float, default=1.0, help="cone aperture (0 = vertical)")
    parser.add_argument("--c0", type=float, default=2.0, help="Whitney region height ratio")
    parser.add_argument("--c1", type=float, default=0.5, help="Whitney region width factor")


def _add_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", type=str, default=None, help="output base path (extension is derived)")
    parser.add_argument("--format", choices=("json", "csv"), default="json", help="primary report format")
    parser.add_argument("--no-figures", action="store_true", help="skip PNG figure rendering")


def _geo(args) -> GeometryConfig:
    return GeometryConfig(aperture=args.aperture, c0=args.c0, c1=args.c1)


def _out_paths(args) -> tuple[Path | None, Path | None]:
    if args.out is None:
        return None, None
    base = Path(args.out)
    if base.suffix in (".json", ".csv"):
        base = base.with_suffix("")
    base.parent.mkdir(parents=True, exist_ok=True)
    return base.with_suffix(".json"), base.with_suffix(".csv")


def _write_suite(args, doc: dict, rows: list[dict], fieldnames: list[str]) -> list[Path]:
    """Suite commands always write both JSON and CSV when --out is given."""
    json_path, csv_path = _out_paths(args)
    written = []
    if json_path is not None:
        written.append(ser.write_json(json_path, doc))
        written.append(ser.write_csv(csv_path, rows, fieldnames))
    return written


def cmd_gen_field(args) -> int:
    tree = TreeConfig(args.n, args.depth)
    a = random_field(args.seed, tree, args.dist)
    ser.save_field(args.out, a)
    print(f"wrote {args.out}")
    return 0


def cmd_gen_grid(args) -> int:
    tree = TreeConfig(args.n, args.depth)
    g = random_grid(args.seed, tree, args.m, args.dist)
    ser.save_grid(args.out, g)
    print(f"wrote {args.out}")
    return 0


def cmd_norms(args) -> int:
    data = ser.load_input(args.input)
    geo = _geo(args)
    p = args.p
    p_prime = args.pprime if args.pprime is not None else conjugate(p)
    norms: dict[str, float] = {}
    exactness: dict[str, str] = {}
    nodes = None
    if isinstance(data, DyadicField):
        kind = "field"
        m = None
        norms["nt_max_lp"] = boundary_lp_norm(nt_max_dyadic(data), p)
        norms["carleson_lp"] = boundary_lp_norm(carleson_dyadic(data), p_prime)
        exactness = {k: "exact" for k in norms}
    else:
        kind = "grid"
        m = data.m
        q, q_prime, r = args.q, args.qprime, args.r
        norms["nt_max_lp"] = boundary_lp_norm(nt_max_dyadic(to_sequence(data, q)), p)
        exactness["nt_max_lp"] = "exact"
        norms["carleson_r_lp"] = boundary_lp_norm(carleson_r_dyadic(data, r, q_prime), p_prime)
        exactness["carleson_r_lp"] = "exact"
        norms["nt_continuum_lp"] = boundary_lp_norm(nt_max_continuum(data, q, geo), p)
        exactness["nt_continuum_lp"] = "lower-approximate"
        family = test_cube_family(data.tree, args.stride)
        norms["carleson_continuum_lp"] = boundary_lp_norm(
            carleson_continuum(data, r, q_prime, family, geo), p_prime
        )
        exactness["carleson_continuum_lp"] = "lower-approximate"
        norms["area_integral_lp"] = boundary_lp_norm(area_integral(data), p)
        exactness["area_integral_lp"] = "quadrature"
        norms["modified_carleson"] = modified_carleson_norm(data, geo)
        exactness["modified_carleson"] = "lower-approximate"
        nodes = data.tree.num_cubes * data.cells_per_cube
    doc = {
        "command": "norms",
        "input": Path(args.input).name,
        "kind": kind,
        "n": data.tree.n,
        "depth": data.tree.depth,
        "m": m,
        "p": p,
        "p_prime": p_prime,
        "q": args.q,
        "q_prime": args.qprime,
        "r": args.r,
        "aperture": args.aperture,
        "c0": args.c0,
        "c1": args.c1,
        "stride": args.stride,
        "t_min": 2.0 ** -(data.tree.depth + 1),
        "evaluation_nodes": nodes,
        "norms": norms,
        "exactness": exactness,
    }
    for k, v in norms.items():
        print(f"{k:24s} {v:.12g}  [{exactness[k]}]")
    json_path, csv_path = _out_paths(args)
    if json_path is not None:
        if args.format == "json":
            ser.write_json(json_path, doc)
            print(f"wrote {json_path}")
        else:
            rows = [{"norm": k, "value": v, "exactness": exactness[k]} for k, v in norms.items()]
            ser.write_csv(csv_path, rows, ["norm", "value", "exactness"])
            print(f"wrote {csv_path}")
        if not args.no_figures:
            fig = rpt.save_norms_figure(json_path.with_name(json_path.stem + "_norms.png"), norms)
            print(f"wrote {fig}")
    return 0


def _duality_trial(tree: TreeConfig, seed: int, p: float, c_stop: float, dist: str, use_oracle: bool):
    """All constructions and invariant checks for one random (a, b) pair."""
    a = random_field(seed, tree, dist)
    b = random_field(seed + 10_000_019, tree, dist)
    rows = []
    failures = []

    def add(rep, **extra):
        row = {
            "seed": seed,
            "construction": rep.construction,
            "pairing": rep.pairing,
            "nt_norm": rep.nt_norm,
            "carleson_norm": rep.carleson_norm,
            "ratio": rep.ratio,
            "ok": True,
        }
        row.update(extra)
        rows.append(row)
        return row

    rep = check_pairing_upper(a, b, p)
    row = add(rep)
    if not rep.upper_bound_ok:
        row["ok"] = False
        failures.append(f"seed {seed}: pairing exceeds 2 * nt * carleson")

    p_prime = conjugate(p)
    a_ext, rep_f = extremal_f_for_carleson(b, p_prime)
    row = add(rep_f)
    if not rep_f.degenerate:
        if math.isinf(p_prime):
            if abs(rep_f.nt_norm - 1.0) > REL_SLACK or abs(rep_f.pairing - rep_f.carleson_norm) > REL_SLACK * max(1.0, rep_f.carleson_norm):
                row["ok"] = False
                failures.append(f"seed {seed}: p'=inf extremizer identities violated")
        else:
            cyb = carleson_dyadic(b)
            lhs = nt_max_dyadic(a_ext).values
            rhs = maximal_dyadic(cyb).values ** (p_prime - 1.0)
            trap = (2.0**p_prime - 1.0) / (1.0 - 2.0 ** (1.0 - p_prime))
            if not np.array_equal(lhs, rhs):
                row["ok"] = False
                failures.append(f"seed {seed}: extremizer pointwise identity violated")
            if rep_f.carleson_norm**p_prime > trap * rep_f.pairing * (1 + REL_SLACK):
                row["ok"] = False
                failures.append(f"seed {seed}: carleson norm escapes the pairing trap")

    if p > 1:
        b_ext, rep_g = extremal_g_for_ntmax(a, p)
        row = add(rep_g)
        if not rep_g.degenerate:
            lower = rep_g.nt_norm**p / (2.0**p - 1.0)
            bound = (1.0 - 2.0 ** (1.0 - p)) ** -1
            cyb = carleson_dyadic(b_ext).values
            cap = bound * maximal_dyadic(BoundaryFunction(tree, nt_max_dyadic(a).values ** (p - 1.0))).values
            if rep_g.pairing < lower * (1 - REL_SLACK):
                row["ok"] = False
                failures.append(f"seed {seed}: level-set pairing below its bound")
            if np.any(cyb > cap * (1 + REL_SLACK) + 1e-300):
                row["ok"] = False
                failures.append(f"seed {seed}: carleson functional escapes the maximal cap")
    else:
        b_ext, rep_g = extremal_g_for_ntmax_p1(a)
        row = add(rep_g)
        if not rep_g.degenerate:
            if rep_g.carleson_norm > 8.0 * (1 + REL_SLACK):
                row["ok"] = False
                failures.append(f"seed {seed}: stopping forest carleson norm exceeds 8")
            if rep_g.pairing < 0.25 * rep_g.nt_norm * (1 - REL_SLACK):
                row["ok"] = False
                failures.append(f"seed {seed}: stopping forest pairing below nt/4")

    if use_oracle:
        cfg = OracleConfig(starts=24)
        cmp_nt = oracle_vs_extremizer(b, p, "ntball", cfg)
        cmp_c = oracle_vs_extremizer(a, p_prime, "cball", cfg)
        for row in rows:
            if row["construction"] == "carleson-extremal":
                row["oracle_value"] = cmp_nt.oracle_value
                row["oracle_efficiency"] = cmp_nt.efficiency
            if row["construction"] in ("ntmax-extremal", "stopping-forest"):
                row["oracle_value"] = cmp_c.oracle_value
                row["oracle_efficiency"] = cmp_c.efficiency
        for cmp, which in ((cmp_nt, "ntball"), (cmp_c, "cball")):
            if not cmp.degenerate and cmp.extremizer_value > cmp.oracle_value * (1 + 1e-9):
                failures.append(f"seed {seed}: {which} oracle fell below the extremizer")
    return rows, failures


def cmd_duality(args) -> int:
    tree = TreeConfig(args.n, args.depth)
    use_oracle = args.oracle == "on" or (args.oracle == "auto" and tree.num_cubes <= 7)
    if use_oracle and tree.num_cubes > 31:
        print(f"error: oracle requested on a tree with {tree.num_cubes} > 31 cubes", file=sys.stderr)
        return 2
    rows: list[dict] = []
    failures: list[str] = []
    for i in range(args.trials):
        trial_rows, trial_failures = _duality_trial(
            tree, args.seed + i, args.p, args.c_stopping, args.dist, use_oracle
        )
        rows.extend(trial_rows)
        failures.extend(trial_failures)
    ratios = [r["ratio"] for r in rows] or [0.0]
    doc = {
        "command": "duality",
        "n": args.n,
        "depth": args.depth,
        "seed": args.seed,
        "trials": args.trials,
        "p": args.p,
        "p_prime": conjugate(args.p),
        "c_stopping": args.c_stopping,
        "dist": args.dist,
        "oracle": use_oracle,
        "ratio_min": min(ratios),
        "ratio_max": max(ratios),
        "failures": failures,
        "rows": rows,
    }
    fieldnames = [
        "seed", "construction", "pairing", "nt_norm", "carleson_norm", "ratio", "ok",
    ]
    if use_oracle:
        fieldnames += ["oracle_value", "oracle_efficiency"]
    print(f"duality: {args.trials} trials, ratio range [{min(ratios):.6g}, {max(ratios):.6g}]")
    for f in failures:
        print(f"FAIL {f}")
    written = _write_suite(args, doc, rows, fieldnames)
    json_path, _ = _out_paths(args)
    if json_path is not None and not args.no_figures and rows:
        written.append(rpt.save_duality_figure(json_path.with_name(json_path.stem + "_ratios.png"), rows))
    for w in written:
        print(f"wrote {w}")
    return 1 if failures else 0


def cmd_equivalence(args) -> int:
    depths = tuple(int(d) for d in args.depths.split(","))
    geo = _geo(args)
    rows = cont.nt_equivalence_suite(
        seeds=range(args.seeds), depths=depths, n=args.n, m=args.m, geo=geo, spec=args.dist
    )
    rows += cont.carleson_equivalence_suite(
        seeds=range(args.seeds), depths=depths, n=args.n, m=args.m, geo=geo,
        stride=args.stride, spec=args.dist,
    )
    envelope: dict[str, dict] = {}
    for row in rows:
        if row["suite"] == "nt":
            key = f"nt depth={row['depth']} p={row['p']} q={row['q']}"
        else:
            key = f"carleson depth={row['depth']} p'={row['p_prime']} q'={row['q_prime']}"
        e = envelope.setdefault(key, {"min": math.inf, "max": -math.inf})
        e["min"] = min(e["min"], row["ratio"])
        e["max"] = max(e["max"], row["ratio"])
    doc = {
        "command": "equivalence",
        "n": args.n,
        "depths": list(depths),
        "m": args.m,
        "stride": args.stride,
        "seeds": args.seeds,
        "dist": args.dist,
        "aperture": args.aperture,
        "c0": args.c0,
        "c1": args.c1,
        "envelope": envelope,
        "rows": rows,
    }
    fieldnames = [
        "suite", "seed", "n", "depth", "m", "stride",
        "p", "q", "p_prime", "q_prime", "continuum", "dyadic", "ratio",
    ]
    for key, e in envelope.items():
        print(f"{key:42s} ratio in [{e['min']:.4f}, {e['max']:.4f}]")
    written = _write_suite(args, doc, rows, fieldnames)
    json_path, _ = _out_paths(args)
    if json_path is not None and not args.no_figures:
        written.append(rpt.save_equivalence_figure(json_path.with_name(json_path.stem + "_equivalence.png"), rows))
    for w in written:
        print(f"wrote {w}")
    return 0


def cmd_tent(args) -> int:
    depths = tuple(int(d) for d in args.depths.split(","))
    rows = cont.tent_suite(
        seeds=range(args.seeds), depths=depths, n=args.n, m=args.m, p=args.p,
        geo=_geo(args), stride=args.stride, spec=args.dist,
    )
    ratios = [r["ratio"] for r in rows]
    doc = {
        "command": "tent",
        "n": args.n,
        "depths": list(depths),
        "m": args.m,
        "stride": args.stride,
        "seeds": args.seeds,
        "p": args.p,
        "dist": args.dist,
        "ratio_min": min(ratios),
        "ratio_max": max(ratios),
        "rows": rows,
    }
    fieldnames = ["suite", "seed", "n", "depth", "m", "stride", "p", "carleson", "area", "ratio"]
    print(f"tent: p={args.p}, ratio range [{min(ratios):.4f}, {max(ratios):.4f}]")
    written = _write_suite(args, doc, rows, fieldnames)
    json_path, _ = _out_paths(args)
    if json_path is not None and not args.no_figures:
        written.append(rpt.save_tent_figure(json_path.with_name(json_path.stem + "_tent.png"), rows))
    for w in written:
        print(f"wrote {w}")
    return 0


def cmd_multiplier(args) -> int:
    tree = TreeConfig(args.n, args.depth)
    g = random_grid(args.seed, tree, args.m, args.dist)
    rep = multiplier_norm_estimate(
        g, args.p, args.q, args.r, budget=args.budget, geo=_geo(args),
        stride=args.stride, seed=args.seed,
    )
    doc = {
        "command": "multiplier",
        "n": args.n,
        "depth": args.depth,
        "m": args.m,
        "seed": args.seed,
        "dist": args.dist,
        "p": rep.p,
        "q": rep.q,
        "r": rep.r,
        "budget": args.budget,
        "stride": args.stride,
        "lower_estimate": rep.lower_estimate,
        "lower_estimate_dyadic": rep.lower_estimate_dyadic,
        "best_candidate": rep.best_candidate,
        "carleson_r_dyadic_norm": rep.carleson_r_dyadic_norm,
        "carleson_r_continuum_norm": rep.carleson_r_continuum_norm,
        "modified_carleson": rep.modified_carleson,
        "certified_constant": rep.certified_constant,
        "certified_upper_ok": rep.certified_upper_ok,
        "candidate_values": list(rep.candidate_values),
    }
    print(f"multiplier lower estimate: {rep.lower_estimate:.6g} (best: {rep.best_candidate})")
    print(f"dyadic carleson norm: {rep.carleson_r_dyadic_norm:.6g}, continuum: {rep.carleson_r_continuum_norm:.6g}")
    rows = [{"candidate": name, "value": val} for name, val in
            zip([f"candidate-{i}" for i in range(len(rep.candidate_values))], rep.candidate_values)]
    written = _write_suite(args, doc, rows, ["candidate", "value"])
    json_path, _ = _out_paths(args)
    if json_path is not None and not args.no_figures:
        written.append(rpt.save_multiplier_figure(json_path.with_name(json_path.stem + "_multiplier.png"), doc))
    for w in written:
        print(f"wrote {w}")
    return 0 if rep.certified_upper_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="carleson", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gf = sub.add_parser("gen-field", help="write a random field file")
    gf.add_argument("--n", type=int, default=1)
    gf.add_argument("--depth", type=int, default=4)
    gf.add_argument("--seed", type=int, default=0)
    gf.add_argument("--dist", type=str, default="uniform")
    gf.add_argument("--out", type=str, required=True)
    gf.set_defaults(func=cmd_gen_field)

    gg = sub.add_parser("gen-grid", help="write a random grid file")
    gg.add_argument("--n", type=int, default=1)
    gg.add_argument("--depth", type=int, default=4)
    gg.add_argument("--m", type=int, default=2)
    gg.add_argument("--seed", type=int, default=0)
    gg.add_argument("--dist", type=str, default="uniform")
    gg.add_argument("--out", type=str, required=True)
    gg.set_defaults(func=cmd_gen_grid)

    no = sub.add_parser("norms", help="functional norms of a field or grid file")
    no.add_argument("--input", type=str, required=True)
    no.add_argument("--p", type=_float_or_inf, default=2.0)
    no.add_argument("--pprime", type=_float_or_inf, default=None)
    no.add_argument("--q", type=_float_or_inf, default=2.0)
    no.add_argument("--qprime", type=_float_or_inf, default=2.0)
    no.add_argument("--r", type=float, default=1.0)
    no.add_argument("--stride", type=int, default=1)
    _add_geometry(no)
    _add_output(no)
    no.set_defaults(func=cmd_norms)

    du = sub.add_parser("duality", help="pairing bound and extremizer suite on random fields")
    du.add_argument("--n", type=int, default=1)
    du.add_argument("--depth", type=int, default=4)
    du.add_argument("--seed", type=int, default=0)
    du.add_argument("--trials", type=int, default=50)
    du.add_argument("--p", type=float, default=2.0)
    du.add_argument("--c-stopping", dest="c_stopping", type=float, default=0.125)
    du.add_argument("--dist", type=str, default="uniform")
    du.add_argument("--oracle", choices=("auto", "on", "off"), default="auto")
    _add_output(du)
    du.set_defaults(func=cmd_duality)

    eq = sub.add_parser("equivalence", help="dyadic vs continuum norm suites")
    eq.add_argument("--n", type=int, default=1)
    eq.add_argument("--depths", type=str, default="4,6")
    eq.add_argument("--m", type=int, default=2)
    eq.add_argument("--seeds", type=int, default=50)
    eq.add_argument("--stride", type=int, default=2)
    eq.add_argument("--dist", type=str, default="mixed")
    _add_geometry(eq)
    _add_output(eq)
    eq.set_defaults(func=cmd_equivalence)

    te = sub.add_parser("tent", help="square function vs carleson tent norms (p > 2)")
    te.add_argument("--n", type=int, default=1)
    te.add_argument("--depths", type=str, default="4,6")
    te.add_argument("--m", type=int, default=2)
    te.add_argument("--seeds", type=int, default=20)
    te.add_argument("--p", type=float, default=4.0)
    te.add_argument("--stride", type=int, default=2)
    te.add_argument("--dist", type=str, default="mixed")
    _add_geometry(te)
    _add_output(te)
    te.set_defaults(func=cmd_tent)

    mu = sub.add_parser("multiplier", help="multiplier norm lower estimate for a random grid")
    mu.add_argument("--n", type=int, default=1)
    mu.add_argument("--depth", type=int, default=4)
    mu.add_argument("--m", type=int, default=2)
    mu.add_argument("--seed", type=int, default=0)
    mu.add_argument("--p", type=float, default=2.0)
    mu.add_argument("--q", type=_float_or_inf, default=2.0)
    mu.add_argument("--r", type=float, default=2.0)
    mu.add_argument("--budget", type=int, default=16)
    mu.add_argument("--stride", type=int, default=1)
    mu.add_argument("--dist", type=str, default="uniform")
    _add_geometry(mu)
    _add_output(mu)
    mu.set_defaults(func=cmd_multiplier)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "tent" and not args.p > 2:
        parser.error(f"tent comparison requires p > 2, got {args.p}")
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
