"""Command-line front end.

Every subcommand writes a deterministic report (JSON with ``"schema": 1`` or
CSV with a fixed header) to stdout or ``--output``.  ``verify`` suites exit
with status 1 when any of their checks fail.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import Sequence

import numpy as np

SCHEMA = 1
DEFAULT_SEED = 42


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _cells(text: str) -> list[tuple[int, int]]:
    out = []
    for item in text.split(";"):
        if item.strip():
            p, q = _ints(item)
            out.append((p, q))
    return out


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return float(x)
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def _emit(args, payload: dict) -> None:
    body = {"schema": SCHEMA, "command": args.command, "seed": args.seed}
    body.update(payload)
    text = json.dumps(_jsonable(body), indent=2, sort_keys=False) + "\n"
    _write(args, text)


def _emit_csv(args, header: Sequence[str], rows: list[Sequence]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])
    _write(args, buf.getvalue())


def _write(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_poly(path: str):
    from .polyalg import loads

    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


# ---------------------------------------------------------------------------
# subcommands


def cmd_coeffs(args) -> int:
    from .coeffs import c_p0_closed, c_pq, c_pq_continued

    rows = []
    for s in args.s:
        if args.p * args.q == 0:
            value, err = float(c_p0_closed(args.n, max(args.p, args.q), s)), 0.0
        elif s > -1:
            value, err = c_pq(args.n, args.p, args.q, s)
        else:
            value, err = c_pq_continued(args.n, args.p, args.q).evaluate(s)
        rows.append((args.n, args.p, args.q, s, value, err))
    if args.format == "json":
        _emit(args, {"grid": {"n": args.n, "p": args.p, "q": args.q, "s": args.s},
                     "rows": [dict(zip(("n", "p", "q", "s", "value", "error"), r)) for r in rows]})
    else:
        _emit_csv(args, ("n", "p", "q", "s", "value", "error"), rows)
    return 0


def cmd_residues(args) -> int:
    from .coeffs import c_cici, c_pq_continued, cici_strength

    C = c_pq_continued(args.n, args.p, args.q)
    poles = [{"location": pl.location, "order": pl.order, "strength": pl.strength} for pl in C.poles]
    payload = {"grid": {"n": args.n, "p": args.p, "q": args.q}, "poles": poles}
    if args.p * args.q:
        payload["double_pole"] = {"location": -args.n - 1,
                                  "strength_exact": cici_strength(args.n, args.p, args.q),
                                  "dirichlet_weight": c_cici(args.n, args.p, args.q)}
    _emit(args, payload)
    return 0


def _load_points(args, real: bool) -> np.ndarray:
    from .kernels import random_ball_points, random_real_ball_points

    if args.points_file:
        data = np.atleast_2d(np.loadtxt(args.points_file, delimiter=",", ndmin=2))
        if real:
            return data
        if data.shape[1] != 2 * args.n:
            raise ValueError("complex points need 2n columns: re1, im1, ..., ren, imn")
        return data[:, 0::2] + 1j * data[:, 1::2]
    gen = random_real_ball_points if real else random_ball_points
    return gen(args.n, args.npoints, seed=args.seed)


def cmd_kernel(args) -> int:
    from .kernels import make_kernel

    K = make_kernel(args.family, args.n, args.s, args.cutoff)
    pts = _load_points(args, K.real)
    G, min_eig = K.gram(pts)
    _emit(args, {"grid": {"family": args.family, "n": args.n, "s": args.s, "cutoff": args.cutoff,
                          "npoints": int(pts.shape[0])},
                 "tail_note": K.tail_note,
                 "values": {"re": G.real.tolist(), "im": G.imag.tolist()},
                 "min_eig": min_eig})
    return 0


def cmd_project(args) -> int:
    from .harmonics import peter_weyl
    from .polyalg import dumps

    f = _read_poly(args.input)
    keep = {
        "pi0": lambda p, q: p == 0 and q == 0,
        "hol": lambda p, q: q == 0,
        "antihol": lambda p, q: p == 0,
        "P": lambda p, q: p * q == 0,
        "Q": lambda p, q: p * q > 0,
    }[args.which]
    pw = peter_weyl(f).select(keep)
    if args.format == "text":
        _write(args, dumps(pw.boundary()))
    else:
        _emit(args, {"grid": {"which": args.which}, "cells": [list(c) for c in pw.cells()],
                     "cell_norms_sq": {f"{p},{q}": v for (p, q), v in pw.cell_norms_sq().items()},
                     "polynomial": dumps(pw.boundary())})
    return 0


def cmd_seminorm(args) -> int:
    from . import seminorms as sn

    f = _read_poly(args.input)
    name = args.name
    if name == "norm_s":
        reps = [sn.norm_s(f, args.s)]
    elif name == "hardy":
        reps = [sn.hardy_norm(f)]
    elif name == "cici":
        reps = [sn.dirichlet_cici(f)]
    elif name == "circ":
        reps = [sn.dirichlet_circ(f)]
    elif name == "tangential":
        reps = [sn.tangential_sum(f, args.m), sn.word_cell_sum(f, args.m)]
    elif name == "radial":
        reps = [sn.radial_seminorm(f, args.m)]
    elif name == "ph":
        reps = list(sn.theorem_ph_sums(f, args.k))
    else:
        raise ValueError(f"unknown seminorm {name}")
    _emit(args, {"grid": {"name": name, "s": args.s, "m": args.m, "k": args.k},
                 "reports": [r.to_dict() for r in reps]})
    return 0


def cmd_harm_coeffs(args) -> int:
    from .coeffs import harm_coeff, harm_sq

    rows = []
    for p in range(args.pmax + 1):
        for s in args.s:
            rows.append((args.n, p, s, float(harm_coeff(args.n, p, s)), float(harm_sq(args.n, p))))
    _emit_csv(args, ("n", "p", "s", "coeff", "dirichlet_weight"), rows)
    return 0


# ---------------------------------------------------------------------------
# verification suites


def _window_entry(values: list[float]) -> dict:
    from .seminorms import DRIFT_EXPONENT_MAX, drift_exponent, ratio_window

    lo, hi, c = ratio_window(values)
    alpha = drift_exponent(values)
    ok = c > 0 and abs(alpha) <= DRIFT_EXPONENT_MAX
    return {"values": values, "min": lo, "max": hi, "c": c, "drift_exponent": alpha, "ok": ok}


def verify_pf(args) -> dict:
    from .seminorms import pf_ratio_table

    out = {}
    for n in args.n_list:
        for method in ("words", "power"):
            t = pf_ratio_table(n, args.pmax, method)
            lines = {
                "diagonal": [t[(p, p)] for p in range(1, args.pmax + 1)],
                "row_q1": [t[(p, 1)] for p in range(1, args.pmax + 1)],
                "column_p1": [t[(1, q)] for q in range(1, args.pmax + 1)],
            }
            lo, hi = min(t.values()), max(t.values())
            entry = {k: _window_entry(v) for k, v in lines.items()}
            entry["table_min"], entry["table_max"] = lo, hi
            entry["ok"] = all(e["ok"] for e in entry.values() if isinstance(e, dict)) and lo > 0
            out[f"n={n},{method}"] = entry
    return out


def verify_ph(args) -> dict:
    from .seminorms import ph_ratio_tables

    out = {}
    for n in args.n_list:
        hardy, weighted = ph_ratio_tables(n, args.k, args.pmax)
        out[f"n={n},hardy_words"] = _window_entry(list(hardy.values()))
        out[f"n={n},weighted_words_k={args.k}"] = _window_entry(list(weighted.values()))
    return out


def verify_pi(args) -> dict:
    from .seminorms import pi_ratio_table

    out = {}
    for n in args.n_list:
        m = args.m if args.m else n // 2 + 1
        out[f"n={n},m={m}"] = _window_entry(list(pi_ratio_table(n, m, args.pmax).values()))
    return out


def verify_pj(args) -> dict:
    from .realharm import theorem_pj_verify

    out = {}
    for n in args.n_list:
        m = args.m if args.m else n // 4 + 1
        rep = theorem_pj_verify(n, m, args.pmax)
        entry = _window_entry([rep["ratios"][p] for p in sorted(rep["ratios"])])
        entry["identity_ok"] = rep["identity_ok"]
        entry["identity_cases"] = len(rep["identity"])
        entry["ok"] = entry["ok"] and rep["identity_ok"]
        out[f"n={n},m={m}"] = entry
    return out


def verify_pk(args) -> dict:
    from .harmonics import build_basis
    from .moebius import theorem_pk_check

    out = {}
    for p, q in args.cells:
        f = build_basis(args.n, p, q).elements[0]
        for a in args.a:
            rep = theorem_pk_check(f, f, a, args.D)
            out[f"cell={p},{q},a={a}"] = rep
    return out


def verify_pc(args) -> dict:
    from .coeffs import c_cici, cici_strength, pole_extrapolation

    ext = pole_extrapolation(args.n, args.p, args.q, args.eps, degree=1)
    claimed = float(c_cici(args.n, args.p, args.q))
    exact = float(cici_strength(args.n, args.p, args.q))
    defect = abs(ext["estimate"] - claimed)
    return {"pc": {
        "rows": [{"eps": e, "value": v, "error": r} for e, v, r in ext["rows"]],
        "strength": ext["estimate"],
        "strength_error": ext["error"],
        "claimed_strength": claimed,
        "exact_strength": exact,
        "defect": defect,
        "tolerance": 1e-6,
        "ok": defect <= 1e-6,
    }}


def verify_psd(args) -> dict:
    from .kernels import (k_cici_truncated, k_harm_truncated, k_s_truncated, random_ball_points,
                          random_real_ball_points)

    X2 = random_ball_points(2, 15, seed=args.seed)
    X3r = random_real_ball_points(3, 15, seed=args.seed)
    cases = [
        ("mharmonic_s n=2 s=0 cutoff=8", k_s_truncated(2, 0.0, 8), X2),
        ("mharmonic_s n=2 s=-1.5 cutoff=8", k_s_truncated(2, -1.5, 8), X2),
        ("cici n=2 cutoff=6", k_cici_truncated(2, 6), X2),
        ("harmonic_s n=3 s=0 cutoff=8", k_harm_truncated(3, 0.0, 8), X3r),
        ("harmonic_s n=3 s=-2 cutoff=8", k_harm_truncated(3, -2.0, 8), X3r),
    ]
    out = {}
    for name, K, X in cases:
        me = K.gram(X)[1]
        out[name] = {"min_eig": me, "ok": me >= -1e-8}
    return out


def _pairs(seed: int, n: int = 2, m: int = 5, radius: float = 0.6):
    from .kernels import random_ball_points

    return random_ball_points(n, m, seed=seed, radius=radius), random_ball_points(n, m, seed=seed + 1, radius=radius)


def _rate_entry(defects: np.ndarray, eps: list[float]) -> dict:
    worst = defects.max(axis=1)
    ratios = (defects[:-1] / np.maximum(defects[1:], 1e-300)).min(axis=1)
    return {"eps": eps, "max_defect": worst.tolist(), "min_decade_ratio": ratios.tolist(),
            "ok": bool(np.all(ratios >= 5.0))}


def verify_limits(args) -> dict:
    from .kernels import k_cici_truncated, k_circ, k_second_order_truncated, limit_defects

    n = 2
    X, Y = _pairs(args.seed, n)
    tl_target = np.array([k_circ(x, y) for x, y in zip(X, Y)])
    tl = limit_defects(n, X, Y, args.eps, args.cutoff_first, 1, tl_target)
    cici = k_cici_truncated(n, args.cutoff_second)
    tn_target = np.array([cici(x, y) for x, y in zip(X, Y)])
    tn = limit_defects(n, X, Y, args.eps, args.cutoff_second, 2, tn_target)
    second = k_second_order_truncated(n, args.cutoff_second)
    cell_target = np.array([second(x, y) for x, y in zip(X, Y)])
    cell = limit_defects(n, X, Y, args.eps, args.cutoff_second, 2, cell_target)
    return {
        "first_order_to_circ": _rate_entry(tl, args.eps),
        "second_order_to_cici_series": _rate_entry(tn, args.eps),
        "second_order_to_cellwise_limit": _rate_entry(cell, args.eps),
    }


VERIFY = {
    "pf": verify_pf,
    "ph": verify_ph,
    "pi": verify_pi,
    "pj": verify_pj,
    "pk": verify_pk,
    "pc": verify_pc,
    "psd": verify_psd,
    "limits": verify_limits,
}


def cmd_verify(args) -> int:
    results = VERIFY[args.suite](args)
    ok = all(bool(v.get("ok", True)) for v in results.values())
    grid = {k: getattr(args, k) for k in sorted(vars(args))
            if k not in ("command", "suite", "output", "func", "seed")}
    _emit(args, {"suite": args.suite, "grid": grid, "results": results, "ok": ok})
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mdirichlet", description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--output", "-o", default=None)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="table of C_pq(s)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--s", type=_floats, required=True, help="comma-separated s values")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("residues", help="poles of the continued C_pq")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_residues)

    p = sub.add_parser("kernel", help="truncated kernel Gram matrix")
    p.add_argument("--family", required=True, choices=("mharmonic_s", "cici", "harmonic_s", "circ", "second_order"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--cutoff", type=int, default=6)
    p.add_argument("--points-file", default=None)
    p.add_argument("--npoints", type=int, default=5)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("project", help="Peter-Weyl projections of a polynomial file")
    p.add_argument("--input", required=True)
    p.add_argument("--which", choices=("pi0", "hol", "antihol", "P", "Q"), required=True)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("seminorm", help="seminorm of a polynomial file")
    p.add_argument("--input", required=True)
    p.add_argument("--name", required=True,
                   choices=("norm_s", "hardy", "cici", "circ", "tangential", "radial", "ph"))
    p.add_argument("--s", type=float, default=0.0)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--k", type=int, default=0)
    p.set_defaults(func=cmd_seminorm)

    p = sub.add_parser("harm-coeffs", help="real-ball coefficients")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--pmax", type=int, default=10)
    p.add_argument("--s", type=_floats, default=[0.0])
    p.set_defaults(func=cmd_harm_coeffs)

    p = sub.add_parser("verify", help="named verification suites")
    p.add_argument("suite", choices=sorted(VERIFY))
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--n-list", type=_ints, default=[2, 3])
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--m", type=int, default=0, help="0 picks the smallest admissible m")
    p.add_argument("--pmax", type=int, default=10)
    p.add_argument("--a", type=_floats, default=[0.0, 0.1, 0.3])
    p.add_argument("--D", type=int, default=24)
    p.add_argument("--cells", type=_cells, default=[(1, 1)], help="semicolon-separated p,q pairs")
    p.add_argument("--eps", type=_floats, default=[1e-2, 1e-3, 1e-4])
    p.add_argument("--cutoff-first", type=int, default=30)
    p.add_argument("--cutoff-second", type=int, default=6)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
