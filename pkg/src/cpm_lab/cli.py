"""Command-line front end: batch verification sweeps with JSON/CSV reports.

Subcommands
-----------
weights   one pair of rapidities: emit the four weight tables and the
          formula-equivalence checks between their independent routes.
ste       seeded random sweeps of the star-triangle residuals, finite N or
          any of the large-N regimes.
identity  the two-sided hypergeometric identity: instances from a JSON file,
          from random rapidity triples, or classical one-parameter slices.
limits    the asymptotic-expansion validation grid (CSV) plus convergence
          and order-parameter checks.

Reports are deterministic for a fixed seed (randomness comes only from
Python's random.Random, a Mersenne Twister, seeded explicitly).  Exit codes:
0 all checks pass, 1 at least one check failed, 2 usage or domain error.
CPM_LAB_THREADS caps worker processes for the sweeps (default 1, serial).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import hyp_identity, limits, ste_infinite, weights
from .rapidity import Modulus, rapidity_from_lambda
from .specfun import gamma

REPORT_VERSION = 1

_DEFAULT_TOL = {
    "finite": 1e-10,
    "dual": 1e-9,
    "regime1": 1e-7,
    "regime2": 1e-6,
    "regime3": 1e-6,
    "fourier": 1e-6,
}


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("CPM_LAB_THREADS", "1")))
    except ValueError:
        return 1


def _map_ordered(fn, configs):
    n = _threads()
    if n > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=n) as pool:
            return list(pool.map(fn, configs))
    return [fn(c) for c in configs]


def _check(name, lhs, rhs, rel_err, tol):
    return {
        "name": name,
        "lhs": [float(complex(lhs).real), float(complex(lhs).imag)],
        "rhs": [float(complex(rhs).real), float(complex(rhs).imag)],
        "rel_err": float(rel_err),
        "tolerance": float(tol),
        "pass": bool(rel_err <= tol),
    }


def _report(command, params, checks, seed, started):
    return {
        "version": REPORT_VERSION,
        "command": command,
        "params": params,
        "seed": seed,
        "checks": checks,
        "wall_time_ms": int((time.monotonic() - started) * 1000),
    }


def _emit(report, args, csv_text=None):
    payload = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload + "\n")
        if csv_text is not None:
            base, _ = os.path.splitext(args.out)
            with open(base + ".csv", "w") as fh:
                fh.write(csv_text)
    elif args.format == "csv" and csv_text is not None:
        sys.stdout.write(csv_text)
    else:
        print(payload)
    return 0 if all(c["pass"] for c in report["checks"]) else 1


def _draw_lambdas(rng, min_gap=0.08, lo=0.05, hi=0.95):
    while True:
        ls = sorted(rng.uniform(lo, hi) for _ in range(3))
        if ls[1] - ls[0] >= min_gap and ls[2] - ls[1] >= min_gap:
            return tuple(ls)


def _draw_triple(rng, k_max=0.85):
    k = rng.uniform(0.0, k_max)
    ls = _draw_lambdas(rng)
    return ste_infinite.PrincipalTriple.from_lambdas(Modulus.from_k(k), *ls)


# ---------------------------------------------------------------------------
# weights


def cmd_weights(args) -> int:
    started = time.monotonic()
    if not (0.0 <= args.k < 1.0 and 0.0 < args.lambda_p < 1.0 and 0.0 < args.lambda_q < 1.0 and args.N >= 2):
        print("invalid domain: need 0 <= k < 1, 0 < lambda < 1, N >= 2", file=sys.stderr)
        return 2
    m = Modulus.from_k(args.k)
    p = rapidity_from_lambda(m, args.lambda_p)
    q = rapidity_from_lambda(m, args.lambda_q)
    n_states = args.N
    checks = []
    tables = {}
    ctors = {
        "W": weights.weight_w,
        "Wbar": weights.weight_wbar,
        "Wf": weights.weight_wf,
        "Wbarf": weights.weight_wbarf,
    }
    for name, ctor in ctors.items():
        t_ang = ctor(n_states, p, q, route="angles")
        t_hom = ctor(n_states, p, q, route="homogeneous")
        tables[name] = t_ang
        dev = float(np.max(np.abs(t_ang.ratios - t_hom.ratios)))
        checks.append(_check(f"{name}: angle route vs homogeneous route", 1.0 + dev, 1.0, dev, 1e-11))
        e = weights.exponents(p, q, name)
        dev_pf = max(
            abs(weights.product_form(n_states, e, n) - t_ang.ratio(n))
            for n in range(n_states)
        )
        checks.append(_check(f"{name}: product form route", 1.0 + dev_pf, 1.0, dev_pf, 1e-11))
    for direct, dual in (("W", "Wf"), ("Wbar", "Wbarf")):
        fd = weights.fourier_dual(tables[direct])
        dev = float(np.max(np.abs(fd.ratios - tables[dual].ratios)))
        checks.append(_check(f"{direct}: DFT dual vs closed form", 1.0 + dev, 1.0, dev, 1e-10))
    # constants of the product form against their closed angle expressions
    e_w = weights.exponents(p, q, "W")
    e_wb = weights.exponents(p, q, "Wbar")
    e_wf = weights.exponents(p, q, "Wf")
    e_wbf = weights.exponents(p, q, "Wbarf")
    closed = {
        "A^2 = e^(2 gamma_p - 2 gamma_q)": (e_w.a_const**2, math.exp(2 * p.gamma - 2 * q.gamma)),
        "Abar^2 = e^(2 gamma_p + 2 gamma_q)": (e_wb.a_const**2, math.exp(2 * p.gamma + 2 * q.gamma)),
        "Af = e^(i(phi_p+phi_q-theta_p-theta_q)/2)": (
            e_wf.a_const,
            complex(np.exp(0.5j * (p.phi + q.phi - p.theta - q.theta))),
        ),
        "Abarf = e^(i(theta_p-phi_p-theta_q+phi_q)/2)": (
            e_wbf.a_const,
            complex(np.exp(0.5j * (p.theta - p.phi - q.theta + q.phi))),
        ),
    }
    for name, (lhs, rhs) in closed.items():
        checks.append(_check(name, lhs, rhs, abs(lhs / rhs - 1.0), 1e-12))
    report = _report(
        "weights",
        {"N": n_states, "k": args.k, "lambda_p": args.lambda_p, "lambda_q": args.lambda_q},
        checks,
        None,
        started,
    )
    report["tables"] = {name: t.to_json() for name, t in tables.items()}
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["family", "n", "re", "im"])
    for name, t in tables.items():
        for n in range(n_states):
            v = t.ratio(n)
            writer.writerow([name, n, f"{v.real:.17g}", f"{v.imag:.17g}"])
    return _emit(report, args, buf.getvalue())


# ---------------------------------------------------------------------------
# ste


def _finite_case(cfg):
    k, l1, l2, l3, n_states = cfg
    m = Modulus.from_k(k)
    p, q, r = (rapidity_from_lambda(m, l) for l in (l1, l2, l3))
    return weights.ste_residual_max(n_states, p, q, r)


def _dual_case(cfg):
    k, l1, l2, l3, n_states = cfg
    m = Modulus.from_k(k)
    p, q, r = (rapidity_from_lambda(m, l) for l in (l1, l2, l3))
    worst = 0.0
    for a in range(n_states):
        for b in range(n_states):
            worst = max(worst, weights.dual_ste_residual(n_states, p, q, r, a, b).rel_err)
    return worst


def _regime1_case(cfg):
    k, l1, l2, l3, a, b, c, cutoff = cfg
    t = ste_infinite.PrincipalTriple.from_lambdas(Modulus.from_k(k), l1, l2, l3)
    return ste_infinite.regime1_ste(t, a, b, c, cutoff).rel_err


def _regime2_case(cfg):
    k, l1, l2, l3, x, y, z, levels = cfg
    t = ste_infinite.PrincipalTriple.from_lambdas(Modulus.from_k(k), l1, l2, l3)
    qc = ste_infinite.QuadratureConfig(levels=levels)
    return ste_infinite.regime2_ste(t, x, y, z, qc).rel_err


def _regime3_case(cfg):
    k, l1, l2, l3, x, y, z, levels = cfg
    t = ste_infinite.PrincipalTriple.from_lambdas(Modulus.from_k(k), l1, l2, l3)
    qc = ste_infinite.QuadratureConfig(levels=levels)
    return ste_infinite.regime3_ste(t, x, y, z, qc).rel_err


def _fourier_case(cfg):
    k, l1, l2, l3, a, b, c, cutoff = cfg
    t = ste_infinite.PrincipalTriple.from_lambdas(Modulus.from_k(k), l1, l2, l3)
    return ste_infinite.regime2_fourier_ste(t, a, b, c, cutoff).rel_err


def cmd_ste(args) -> int:
    started = time.monotonic()
    rng = random.Random(args.seed)
    tol = args.tol if args.tol is not None else _DEFAULT_TOL[args.scope]
    cutoff = args.cutoff
    configs = []
    for _ in range(args.count):
        k = rng.uniform(0.0, 0.85)
        ls = _draw_lambdas(rng)
        if args.scope in ("finite", "dual"):
            configs.append((k, *ls, args.N))
        elif args.scope in ("regime1", "fourier"):
            spins = tuple(rng.randint(-3, 3) for _ in range(3))
            configs.append((k, *ls, *spins, cutoff))
        elif args.scope == "regime2":
            pts = sorted(rng.uniform(0.25, 6.0) for _ in range(3))
            while min(pts[1] - pts[0], pts[2] - pts[1]) < 0.15:
                pts = sorted(rng.uniform(0.25, 6.0) for _ in range(3))
            configs.append((k, *ls, *pts, args.quad_levels))
        elif args.scope == "regime3":
            pts = sorted(rng.uniform(-4.0, 4.0) for _ in range(3))
            while min(pts[1] - pts[0], pts[2] - pts[1]) < 0.15:
                pts = sorted(rng.uniform(-4.0, 4.0) for _ in range(3))
            configs.append((k, *ls, *pts, args.quad_levels))
    worker = {
        "finite": _finite_case,
        "dual": _dual_case,
        "regime1": _regime1_case,
        "regime2": _regime2_case,
        "regime3": _regime3_case,
        "fourier": _fourier_case,
    }[args.scope]
    errs = _map_ordered(worker, configs)
    checks = [
        _check(f"{args.scope} sweep config {i}", 1.0 + e, 1.0, e, tol)
        for i, e in enumerate(errs)
    ]
    checks.append(_check(f"{args.scope} sweep max", 1.0 + max(errs), 1.0, max(errs), tol))
    report = _report(
        "ste",
        {"scope": args.scope, "N": args.N, "count": args.count, "cutoff": cutoff,
         "quad_levels": args.quad_levels},
        checks,
        args.seed,
        started,
    )
    return _emit(report, args)


# ---------------------------------------------------------------------------
# identity


def cmd_identity(args) -> int:
    started = time.monotonic()
    rng = random.Random(args.seed)
    tol = args.tol if args.tol is not None else 1e-7
    checks = []
    if args.source == "file":
        if not args.file:
            print("--file is required with --source file", file=sys.stderr)
            return 2
        try:
            with open(args.file) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"cannot read instances: {exc}", file=sys.stderr)
            return 2
        items = data if isinstance(data, list) else [data]
        try:
            instances = [hyp_identity.IdentityInstance.from_json(d) for d in items]
        except (KeyError, TypeError, ValueError) as exc:
            print(f"malformed instance JSON: {exc}", file=sys.stderr)
            return 2
        for i, inst in enumerate(instances):
            sa, pe = inst.conditions()
            checks.append(_check(f"instance {i} saalschuetz", sa, 0.0, sa, 1e-10))
            checks.append(_check(f"instance {i} periodicity", pe, 0.0, pe, 1e-10))
            r = hyp_identity.identity_residual(inst, args.cutoff)
            checks.append(_check(f"instance {i} identity", 1.0 + r, 1.0, r, tol))
    elif args.source == "rapidity":
        for i in range(args.count):
            t = _draw_triple(rng)
            spins = tuple(rng.randint(-3, 3) for _ in range(3))
            inst = hyp_identity.instance_from_rapidities(t, *spins)
            r = hyp_identity.identity_residual(inst, args.cutoff)
            checks.append(_check(f"rapidity instance {i}", 1.0 + r, 1.0, r, tol))
    elif args.source == "dougall":
        r = hyp_identity.identity_residual(
            hyp_identity.IdentityInstance(x=(0.1, 0.15, 0.25), y=(0.9, 0.85, 0.75)),
            args.cutoff,
        )
        checks.append(_check("Dougall-Ramanujan slice", 1.0 + r, 1.0, r, min(tol, 1e-9)))
        for i in range(args.count):
            xs = [rng.uniform(0.02, 0.14) for _ in range(3)]
            a = rng.uniform(0.0, 0.3)
            r = hyp_identity.dougall_5h5_check(*xs, a, cutoff=args.cutoff)
            checks.append(_check(f"one-parameter slice {i}", 1.0 + r, 1.0, r, tol))
    report = _report(
        "identity",
        {"source": args.source, "count": args.count, "cutoff": args.cutoff,
         "file": args.file},
        checks,
        args.seed,
        started,
    )
    return _emit(report, args)


# ---------------------------------------------------------------------------
# limits


def cmd_limits(args) -> int:
    started = time.monotonic()
    n_values = [int(v) for v in args.n_list.split(",") if v]
    alphas = [float(v) for v in args.alpha_list.split(",") if v]
    orders = list(range(args.max_order + 1))
    if not n_values or not alphas or not orders:
        print("empty validation grid", file=sys.stderr)
        return 2
    rows = []
    violations = 0
    for n_states in n_values:
        for frac in (0.125, 0.25, 0.375, 0.5):
            n = int(round(n_states * frac))
            for alpha in alphas:
                exact = limits.s_n_exact(n_states, alpha, n)
                for order in orders:
                    res = limits.s_n_asymptotic(n_states, alpha, n, order)
                    err = abs(exact - res.value)
                    ok = err <= res.error_bound
                    violations += not ok
                    rows.append(
                        (n_states, n, alpha, order, exact.real, res.value.real,
                         res.error_bound, int(ok))
                    )
    checks = [
        _check("asymptotic bound violations", float(violations), 0.0, float(violations), 0.5)
    ]
    # convergence order of the first finite-N correction: halving 1/N
    # divides the residual deviation by ~4
    e = weights.ExponentPair(alpha=0.3 + 0.0j, beta=0.8 + 0.0j)
    ratios = []
    for n_states in (64, 128):
        d1 = limits.finite_n_correction_check(n_states, e, n_states // 4)
        d2 = limits.finite_n_correction_check(2 * n_states, e, n_states // 2)
        ratios.append(d1 / d2)
    for i, ratio in enumerate(ratios):
        checks.append(
            _check(f"correction deviation ratio {i}", ratio, 4.0,
                   abs(ratio - 4.0) / 4.0, 0.2)
        )
    op_fin = limits.order_parameter(1000, 250, 0.6)
    op_lim = limits.order_parameter_limit(math.pi / 2, 0.6)
    checks.append(
        _check("order parameter N=1000 vs limit", op_fin, op_lim,
               abs(op_fin / op_lim - 1.0), 1e-3)
    )
    report = _report(
        "limits",
        {"n_list": n_values, "alphas": alphas, "orders": orders},
        checks,
        None,
        started,
    )
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["N", "n", "alpha", "order", "exact", "asymptotic", "bound", "within"])
    for row in rows:
        writer.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in row])
    return _emit(report, args, buf.getvalue())


# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="override check tolerance")
    common.add_argument("--cutoff", type=int, default=100_000, help="series cutoff")
    common.add_argument("--quad-levels", type=int, default=10, help="tanh-sinh refinement depth")
    common.add_argument("--seed", type=int, default=0, help="sweep RNG seed")
    common.add_argument("--count", type=int, default=5, help="number of random configurations")
    common.add_argument("--out", type=str, default=None, help="write the JSON report here")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    parser = argparse.ArgumentParser(
        prog="cpm-lab",
        description="star-triangle and bilateral-hypergeometric verification sweeps",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    pw = sub.add_parser("weights", parents=[common], help="weight tables and formula equivalences")
    pw.add_argument("--N", type=int, default=4)
    pw.add_argument("--k", type=float, default=0.0)
    pw.add_argument("--lambda-p", type=float, default=0.3, dest="lambda_p")
    pw.add_argument("--lambda-q", type=float, default=0.6, dest="lambda_q")
    pw.set_defaults(fn=cmd_weights)

    ps = sub.add_parser("ste", parents=[common], help="star-triangle residual sweeps")
    ps.add_argument("--scope", required=True,
                    choices=("finite", "regime1", "regime2", "regime3", "dual", "fourier"))
    ps.add_argument("--N", type=int, default=3)
    ps.set_defaults(fn=cmd_ste)

    pi = sub.add_parser("identity", parents=[common], help="two-sided hypergeometric identity")
    pi.add_argument("--source", required=True, choices=("file", "rapidity", "dougall"))
    pi.add_argument("--file", type=str, default=None)
    pi.set_defaults(fn=cmd_identity)

    pl = sub.add_parser("limits", parents=[common], help="asymptotic grid and convergence checks")
    pl.add_argument("--n-list", type=str, default="32,64,128,256", dest="n_list")
    pl.add_argument("--alpha-list", type=str,
                    default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9", dest="alpha_list")
    pl.add_argument("--max-order", type=int, default=6, dest="max_order")
    pl.set_defaults(fn=cmd_limits)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
