"""Acceptance suite: every criterion at its stated tolerance.

Each test prints one PASS/FAIL line (run pytest with -s or check the
captured output).  The random sweeps are seeded so reruns are identical.
"""

import cmath
import math
import random
import time

import numpy as np
import pytest

from cpm_lab import hyp_identity, limits, ste_infinite
from cpm_lab import weights as wmod
from cpm_lab.cli import main as cli_main
from cpm_lab.rapidity import Modulus, rapidity_from_lambda
from cpm_lab.specfun import gamma
from cpm_lab.ste_infinite import PrincipalTriple, QuadratureConfig
from cpm_lab.weights import ExponentPair, exponents


def _announce(num, label, value, tol, elapsed, ok):
    status = "PASS" if ok else "FAIL"
    print(
        f"[{status}] criterion {num}: {label}: worst={value:.3e} tol={tol:.0e} "
        f"({elapsed:.1f}s)"
    )
    assert ok, f"criterion {num} failed: {label}: {value} > {tol}"


def _draw_lambdas(rng, min_gap=0.08):
    while True:
        ls = sorted(rng.uniform(0.05, 0.95) for _ in range(3))
        if ls[1] - ls[0] >= min_gap and ls[2] - ls[1] >= min_gap:
            return ls


def _draw_points(rng, n_states):
    k = rng.uniform(0.0, 0.85)
    m = Modulus.from_k(k)
    return tuple(rapidity_from_lambda(m, l) for l in _draw_lambdas(rng))


def _draw_triple(rng):
    k = rng.uniform(0.0, 0.85)
    return PrincipalTriple.from_lambdas(Modulus.from_k(k), *_draw_lambdas(rng))


def test_criterion_1_finite_n_ste():
    t0 = time.monotonic()
    rng = random.Random(1001)
    worst = 0.0
    for n_states in (2, 3, 4, 5, 8):
        for _ in range(20):
            p, q, r = _draw_points(rng, n_states)
            worst = max(worst, wmod.ste_residual_max(n_states, p, q, r))
    _announce(1, "finite-N star-triangle residual, all spins", worst, 1e-10,
              time.monotonic() - t0, worst < 1e-10)


def test_criterion_2_dual_ste():
    t0 = time.monotonic()
    rng = random.Random(1002)
    worst = 0.0
    for n_states in (2, 3, 4, 5, 8):
        for _ in range(20):
            p, q, r = _draw_points(rng, n_states)
            for a in range(n_states):
                for b in range(n_states):
                    worst = max(
                        worst, wmod.dual_ste_residual(n_states, p, q, r, a, b).rel_err
                    )
    _announce(2, "Fourier-dual star-triangle residual (DFT duals)", worst, 1e-9,
              time.monotonic() - t0, worst < 1e-9)


def test_criterion_3_formula_equivalences():
    t0 = time.monotonic()
    rng = random.Random(1003)
    worst_eq = 0.0
    worst_const = 0.0
    for n_states in (2, 3, 5, 8):
        for _ in range(50):
            k = rng.uniform(0.0, 0.9)
            m = Modulus.from_k(k)
            p = rapidity_from_lambda(m, rng.uniform(0.05, 0.95))
            q = rapidity_from_lambda(m, rng.uniform(0.05, 0.95))
            for ctor in (wmod.weight_w, wmod.weight_wbar, wmod.weight_wf, wmod.weight_wbarf):
                ta = ctor(n_states, p, q, route="angles")
                th = ctor(n_states, p, q, route="homogeneous")
                worst_eq = max(worst_eq, float(np.max(np.abs(ta.ratios - th.ratios))))
            ew = exponents(p, q, "W")
            eb = exponents(p, q, "Wbar")
            ef = exponents(p, q, "Wf")
            ebf = exponents(p, q, "Wbarf")
            pairs = [
                (ew.a_const**2, math.exp(2 * p.gamma - 2 * q.gamma)),
                (eb.a_const**2, math.exp(2 * p.gamma + 2 * q.gamma)),
                (ef.a_const, cmath.exp(0.5j * (p.phi + q.phi - p.theta - q.theta))),
                (ebf.a_const, cmath.exp(0.5j * (p.theta - p.phi - q.theta + q.phi))),
            ]
            for lhs, rhs in pairs:
                worst_const = max(worst_const, abs(lhs / rhs - 1.0))
    ok = worst_eq < 1e-11 and worst_const < 1e-12
    _announce(3, "route equivalences (max of both families)",
              max(worst_eq, worst_const), 1e-11, time.monotonic() - t0, ok)


def test_criterion_4_asymptotic_soundness():
    t0 = time.monotonic()
    violations = 0
    total = 0
    for n_states in (32, 64, 128, 256):
        for frac in (0.125, 0.25, 0.375, 0.5):
            n = int(n_states * frac)
            for alpha in [0.1 * i for i in range(1, 10)]:
                exact = limits.s_n_exact(n_states, alpha, n)
                for order in range(7):
                    res = limits.s_n_asymptotic(n_states, alpha, n, order)
                    total += 1
                    if abs(exact - res.value) > res.error_bound:
                        violations += 1
    e = ExponentPair(alpha=0.3 + 0.0j, beta=0.8 + 0.0j)
    ratios = []
    for n_states in (64, 128, 256):
        d1 = limits.finite_n_correction_check(n_states, e, n_states // 4)
        d2 = limits.finite_n_correction_check(2 * n_states, e, n_states // 2)
        ratios.append(d1 / d2)
    ratio_ok = all(3.2 <= r <= 4.8 for r in ratios)
    ok = violations == 0 and ratio_ok
    print(f"    grid size {total}, violations {violations}, "
          f"correction ratios {['%.2f' % r for r in ratios]}")
    _announce(4, "expansion error within bound + O(N^-2) correction order",
              float(violations), 0.5, time.monotonic() - t0, ok)


def test_criterion_5_regime1_ste():
    t0 = time.monotonic()
    rng = random.Random(1005)
    worst = 0.0
    for _ in range(10):
        t = _draw_triple(rng)
        spins = tuple(rng.randint(-3, 3) for _ in range(3))
        res = ste_infinite.regime1_ste(t, *spins, 100_000)
        worst = max(worst, res.rel_err)
        assert res.tail_bound is not None
    t = _draw_triple(random.Random(42))
    ds = np.arange(1000, 10001, 500)
    vals = np.array([abs(ste_infinite.regime1_summand(t, 0, 0, 0, int(d))) for d in ds])
    slope = float(np.polyfit(np.log(ds), np.log(vals), 1)[0])
    ok = worst < 1e-7 and abs(slope + 2.0) < 0.05
    print(f"    summand decay exponent {slope:.4f}")
    _announce(5, "regime-I star-triangle at cutoff 1e5", worst, 1e-7,
              time.monotonic() - t0, ok)


def test_criterion_6_regime2_ste():
    t0 = time.monotonic()
    rng = random.Random(1006)
    cfg = QuadratureConfig()
    worst = 0.0
    for _ in range(5):
        t = _draw_triple(rng)
        for _ in range(3):
            pts = sorted(rng.uniform(0.25, 6.0) for _ in range(3))
            if min(pts[1] - pts[0], pts[2] - pts[1]) < 0.15:
                continue
            worst = max(worst, ste_infinite.regime2_ste(t, *pts, cfg).rel_err)
            spins = tuple(rng.randint(-2, 2) for _ in range(3))
            worst = max(
                worst, ste_infinite.regime2_fourier_ste(t, *spins, 100_000).rel_err
            )
    # gauge variant and nonchiral slice
    t = _draw_triple(random.Random(7))
    worst_g = ste_infinite.regime2_ste(t, 1.1, 2.3, 5.1, cfg, drop_floor=True).rel_err
    t_fz = PrincipalTriple.from_lambdas(Modulus.from_k(0.0), 0.2, 0.45, 0.7)
    worst_fz = ste_infinite.regime2_ste(t_fz, 1.1, 2.3, 5.1, cfg).rel_err
    worst = max(worst, worst_g, worst_fz)
    _announce(6, "regime-II star-triangle (integral + Fourier + gauge + nonchiral)",
              worst, 1e-6, time.monotonic() - t0, worst < 1e-6)


def test_criterion_7_regime3_ste():
    t0 = time.monotonic()
    rng = random.Random(1007)
    cfg = QuadratureConfig()
    worst = 0.0
    for _ in range(5):
        t = _draw_triple(rng)
        pts = sorted(rng.uniform(-4.0, 4.0) for _ in range(3))
        if min(pts[1] - pts[0], pts[2] - pts[1]) < 0.15:
            pts = [-1.0, 0.3, 2.0]
        worst = max(worst, ste_infinite.regime3_ste(t, *pts, cfg).rel_err)
    t_fz = PrincipalTriple.from_lambdas(Modulus.from_k(0.0), 0.2, 0.45, 0.7)
    worst = max(worst, ste_infinite.regime3_ste(t_fz, -1.0, 0.0, 2.0, cfg).rel_err)
    _announce(7, "regime-III star-triangle (whole line, incl. nonchiral)",
              worst, 1e-6, time.monotonic() - t0, worst < 1e-6)


def test_criterion_8_h1_duality():
    t0 = time.monotonic()
    rng = random.Random(1008)
    worst = 0.0
    for _ in range(20):
        alpha = rng.uniform(0.05, 0.85)
        beta = alpha + rng.uniform(0.1, min(0.9, 0.95 - alpha))
        e = ExponentPair(alpha=alpha, beta=beta)
        x = rng.uniform(0.3, 2 * math.pi - 0.3)
        cf = limits.h1_closed_form(e, x)
        ps = limits.h1_partial_sum(e, x, 100_000, tail_order=6)
        worst = max(worst, abs(ps / cf - 1.0))
    # inverse integral at j in [-3, 3] by quadrature
    t = PrincipalTriple.from_lambdas(Modulus.from_k(0.3), 0.2, 0.45, 0.7)
    worst_q = 0.0
    for j in range(-3, 4):
        closed = ste_infinite.regime2_fourier_coefficient(t, "w_pq", j, "closed")
        quad = ste_infinite.regime2_fourier_coefficient(t, "w_pq", j, "quadrature")
        worst_q = max(worst_q, abs(closed - quad))
    ok = worst < 1e-8 and worst_q < 1e-8
    _announce(8, "bilateral 1H1 sum vs closed form + quadrature inverse",
              max(worst, worst_q), 1e-8, time.monotonic() - t0, ok)


def test_criterion_9_two_sided_identity():
    t0 = time.monotonic()
    rng = random.Random(1009)
    worst_solver = 0.0
    for _ in range(200):
        x1 = complex(rng.uniform(0.05, 0.6), rng.uniform(-0.3, 0.3))
        x2 = complex(rng.uniform(0.05, 0.6), rng.uniform(-0.3, 0.3))
        y1 = complex(rng.uniform(0.7, 1.3), rng.uniform(-0.3, 0.3))
        y2 = complex(rng.uniform(0.7, 1.3), rng.uniform(-0.3, 0.3))
        x3, y3 = hyp_identity.solve_conditions(x1, x2, y1, y2)
        inst = hyp_identity.IdentityInstance(x=(x1, x2, x3), y=(y1, y2, y3))
        worst_solver = max(worst_solver, hyp_identity.identity_residual(inst, 100_000))
    worst_rap = 0.0
    for _ in range(100):
        t = _draw_triple(rng)
        spins = tuple(rng.randint(-3, 3) for _ in range(3))
        inst = hyp_identity.instance_from_rapidities(t, *spins)
        worst_rap = max(worst_rap, hyp_identity.identity_residual(inst, 100_000))
    dr = hyp_identity.identity_residual(
        hyp_identity.IdentityInstance(x=(0.1, 0.15, 0.25), y=(0.9, 0.85, 0.75)),
        100_000,
    )
    worst_5h5 = 0.0
    for _ in range(20):
        xs = [rng.uniform(0.02, 0.14) for _ in range(3)]
        a = rng.uniform(0.0, 0.3)
        worst_5h5 = max(worst_5h5, hyp_identity.dougall_5h5_check(*xs, a))
    worst_sigma = 0.0
    for _ in range(100):
        x1 = complex(rng.uniform(0.05, 0.6), rng.uniform(-0.5, 0.5))
        x2 = complex(rng.uniform(0.05, 0.6), rng.uniform(-0.5, 0.5))
        y1 = complex(rng.uniform(0.7, 1.3), rng.uniform(-0.5, 0.5))
        y2 = complex(rng.uniform(0.7, 1.3), rng.uniform(-0.5, 0.5))
        x3, y3 = hyp_identity.solve_conditions(x1, x2, y1, y2)
        inst = hyp_identity.IdentityInstance(x=(x1, x2, x3), y=(y1, y2, y3))
        worst_sigma = max(worst_sigma, hyp_identity.g_symmetry_check(inst))
    ok = (worst_solver < 1e-7 and worst_rap < 1e-7 and dr < 1e-9
          and worst_5h5 < 1e-7 and worst_sigma < 1e-11)
    print(f"    solver {worst_solver:.2e}, rapidity {worst_rap:.2e}, "
          f"DR {dr:.2e}, 5H5 {worst_5h5:.2e}, sigma {worst_sigma:.2e}")
    _announce(9, "two-sided identity (200 solver + 100 rapidity + slices)",
              max(worst_solver, worst_rap, worst_5h5), 1e-7,
              time.monotonic() - t0, ok)


def test_criterion_10_symmetry_orbit():
    t0 = time.monotonic()
    rng = random.Random(1010)
    worst = 0.0
    n_members = 0
    for _ in range(4):
        x1 = complex(rng.uniform(0.05, 0.6), rng.uniform(-0.3, 0.3))
        x2 = complex(rng.uniform(0.05, 0.6), rng.uniform(-0.3, 0.3))
        y1 = complex(rng.uniform(0.7, 1.3), rng.uniform(-0.3, 0.3))
        y2 = complex(rng.uniform(0.7, 1.3), rng.uniform(-0.3, 0.3))
        x3, y3 = hyp_identity.solve_conditions(x1, x2, y1, y2)
        inst = hyp_identity.IdentityInstance(x=(x1, x2, x3), y=(y1, y2, y3))
        if hyp_identity.identity_residual(inst, 50_000) >= 1e-7:
            continue
        for mb in hyp_identity.symmetry_orbit(inst):
            worst = max(worst, hyp_identity.identity_residual(mb, 50_000))
            n_members += 1
    print(f"    {n_members} orbit members checked")
    _announce(10, "orbit members pass at the base tolerance", worst, 1e-7,
              time.monotonic() - t0, worst < 1e-7 and n_members > 100)


def test_criterion_11_crossover_consistency():
    t0 = time.monotonic()
    e = ExponentPair(alpha=0.3 + 0.0j, beta=0.8 + 0.0j)
    a_half = cmath.exp(0.5 * cmath.log(e.a_const))
    worst = 0.0
    # regime I large-n asymptote against regime III, both signs
    n = 100_000
    v = limits.limit_weight_I(e, n) * gamma(e.alpha) / gamma(e.beta) / (
        a_half * limits.limit_weight_III(e, float(n))
    )
    worst = max(worst, abs(v - 1.0))
    v = limits.limit_weight_I(e, -n) * gamma(e.alpha) / (
        gamma(e.beta) * e.a_const
    ) * a_half / limits.limit_weight_III(e, float(-n))
    worst = max(worst, abs(v - 1.0))
    # regime II small-x asymptote against regime III, both signs
    for x in (1e-3, -1e-3):
        frac = x / (2 * math.pi) - math.floor(x / (2 * math.pi))
        v = (
            limits.limit_weight_II(e, x)
            * cmath.exp(-frac * cmath.log(e.a_const))
            / (
                2.0 ** (e.beta - e.alpha)
                * cmath.exp(0.5 * math.copysign(1.0, x) * cmath.log(e.a_const))
                * limits.limit_weight_III(e, x)
            )
        )
        worst = max(worst, abs(v - 1.0))
    _announce(11, "regime-III matches regime-I and regime-II asymptotes", worst,
              1e-6, time.monotonic() - t0, worst < 1e-6)


def test_criterion_12_cli_contract(tmp_path, capsys):
    t0 = time.monotonic()
    import json

    args = ["ste", "--scope", "finite", "--N", "3", "--count", "3", "--seed", "7"]
    code1 = cli_main(args)
    out1 = capsys.readouterr().out
    code2 = cli_main(args)
    out2 = capsys.readouterr().out
    r1, r2 = json.loads(out1), json.loads(out2)
    r1.pop("wall_time_ms")
    r2.pop("wall_time_ms")
    deterministic = r1 == r2 and code1 == code2 == 0
    fail_code = cli_main(args + ["--tol", "1e-30"])
    capsys.readouterr()
    usage_code = cli_main(["weights", "--k", "1.5"])
    capsys.readouterr()
    ok = deterministic and fail_code == 1 and usage_code == 2
    with capsys.disabled():
        _announce(12, "CLI determinism and exit codes", float(not ok), 0.5,
                  time.monotonic() - t0, ok)
