import cmath
import math
import random

import numpy as np
import pytest

from cpm_lab.hyp_identity import (
    IdentityInstance,
    dougall_5h5_check,
    g_function,
    g_symmetry_check,
    identity_residual,
    instance_from_rapidities,
    lhs_sum,
    rhs_closed_form,
    solve_conditions,
    symmetry_orbit,
)
from cpm_lab.rapidity import Modulus
from cpm_lab.specfun import gamma, pochhammer
from cpm_lab.ste_infinite import PrincipalTriple, regime1_ste

T = PrincipalTriple.from_lambdas(Modulus.from_k(0.3), 0.2, 0.45, 0.7)
DR = IdentityInstance(x=(0.1, 0.15, 0.25), y=(0.9, 0.85, 0.75))


def _random_instance(rng, imag=0.3):
    x1 = complex(rng.uniform(0.05, 0.6), rng.uniform(-imag, imag))
    x2 = complex(rng.uniform(0.05, 0.6), rng.uniform(-imag, imag))
    y1 = complex(rng.uniform(0.7, 1.3), rng.uniform(-imag, imag))
    y2 = complex(rng.uniform(0.7, 1.3), rng.uniform(-imag, imag))
    x3, y3 = solve_conditions(x1, x2, y1, y2)
    return IdentityInstance(x=(x1, x2, x3), y=(y1, y2, y3))


def _random_triple(rng):
    k = rng.uniform(0.0, 0.85)
    while True:
        ls = sorted(rng.uniform(0.05, 0.95) for _ in range(3))
        if ls[1] - ls[0] >= 0.08 and ls[2] - ls[1] >= 0.08:
            return PrincipalTriple.from_lambdas(Modulus.from_k(k), *ls)


# ---------------------------------------------------------------------------
# instances and conditions


def test_rapidity_instances_satisfy_conditions():
    rng = random.Random(23)
    for _ in range(100):
        t = _random_triple(rng)
        spins = tuple(rng.randint(-3, 3) for _ in range(3))
        inst = instance_from_rapidities(t, *spins)
        sa, pe = inst.conditions()
        assert sa < 1e-12
        assert pe < 1e-12


def test_u_v_variables_two_routes():
    # u_j, v_j from the linear relations against their direct definitions
    rng = random.Random(24)
    for _ in range(30):
        t = _random_triple(rng)
        inst = instance_from_rapidities(t, 0, 0, 0)
        x, y = inst.x, inst.y
        u_direct = (
            t.exps("Wbar", "pr").alpha,
            t.exps("W", "qr").alpha,
            t.exps("W", "pq").alpha,
        )
        v_direct = (
            t.exps("Wbar", "pr").beta,
            t.exps("W", "qr").beta,
            t.exps("W", "pq").beta,
        )
        u_linear = (1 + x[1] - y[2], 1 + x[0] - y[2], 1 + x[0] - y[1])
        v_linear = (y[1] - x[2], y[0] - x[2], y[0] - x[1])
        for a, b in zip(u_direct, u_linear):
            assert abs(a - b) < 1e-12
        for a, b in zip(v_direct, v_linear):
            assert abs(a - b) < 1e-12


def test_solver_dougall_slice():
    # y_i = 1 - x_i forces x3 = 1/2 - x1 - x2
    x1, x2 = 0.1, 0.15
    x3, y3 = solve_conditions(x1, x2, 1.0 - x1, 1.0 - x2)
    assert abs(x3 - (0.5 - x1 - x2)) < 1e-12
    assert abs(y3 - (1.0 - x3)) < 1e-12


def test_solver_branch_shift():
    x3a, y3a = solve_conditions(0.2, 0.3, 0.9, 1.1, branch_m=0)
    x3b, y3b = solve_conditions(0.2, 0.3, 0.9, 1.1, branch_m=3)
    assert abs(x3b - x3a - 3.0) < 1e-13
    assert abs(y3b - y3a - 3.0) < 1e-13


def test_solver_random_conditions():
    rng = random.Random(25)
    for _ in range(50):
        inst = _random_instance(rng)
        sa, pe = inst.conditions()
        assert sa < 1e-12
        assert pe < 1e-12


def test_m_absorption_preserves_conditions():
    rng = random.Random(26)
    t = _random_triple(rng)
    inst = instance_from_rapidities(t, 2, -1, 3)
    ab = inst.absorbed()
    sa, pe = ab.conditions()
    assert sa < 1e-12
    assert pe < 1e-12
    assert ab.m == (0, 0, 0)


def test_json_roundtrip():
    inst = _random_instance(random.Random(1))
    back = IdentityInstance.from_json(inst.to_json())
    assert all(abs(a - b) < 1e-16 for a, b in zip(back.x, inst.x))
    assert all(abs(a - b) < 1e-16 for a, b in zip(back.y, inst.y))


# ---------------------------------------------------------------------------
# both sides of the identity


def test_dougall_ramanujan_slice():
    closed = gamma(0.5)
    for v in (0.1, 0.15, 0.25):
        closed *= gamma(v) / gamma(v + 0.5)
    s = lhs_sum(DR, 100_000)
    assert abs(s.value / closed - 1.0) <= 2.0 * s.tail_bound / abs(closed)
    assert abs(rhs_closed_form(DR) / closed - 1.0) < 1e-12
    assert identity_residual(DR) < 1e-9


def test_summand_decay_fit():
    ab = DR
    terms = []
    ds = np.arange(1000, 10001, 500)
    for d in ds:
        val = 1.0
        for xj, yj in zip(ab.x, ab.y):
            val *= gamma(xj + 64) / gamma(yj + 64)
        terms.append(val)
    # recurrence from a moderate anchor out to each d
    t0 = 1.0
    for xj, yj in zip(ab.x, ab.y):
        t0 *= gamma(complex(xj)) / gamma(complex(yj))
    vals = []
    t = t0
    n = 0
    targets = set(int(d) for d in ds)
    while n < ds[-1]:
        ratio = 1.0
        for xj, yj in zip(ab.x, ab.y):
            ratio *= (xj + n) / (yj + n)
        t *= ratio
        n += 1
        if n in targets:
            vals.append(abs(t))
    slope = np.polyfit(np.log(ds), np.log(vals), 1)[0]
    assert abs(slope + 2.0) < 0.05


def test_lhs_permutation_invariance():
    perm = IdentityInstance(x=(DR.x[1], DR.x[2], DR.x[0]), y=DR.y)
    a = lhs_sum(DR, 5000).value
    b = lhs_sum(perm, 5000).value
    assert abs(a - b) < 1e-13 * abs(a)


def test_g_two_forms_agree():
    rng = random.Random(27)
    for _ in range(100):
        inst = _random_instance(rng, imag=0.5)
        g1 = g_function(inst.x, inst.y, "gamma")
        g2 = g_function(inst.x, inst.y, "trig")
        assert abs(g1 / g2 - 1.0) < 1e-11


def test_rhs_f_route():
    # rhs * prod Gamma(y_j)/Gamma(x_j) equals the cocycle constant times the
    # Pochhammer ratio of the triangle side
    rng = random.Random(28)
    from cpm_lab.ste_infinite import r_infty

    for _ in range(10):
        t = _random_triple(rng)
        spins = tuple(rng.randint(-2, 2) for _ in range(3))
        inst = instance_from_rapidities(t, *spins)
        m1, m2, m3 = spins
        x, y = inst.x, inst.y
        # the product over pairs i < j of (1+x_i-y_j)_{m_i-m_j}/(y_i-x_j)_{m_i-m_j}
        poch = 1.0 + 0.0j
        ms = (m1, m2, m3)
        for i in range(3):
            for j in range(i + 1, 3):
                poch *= pochhammer(1 + x[i] - y[j], ms[i] - ms[j])
                poch /= pochhammer(y[i] - x[j], ms[i] - ms[j])
        lhs = rhs_closed_form(inst)
        for xj, yj in zip(x, y):
            lhs *= gamma(complex(yj)) / gamma(complex(xj))
        rhs = r_infty(t) * poch
        assert abs(lhs / rhs - 1.0) < 1e-10


def test_identity_solver_instances():
    rng = random.Random(29)
    for _ in range(30):
        inst = _random_instance(rng)
        assert identity_residual(inst, 50_000) < 1e-7


def test_identity_rapidity_instances():
    rng = random.Random(30)
    for _ in range(15):
        t = _random_triple(rng)
        spins = tuple(rng.randint(-3, 3) for _ in range(3))
        inst = instance_from_rapidities(t, *spins)
        assert identity_residual(inst, 50_000) < 1e-7


def test_identity_complex_box():
    rng = random.Random(31)
    for _ in range(10):
        inst = _random_instance(rng, imag=1.5)
        assert identity_residual(inst, 50_000) < 1e-7


def test_rhs_pole_reported():
    inst = IdentityInstance(x=(0.3, 0.4, 0.5), y=(0.3, 1.2, 1.7))  # y1 - x1 = 0
    with pytest.raises(ValueError):
        rhs_closed_form(inst)


# ---------------------------------------------------------------------------
# symmetries


def test_reflection_fixes_dougall_slice():
    orb = symmetry_orbit(DR)
    # the reflection member is x -> 1 - y = x itself
    refl = IdentityInstance(
        x=tuple(1.0 - v for v in DR.y), y=tuple(1.0 - v for v in DR.x)
    )
    assert all(abs(a - b) < 1e-15 for a, b in zip(refl.x, DR.x))
    assert any(
        all(abs(a - b) < 1e-15 for a, b in zip(mb.x, DR.x))
        and all(abs(a - b) < 1e-15 for a, b in zip(mb.y, DR.y))
        for mb in orb
    )


def test_orbit_members_satisfy_conditions():
    rng = random.Random(33)
    inst = _random_instance(rng)
    orb = symmetry_orbit(inst)
    assert len(orb) >= 36
    for mb in orb:
        sa, pe = mb.conditions()
        assert sa < 1e-11
        assert pe < 1e-11


def test_orbit_members_pass_identity():
    rng = random.Random(34)
    inst = _random_instance(rng)
    for mb in symmetry_orbit(inst):
        assert identity_residual(mb, 20_000) < 1e-7


def test_translation_by_two():
    inst = _random_instance(random.Random(35))
    x = list(inst.x)
    y = list(inst.y)
    x[0] += 2
    y[0] += 2
    shifted = IdentityInstance(x=tuple(x), y=tuple(y))
    sa, pe = shifted.conditions()
    assert sa < 1e-12
    assert pe < 1e-12
    assert identity_residual(shifted, 20_000) < 1e-7


def test_pochhammer_pair_relabeling():
    # (1+x_i-y_j)_{m}/(y_i-x_j)_{m} = (1+x_j-y_i)_{-m}/(y_j-x_i)_{-m}
    rng = random.Random(36)
    for _ in range(30):
        xi = complex(rng.uniform(0.05, 0.6), rng.uniform(-0.4, 0.4))
        xj = complex(rng.uniform(0.05, 0.6), rng.uniform(-0.4, 0.4))
        yi = complex(rng.uniform(0.7, 1.3), rng.uniform(-0.4, 0.4))
        yj = complex(rng.uniform(0.7, 1.3), rng.uniform(-0.4, 0.4))
        m = rng.randint(-4, 4)
        lhs = pochhammer(1 + xi - yj, m) / pochhammer(yi - xj, m)
        rhs = pochhammer(1 + xj - yi, -m) / pochhammer(yj - xi, -m)
        assert abs(lhs / rhs - 1.0) < 1e-11


def test_g_symmetry_checks():
    rng = random.Random(37)
    for _ in range(100):
        inst = _random_instance(rng, imag=0.5)
        assert g_symmetry_check(inst) < 1e-11


def test_sigma_reflection_invariance():
    inst = _random_instance(random.Random(38))
    refl = IdentityInstance(
        x=tuple(1.0 - v for v in inst.y), y=tuple(1.0 - v for v in inst.x)
    )

    def sigma(ii):
        xi = [cmath.exp(1j * math.pi * v) for v in ii.x]
        eta = [cmath.exp(1j * math.pi * v) for v in ii.y]
        rho = xi[0] * xi[1] * xi[2]
        return sum(e * e - u * u for e, u in zip(eta, xi)) / rho

    assert abs(sigma(inst) / sigma(refl) - 1.0) < 1e-11


def test_sigma_swap_symmetric():
    inst = _random_instance(random.Random(39))
    swapped = IdentityInstance(x=(inst.x[1], inst.x[0], inst.x[2]), y=inst.y)
    assert g_symmetry_check(swapped) < 1e-11
    # the direct sine-product form also agrees across the swap
    def sigma_direct(ii):
        out = (2j) ** 2
        for v in ii.y:
            out *= cmath.sin(math.pi * (v - ii.x[0]))
        return out / cmath.sin(math.pi * ii.x[0])

    # sigma_direct anchors on x_1, so compare through the symmetric form
    xi = [cmath.exp(1j * math.pi * v) for v in inst.x]
    eta = [cmath.exp(1j * math.pi * v) for v in inst.y]
    rho = xi[0] * xi[1] * xi[2]
    sym = sum(e * e - u * u for e, u in zip(eta, xi)) / rho
    assert abs(sigma_direct(inst) / sym - 1.0) < 1e-11
    assert abs(sigma_direct(swapped) / sym - 1.0) < 1e-11


# ---------------------------------------------------------------------------
# degenerations and the consistency square


def test_dougall_5h5_examples():
    assert dougall_5h5_check(0.1, 0.15, 0.25, 0.0) < 1e-9
    assert dougall_5h5_check(0.1, 0.1, 0.1, 0.2) < 1e-7


def test_dougall_vs_full_identity_distinction():
    # sum < 1 but != 1/2: the one-parameter formula holds while the general
    # identity's Saalschuetz condition fails
    assert dougall_5h5_check(-0.3, 0.2, 0.4, 0.0) < 1e-7
    inst = IdentityInstance(x=(-0.3, 0.2, 0.4), y=(1.3, 0.8, 0.6))
    sa, _ = inst.conditions()
    assert sa > 0.1


def test_dougall_divergent_rejected():
    with pytest.raises(ValueError):
        dougall_5h5_check(0.9, 0.9, 0.9, 0.0)


def test_consistency_square_with_regime1():
    rng = random.Random(40)
    t = _random_triple(rng)
    spins = (1, 0, -1)
    inst = instance_from_rapidities(t, *spins)
    assert identity_residual(inst, 50_000) < 1e-7
    assert regime1_ste(t, *spins, 50_000).rel_err < 1e-7
