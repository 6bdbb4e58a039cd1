"""Star-triangle equation in the three large-N limits.

Regime I is an infinite discrete sum of Pochhammer-ratio weights, regime II a
periodic singular integral over one period, regime III a whole-line singular
integral.  Each comes with its limiting constant, a cocycle f_pq f_qr / f_pr
of Gamma products.  The integrals have algebraic endpoint singularities with
exponents in (-1, 0), which tanh-sinh (double-exponential) quadrature absorbs
without knowing the exponent; singular points always sit at sub-interval
endpoints and integrands receive exact distances to both endpoints so the
singular factors never lose precision to cancellation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .limits import duality_map, limit_weight_I
from .rapidity import Modulus, RapidityPoint, rapidity_from_lambda
from .series import bilateral_gamma_sum
from .specfun import gamma
from .weights import (
    ExponentPair,
    SteResidual,
    exponents,
    f_pq as finite_f_pq,
    weight_w,
    weight_wbar,
)

__all__ = [
    "PrincipalTriple",
    "QuadratureConfig",
    "QuadratureNonConvergence",
    "FpqLimitReport",
    "tanh_sinh",
    "r_infty",
    "regime1_summand",
    "regime1_ste",
    "regime2_weights",
    "regime2_ste",
    "regime2_fourier_coefficient",
    "regime2_fourier_ste",
    "regime3_weights",
    "regime3_ste",
    "f_pq_limit_check",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PrincipalTriple:
    """Ordered rapidity triple lambda_p < lambda_q < lambda_r inside (0, 1).

    In this window every one of the six exponent pairs entering the
    star-triangle equation satisfies 0 < Re(beta - alpha) < 1 and all six
    limit weights are real and positive.
    """

    modulus: Modulus
    p: RapidityPoint
    q: RapidityPoint
    r: RapidityPoint

    def __post_init__(self):
        if not self.p.lam < self.q.lam < self.r.lam < 1.0 + self.p.lam:
            raise ValueError("need lambda_p < lambda_q < lambda_r < 1 + lambda_p")
        for which in ("W", "Wbar"):
            for a, b in ((self.p, self.q), (self.p, self.r), (self.q, self.r)):
                if not exponents(a, b, which).in_principal_domain:
                    raise ValueError("triple leaves the principal domain")

    @classmethod
    def from_lambdas(cls, m: Modulus, l1: float, l2: float, l3: float) -> "PrincipalTriple":
        return cls(
            modulus=m,
            p=rapidity_from_lambda(m, l1),
            q=rapidity_from_lambda(m, l2),
            r=rapidity_from_lambda(m, l3),
        )

    def pair(self, name: str) -> tuple[RapidityPoint, RapidityPoint]:
        return {
            "pq": (self.p, self.q),
            "pr": (self.p, self.r),
            "qr": (self.q, self.r),
        }[name]

    def exps(self, which: str, pair: str) -> ExponentPair:
        a, b = self.pair(pair)
        return exponents(a, b, which)


@dataclass(frozen=True)
class QuadratureConfig:
    """Knobs of the singular quadrature."""

    sub_intervals: int = 1
    levels: int = 10
    tail_map: str = "rational"  # or "exponential"
    abs_tol: float = 1e-10

    def __post_init__(self):
        if self.abs_tol <= 0.0:
            raise ValueError("abs_tol must be positive")
        if not 1 <= self.levels <= 12:
            raise ValueError("levels must lie in 1..12")
        if self.tail_map not in ("rational", "exponential"):
            raise ValueError("tail_map must be 'rational' or 'exponential'")


class QuadratureNonConvergence(RuntimeError):
    """Successive refinement levels stayed apart by more than abs_tol."""


_U_MAX = 6.0  # tanh((pi/2) sinh 6) is within 1e-275 of 1; beyond that exp overflows


@lru_cache(maxsize=64)
def _ts_level(level: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(sigma, delta, rho) for the new nodes of a refinement level.

    h = 2^-level; level 0 holds all integer nodes u = k, later levels only the
    odd multiples of h.  sigma is the fraction of the interval measured from
    the left endpoint, delta the fraction to the NEAREST endpoint (exact in
    double precision even when it underflows the naive 1 - tanh), rho the
    weight cosh(u) (pi/2) / cosh^2((pi/2) sinh u).
    """
    h = 0.5**level
    if level == 0:
        ks = np.arange(-int(_U_MAX), int(_U_MAX) + 1)
        u = ks * h
    else:
        m = int(_U_MAX / h)
        ks = np.arange(-m, m + 1)
        u = ks * h
        u = u[ks % 2 != 0]
    v = 0.5 * math.pi * np.sinh(u)
    rho = 0.5 * math.pi * np.cosh(u) / np.cosh(v) ** 2
    near = 1.0 / (np.exp(2.0 * np.abs(v)) + 1.0)  # fraction to nearest endpoint
    sigma = np.where(u >= 0, 1.0 - near, near)
    delta = near
    return sigma, delta, rho


def tanh_sinh(f, a: float, b: float, levels: int = 10, abs_tol: float = 1e-10):
    """Integrate f(w, dist_lo, dist_hi) over (a, b) by tanh-sinh refinement.

    f must accept numpy arrays; dist_lo = w - a and dist_hi = b - w are
    supplied exactly so integrable endpoint singularities can be evaluated
    without cancellation.  Returns (value, levels_used); raises
    QuadratureNonConvergence if the last two levels differ by more than
    abs_tol (plus a small relative term).
    """
    span = b - a
    total = 0.0
    estimate = None
    for level in range(levels + 1):
        sigma, delta, rho = _ts_level(level)
        dist_lo = span * np.where(sigma <= 0.5, delta, 1.0 - delta)
        dist_hi = span * np.where(sigma <= 0.5, 1.0 - delta, delta)
        # recompute the near side exactly from delta
        dist_lo = np.where(sigma <= 0.5, span * delta, span * (1.0 - delta))
        dist_hi = np.where(sigma > 0.5, span * delta, span * (1.0 - delta))
        w = a + span * sigma
        vals = f(w, dist_lo, dist_hi)
        chunk = float(np.real(np.dot(rho, vals))) if np.isrealobj(vals) else complex(np.dot(rho, vals))
        h = 0.5**level
        total = (total * 0.5 + h * chunk) if level else h * chunk
        new_estimate = 0.5 * span * total
        if estimate is not None:
            if abs(new_estimate - estimate) <= abs_tol + 1e-13 * abs(new_estimate):
                return new_estimate, level
        estimate = new_estimate
    raise QuadratureNonConvergence(
        f"tanh-sinh did not reach abs_tol={abs_tol} within {levels} levels"
    )


def _integrate_pieces(f, lo: float, hi: float, cfg: QuadratureConfig):
    """Integrate over (lo, hi), optionally pre-split into equal sub-intervals.

    Only the outermost endpoints may be singular, so interior cut points use
    plain evaluation; f still receives distances measured from the cut points,
    which is harmless for regular factors.
    """
    cuts = np.linspace(lo, hi, cfg.sub_intervals + 1)
    total = 0.0
    levels_used = 0
    for i in range(cfg.sub_intervals):
        val, lev = tanh_sinh(f, float(cuts[i]), float(cuts[i + 1]), cfg.levels, cfg.abs_tol)
        total += val
        levels_used = max(levels_used, lev)
    return total, levels_used


def r_infty(t: PrincipalTriple) -> complex:
    """Limiting constant f_pq f_qr / f_pr of the regime-I equation."""
    def f(pair: str) -> complex:
        e = t.exps("W", pair)
        eb = t.exps("Wbar", pair)
        return (
            gamma(e.alpha)
            * gamma(eb.beta)
            * gamma(1.0 - eb.alpha)
            / (gamma(e.beta) * gamma(eb.beta - eb.alpha))
        )

    return f("pq") * f("qr") / f("pr")


def regime1_summand(t: PrincipalTriple, a: int, b: int, c: int, d: int) -> complex:
    """One term Wbar_qr(b-d) W_pr(a-d) Wbar_pq(d-c) of the regime-I sum."""
    return (
        limit_weight_I(t.exps("Wbar", "qr"), b - d)
        * limit_weight_I(t.exps("W", "pr"), a - d)
        * limit_weight_I(t.exps("Wbar", "pq"), d - c)
    )


def regime1_ste(t: PrincipalTriple, a: int, b: int, c: int, cutoff: int) -> SteResidual:
    """Regime-I star-triangle residual with resummed algebraic tail.

    The sum over d is a bilateral Gamma-ratio series decaying like |d|^-2;
    partial sums at geometric sub-cutoffs are Richardson-extrapolated (plain
    truncation alone would leave an O(1/cutoff) gap far above the target
    accuracy) and the 2C/cutoff truncation bound is reported alongside.
    """
    if cutoff < 1000:
        raise ValueError("cutoff must be >= 1000")
    e_qr_b = t.exps("Wbar", "qr")
    e_pr = t.exps("W", "pr")
    e_pq_b = t.exps("Wbar", "pq")
    prefactor = (
        gamma(e_qr_b.beta)
        / gamma(e_qr_b.alpha)
        * gamma(e_pr.beta)
        / gamma(e_pr.alpha)
        * gamma(1.0 - e_pq_b.alpha)
        / gamma(1.0 - e_pq_b.beta)
    )
    xs = (e_qr_b.alpha + b, e_pr.alpha + a, 1.0 - e_pq_b.beta + c)
    ys = (e_qr_b.beta + b, e_pr.beta + a, 1.0 - e_pq_b.alpha + c)
    s = bilateral_gamma_sum(xs, ys, cutoff)
    lhs = prefactor * s.extrapolated
    rhs = (
        r_infty(t)
        * limit_weight_I(t.exps("W", "pq"), a - b)
        * limit_weight_I(t.exps("Wbar", "pr"), b - c)
        * limit_weight_I(t.exps("W", "qr"), a - c)
    )
    return SteResidual(lhs=lhs, rhs=rhs, tail_bound=abs(prefactor) * s.tail_bound)


_PAIR_EXPONENTS = {
    "w_pq": ("pq", False),
    "wbar_pq": ("pq", True),
    "w_pr": ("pr", False),
    "wbar_pr": ("pr", True),
    "w_qr": ("qr", False),
    "wbar_qr": ("qr", True),
}


def _regime2_params(t: PrincipalTriple, pair: str) -> tuple[float, float]:
    """(exponential coefficient g, sine-power exponent) of one regime-II weight."""
    name, barred = _PAIR_EXPONENTS[pair]
    x, y = t.pair(name)
    if barred:
        return x.gamma + y.gamma, y.lam - x.lam - 1.0
    return x.gamma - y.gamma, x.lam - y.lam


def regime2_weights(t: PrincipalTriple, pair: str, x: float, drop_floor: bool = False) -> float:
    """Regime-II weight e^(g frac(x/2pi)) |sin x/2|^expo for the named pair.

    pair is one of w_pq, wbar_pq, w_pr, wbar_pr, w_qr, wbar_qr; drop_floor
    selects the non-periodic gauge variant e^(g x/2pi).  Exact lattice points
    return an infinity marker (integrable singularity).
    """
    g, expo = _regime2_params(t, pair)
    s = abs(math.sin(0.5 * x))
    if s == 0.0:
        return math.inf
    tpart = x / TWO_PI if drop_floor else x / TWO_PI - math.floor(x / TWO_PI)
    return math.exp(g * tpart) * s**expo


def regime3_weights(t: PrincipalTriple, pair: str, x: float) -> float:
    """Regime-III weight e^(-g sign(x)/2) |x|^expo for the named pair."""
    if x == 0.0:
        raise ValueError("regime-III weight undefined at 0")
    g, expo = _regime2_params(t, pair)
    return math.exp(-0.5 * g * math.copysign(1.0, x)) * abs(x) ** expo


def _r2_factor(g: float, expo: float, c0: float, c1: float, sing_lo: bool, sing_hi: bool, drop_floor: bool):
    """Vectorized regime-II factor with exact endpoint distances.

    Both the sine magnitude and the periodic exponent are rebuilt from the
    endpoint distance near a singular endpoint: the argument computed as
    c0 + c1 w can round across the lattice point there, which would put the
    floor on the wrong branch with an O(1) error exactly where the singular
    factor is large.
    """

    def ev(w, dlo, dhi):
        arg = c0 + c1 * w
        s = np.abs(np.sin(0.5 * arg))
        tpart = arg / TWO_PI
        if not drop_floor:
            tpart = tpart - np.floor(tpart)
        if sing_lo:
            near = dlo < 0.01
            s = np.where(near, np.sin(0.5 * dlo), s)
            if not drop_floor:
                frac_lo = dlo / TWO_PI if c1 > 0 else 1.0 - dlo / TWO_PI
                tpart = np.where(near, frac_lo, tpart)
        if sing_hi:
            near = dhi < 0.01
            s = np.where(near, np.sin(0.5 * dhi), s)
            if not drop_floor:
                frac_hi = dhi / TWO_PI if c1 < 0 else 1.0 - dhi / TWO_PI
                tpart = np.where(near, frac_hi, tpart)
        return np.exp(g * tpart) * s**expo

    return ev


def _reduce_mod_2pi(v: float) -> float:
    out = math.fmod(v, TWO_PI)
    return out + TWO_PI if out < 0 else out


def regime2_ste(
    t: PrincipalTriple,
    x: float,
    y: float,
    z: float,
    cfg: QuadratureConfig | None = None,
    drop_floor: bool = False,
) -> SteResidual:
    """Regime-II star-triangle residual, periodic singular integral form.

    lhs = (2 pi)^-1 int_0^{2pi} Wbar_qr(y-w) W_pr(x-w) Wbar_pq(w-z) dw,
    rhs = R_inf W_pq(x-y) Wbar_pr(y-z) W_qr(x-z).
    """
    cfg = cfg or QuadratureConfig()
    xr, yr, zr = (_reduce_mod_2pi(v) for v in (x, y, z))
    if len({round(v, 12) for v in (xr, yr, zr)}) != 3:
        raise ValueError("x, y, z must be distinct mod 2 pi")
    factors = [
        # (g, expo) with argument c0 + c1*w, singular where the argument
        # vanishes, i.e. at w = y, x, z respectively
        (*_regime2_params(t, "wbar_qr"), yr, -1.0, yr),
        (*_regime2_params(t, "w_pr"), xr, -1.0, xr),
        (*_regime2_params(t, "wbar_pq"), -zr, 1.0, zr),
    ]
    bounds = sorted({0.0, xr, yr, zr, TWO_PI})
    total = 0.0
    levels_used = 0
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        if hi - lo < 1e-14:
            continue
        evs = [
            _r2_factor(g, expo, c0, c1, sing == lo, sing == hi, drop_floor)
            for (g, expo, c0, c1, sing) in factors
        ]

        def f(w, dlo, dhi, evs=evs):
            return evs[0](w, dlo, dhi) * evs[1](w, dlo, dhi) * evs[2](w, dlo, dhi)

        val, lev = _integrate_pieces(f, lo, hi, cfg)
        total += val
        levels_used = max(levels_used, lev)
    lhs = total / TWO_PI
    const = r2_gauge_constant(t) if drop_floor else r2_constant(t)
    rhs = (
        const
        * regime2_weights(t, "w_pq", xr - yr, drop_floor)
        * regime2_weights(t, "wbar_pr", yr - zr, drop_floor)
        * regime2_weights(t, "w_qr", xr - zr, drop_floor)
    )
    return SteResidual(lhs=complex(lhs), rhs=complex(rhs), quad_levels=levels_used)


def r2_constant(t: PrincipalTriple) -> float:
    """Regime-II constant, cocycle of Gamma(a) Gamma(1-a) / (pi Gamma(b-a))."""
    def ftilde(pair: str) -> complex:
        eb = t.exps("Wbar", pair)
        return (
            gamma(eb.alpha)
            * gamma(1.0 - eb.alpha)
            / (math.pi * gamma(eb.beta - eb.alpha))
        )

    val = ftilde("pq") * ftilde("qr") / ftilde("pr")
    return float(val.real)


def r2_gauge_constant(t: PrincipalTriple) -> float:
    """Constant of the floor-free gauge variant of the regime-II equation.

    The gauge weights are the nonchiral solution times an exponential factor
    whose w-dependence cancels identically inside the equation, so the
    constant is the nonchiral cocycle built from the lambda gaps alone.
    """
    lams = {"pq": (t.p.lam, t.q.lam), "qr": (t.q.lam, t.r.lam), "pr": (t.p.lam, t.r.lam)}

    def f0(pair: str) -> complex:
        d = lams[pair][1] - lams[pair][0]
        return gamma(0.5 * d) * gamma(1.0 - 0.5 * d) / (math.pi * gamma(1.0 - d))

    val = f0("pq") * f0("qr") / f0("pr")
    return float(val.real)


def r3_constant(t: PrincipalTriple) -> float:
    """Regime-III constant, cocycle of (A/Abar)^(1/2) Gamma(a) Gamma(1-a) / Gamma(b-a).

    The (A/Abar)^(1/2) = e^(-gamma_second) factor is what the D = 1
    normalization of the crossover weight actually implies; it collapses to
    e^(-gamma_q) for the triple and vanishes in the nonchiral case.
    """
    gammas = {"pq": t.q.gamma, "qr": t.r.gamma, "pr": t.r.gamma}

    def fhat(pair: str) -> complex:
        eb = t.exps("Wbar", pair)
        return (
            math.exp(-gammas[pair])
            * gamma(eb.alpha)
            * gamma(1.0 - eb.alpha)
            / gamma(eb.beta - eb.alpha)
        )

    val = fhat("pq") * fhat("qr") / fhat("pr")
    return float(val.real)


def _dual_coefficient_params(e: ExponentPair) -> tuple[complex, complex, complex]:
    """(a, b, K) with Fourier coefficient K Gamma(a+j)/Gamma(b+j)."""
    d = duality_map(e, "to_dual")
    a, b = d.alpha, d.beta
    k = (
        cmath.exp((1.0 - b + a) * cmath.log(2.0))
        * cmath.exp(1j * math.pi * (1.0 - a - b) / 2.0)
        * gamma(b - a)
        * cmath.sin(math.pi * a)
        / math.pi
    )
    return a, b, k


def regime2_fourier_coefficient(t: PrincipalTriple, pair: str, j: int, via: str = "closed") -> complex:
    """j-th Fourier coefficient of the regime-II weight for the named pair.

    via="closed" evaluates K Gamma(a+j)/Gamma(b+j) with (a, b) the duality
    image of the pair's exponents; via="quadrature" integrates
    (2 pi)^-1 e^(-i j x) W(x) over one period with singular endpoints.
    """
    name, barred = _PAIR_EXPONENTS[pair]
    pp, qq = t.pair(name)
    e = exponents(pp, qq, "Wbar" if barred else "W")
    if via == "closed":
        a, b, k = _dual_coefficient_params(e)
        return k * gamma(a + j) / gamma(b + j)
    if via == "quadrature":
        g, expo = _regime2_params(t, pair)
        weight = _r2_factor(g, expo, 0.0, 1.0, True, True, False)

        def f(w, dlo, dhi):
            return weight(w, dlo, dhi) * np.exp(-1j * j * w)

        val, _ = tanh_sinh(f, 0.0, TWO_PI, levels=11, abs_tol=1e-12)
        return complex(val) / TWO_PI
    raise ValueError(f"unknown route {via!r}")


def regime2_fourier_ste(t: PrincipalTriple, a: int, b: int, c: int, cutoff: int) -> SteResidual:
    """Fourier-transformed regime-II star-triangle residual (discrete bilateral sum).

    lhs = sum_d W^f_pq(b-d) Wbar^f_pr(a-d) W^f_qr(d-c),
    rhs = (1/R_inf) Wbar^f_qr(a-b) W^f_pr(b-c) Wbar^f_pq(a-c),
    with every coefficient in the closed Gamma-ratio form.
    """
    if cutoff < 1000:
        raise ValueError("cutoff must be >= 1000")
    a1, b1, k1 = _dual_coefficient_params(t.exps("W", "pq"))
    a2, b2, k2 = _dual_coefficient_params(t.exps("Wbar", "pr"))
    a3, b3, k3 = _dual_coefficient_params(t.exps("W", "qr"))
    # third factor has argument d - c = -(n + c); reflect it to a ratio in +n
    const3 = cmath.sin(math.pi * (b3 - c)) / cmath.sin(math.pi * (a3 - c))
    xs = (a1 + b, a2 + a, 1.0 - b3 + c)
    ys = (b1 + b, b2 + a, 1.0 - a3 + c)
    s = bilateral_gamma_sum(xs, ys, cutoff)
    lhs = k1 * k2 * k3 * const3 * s.extrapolated
    coeff = regime2_fourier_coefficient
    rhs = (
        coeff(t, "wbar_qr", a - b)
        * coeff(t, "w_pr", b - c)
        * coeff(t, "wbar_pq", a - c)
        / r2_constant(t)
    )
    return SteResidual(
        lhs=lhs, rhs=rhs, tail_bound=abs(k1 * k2 * k3 * const3) * s.tail_bound
    )


def _r3_factor(g: float, expo: float, c0: float, c1: float, sing_lo: bool, sing_hi: bool):
    """Vectorized regime-III factor with exact endpoint distances.

    Magnitude and sign are rebuilt from the distances near a singular
    endpoint, where the directly computed argument can round across zero.
    """

    def ev(w, dlo, dhi):
        arg = c0 + c1 * w
        mag = np.abs(arg)
        sgn = np.sign(arg)
        if sing_lo:
            near = dlo < 0.01
            mag = np.where(near, dlo, mag)
            sgn = np.where(near, math.copysign(1.0, c1), sgn)
        if sing_hi:
            near = dhi < 0.01
            mag = np.where(near, dhi, mag)
            sgn = np.where(near, -math.copysign(1.0, c1), sgn)
        return np.exp(-0.5 * g * sgn) * mag**expo

    return ev


def regime3_ste(
    t: PrincipalTriple, x: float, y: float, z: float, cfg: QuadratureConfig | None = None
) -> SteResidual:
    """Regime-III star-triangle residual, whole-line singular integral.

    lhs = int_-inf^inf Wbar_qr(y-w) W_pr(x-w) Wbar_pq(w-z) dw,
    rhs = Rhat_inf W_pq(x-y) Wbar_pr(y-z) W_qr(x-z).
    The infinite ends are mapped to (0, 1) by the configured tail map; the
    integrand decays like |w|^-2 so the transformed ends are regular.
    """
    cfg = cfg or QuadratureConfig()
    if len({x, y, z}) != 3:
        raise ValueError("x, y, z must be distinct")
    factors = [
        (*_regime2_params(t, "wbar_qr"), y, -1.0, y),
        (*_regime2_params(t, "w_pr"), x, -1.0, x),
        (*_regime2_params(t, "wbar_pq"), -z, 1.0, z),
    ]
    s1, s2, s3 = sorted((x, y, z))
    total = 0.0
    levels_used = 0
    for lo, hi in ((s1, s2), (s2, s3)):
        evs = [
            _r3_factor(g, expo, c0, c1, sing == lo, sing == hi)
            for (g, expo, c0, c1, sing) in factors
        ]

        def f(w, dlo, dhi, evs=evs):
            return evs[0](w, dlo, dhi) * evs[1](w, dlo, dhi) * evs[2](w, dlo, dhi)

        val, lev = _integrate_pieces(f, lo, hi, cfg)
        total += val
        levels_used = max(levels_used, lev)
    # tails: substitute the distance t >= 0 from the outermost singular point,
    # w = endpoint + orientation * t, then map t = u/(1-u) (or its exponential
    # variant) onto u in (0, 1).  Only the factor anchored at the endpoint is
    # singular there; the far end is regular after the map since the
    # integrand decays like t^-2.
    for endpoint, orientation in ((s3, 1.0), (s1, -1.0)):
        evs = [
            _r3_factor(g, expo, c0 + c1 * endpoint, c1 * orientation, sing == endpoint, False)
            for (g, expo, c0, c1, sing) in factors
        ]
        rational = cfg.tail_map == "rational"

        def f(u, dlo, dhi, evs=evs, rational=rational):
            # 1-u is inexact near the right end; dhi carries it exactly
            one_minus_u = np.maximum(np.where(u < 0.5, 1.0 - u, dhi), 1e-120)
            v = np.where(u < 0.5, u, 1.0 - dhi) / one_minus_u
            if rational:
                t_ = v
                jac = one_minus_u**-2.0
            else:
                v = np.minimum(v, 600.0)
                t_ = np.expm1(v)
                jac = np.exp(np.minimum(v - 2.0 * np.log(one_minus_u), 700.0))
            prod = jac
            for ev in evs:
                prod = prod * ev(t_, t_, np.inf)
            # beyond the overflow guards the true contribution is < 1e-100
            return np.where(dhi < 1e-110, 0.0, prod)

        val, lev = tanh_sinh(f, 0.0, 1.0, cfg.levels, cfg.abs_tol)
        total += val
        levels_used = max(levels_used, lev)
    rhs = (
        r3_constant(t)
        * regime3_weights(t, "w_pq", x - y)
        * regime3_weights(t, "wbar_pr", y - z)
        * regime3_weights(t, "w_qr", x - z)
    )
    return SteResidual(lhs=complex(total), rhs=complex(rhs), quad_levels=levels_used)


@dataclass(frozen=True)
class FpqLimitReport:
    """Finite-N constant against its large-N closed form, with side checks."""

    deviation: float  # exact F_pq (phase-snapped) vs closed form, relative
    c2_residual: float  # trigonometric identity 4 Abar Abar^f sin^2 = sin^2/sin^2
    l_deviation: float  # log-mean of W against its integral closed form
    wbar_f0_deviation: float  # Wbar^f(0)/Wbar(0) against its closed form


def f_pq_limit_check(N: int, p: RapidityPoint, q: RapidityPoint) -> FpqLimitReport:
    """Compare the exact finite-N F_pq with its limiting closed form.

    Also evaluates the standalone trigonometric identity linking the barred
    constants, the log-average of W against its integral value, and the
    dual-to-direct normalization ratio against its Gamma closed form.
    """
    e = exponents(p, q, "W")
    eb = exponents(p, q, "Wbar")
    ebf = exponents(p, q, "Wbarf")
    a, b = e.alpha, e.beta
    ab, bb = eb.alpha, eb.beta
    # closed form of F_pq with W(0) = Wbar(0) = 1 normalization
    f_lim = (
        (N / TWO_PI) ** (b - a)
        * cmath.exp(-0.5 * cmath.log(e.a_const))
        * gamma(a)
        * gamma(bb)
        * gamma(1.0 - ab)
        / (gamma(b) * gamma(bb - ab))
    )
    f_exact = finite_f_pq(N, p, q)
    phase = cmath.phase(f_exact / f_lim)
    j = round(phase * N / TWO_PI)
    f_snapped = f_exact * cmath.exp(-2j * math.pi * j / N)
    deviation = abs(f_snapped / f_lim - 1.0)

    lhs_c2 = 4.0 * eb.a_const * ebf.a_const * cmath.sin(math.pi * ebf.alpha) ** 2
    rhs_c2 = cmath.sin(math.pi * (bb - ab)) ** 2 / cmath.sin(math.pi * ab) ** 2
    c2_residual = abs(lhs_c2 / rhs_c2 - 1.0)

    tw = weight_w(N, p, q)
    logs = np.log(np.abs(tw.ratios))
    l_num = float(np.sum(logs)) / N
    l_closed = math.log(
        float(
            (
                (N / TWO_PI) ** (a - b)
                * cmath.exp(0.5 * cmath.log(e.a_const))
                * gamma(b)
                / gamma(a)
            ).real
        )
    )
    l_deviation = abs(l_num - l_closed)

    twb = weight_wbar(N, p, q)
    wf0 = complex(np.mean(twb.ratios))
    wf0_closed = (
        (N / TWO_PI) ** (ab - bb)
        * cmath.exp(0.5 * cmath.log(eb.a_const))
        * gamma(bb)
        * gamma(1.0 - bb + ab)
        / (gamma(ab) * gamma(ebf.beta) * gamma(1.0 - ebf.alpha))
    )
    wbar_f0_deviation = abs(wf0 / wf0_closed - 1.0)
    return FpqLimitReport(
        deviation=deviation,
        c2_residual=c2_residual,
        l_deviation=l_deviation,
        wbar_f0_deviation=wbar_f0_deviation,
    )
