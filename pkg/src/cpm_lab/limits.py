"""Large-N limits of the product-form weights.

Three regimes of the spin difference n as N grows:

* regime I, n fixed: W(n) -> (alpha)_n / (beta)_n, a Pochhammer ratio;
* regime II, x = 2 pi n / N fixed: W -> A^(x/2pi - floor) |sin x/2|^(alpha-beta),
  periodic mod 2 pi;
* regime III, n/N -> 0 with n -> infinity: W -> A^(-sign(x)/2) |x|^(alpha-beta)
  on the whole line.

The finite-N corrections are organized by the log-sine sum S_n(alpha) and its
asymptotic expansion in powers of pi/N with Bernoulli-polynomial coefficients
and explicit majorants for the first omitted term.  The module also houses
the bilateral sum that Fourier-transforms regime I into regime II, the
exponent-pair duality map, and the order-parameter limit.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .series import oscillatory_tail
from .specfun import GammaPole, bernoulli_poly, gamma, pochhammer, zeta_even
from .weights import ExponentPair, product_form

__all__ = [
    "RegimeWeight",
    "AsymptoticResult",
    "regime_weight",
    "limit_weight_I",
    "limit_weight_II",
    "limit_weight_III",
    "s_n_exact",
    "s_n_asymptotic",
    "phi_log_sinc",
    "finite_n_correction_check",
    "h1_closed_form",
    "h1_partial_sum",
    "duality_map",
    "order_parameter",
    "order_parameter_limit",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class RegimeWeight:
    """A limit weight with its normalization constants on record.

    c_const is the regime-II constant W(0) (N/pi)^(alpha-beta) G(beta)/G(alpha);
    d_const the regime-III analogue with the crossover scale phi(N) =
    N^phi_scale_exponent and an extra A^(1/2).
    """

    regime: str
    exponents: ExponentPair
    c_const: complex = 1.0 + 0.0j
    d_const: complex = 1.0 + 0.0j
    phi_scale_exponent: float = 0.5

    def evaluate(self, arg) -> complex:
        if self.regime == "I":
            return limit_weight_I(self.exponents, int(arg))
        if self.regime == "II":
            return self.c_const * limit_weight_II(self.exponents, float(arg))
        if self.regime == "III":
            return self.d_const * limit_weight_III(self.exponents, float(arg))
        raise ValueError(f"unknown regime {self.regime!r}")


def regime_weight(
    regime: str,
    e: ExponentPair,
    N: int | None = None,
    w0: complex = 1.0,
    phi_scale_exponent: float = 0.5,
) -> RegimeWeight:
    """Package exponents with the recorded regime constants for given N."""
    c_const = 1.0 + 0.0j
    d_const = 1.0 + 0.0j
    if N is not None:
        gr = gamma(e.beta) / gamma(e.alpha)
        c_const = w0 * (N / math.pi) ** (e.alpha - e.beta) * gr
        phi_n = float(N) ** phi_scale_exponent
        d_const = w0 * phi_n ** (e.alpha - e.beta) * gr * cmath.exp(
            0.5 * cmath.log(e.a_const)
        )
    return RegimeWeight(
        regime=regime,
        exponents=e,
        c_const=c_const,
        d_const=d_const,
        phi_scale_exponent=phi_scale_exponent,
    )


@dataclass(frozen=True)
class AsymptoticResult:
    """Truncated expansion value with a bound on the first omitted term."""

    value: complex
    truncation_order: int
    error_bound: float


def limit_weight_I(e: ExponentPair, n: int) -> complex:
    """Regime-I weight (alpha)_n / (beta)_n, defined for every integer n.

    Evaluated as a ratio throughout so large |n| never overflows the way
    the two Pochhammer factors individually would.
    """
    if n >= 0:
        a, b, m = e.alpha, e.beta, n
    else:
        # (alpha)_n/(beta)_n = (1-beta)_{-n}/(1-alpha)_{-n}
        a, b, m = 1.0 - e.beta, 1.0 - e.alpha, -n
    if m <= 64:
        num = pochhammer(a, m)
        den = pochhammer(b, m)
        if den == 0:
            raise GammaPole("regime-I weight hits a Pochhammer pole")
        return num / den
    if a.real > 0.0 and b.real > 0.0:
        from .specfun import loggamma

        return cmath.exp(
            loggamma(a + m) - loggamma(a) - loggamma(b + m) + loggamma(b)
        )
    out = 1.0 + 0.0j
    for j in range(m):
        den = b + j
        if den == 0:
            raise GammaPole("regime-I weight hits a Pochhammer pole")
        out *= (a + j) / den
    return out


def _a_power(e: ExponentPair, power: float) -> complex:
    return cmath.exp(power * cmath.log(e.a_const))


def limit_weight_II(e: ExponentPair, x: float) -> complex:
    """Regime-II weight A^(x/2pi - floor(x/2pi)) |sin x/2|^(alpha-beta).

    Periodic mod 2 pi, normalized to C = 1.  At lattice points x = 0 mod 2pi
    the value is 0 or an infinity marker depending on the sign of
    Re(alpha - beta).
    """
    frac = x / TWO_PI - math.floor(x / TWO_PI)
    s = abs(math.sin(0.5 * x))
    expo = e.alpha - e.beta
    if s == 0.0:
        if expo == 0:
            return _a_power(e, frac)
        return complex(0.0) if expo.real > 0 else complex(math.inf, 0.0)
    return _a_power(e, frac) * cmath.exp(expo * math.log(s))


def limit_weight_III(e: ExponentPair, x: float) -> complex:
    """Regime-III weight A^(-sign(x)/2) |x|^(alpha-beta), D = 1, x != 0."""
    if x == 0.0:
        raise ValueError("regime-III weight is undefined at x = 0")
    sign = 1.0 if x > 0 else -1.0
    return _a_power(e, -0.5 * sign) * cmath.exp(
        (e.alpha - e.beta) * math.log(abs(x))
    )


def s_n_exact(N: int, alpha: complex, n: int) -> complex:
    """Log of prod_{j=1..n} sin(pi (j+alpha-1)/N) / (pi (j+alpha-1)/N).

    Defined for -N < n < N; negative n uses the exact continuation
    S_n(alpha) = -S_{-n}(1 - alpha).
    """
    if not -N < n < N:
        raise ValueError("need -N < n < N")
    if n < 0:
        return -s_n_exact(N, 1.0 - complex(alpha), -n)
    alpha = complex(alpha)
    re_parts, im_parts = [], []
    for j in range(1, n + 1):
        u = math.pi * (j + alpha - 1.0) / N
        if abs(cmath.sin(u)) < 1e-300 or abs(u) < 1e-300:
            raise ZeroDivisionError("alpha hits a lattice point of the sine product")
        v = cmath.log(cmath.sin(u) / u)
        re_parts.append(v.real)
        im_parts.append(v.imag)
    return complex(math.fsum(re_parts), math.fsum(im_parts))


# ---------------------------------------------------------------------------
# phi(z) = int_0^z log(sin t / t) dt and its derivatives

_SERIES_SPLIT = 0.6


@lru_cache(maxsize=None)
def _cot_poly(m: int) -> tuple[float, ...]:
    """Coefficients (in powers of cot z) of d^m/dz^m cot z."""
    coeffs = [0.0, 1.0]  # cot z
    for _ in range(m):
        # d/dz P(c) = P'(c) * (-(1 + c^2))
        deriv = [coeffs[k] * k for k in range(1, len(coeffs))]
        nxt = [0.0] * (len(deriv) + 2)
        for k, a in enumerate(deriv):
            nxt[k] -= a
            nxt[k + 2] -= a
        coeffs = nxt
    return tuple(coeffs)


def _phi_series(z: float, j: int) -> float:
    """Zeta series for phi^(j), convergent for |z| < pi."""
    k = max(1, (j - 1 + 1) // 2)  # smallest k with 2k+1 >= j
    while 2 * k + 1 < j:
        k += 1
    acc = 0.0
    for _ in range(400):
        c = -zeta_even(2 * k) / (k * (2 * k + 1) * math.pi ** (2 * k))
        # j-th derivative of z^(2k+1)
        fall = 1.0
        for i in range(j):
            fall *= (2 * k + 1) - i
        term = c * fall * z ** (2 * k + 1 - j)
        acc += term
        if abs(term) < 1e-18 * (abs(acc) + 1e-30):
            break
        k += 1
    return acc


@lru_cache(maxsize=None)
def _leggauss(n: int):
    return np.polynomial.legendre.leggauss(n)


def phi_log_sinc(z: float, j: int) -> float:
    """phi^(j)(z) for |z| < pi, j >= 0.

    j = 0 is the antiderivative itself, j = 1 equals log(sin z / z), j = 2
    equals cot z - 1/z.  Small |z| uses the even-zeta Taylor series, larger
    |z| closed forms (plus a Gauss-Legendre stretch for j = 0 beyond pi/2).
    """
    if j < 0:
        raise ValueError("derivative order must be >= 0")
    if not abs(z) < math.pi:
        raise ValueError("phi_log_sinc requires |z| < pi")
    if z == 0.0:
        if j == 0 or j == 1 or j % 2 == 0:
            return 0.0
        k = (j - 1) // 2  # odd j >= 3
        return -2.0 * zeta_even(2 * k) * math.factorial(j - 2) / math.pi ** (2 * k)
    if j == 0:
        half = 0.5 * math.pi
        if abs(z) <= half:
            return _phi_series(z, 0)
        a = math.copysign(half, z)
        nodes, wts = _leggauss(64)
        t = 0.5 * (z - a) * nodes + 0.5 * (z + a)
        vals = np.log(np.sin(t) / t) if z > 0 else np.log(np.sin(-t) / (-t))
        return _phi_series(a, 0) + 0.5 * (z - a) * float(np.dot(wts, vals))
    if abs(z) <= _SERIES_SPLIT:
        return _phi_series(z, j)
    if j == 1:
        return math.log(math.sin(z) / z)
    if j == 2:
        return math.cos(z) / math.sin(z) - 1.0 / z
    m = j - 2
    c = math.cos(z) / math.sin(z)
    poly = _cot_poly(m)
    cot_m = 0.0
    for k in reversed(range(len(poly))):
        cot_m = cot_m * c + poly[k]
    return cot_m - (-1.0) ** m * math.factorial(m) / z ** (m + 1)


def _chi_majorant(m: int, z: float) -> float:
    """The chi^(m)(z) envelope bounding |phi^(m)(z) - phi^(m)(0)|, m >= 2."""
    az = abs(z)
    if m % 2 == 0:
        return math.factorial(m - 2) * (
            (math.pi - az) ** (1 - m) - (math.pi + az) ** (1 - m)
        )
    return math.factorial(m - 2) * (
        (math.pi - az) ** (1 - m)
        + (math.pi + az) ** (1 - m)
        - 2.0 * math.pi ** (1 - m)
    )


def s_n_asymptotic(N: int, alpha: complex, n: int, order: int) -> AsymptoticResult:
    """Expansion of S_n(alpha) through (pi/N)^(order-1) with an error bound.

    Term j contributes B_j(alpha)/j! (pi/N)^(j-1) [phi^(j)(pi n/N) - phi^(j)(0)];
    order = 0 keeps only the (N/pi) phi term.  The bound majorizes the first
    omitted term: the Bernoulli factor by its Fourier bound 2 j! zeta(j)/(2 pi)^j
    (never zero, unlike B_j(1/2)) and the phi bracket by the zeta-weighted chi
    envelope; the j = 1 bracket |log sinc| is used directly.
    """
    if order < 0 or order > 12:
        raise ValueError("order must lie in 0..12")
    if abs(n) > N // 2 + 1:
        raise ValueError("expansion is validated for |n| <= N/2")
    alpha = complex(alpha)
    z = math.pi * n / N
    value = 0.0 + 0.0j
    for j in range(order + 1):
        bracket = phi_log_sinc(z, j) - phi_log_sinc(0.0, j)
        value += (
            bernoulli_poly(j, alpha)
            / math.factorial(j)
            * (math.pi / N) ** (j - 1)
            * bracket
        )
    j = order + 1
    if j == 1:
        m_b = max(0.5, abs(bernoulli_poly(1, alpha)))
        m_phi = abs(phi_log_sinc(z, 1))
    else:
        zeta_maj = zeta_even(j) if j % 2 == 0 else zeta_even(j - 1)
        m_b = max(
            2.0 * math.factorial(j) * zeta_maj / (2.0 * math.pi) ** j,
            abs(bernoulli_poly(j, alpha)),
        )
        m_phi = zeta_even(2 * ((j + 1) // 2)) * _chi_majorant(j, z)
    bound = m_b / math.factorial(j) * (math.pi / N) ** (j - 1) * m_phi
    # allowance for double-precision rounding of both sides of the comparison;
    # without it the analytic bound can dip below the evaluation noise floor
    bound += 8.0 * 2.220446049250313e-16 * (1.0 + abs(value))
    return AsymptoticResult(value=value, truncation_order=order, error_bound=bound)


def finite_n_correction_check(N: int, e: ExponentPair, n: int) -> float:
    """Relative gap between the exact ratio and its first-order corrected limit.

    Compares the exact product form against
    A^(n/N) P(n) (sin(pi n/N)/(pi n/N))^(alpha-beta)
    exp[pi (alpha-beta)(alpha+beta-1)/(2N) (cot(pi n/N) - N/(pi n))],
    which should be accurate to O(N^-2).
    """
    if not 0 < n < N:
        raise ValueError("need 0 < n < N")
    exact = product_form(N, e, n)
    z = math.pi * n / N
    diff = e.alpha - e.beta
    approx = (
        _a_power(e, n / N)
        * limit_weight_I(e, n)
        * cmath.exp(diff * math.log(math.sin(z) / z))
        * cmath.exp(
            math.pi
            * diff
            * (e.alpha + e.beta - 1.0)
            / (2.0 * N)
            * (math.cos(z) / math.sin(z) - N / (math.pi * n))
        )
    )
    return abs(exact / approx - 1.0)


def h1_closed_form(e: ExponentPair, x: float) -> complex:
    """Closed form of the bilateral sum of (alpha)_n/(beta)_n e^(i n x).

    2^(beta-alpha-1) G(1-alpha) G(beta) / G(beta-alpha)
    e^(i (1-alpha-beta)(x-pi)/2) (sin x/2)^(beta-alpha-1) for 0 < x < 2 pi.
    """
    if not 0.0 < x < TWO_PI:
        raise ValueError("x must lie in (0, 2 pi); reduce mod 2 pi first")
    a, b = e.alpha, e.beta
    if (b - a).real <= 0.0:
        raise ValueError("need Re(beta - alpha) > 0 for convergence on the circle")
    s = math.sin(0.5 * x)
    return (
        cmath.exp((b - a - 1.0) * cmath.log(2.0))
        * gamma(1.0 - a)
        * gamma(b)
        / gamma(b - a)
        * cmath.exp(1j * (1.0 - a - b) * (x - math.pi) / 2.0)
        * cmath.exp((b - a - 1.0) * math.log(s))
    )


def _one_sided_h1(alpha: complex, beta: complex, e_phase: complex, cutoff: int, tail_order: int, n_start: int):
    """sum_{n >= n_start} (alpha)_n/(beta)_n E^n with optional resummed tail."""
    n = np.arange(cutoff + tail_order + 2, dtype=float)
    ratios = (alpha + n) / (beta + n) * e_phase
    v = np.empty(len(n) + 1, dtype=complex)
    v[0] = 1.0
    v[1:] = np.cumprod(ratios)  # v[n] = (alpha)_n/(beta)_n E^n
    main = np.sum(v[n_start : cutoff + 1])
    if tail_order:
        boundary = v[cutoff + 1 : cutoff + 2 + tail_order]
        main += oscillatory_tail(boundary, e_phase, tail_order)
    return complex(main)


def h1_partial_sum(
    e: ExponentPair, x: float, cutoff: int, tail_order: int = 0
) -> complex:
    """Symmetric partial sum sum_{|n| <= cutoff} (alpha)_n/(beta)_n e^(i n x).

    tail_order > 0 resums the oscillatory tails by iterated Abel summation
    by parts (exact term recurrences, one power of 1/cutoff gained per
    pass), which is what makes 1e-8 comparisons against the closed form
    affordable at moderate cutoffs.
    """
    if cutoff < 8:
        raise ValueError("cutoff too small")
    ep = cmath.exp(1j * x)
    pos = _one_sided_h1(e.alpha, e.beta, ep, cutoff, tail_order, 0)
    # n <= -1 via (alpha)_{-m}/(beta)_{-m} = (1-beta)_m/(1-alpha)_m
    neg = _one_sided_h1(1.0 - e.beta, 1.0 - e.alpha, ep.conjugate(), cutoff, tail_order, 1)
    return pos + neg


def duality_map(e: ExponentPair, direction: str, branch: int = 0) -> ExponentPair:
    """Fourier-duality map between direct and dual exponent pairs.

    to_dual:   beta_f - alpha_f - 1 = alpha - beta,
               alpha_f + beta_f - 1 = (i/pi) log A;
    from_dual: beta - alpha - 1 = alpha_f - beta_f,
               alpha + beta - 1 = -(i/pi) log A_f.
    log is principal plus 2 pi i * branch.
    """
    log_a = cmath.log(e.a_const) + 2j * math.pi * branch
    if direction == "to_dual":
        alpha_f = ((1j / math.pi) * log_a - e.alpha + e.beta) / 2.0
        beta_f = 1.0 + ((1j / math.pi) * log_a + e.alpha - e.beta) / 2.0
        return ExponentPair(alpha=alpha_f, beta=beta_f)
    if direction == "from_dual":
        alpha = (e.beta - e.alpha - (1j / math.pi) * log_a) / 2.0
        beta = 1.0 + (e.alpha - e.beta - (1j / math.pi) * log_a) / 2.0
        return ExponentPair(alpha=alpha, beta=beta)
    raise ValueError(f"direction must be 'to_dual' or 'from_dual', got {direction!r}")


def order_parameter(N: int, n: int, k_prime: float) -> float:
    """Finite-N order parameter (1 - k'^2)^(n (N-n) / 2 N^2)."""
    if not 1 <= n <= N - 1:
        raise ValueError("need 1 <= n <= N-1")
    if not 0.0 <= k_prime <= 1.0:
        raise ValueError("need 0 <= k' <= 1")
    base = 1.0 - k_prime * k_prime
    return base ** (n * (N - n) / (2.0 * N * N))


def order_parameter_limit(x: float, k_prime: float) -> float:
    """Continuum order parameter (1 - k'^2)^(x (2 pi - x) / 8 pi^2)."""
    if not 0.0 < x < TWO_PI:
        raise ValueError("need 0 < x < 2 pi")
    if not 0.0 <= k_prime <= 1.0:
        raise ValueError("need 0 <= k' <= 1")
    base = 1.0 - k_prime * k_prime
    return base ** (x * (TWO_PI - x) / (8.0 * math.pi**2))
