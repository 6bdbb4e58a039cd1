"""Complex special functions used throughout the package.

Gamma and log-Gamma (Lanczos rational kernel plus reflection), Pochhammer
symbols for both signs of the index, exact Bernoulli numbers, Bernoulli
polynomials, and even zeta values.  Everything here is a pure function of
its arguments.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "GammaPole",
    "BernoulliTable",
    "gamma",
    "loggamma",
    "pochhammer",
    "sinpi",
    "bernoulli_number",
    "bernoulli_table",
    "bernoulli_poly",
    "zeta_even",
]


def sinpi(z: complex) -> complex:
    """sin(pi z) with exact argument reduction at the integers.

    Direct evaluation of sin(pi*z) loses all relative accuracy when z sits
    near an integer (pi*z rounds before the sine is taken); reducing by the
    nearest integer first keeps full precision there, which the weight
    constants and identity conditions rely on.
    """
    z = complex(z)
    m = round(z.real)
    w = cmath.sin(math.pi * (z - m))
    return -w if m % 2 else w


class GammaPole(ZeroDivisionError):
    """Raised when Gamma (or a Pochhammer factor) is evaluated at a pole."""


# Lanczos g=7, 9-term coefficient set; ~15 significant digits for Re z > 0.5.
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_POLE_TOL = 1e-12


def _is_nonpositive_integer(z: complex, tol: float = _POLE_TOL) -> bool:
    if abs(z.imag) > tol:
        return False
    r = round(z.real)
    return r <= 0 and abs(z.real - r) <= tol


def _lanczos_sum(z: complex) -> complex:
    s = _LANCZOS_COEFFS[0]
    for i, c in enumerate(_LANCZOS_COEFFS[1:], start=1):
        s += c / (z + i)
    return s


def gamma(z: complex) -> complex:
    """Gamma function on the principal branch.

    Lanczos kernel for Re z > 0.5, reflection formula otherwise.  Raises
    GammaPole when z is within 1e-12 of a non-positive integer.
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise GammaPole(f"gamma pole at z={z}")
    if z.real < 0.5:
        # gamma(z) = pi / (sin(pi z) * gamma(1 - z))
        return math.pi / (cmath.sin(math.pi * z) * gamma(1.0 - z))
    w = z - 1.0
    t = w + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (w + 0.5) * cmath.exp(-t) * _lanczos_sum(w)


def loggamma(z: complex) -> complex:
    """log Gamma, analytic on Re z > 0 (no reflection; raises elsewhere).

    Branch is continuous on the right half plane, which is all that is
    needed for stable Pochhammer quotients of large index.
    """
    z = complex(z)
    if z.real <= 0.0:
        raise ValueError("loggamma requires Re z > 0")
    w = z - 1.0
    t = w + _LANCZOS_G + 0.5
    return (
        0.5 * math.log(2.0 * math.pi)
        + (w + 0.5) * cmath.log(t)
        - t
        + cmath.log(_lanczos_sum(w))
    )


_POCHHAMMER_DIRECT_MAX = 64


def pochhammer(x: complex, n: int) -> complex:
    """Pochhammer symbol (x)_n = Gamma(x+n)/Gamma(x), both signs of n.

    Computed by direct product for small |n| (so zeros in the numerator are
    exact and no pole cancellation is involved), by log-Gamma differences for
    large positive n when the whole path stays in the right half plane.
    Negative n uses (x)_{-n} = (-1)^n / (1-x)_n and raises GammaPole when a
    factor vanishes.
    """
    x = complex(x)
    if n == 0:
        return 1.0 + 0.0j
    if n < 0:
        m = -n
        denom = pochhammer(1.0 - x, m)
        if denom == 0.0:
            raise GammaPole(f"pochhammer({x}, {n}) hits a pole")
        return (-1.0) ** (m % 2) / denom
    if n <= _POCHHAMMER_DIRECT_MAX or x.real <= 0.0:
        out = 1.0 + 0.0j
        for j in range(n):
            out *= x + j
        return out
    return cmath.exp(loggamma(x + n) - loggamma(x))


@lru_cache(maxsize=None)
def _bernoulli_exact(n: int) -> Fraction:
    """Bernoulli number B_n as an exact rational (B_1 = -1/2 convention)."""
    if n == 0:
        return Fraction(1)
    # sum_{k=0}^{n} C(n+1, k) B_k = 0  =>  solve for B_n
    acc = Fraction(0)
    for k in range(n):
        acc += math.comb(n + 1, k) * _bernoulli_exact(k)
    return -acc / (n + 1)


def bernoulli_number(n: int) -> float:
    if n < 0:
        raise ValueError("Bernoulli index must be >= 0")
    return float(_bernoulli_exact(n))


@dataclass(frozen=True)
class BernoulliTable:
    """Bernoulli numbers B_0..B_max_index, exact rationals plus float view."""

    max_index: int
    numbers: tuple[float, ...] = field(repr=False)

    def __getitem__(self, n: int) -> float:
        return self.numbers[n]


def bernoulli_table(max_index: int = 64) -> BernoulliTable:
    if max_index < 2:
        raise ValueError("table needs at least B_0..B_2")
    nums = tuple(float(_bernoulli_exact(n)) for n in range(max_index + 1))
    return BernoulliTable(max_index=max_index, numbers=nums)


def bernoulli_poly(l: int, x: complex) -> complex:
    """Bernoulli polynomial B_l(x) = sum_k C(l,k) B_k x^(l-k)."""
    if l < 0:
        raise ValueError("Bernoulli polynomial degree must be >= 0")
    x = complex(x)
    out = 0.0 + 0.0j
    for k in range(l + 1):
        out += math.comb(l, k) * float(_bernoulli_exact(k)) * x ** (l - k)
    return out


def zeta_even(two_k: int) -> float:
    """zeta(2k) from the even Bernoulli numbers.

    zeta(2k) = (-1)^(k+1) (2 pi)^(2k) B_2k / (2 (2k)!).
    """
    if two_k < 2 or two_k % 2 != 0:
        raise ValueError("argument must be an even integer >= 2")
    k = two_k // 2
    rational = _bernoulli_exact(two_k) / (2 * math.factorial(two_k))
    return (-1.0) ** (k + 1) * (2.0 * math.pi) ** two_k * float(rational)
