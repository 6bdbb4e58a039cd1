"""A two-sided hypergeometric identity and its symmetry orbit.

The regime-I star-triangle equation, rewritten in symmetric variables,
states that

    sum_n prod_j Gamma(x_j + n)/Gamma(y_j + n)
        = G(x | y) / prod_{i,j} Gamma(y_i - x_j)

whenever the Saalschuetz condition x1+x2+x3+2 = y1+y2+y3 and the
periodicity condition prod sin(pi x_j) = prod sin(pi y_j) hold and no x_j is
an integer.  G is a product of ten Gamma factors (equivalently a sine
product).  This module builds instances from rapidity triples or from a
condition solver, evaluates both sides, walks the symmetry orbit, and checks
the classical one-parameter degenerations.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from itertools import permutations

from .series import bilateral_gamma_sum
from .specfun import gamma, sinpi
from .ste_infinite import PrincipalTriple

__all__ = [
    "IdentityInstance",
    "LhsSum",
    "instance_from_rapidities",
    "solve_conditions",
    "lhs_sum",
    "rhs_closed_form",
    "g_function",
    "identity_residual",
    "symmetry_orbit",
    "g_symmetry_check",
    "dougall_5h5_check",
]

logger = logging.getLogger(__name__)

_COND_TOL = 1e-12


def _is_integer(z: complex, tol: float = 1e-9) -> bool:
    return abs(z.imag) < tol and abs(z.real - round(z.real)) < tol


@dataclass(frozen=True)
class IdentityInstance:
    """Parameters (x_1..3, y_1..3, m_1..3) of the two-sided identity."""

    x: tuple[complex, complex, complex]
    y: tuple[complex, complex, complex]
    m: tuple[int, int, int] = (0, 0, 0)

    def conditions(self) -> tuple[float, float]:
        """(Saalschuetz residual, periodicity residual), both absolute."""
        saal = abs(sum(self.x) + 2.0 - sum(self.y))
        lhs = math.prod((sinpi(v) for v in self.x), start=1.0 + 0.0j)
        rhs = math.prod((sinpi(v) for v in self.y), start=1.0 + 0.0j)
        scale = max(abs(lhs), abs(rhs), 1.0)
        return saal, abs(lhs - rhs) / scale

    def is_valid(self, tol: float = _COND_TOL) -> bool:
        s, p = self.conditions()
        return s <= tol and p <= tol and not any(_is_integer(v) for v in self.x)

    def absorbed(self) -> "IdentityInstance":
        """Fold the integer offsets m into x and y (conditions are preserved)."""
        if self.m == (0, 0, 0):
            return self
        return IdentityInstance(
            x=tuple(v + mm for v, mm in zip(self.x, self.m)),
            y=tuple(v + mm for v, mm in zip(self.y, self.m)),
        )

    def to_json(self) -> dict:
        return {
            "x": [[v.real, v.imag] for v in self.x],
            "y": [[v.real, v.imag] for v in self.y],
            "m": list(self.m),
        }

    @classmethod
    def from_json(cls, data: dict) -> "IdentityInstance":
        def trip(vals):
            return tuple(complex(a, b) for a, b in vals)

        return cls(
            x=trip(data["x"]),
            y=trip(data["y"]),
            m=tuple(int(v) for v in data.get("m", (0, 0, 0))),
        )


def instance_from_rapidities(t: PrincipalTriple, a: int, b: int, c: int) -> IdentityInstance:
    """Symmetric variables of the regime-I star-triangle equation.

    x1 = alpha_pr, x2 = abar_qr, x3 = 1 - bbar_pq (y analogous), m = (a, b, c);
    both identity conditions then hold automatically.
    """
    e_pr = t.exps("W", "pr")
    eb_qr = t.exps("Wbar", "qr")
    eb_pq = t.exps("Wbar", "pq")
    return IdentityInstance(
        x=(e_pr.alpha, eb_qr.alpha, 1.0 - eb_pq.beta),
        y=(e_pr.beta, eb_qr.beta, 1.0 - eb_pq.alpha),
        m=(a, b, c),
    )


def solve_conditions(
    x1: complex, x2: complex, y1: complex, y2: complex, branch_m: int = 0
) -> tuple[complex, complex]:
    """Complete (x1, x2, y1, y2) to a full instance satisfying both conditions.

    With S = sin(pi x1) sin(pi x2) / (sin(pi y1) sin(pi y2)) and
    T = x1 + x2 - y1 - y2,

        x3 = log[(S - e^(-i pi T)) / (S - e^(i pi T))] / (2 pi i) + branch_m,
        y3 = x3 + T + 2.

    branch_m shifts both by a common integer, the solver's only freedom.
    """
    s = (sinpi(x1) * sinpi(x2)) / (sinpi(y1) * sinpi(y2))
    t = x1 + x2 - y1 - y2
    num = s - cmath.exp(-1j * math.pi * t)
    den = s - cmath.exp(1j * math.pi * t)
    if abs(num) < 1e-14 or abs(den) < 1e-14:
        raise ValueError("singular configuration: S coincides with e^(+-i pi T)")
    x3 = cmath.log(num / den) / (2j * math.pi) + branch_m
    return x3, x3 + t + 2.0


@dataclass(frozen=True)
class LhsSum:
    """Truncated bilateral sum with its plain 2C/cutoff tail bound."""

    value: complex
    tail_bound: float


def lhs_sum(inst: IdentityInstance, cutoff: int) -> LhsSum:
    """Partial sum over |n| <= cutoff of prod_j Gamma(x_j+m_j+n)/Gamma(y_j+m_j+n).

    Terms are generated by multiplicative recurrence from the n = 0 anchor,
    so nothing overflows and poles announce themselves as exact zeros in a
    denominator factor.
    """
    ab = inst.absorbed()
    s = bilateral_gamma_sum(ab.x, ab.y, cutoff)
    return LhsSum(value=s.partial, tail_bound=s.tail_bound)


def g_function(x, y, form: str = "gamma") -> complex:
    """The ten-Gamma numerator G(x | y) of the closed form.

    form="gamma": prod_{j=2,3} Gamma(x_j) Gamma(1-x_j) *
                  prod_i Gamma(y_i - x_1) Gamma(1 - y_i + x_1);
    form="trig":  pi^5 / (sin pi x2 sin pi x3 prod_i sin pi (y_i - x_1)).
    The two differ by Gamma reflection only.
    """
    if form == "gamma":
        out = 1.0 + 0.0j
        for v in (x[1], x[2]):
            out *= gamma(v) * gamma(1.0 - v)
        for v in y:
            out *= gamma(v - x[0]) * gamma(1.0 - v + x[0])
        return out
    if form == "trig":
        den = sinpi(x[1]) * sinpi(x[2])
        for v in y:
            den *= sinpi(v - x[0])
        return math.pi**5 / den
    raise ValueError(f"unknown form {form!r}")


def rhs_closed_form(inst: IdentityInstance, form: str = "gamma") -> complex:
    """Closed form G(x|y) / prod_{i,j} Gamma(y_i - x_j + m_i - m_j)."""
    ab = inst.absorbed()
    den = 1.0 + 0.0j
    for yi in ab.y:
        for xj in ab.x:
            if _is_integer(yi - xj) and (yi - xj).real <= 0.5:
                raise ValueError(
                    "Gamma pole in the denominator: y_i - x_j + m_i - m_j "
                    "is a non-positive integer"
                )
            den *= gamma(yi - xj)
    return g_function(ab.x, ab.y, form) / den


def identity_residual(inst: IdentityInstance, cutoff: int = 100_000) -> float:
    """|lhs / rhs - 1| with the algebraic tail of the sum extrapolated away.

    The bilateral sum converges like |n|^-2, so the bare partial sum at the
    cutoff would dominate the residual; Richardson extrapolation over
    geometric sub-cutoffs removes the tail to well below every tolerance
    used here.
    """
    ab = inst.absorbed()
    s = bilateral_gamma_sum(ab.x, ab.y, cutoff)
    rhs = rhs_closed_form(inst)
    return abs(s.extrapolated / rhs - 1.0)


def _translations(inst: IdentityInstance):
    for j in range(3):
        for step in (-1, 1, 2):
            x = list(inst.x)
            y = list(inst.y)
            x[j] += step
            y[j] += step
            yield IdentityInstance(x=tuple(x), y=tuple(y))


def _paired_shifts(inst: IdentityInstance):
    for i in range(3):
        for j in range(3):
            if i == j:
                continue
            for step in (1, -1):
                y = list(inst.y)
                y[i] += step
                y[j] -= step
                yield IdentityInstance(x=inst.x, y=tuple(y))


def symmetry_orbit(inst: IdentityInstance) -> list[IdentityInstance]:
    """Orbit of an instance under the identity's known symmetries.

    Emits the S3 x S3 permutation orbit, the reflection
    x_j -> 1 - y_j, y_j -> 1 - x_j, single-index integer translations, and
    paired opposite shifts of two y's.  Members whose x entries become
    integers are dropped with a log notice.
    """
    base = inst.absorbed()
    members: list[IdentityInstance] = []
    for px in permutations(range(3)):
        for py in permutations(range(3)):
            members.append(
                IdentityInstance(
                    x=tuple(base.x[i] for i in px),
                    y=tuple(base.y[i] for i in py),
                )
            )
    members.append(
        IdentityInstance(
            x=tuple(1.0 - v for v in base.y),
            y=tuple(1.0 - v for v in base.x),
        )
    )
    members.extend(_translations(base))
    members.extend(_paired_shifts(base))
    kept = []
    for mb in members:
        if any(_is_integer(v) for v in mb.x):
            logger.info("orbit member dropped: integer x in %s", mb)
            continue
        kept.append(mb)
    return kept


def g_symmetry_check(inst: IdentityInstance) -> float:
    """Cross-check the sine-product invariant sigma of the G function.

    sigma is computed two ways: as (2i)^2 prod_i sin pi(y_i - x_1) / sin pi x_1
    and as sum_i (eta_i^2 - xi_i^2)/rho with xi = e^(i pi x), eta = e^(i pi y),
    rho = xi_1 xi_2 xi_3 (manifestly symmetric).  Also verifies that
    G equals (2 pi i)^5 / (tau sigma) with tau = (2i)^3 prod sin pi x_j.
    Returns the largest relative deviation.
    """
    ab = inst.absorbed()
    x, y = ab.x, ab.y
    sigma_direct = (2j) ** 2
    for v in y:
        sigma_direct *= cmath.sin(math.pi * (v - x[0]))
    sigma_direct /= cmath.sin(math.pi * x[0])
    xi = [cmath.exp(1j * math.pi * v) for v in x]
    eta = [cmath.exp(1j * math.pi * v) for v in y]
    rho = xi[0] * xi[1] * xi[2]
    sigma_sym = sum(e * e - u * u for e, u in zip(eta, xi)) / rho
    dev = abs(sigma_direct / sigma_sym - 1.0)
    tau = (2j) ** 3
    for v in x:
        tau *= cmath.sin(math.pi * v)
    g_from_sigma = (2j * math.pi) ** 5 / (tau * sigma_sym)
    dev = max(dev, abs(g_from_sigma / g_function(x, y, "trig") - 1.0))
    return dev


def dougall_5h5_check(
    x1: complex, x2: complex, x3: complex, a: complex, cutoff: int = 100_000
) -> float:
    """Residual of the one-parameter bilateral sum with y_i = 1 + a - x_i.

    The closed form is the classical Gamma-product evaluation; a = 0 is the
    fully symmetric special case.  Requires enough parameter headroom that
    the summand decays faster than 1/|n| (exponent 2 Re(sum x) - 3 - 3 Re(a)
    below -1).
    """
    xs = (complex(x1), complex(x2), complex(x3))
    a = complex(a)
    ys = tuple(1.0 + a - v for v in xs)
    decay = 2.0 * sum(v.real for v in xs) - 3.0 - 3.0 * a.real
    if decay >= -1.0:
        raise ValueError("parameters give a divergent bilateral sum")
    s = bilateral_gamma_sum(xs, ys, cutoff)
    sum_x = xs[0] + xs[1] + xs[2]
    closed = (
        gamma(1.0 - 0.5 * a)
        * gamma(1.0 + 0.5 * a)
        * gamma(1.0 + 1.5 * a - sum_x)
        / (gamma(1.0 - a) * gamma(1.0 + a))
    )
    for v in xs:
        closed *= (
            gamma(1.0 - v)
            * gamma(1.0 + a - v)
            / (gamma(1.0 + a - sum_x + v) * gamma(1.0 + 0.5 * a - v))
        )
    # convert the normalized form to the bare bilateral sum
    for v, w in zip(xs, ys):
        closed *= gamma(v) / gamma(w)
    return abs(s.extrapolated / closed - 1.0)
