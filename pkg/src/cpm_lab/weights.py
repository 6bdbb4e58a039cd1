"""Finite-N Boltzmann weights of the integrable chiral Potts model.

Weight tables come in four families: the direct pair weights W and Wbar and
their Fourier duals Wf and Wbarf.  Each family is available through two
independent routes, a trigonometric product over the angle variables and a
product over the homogeneous curve coordinates, plus a third route through
the universal product form

    W(n)/W(0) = A^(n/N) prod_{j=1..n} sin(pi (j+alpha-1)/N) / sin(pi (j+beta-1)/N),
    A = sin(pi beta) / sin(pi alpha),

parametrized by an exponent pair per family.  The star-triangle residual and
its Fourier-dual form close the module.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .rapidity import RapidityPoint, homogeneous_coords
from .specfun import sinpi

__all__ = [
    "WeightTable",
    "ExponentPair",
    "SteResidual",
    "weight_w",
    "weight_wbar",
    "weight_wf",
    "weight_wbarf",
    "fourier_dual",
    "exponents",
    "product_form",
    "f_pq",
    "r_pqr",
    "ste_constant_routes",
    "ste_residual",
    "ste_residual_max",
    "dual_ste_residual",
]

_DENOM_TOL = 1e-13


@dataclass(frozen=True)
class WeightTable:
    """Length-N periodic table of weight ratios W(n)/W(0) with W(0) kept aside."""

    n_states: int
    ratios: np.ndarray  # complex, ratios[0] == 1
    normalization: complex = 1.0 + 0.0j

    def ratio(self, n: int) -> complex:
        return complex(self.ratios[n % self.n_states])

    def value(self, n: int) -> complex:
        return self.normalization * self.ratio(n)

    def values(self) -> np.ndarray:
        return self.normalization * self.ratios

    def to_json(self) -> dict:
        return {
            "N": self.n_states,
            "re": [float(v.real) for v in self.ratios],
            "im": [float(v.imag) for v in self.ratios],
            "norm_re": float(self.normalization.real),
            "norm_im": float(self.normalization.imag),
        }

    @classmethod
    def from_json(cls, data: dict) -> "WeightTable":
        ratios = np.array(data["re"], dtype=complex) + 1j * np.array(data["im"], dtype=float)
        return cls(
            n_states=int(data["N"]),
            ratios=ratios,
            normalization=complex(data["norm_re"], data["norm_im"]),
        )


@dataclass(frozen=True)
class ExponentPair:
    """(alpha, beta) of the universal product form, with A = sin pi beta / sin pi alpha."""

    alpha: complex
    beta: complex
    a_const: complex = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.a_const is None:
            a = sinpi(self.beta) / sinpi(self.alpha)
            object.__setattr__(self, "a_const", a)

    @property
    def in_principal_domain(self) -> bool:
        return 0.0 < (self.beta - self.alpha).real < 1.0


@dataclass(frozen=True)
class SteResidual:
    """Both sides of a star-triangle check plus the relative error."""

    lhs: complex
    rhs: complex
    rel_err: float = field(default=None)  # type: ignore[assignment]
    tail_bound: float | None = None
    quad_levels: int | None = None

    def __post_init__(self):
        if self.rel_err is None:
            if self.rhs != 0:
                err = abs(self.lhs / self.rhs - 1.0)
            else:
                err = 0.0 if self.lhs == 0 else math.inf
            object.__setattr__(self, "rel_err", err)


def _table_from_factors(N: int, prefactor: complex, nums, dens) -> WeightTable:
    """Assemble ratios[n] = prefactor^n * prod_{j<=n} nums[j]/dens[j].

    Only the factors entering ratios[0..N-1] must have nonzero denominators;
    the j = N factor is used for the periodicity check W(N) = W(0) unless it
    is indeterminate (0/0, as for the Kronecker-delta table at coinciding
    rapidities, where periodicity holds in the limit).
    """
    nums = np.asarray(nums, dtype=complex)
    dens = np.asarray(dens, dtype=complex)
    if np.any(np.abs(dens[: N - 1]) < _DENOM_TOL):
        raise ValueError("weight table construction failed: vanishing denominator factor")
    ratios = np.empty(N, dtype=complex)
    ratios[0] = 1.0
    if N > 1:
        ratios[1:] = np.cumprod(prefactor * nums[: N - 1] / dens[: N - 1])
    last_num = ratios[N - 1] * prefactor * nums[N - 1]
    if abs(dens[N - 1]) < _DENOM_TOL:
        if abs(last_num) > 1e-8:
            raise ValueError("weight table construction failed: pole at n = N")
    elif abs(last_num / dens[N - 1] - 1.0) > 1e-8:
        raise ValueError(
            f"weight table is not N-periodic (W(N)/W(0) = {last_num / dens[N - 1]})"
        )
    return WeightTable(n_states=N, ratios=ratios)


def weight_w(N: int, p: RapidityPoint, q: RapidityPoint, route: str = "angles") -> WeightTable:
    """Direct weight W_pq as a ratio table.

    route="angles" uses the sine products in (theta, phi); route="homogeneous"
    uses the curve coordinates (x, y, mu).  Both give the same table to
    rounding, which is one of the library's standing cross-checks.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    if p.modulus != q.modulus:
        raise ValueError("rapidities must share one modulus")
    j = np.arange(1, N + 1)
    if route == "angles":
        pref = (
            (math.sin(p.theta) * math.sin(q.phi))
            / (math.sin(q.theta) * math.sin(p.phi))
        ) ** (1.0 / (2.0 * N))
        nums = np.sin(math.pi * (j - 0.5) / N - (q.theta - p.phi) / (2.0 * N))
        dens = np.sin(math.pi * (j - 0.5) / N + (q.phi - p.theta) / (2.0 * N))
        return _table_from_factors(N, pref, nums, dens)
    if route == "homogeneous":
        xp, yp, mup = homogeneous_coords(p, N)
        xq, yq, muq = homogeneous_coords(q, N)
        omega_j = np.exp(2j * math.pi * j / N)
        nums = yq - xp * omega_j
        dens = yp - xq * omega_j
        return _table_from_factors(N, mup / muq, nums, dens)
    raise ValueError(f"unknown route {route!r}")


def weight_wbar(N: int, p: RapidityPoint, q: RapidityPoint, route: str = "angles") -> WeightTable:
    """Conjugate weight Wbar_pq; collapses to a Kronecker delta at p = q."""
    if N < 2:
        raise ValueError("N must be >= 2")
    if p.modulus != q.modulus:
        raise ValueError("rapidities must share one modulus")
    j = np.arange(1, N + 1)
    if route == "angles":
        pref = (
            (math.sin(p.theta) * math.sin(q.theta))
            / (math.sin(p.phi) * math.sin(q.phi))
        ) ** (1.0 / (2.0 * N))
        nums = np.sin(math.pi * (j - 1.0) / N + (q.phi - p.phi) / (2.0 * N))
        dens = np.sin(math.pi * j / N - (q.theta - p.theta) / (2.0 * N))
        return _table_from_factors(N, pref, nums, dens)
    if route == "homogeneous":
        xp, yp, mup = homogeneous_coords(p, N)
        xq, yq, muq = homogeneous_coords(q, N)
        omega = cmath.exp(2j * math.pi / N)
        omega_j = np.exp(2j * math.pi * j / N)
        nums = omega * xp - xq * omega_j
        dens = yq - yp * omega_j
        return _table_from_factors(N, mup * muq, nums, dens)
    raise ValueError(f"unknown route {route!r}")


def weight_wf(N: int, p: RapidityPoint, q: RapidityPoint, route: str = "angles") -> WeightTable:
    """Closed-form Fourier dual of W_pq (tilde-variable sine products)."""
    if N < 2:
        raise ValueError("N must be >= 2")
    j = np.arange(1, N + 1)
    if route == "angles":
        pref = cmath.exp(1j * (p.phi - p.theta + q.phi - q.theta) / (2.0 * N))
        tp, tq = p.tilde_phi, q.tilde_phi
        sp, sq = p.tilde_theta, q.tilde_theta
        nums = np.array(
            [cmath.sin(math.pi * (jj - 1.0) / N + (tq - tp) / (2.0 * N)) for jj in j]
        )
        dens = np.array(
            [cmath.sin(math.pi * jj / N - (sq - sp) / (2.0 * N)) for jj in j]
        )
        return _table_from_factors(N, pref, nums, dens)
    if route == "homogeneous":
        xp, yp, mup = homogeneous_coords(p, N)
        xq, yq, muq = homogeneous_coords(q, N)
        omega = cmath.exp(2j * math.pi / N)
        omega_j = np.exp(2j * math.pi * j / N)
        nums = omega * mup * xp - muq * xq * omega_j
        dens = mup * yq - muq * yp * omega_j
        return _table_from_factors(N, 1.0, nums, dens)
    raise ValueError(f"unknown route {route!r}")


def weight_wbarf(N: int, p: RapidityPoint, q: RapidityPoint, route: str = "angles") -> WeightTable:
    """Closed-form Fourier dual of Wbar_pq."""
    if N < 2:
        raise ValueError("N must be >= 2")
    j = np.arange(1, N + 1)
    if route == "angles":
        pref = cmath.exp(1j * (p.theta - p.phi - q.theta + q.phi) / (2.0 * N))
        nums = np.array(
            [
                cmath.sin(math.pi * (jj - 0.5) / N - (q.tilde_phi - p.tilde_theta) / (2.0 * N))
                for jj in j
            ]
        )
        dens = np.array(
            [
                cmath.sin(math.pi * (jj - 0.5) / N + (q.tilde_theta - p.tilde_phi) / (2.0 * N))
                for jj in j
            ]
        )
        return _table_from_factors(N, pref, nums, dens)
    if route == "homogeneous":
        xp, yp, mup = homogeneous_coords(p, N)
        xq, yq, muq = homogeneous_coords(q, N)
        omega = cmath.exp(2j * math.pi / N)
        omega_j = np.exp(2j * math.pi * j / N)
        nums = omega * mup * muq * xq - yp * omega_j
        dens = omega * mup * muq * xp - yq * omega_j
        return _table_from_factors(N, 1.0, nums, dens)
    raise ValueError(f"unknown route {route!r}")


def fourier_dual(t: WeightTable) -> WeightTable:
    """Discrete Fourier dual W^f(m) = N^{-1} sum_n omega^{-m n} W(n)."""
    values = t.values()
    dual = np.fft.fft(values) / t.n_states
    norm = complex(dual[0])
    if norm == 0:
        raise ValueError("dual table has vanishing normalization")
    return WeightTable(n_states=t.n_states, ratios=dual / norm, normalization=norm)


def exponents(p: RapidityPoint, q: RapidityPoint, which: str) -> ExponentPair:
    """(alpha, beta) assignment of the product form for one weight family.

    which is one of "W", "Wbar", "Wf", "Wbarf".
    """
    two_pi = 2.0 * math.pi
    if which == "W":
        alpha = 0.5 + (p.phi - q.theta) / two_pi
        beta = 0.5 + (q.phi - p.theta) / two_pi
    elif which == "Wbar":
        alpha = (q.phi - p.phi) / two_pi
        beta = 1.0 + (p.theta - q.theta) / two_pi
    elif which == "Wf":
        alpha = (q.tilde_phi - p.tilde_phi) / two_pi
        beta = 1.0 + (p.tilde_theta - q.tilde_theta) / two_pi
    elif which == "Wbarf":
        alpha = 0.5 + (p.tilde_theta - q.tilde_phi) / two_pi
        beta = 0.5 + (q.tilde_theta - p.tilde_phi) / two_pi
    else:
        raise ValueError(f"unknown weight family {which!r}")
    return ExponentPair(alpha=complex(alpha), beta=complex(beta))


def product_form(N: int, e: ExponentPair, n: int) -> complex:
    """Universal product-form ratio W(n)/W(0) for 0 <= n <= N."""
    if not 0 <= n <= N:
        raise ValueError("n must satisfy 0 <= n <= N")
    out = cmath.exp((n / N) * cmath.log(e.a_const)) if n else 1.0 + 0.0j
    for j in range(1, n + 1):
        den = cmath.sin(math.pi * (j + e.beta - 1.0) / N)
        if abs(den) < _DENOM_TOL:
            raise ZeroDivisionError("beta hits a lattice zero of the product form")
        out *= cmath.sin(math.pi * (j + e.alpha - 1.0) / N) / den
    return out


def _log_product(values: np.ndarray) -> complex:
    logs = [cmath.log(complex(v)) for v in values]
    return complex(math.fsum(x.real for x in logs), math.fsum(x.imag for x in logs))


def f_pq(N: int, p: RapidityPoint, q: RapidityPoint) -> complex:
    """Star-triangle constant factor F_pq, principal N-th root convention.

    F_pq^N = prod_l [sum_j omega^{-jl} Wbar_pq(j)] / prod_l W_pq(l), built on
    ratio-normalized tables (W(0) = Wbar(0) = 1).  Defined only up to an
    N-th root of unity; see ste_constant_routes for the offset bookkeeping.
    """
    w = weight_w(N, p, q)
    wbar = weight_wbar(N, p, q)
    # sum_{j=1..N} omega^{-jl} Wbar(j) = N * Wbar^f(l) by periodicity
    dual_sums = np.fft.fft(wbar.ratios)
    if np.any(np.abs(dual_sums) < 1e-300) or np.any(np.abs(w.ratios) < 1e-300):
        raise ZeroDivisionError("zero product in F_pq")
    log_num = _log_product(dual_sums)
    log_den = _log_product(w.ratios)
    return cmath.exp((log_num - log_den) / N)


def _tables_for_triple(N, p, q, r):
    return {
        "w_pq": weight_w(N, p, q),
        "wbar_pq": weight_wbar(N, p, q),
        "w_pr": weight_w(N, p, r),
        "wbar_pr": weight_wbar(N, p, r),
        "w_qr": weight_w(N, q, r),
        "wbar_qr": weight_wbar(N, q, r),
    }


def r_pqr(N: int, p: RapidityPoint, q: RapidityPoint, r: RapidityPoint) -> complex:
    """Star-triangle constant R_pqr via the direct sum at spins (0, 0, 0).

    This is the deterministic choice that makes ste_residual vanish exactly
    on the integrable manifold; the F-product route agrees with it up to a
    recorded N-th root of unity (ste_constant_routes).
    """
    tb = _tables_for_triple(N, p, q, r)
    d = np.arange(N)
    lhs = np.sum(
        tb["wbar_qr"].ratios[(-d) % N]
        * tb["w_pr"].ratios[(-d) % N]
        * tb["wbar_pq"].ratios[d % N]
    )
    return complex(lhs)


def ste_constant_routes(
    N: int, p: RapidityPoint, q: RapidityPoint, r: RapidityPoint
) -> tuple[complex, complex, int]:
    """(direct-ratio R, F-product R, omega power j) with R_F = R_direct * omega^j."""
    r_direct = r_pqr(N, p, q, r)
    r_f = f_pq(N, p, q) * f_pq(N, q, r) / f_pq(N, p, r)
    phase = cmath.phase(r_f / r_direct)
    j = round(phase * N / (2.0 * math.pi)) % N
    return r_direct, r_f, j


def ste_residual(
    N: int,
    p: RapidityPoint,
    q: RapidityPoint,
    r: RapidityPoint,
    a: int,
    b: int,
    c: int,
) -> SteResidual:
    """Star-triangle residual at spins (a, b, c).

    lhs = sum_d Wbar_qr(b-d) W_pr(a-d) Wbar_pq(d-c),
    rhs = R_pqr W_pq(a-b) Wbar_pr(b-c) W_qr(a-c).
    """
    tb = _tables_for_triple(N, p, q, r)
    rconst = r_pqr(N, p, q, r)
    d = np.arange(N)
    lhs = complex(
        np.sum(
            tb["wbar_qr"].ratios[(b - d) % N]
            * tb["w_pr"].ratios[(a - d) % N]
            * tb["wbar_pq"].ratios[(d - c) % N]
        )
    )
    rhs = (
        rconst
        * tb["w_pq"].ratio(a - b)
        * tb["wbar_pr"].ratio(b - c)
        * tb["w_qr"].ratio(a - c)
    )
    return SteResidual(lhs=lhs, rhs=rhs)


def ste_residual_max(
    N: int, p: RapidityPoint, q: RapidityPoint, r: RapidityPoint
) -> float:
    """Maximum relative star-triangle residual over all N^3 spin triples."""
    tb = _tables_for_triple(N, p, q, r)
    rconst = r_pqr(N, p, q, r)
    d = np.arange(N)
    idx = np.arange(N)
    # lhs[a, b, c] = sum_d Wbar_qr[(b-d)%N] W_pr[(a-d)%N] Wbar_pq[(d-c)%N]
    a_d = tb["w_pr"].ratios[(idx[:, None] - d[None, :]) % N]  # (a, d)
    b_d = tb["wbar_qr"].ratios[(idx[:, None] - d[None, :]) % N]  # (b, d)
    d_c = tb["wbar_pq"].ratios[(d[:, None] - idx[None, :]) % N]  # (d, c)
    lhs = np.einsum("bd,ad,dc->abc", b_d, a_d, d_c)
    rhs = rconst * (
        tb["w_pq"].ratios[(idx[:, None, None] - idx[None, :, None]) % N]
        * tb["wbar_pr"].ratios[(idx[None, :, None] - idx[None, None, :]) % N]
        * tb["w_qr"].ratios[(idx[:, None, None] - idx[None, None, :]) % N]
    )
    return float(np.max(np.abs(lhs / rhs - 1.0)))


def dual_ste_residual(
    N: int,
    p: RapidityPoint,
    q: RapidityPoint,
    r: RapidityPoint,
    a: int,
    b: int,
) -> SteResidual:
    """Residual of the Fourier-transformed star-triangle equation.

    Duals are computed by DFT of the direct tables.  With the same R_pqr as
    the direct equation,

    lhs = (N / R_pqr) Wbar^f_qr(a) W^f_pr(b) Wbar^f_pq(a+b),
    rhs = sum_d W^f_pq(b-d) Wbar^f_pr(a+b-d) W^f_qr(d).
    """
    tb = _tables_for_triple(N, p, q, r)
    rconst = r_pqr(N, p, q, r)
    f = {k: fourier_dual(v) for k, v in tb.items()}
    lhs = (
        (N / rconst)
        * f["wbar_qr"].value(a)
        * f["w_pr"].value(b)
        * f["wbar_pq"].value(a + b)
    )
    d = np.arange(N)
    rhs = complex(
        np.sum(
            f["w_pq"].values()[(b - d) % N]
            * f["wbar_pr"].values()[(a + b - d) % N]
            * f["w_qr"].values()[d]
        )
    )
    return SteResidual(lhs=lhs, rhs=rhs)
