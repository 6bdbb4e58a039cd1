"""Rapidity-curve parametrization for the integrable chiral Potts model.

A spectral point is labelled interchangeably by the angle pair (theta, phi),
by the dual pair (lambda, gamma), or by homogeneous coordinates (x, y, mu)
on the algebraic curve

    mu^N = k' / (1 - k x^N) = (1 - k y^N) / k',
    x^N + y^N = k (1 + x^N y^N),

with modulus pair k^2 + k'^2 = 1.  This module covers the real principal
window k in [0, 1), lambda in (0, 1), where all Boltzmann weights built
downstream are real and positive.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

__all__ = [
    "Modulus",
    "RapidityPoint",
    "rapidity_from_lambda",
    "rapidity_from_theta",
    "homogeneous_coords",
    "curve_residual",
    "genus",
]


@dataclass(frozen=True)
class Modulus:
    """Modulus pair (k, k') with k^2 + k'^2 = 1."""

    k: float
    k_prime: float

    def __post_init__(self):
        if not 0.0 <= self.k < 1.0:
            raise ValueError(f"principal regime needs 0 <= k < 1, got k={self.k}")
        if abs(self.k**2 + self.k_prime**2 - 1.0) > 1e-14:
            raise ValueError("k^2 + k'^2 must equal 1")
        if self.k_prime == 0.0:
            raise ValueError("k' = 0 is singular (division by zero in mu^N)")

    @classmethod
    def from_k(cls, k: float) -> "Modulus":
        return cls(k=k, k_prime=math.sqrt(1.0 - k * k))


@dataclass(frozen=True)
class RapidityPoint:
    """One point on the rapidity curve in every coordinate system.

    theta = pi*lambda + arcsin(k sin pi*lambda) and
    phi   = pi*lambda - arcsin(k sin pi*lambda); gamma is fixed by
    e^(2 gamma) = sin theta / sin phi.  The tilde variables
    pi*lambda -/+ i*gamma parametrize the Fourier-dual weights.
    """

    modulus: Modulus
    lam: float
    gamma: float
    theta: float
    phi: float
    mu_pow_N: complex
    tilde_theta: complex
    tilde_phi: complex


def rapidity_from_lambda(m: Modulus, lam: float) -> RapidityPoint:
    """Construct the point with spectral parameter lambda in (0, 1)."""
    if not 0.0 < lam < 1.0:
        raise ValueError(f"lambda must lie in (0, 1), got {lam}")
    k, kp = m.k, m.k_prime
    s = math.sin(math.pi * lam)
    delta = math.asin(k * s)
    theta = math.pi * lam + delta
    phi = math.pi * lam - delta
    # e^gamma = (sqrt(1 - k^2 sin^2 pi lam) + k cos pi lam) / k'
    e_gamma = (math.sqrt(1.0 - (k * s) ** 2) + k * math.cos(math.pi * lam)) / kp
    gamma = math.log(e_gamma)
    mu_pow_n = (1.0 + k * cmath.exp(1j * theta)) / kp
    return RapidityPoint(
        modulus=m,
        lam=lam,
        gamma=gamma,
        theta=theta,
        phi=phi,
        mu_pow_N=mu_pow_n,
        tilde_theta=math.pi * lam + 1j * gamma,
        tilde_phi=math.pi * lam - 1j * gamma,
    )


def rapidity_from_theta(m: Modulus, theta: float) -> RapidityPoint:
    """Construct the point from theta in (0, pi).

    lambda = atan2(sin theta, cos theta + k) / pi picks the branch that keeps
    lambda in (0, 1); the locus cos theta + k = 0 maps continuously to
    lambda = 1/2 + (arc above pi/2), not an error.
    """
    if not 0.0 < theta < math.pi:
        raise ValueError(f"theta must lie in (0, pi), got {theta}")
    lam = math.atan2(math.sin(theta), math.cos(theta) + m.k) / math.pi
    return rapidity_from_lambda(m, lam)


def homogeneous_coords(p: RapidityPoint, N: int) -> tuple[complex, complex, complex]:
    """Homogeneous curve coordinates (x_p, y_p, mu_p) for given N.

    x = e^(i phi / N), y = omega^(1/2) e^(i theta / N) with
    omega = e^(2 pi i / N); mu is the principal 2N-th root of
    e^(i theta) sin theta / (e^(i phi) sin phi), which tends to 1 as k -> 0.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    x = cmath.exp(1j * p.phi / N)
    y = cmath.exp(1j * math.pi / N) * cmath.exp(1j * p.theta / N)
    w = cmath.exp(1j * p.theta) * math.sin(p.theta) / (
        cmath.exp(1j * p.phi) * math.sin(p.phi)
    )
    mu = w ** (1.0 / (2.0 * N))
    return x, y, mu


def curve_residual(m: Modulus, x: complex, y: complex, mu: complex, N: int) -> float:
    """Maximum deviation of (x, y, mu) from the three defining curve relations.

    Reports, never raises; <= 1e-12 iff the triple lies on the curve.
    """
    k, kp = m.k, m.k_prime
    mu_n = mu**N
    x_n = x**N
    y_n = y**N
    r1 = abs(mu_n - kp / (1.0 - k * x_n))
    r2 = abs(mu_n - (1.0 - k * y_n) / kp)
    r3 = abs(x_n + y_n - k * (1.0 + x_n * y_n))
    return max(r1, r2, r3)


def genus(N: int) -> int:
    """Genus N^2 (N - 2) + 1 of the rapidity curve."""
    if N < 2:
        raise ValueError("N must be >= 2")
    return N * N * (N - 2) + 1
