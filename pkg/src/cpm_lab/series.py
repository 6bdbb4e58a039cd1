"""Summation engines for the slowly convergent sums in this package.

Two kinds of series appear downstream:

* bilateral sums of Gamma-ratio products, sum_n prod_j G(x_j+n)/G(y_j+n),
  whose terms decay like a smooth |n|^-2 on both sides.  These are evaluated
  by multiplicative recurrence from the n = 0 anchor, with partial-sum
  snapshots at geometric cutoffs feeding a Richardson extrapolation of the
  algebraic tail, plus an explicit 2C/cutoff tail bound.

* one-sided power series sum_n v_n E^n on the unit circle (|E| = 1, E != 1),
  conditionally convergent.  The oscillatory tail is resummed by iterated
  Abel summation by parts, which is exact term bookkeeping: each pass trades
  one power of 1/M for a factor E/(1-E).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfun import gamma

__all__ = ["BilateralSum", "bilateral_gamma_sum", "richardson", "oscillatory_tail"]


def richardson(hs, values) -> complex:
    """Neville extrapolation of values(h) to h = 0 (polynomial in h)."""
    hs = list(map(float, hs))
    tbl = list(map(complex, values))
    k = len(tbl)
    for level in range(1, k):
        nxt = []
        for i in range(k - level):
            num = hs[i] * tbl[i + 1] - hs[i + level] * tbl[i]
            nxt.append(num / (hs[i] - hs[i + level]))
        tbl = nxt
    return tbl[0]


@dataclass(frozen=True)
class BilateralSum:
    """Partial sum at the full cutoff plus tail diagnostics."""

    partial: complex
    extrapolated: complex
    tail_bound: float
    cutoff: int


def _cumulative_terms(xs, ys, cutoff: int) -> tuple[complex, np.ndarray, np.ndarray]:
    """Terms t_n = prod_j Gamma(x_j+n)/Gamma(y_j+n) for 0 < |n| <= cutoff.

    Returns (t_0, t_plus, t_minus) with t_plus[i] = t_{i+1} and
    t_minus[i] = t_{-(i+1)}, built by cumprod of the exact ratio factors.
    """
    xs = np.asarray(xs, dtype=complex)
    ys = np.asarray(ys, dtype=complex)
    t0 = complex(np.prod([gamma(x) / gamma(y) for x, y in zip(xs, ys)]))
    n = np.arange(cutoff, dtype=float)
    up = np.prod(xs[:, None] + n[None, :], axis=0) / np.prod(
        ys[:, None] + n[None, :], axis=0
    )
    down = np.prod(ys[:, None] - n[None, :] - 1.0, axis=0) / np.prod(
        xs[:, None] - n[None, :] - 1.0, axis=0
    )
    if not (np.all(np.isfinite(up)) and np.all(np.isfinite(down))):
        raise ZeroDivisionError("term recurrence hit a pole; shift parameters")
    t_plus = t0 * np.cumprod(up)
    t_minus = t0 * np.cumprod(down)
    return t0, t_plus, t_minus


def bilateral_gamma_sum(xs, ys, cutoff: int) -> BilateralSum:
    """sum over all integers n of prod_j Gamma(x_j+n)/Gamma(y_j+n).

    Absolute |n|^-2 convergence is the caller's responsibility (it follows
    from the Saalschuetz balance of the parameters).  The extrapolated value
    removes the algebraic tail via four-point Richardson in 1/cutoff; the
    reported bound is the plain 2C/cutoff estimate on the truncated part,
    with C fitted from the last decade of terms.
    """
    if cutoff < 64:
        raise ValueError("cutoff too small for tail handling")
    t0, t_plus, t_minus = _cumulative_terms(xs, ys, cutoff)
    sym = t_plus + t_minus
    prefix = np.cumsum(sym)
    snap_cuts = [cutoff // 8, cutoff // 4, cutoff // 2, cutoff]
    snaps = [t0 + complex(prefix[c - 1]) for c in snap_cuts]
    extrapolated = richardson([1.0 / c for c in snap_cuts], snaps)
    last = slice(max(cutoff // 10, 1), cutoff)
    ns = np.arange(1, cutoff + 1, dtype=float)
    c_plus = np.max(np.abs(t_plus[last]) * ns[last] ** 2)
    c_minus = np.max(np.abs(t_minus[last]) * ns[last] ** 2)
    tail_bound = 2.0 * float(max(c_plus, c_minus)) / cutoff
    return BilateralSum(
        partial=snaps[-1],
        extrapolated=extrapolated,
        tail_bound=tail_bound,
        cutoff=cutoff,
    )


def oscillatory_tail(boundary_terms, e_phase: complex, order: int) -> complex:
    """Tail sum_{n >= M} v_n E^n by iterated Abel summation by parts.

    boundary_terms must hold v_M E^M, v_{M+1} E^{M+1}, ..., v_{M+order};
    i.e. the first entry carries the phase while later entries are the bare
    v values times E^M... to keep call sites simple the argument is the
    array of full terms a_n = v_n E^n for n = M..M+order, from which the
    bare v_n E^M are recovered by dividing out powers of E.

    T[v](M) = E^M v_M/(1-E) + (E/(1-E)) T[dv](M) applied `order` times.
    """
    a = np.asarray(boundary_terms, dtype=complex)
    if order >= len(a):
        raise ValueError("need order+1 boundary terms")
    # recover v_n E^M by stripping the incremental phases
    strip = e_phase ** (-np.arange(len(a), dtype=float))
    v = a * strip
    g = e_phase / (1.0 - e_phase)
    tail = 0.0 + 0.0j
    coeff = 1.0 / (1.0 - e_phase)
    for r in range(order):
        tail += coeff * v[0]
        v = np.diff(v)
        coeff *= g
    return tail
