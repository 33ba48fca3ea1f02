"""Favard constants and the sharp constants of the B-spline L1 bound.

The Favard constant of order ``k`` is

    K_k = (4/pi) * sum_{j in Z} (4j + 1)^{-(k+1)}

and the constant appearing in the bound for ``E_n(chi_h^k)_1`` is
``F_k = (2/pi)^k K_k``.  The two-sided series is summed in symmetric pairs
``(j, -j)`` so that the conditionally convergent ``k = 0`` case is well defined,
and the remainder past the truncation index is bracketed between a trapezoid
and a midpoint integral estimate.  Both estimates are rigorous because the
paired summand is completely monotone on ``[1, inf)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError

__all__ = [
    "FavardConstant",
    "BoundConstant",
    "favard_constant",
    "bound_constant",
    "theorem_bound",
    "MAX_ORDER",
]

#: Largest order summed explicitly; beyond it K_k is within 1e-15 of 4/pi.
MAX_ORDER = 32

_EPS = np.finfo(float).eps
_FOUR_OVER_PI = 4.0 / math.pi


@dataclass(frozen=True)
class FavardConstant:
    order: int
    value: float
    abs_error_bound: float
    terms: int = 0
    saturated: bool = False


@dataclass(frozen=True)
class BoundConstant:
    order: int
    value: float
    abs_error_bound: float


def _pair_terms(j: np.ndarray, p: int) -> np.ndarray:
    # (4j+1)^-p + (-4j+1)^-p for j >= 1; the second base is negative.
    sgn = -1.0 if p % 2 else 1.0
    return (4.0 * j + 1.0) ** -p + sgn * (4.0 * j - 1.0) ** -p


def _tail_integral(a: float, p: int) -> float:
    """Integral over [a, inf) of |pair term|, written to avoid cancellation."""
    if p == 1:
        return 0.25 * math.log1p(2.0 / (4.0 * a - 1.0))
    lo = (4.0 * a - 1.0) ** (1 - p) / (4.0 * (p - 1))
    if p % 2 == 0:
        hi = (4.0 * a + 1.0) ** (1 - p) / (4.0 * (p - 1))
        return lo + hi
    ratio_pow = -math.expm1((p - 1) * math.log1p(-2.0 / (4.0 * a + 1.0)))
    return lo * ratio_pow


def _series(p: int, J: int) -> tuple[float, float, float]:
    """Return (partial sum incl. tail midpoint, tail half-width, rounding bound)."""
    j = np.arange(1, J + 1, dtype=float)
    terms = _pair_terms(j, p)
    head = math.fsum(np.concatenate(([1.0], terms)))
    phi_next = abs(float(_pair_terms(np.array([J + 1.0]), p)[0]))
    upper = _tail_integral(J + 0.5, p)
    lower = _tail_integral(J + 1.0, p) + 0.5 * phi_next
    tail_sign = -1.0 if p % 2 else 1.0
    tail = tail_sign * 0.5 * (upper + lower)
    half_width = 0.5 * abs(upper - lower)
    rounding = 4.0 * _EPS * (1.0 + float(np.abs(terms).sum())) + 4.0 * _EPS * abs(tail)
    return head + tail, half_width, rounding


def favard_constant(k: int, tol: float = 1e-14) -> FavardConstant:
    """Favard constant ``K_k`` with a guaranteed absolute error bound.

    The truncation index is doubled until the bracket on the remainder, plus a
    floating-point rounding allowance, is below ``tol``.  Requests tighter
    than the rounding floor (about 1e-15) return the best attainable bound.
    For ``k > MAX_ORDER`` the limit ``4/pi`` is returned with ``saturated=True``.
    """
    if not tol > 0:
        raise InvalidArgumentError(f"tol must be positive, got {tol!r}")
    if k < 0 or int(k) != k:
        raise InvalidArgumentError(f"order must be a nonnegative integer, got {k!r}")
    k = int(k)
    p = k + 1
    if k > MAX_ORDER:
        # |K_k - 4/pi| <= (4/pi) * 2 * (3^-p + 3^(1-p) / (4(p-1)))
        bound = _FOUR_OVER_PI * 2.0 * (3.0 ** -p + 3.0 ** (1 - p) / (4.0 * (p - 1)))
        return FavardConstant(k, _FOUR_OVER_PI, bound + _EPS, 0, saturated=True)

    J = 16
    while True:
        total, half_width, rounding = _series(p, J)
        err = _FOUR_OVER_PI * (half_width + rounding) + 2.0 * _EPS * abs(total)
        if err <= tol or J >= 1 << 22:
            break
        J *= 2
    return FavardConstant(k, float(_FOUR_OVER_PI * total), float(err), J)


def bound_constant(k: int) -> BoundConstant:
    """Sharp constant ``F_k = (2/pi)^k K_k`` of the B-spline bound (``k >= 1``)."""
    if k < 1 or int(k) != k:
        raise InvalidArgumentError(f"bound constant is defined for k >= 1, got {k!r}")
    K = favard_constant(int(k), 1e-14)
    scale = (2.0 / math.pi) ** int(k)
    return BoundConstant(int(k), scale * K.value, float(scale * K.abs_error_bound + _EPS))


def theorem_bound(k: int, alpha: float) -> float:
    """``min(1, F_k * alpha^-k)``, the refined upper bound on ``E_n(chi^k_{alpha/2n})_1``."""
    if not alpha > 0:
        raise InvalidArgumentError(f"alpha must be positive, got {alpha!r}")
    return min(1.0, bound_constant(k).value * float(alpha) ** -int(k))
