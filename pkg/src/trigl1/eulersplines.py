"""Euler splines from repeated unit-window averaging of the square wave.

``E_0(x) = sign(cos(pi x))`` and ``E_{j+1}(t) = gamma_j * int_{-1/2}^{1/2} E_j(t + u) du``.
Averaging over a unit window multiplies the harmonic ``cos((2m+1) pi x)`` by
``2 (-1)^m / ((2m+1) pi)``, so after ``k`` steps the cosine coefficient is
proportional to ``(-1)^{m(k+1)} / (2m+1)^{k+1}``.  The series is normalized so
that ``E_k(0) = 1`` exactly, which makes the truncated object attain its
extreme values at the integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bsplines import central_difference
from .constants import favard_constant
from .errors import InvalidArgumentError

__all__ = [
    "EulerSpline",
    "euler_spline",
    "evaluate_euler",
    "euler_difference",
    "euler_central_difference",
    "integrate_euler",
    "derivative_relation_residual",
    "derivative_coefficients",
]

MAX_HARMONICS = 10_000_000


@dataclass(frozen=True, eq=False)
class EulerSpline:
    """Truncated cosine-series representation of ``E_k``.

    ``coefficients[m]`` multiplies ``cos((2m+1) pi x)``.  For ``order == 0``
    there are no coefficients; the square wave is evaluated exactly.
    """

    order: int
    harmonics: int
    normalization: float
    tail_bound: float
    coefficients: np.ndarray

    def __call__(self, x):
        return evaluate_euler(self, x)


def _signs(k: int, m: np.ndarray) -> np.ndarray:
    return np.where((m * (k + 1)) % 2 == 0, 1.0, -1.0)


def _harmonics_for(k: int, tol: float) -> int:
    # 2 T / S <= tol with T <= (2M)^-k / (2k) and S >= pi/4
    target = 1.0 / (k * (math.pi / 4) * tol)
    return max(8, math.ceil(0.5 * target ** (1.0 / k)))


def euler_spline(k: int, tol: float = 1e-10, harmonics: int | None = None) -> EulerSpline:
    """Build ``E_k`` with sup-norm truncation error at most ``tol`` (``k >= 1``).

    ``harmonics`` overrides the count derived from the tail bound.  ``k = 0``
    is stored exactly.
    """
    if not tol > 0:
        raise InvalidArgumentError(f"tol must be positive, got {tol!r}")
    if k < 0 or int(k) != k:
        raise InvalidArgumentError(f"order must be a nonnegative integer, got {k!r}")
    k = int(k)
    if k == 0:
        return EulerSpline(0, 0, math.pi / 4, 0.0, np.empty(0))
    M = harmonics if harmonics is not None else _harmonics_for(k, tol)
    M = min(int(M), MAX_HARMONICS)
    m = np.arange(M, dtype=float)
    raw = _signs(k, m) / (2 * m + 1) ** (k + 1)
    S = math.fsum(raw)
    tail = (2.0 * M) ** -k / (2.0 * k)
    coeffs = raw / S
    coeffs.setflags(write=False)
    return EulerSpline(k, M, S, 2.0 * tail / (abs(S) - tail), coeffs)


def _harmonic_sum(coeffs: np.ndarray, x: np.ndarray, kind: str) -> np.ndarray:
    """``sum_m coeffs[m] * trig((2m+1) pi x)`` for ``trig`` in {cos, sin}.

    Harmonics are split into blocks ``m = b B + i`` and combined with the
    angle-addition formula, so each point costs two matrix-vector products and
    ``O(sqrt(M))`` trig evaluations instead of ``M``.  Angles are reduced mod 2
    before scaling by pi.
    """
    M = coeffs.size
    B = max(1, math.isqrt(M))
    nb = -(-M // B)
    C = np.zeros(nb * B)
    C[:M] = coeffs
    C = C.reshape(nb, B)
    inner = 2.0 * np.arange(B)
    outer = 2.0 * B * np.arange(nb) + 1.0
    flat = x.ravel()
    out = np.empty(flat.size)
    rows = max(1, (1 << 21) // max(B, nb))
    for s in range(0, flat.size, rows):
        t = flat[s : s + rows, None]
        ib = math.pi * np.mod(t * inner, 2.0)
        ob = math.pi * np.mod(t * outer, 2.0)
        P = np.cos(ib) @ C.T
        Q = np.sin(ib) @ C.T
        if kind == "cos":
            out[s : s + rows] = np.sum(np.cos(ob) * P - np.sin(ob) * Q, axis=1)
        else:
            out[s : s + rows] = np.sum(np.sin(ob) * P + np.cos(ob) * Q, axis=1)
    return out.reshape(x.shape)


def evaluate_euler(e: EulerSpline, x):
    """Evaluate the representation; accurate to ``e.tail_bound``."""
    xa = np.asarray(x, dtype=float)
    if e.order == 0:
        r = np.mod(xa + 0.5, 2.0)
        out = np.where(r < 1.0, 1.0, -1.0)
    else:
        out = _harmonic_sum(e.coefficients, xa, "cos")
    return float(out) if out.ndim == 0 else out


def euler_difference(e: EulerSpline, x, step: float):
    """Centered difference ``(E(x + step) - E(x - step)) / (2 step)``.

    Summed as ``-sum c_m sin(w_m x) sin(w_m step) / step`` so the two
    evaluations do not cancel in floating point.
    """
    xa = np.asarray(x, dtype=float)
    if e.order == 0:
        return (evaluate_euler(e, xa + step) - evaluate_euler(e, xa - step)) / (2 * step)
    odd = 2 * np.arange(e.harmonics, dtype=float) + 1
    weights = e.coefficients * np.sin(math.pi * odd * step)
    out = -_harmonic_sum(weights, xa, "sin") / step
    return float(out) if out.ndim == 0 else out


def integrate_euler(e: EulerSpline, a: float, b: float) -> float:
    """Exact integral of the representation over ``[a, b]``."""
    if e.order == 0:
        # antiderivative of sign(cos(pi x)) is a 2-periodic triangle wave
        def anti(x):
            r = math.fmod(x + 0.5, 2.0) % 2.0 - 0.5
            return r if r <= 0.5 else 1.0 - r

        return float(anti(b) - anti(a))
    odd = 2 * np.arange(e.harmonics, dtype=float) + 1
    weights = e.coefficients / (math.pi * odd)
    ends = _harmonic_sum(weights, np.array([a, b], dtype=float), "sin")
    return float(ends[1] - ends[0])


def euler_central_difference(k: int, j: int, x, tol: float = 1e-10):
    """``Delta^k`` with step ``2j + 1`` applied to ``E_k`` at ``x``."""
    if k < 1:
        raise InvalidArgumentError(f"order must be positive, got {k!r}")
    if j < 0:
        raise InvalidArgumentError(f"j must be nonnegative, got {j!r}")
    e = euler_spline(k, tol)
    return central_difference(e, 2 * j + 1, k, x)


def derivative_coefficients(e: EulerSpline, order: int) -> np.ndarray:
    """Cosine/sine coefficients of the ``order``-th term-wise derivative.

    Returns coefficients of ``cos`` for even ``order`` and of ``sin`` for odd.
    """
    odd = 2 * np.arange(e.harmonics, dtype=float) + 1
    sign = (-1) ** ((order + 1) // 2)
    return sign * (math.pi * odd) ** order * e.coefficients


def _sample_points(samples: int, exclusion: float) -> np.ndarray:
    x = -1.0 + (np.arange(samples) + 0.5) * (2.0 / samples)
    dist = np.abs(2 * x - np.round(2 * x)) / 2
    return x[dist >= exclusion]


def derivative_relation_residual(
    j: int, samples: int = 32, step: float = 1e-6, exclusion: float = 1e-3
) -> float:
    """Max residual of ``D E_j(x) = pi K_{j-1} / K_j * E_{j-1}(x + 1/2)``.

    The left side is a centered difference of the truncated series for ``E_j``;
    sample points keep at least ``exclusion`` away from integers and half-integers,
    where ``E_0`` jumps.  Harmonic counts are chosen so series truncation
    contributes below 2e-6 at the sample closest to a jump.
    """
    if j < 1:
        raise InvalidArgumentError(f"j must be >= 1, got {j!r}")
    if samples < 8:
        raise InvalidArgumentError(f"need at least 8 samples, got {samples!r}")
    x = _sample_points(samples, exclusion)
    if j == 1:
        # Abel summation: |sum_{m>=M} sin((2m+1) pi x)/(2m+1)| <= 1/((2M+1) |sin(pi x)|)
        delta = float(np.min(np.abs(x - np.round(x))))
        M = math.ceil(0.5 * (8.0 / math.pi) / (2e-6 * math.sin(math.pi * delta)))
        lhs_spline = euler_spline(1, harmonics=M)
    else:
        # derivative tail <= (pi / S) (2M)^-(j-1) / (2(j-1)) with S >= pi/4
        M = math.ceil(0.5 * (4.0 / (2 * (j - 1) * 1e-6)) ** (1.0 / (j - 1)))
        lhs_spline = euler_spline(j, harmonics=M)
    rhs_spline = euler_spline(j - 1, tol=1e-6)
    lhs = euler_difference(lhs_spline, x, step)
    const = math.pi * favard_constant(j - 1).value / favard_constant(j).value
    rhs = const * evaluate_euler(rhs_spline, x + 0.5)
    return float(np.max(np.abs(lhs - rhs)))
