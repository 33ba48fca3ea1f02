"""Compactly supported piecewise polynomials and the normalized B-splines.

Pieces are stored in the local variable ``x - t_i`` of their left breakpoint,
ascending powers.  Everything here is exact up to floating point: convolution
integrates polynomial products in closed form, and integrals against
exponentials or square waves are computed piece by piece from antiderivatives.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import reduce
from typing import Callable

import numpy as np

from .errors import InvalidArgumentError, UnsupportedInputError

__all__ = [
    "PiecewisePolynomial",
    "BSplineSpec",
    "chi",
    "bspline",
    "convolve",
    "evaluate",
    "differentiate",
    "central_difference",
    "fourier_coefficient",
    "integrate_against_sign",
    "to_json",
    "from_json",
]

MERGE_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class PiecewisePolynomial:
    """Piecewise polynomial on ``[t_0, t_M]``, identically zero outside.

    ``coeffs[i, p]`` multiplies ``(x - t_i)**p`` on ``[t_i, t_{i+1}]``.
    """

    breakpoints: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.breakpoints, dtype=float)
        c = np.atleast_2d(np.asarray(self.coeffs, dtype=float))
        if t.ndim != 1 or t.size < 2:
            raise InvalidArgumentError("need at least two breakpoints")
        if np.any(np.diff(t) <= 0):
            raise InvalidArgumentError("breakpoints must be strictly increasing")
        if c.shape[0] != t.size - 1:
            raise InvalidArgumentError(
                f"{t.size - 1} intervals but {c.shape[0]} coefficient rows"
            )
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(c))):
            raise InvalidArgumentError("breakpoints and coefficients must be finite")
        t.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "breakpoints", t)
        object.__setattr__(self, "coeffs", c)

    @property
    def max_degree(self) -> int:
        return self.coeffs.shape[1] - 1

    @property
    def support(self) -> tuple[float, float]:
        return float(self.breakpoints[0]), float(self.breakpoints[-1])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    def __call__(self, x):
        return evaluate(self, x)

    def integral(self) -> float:
        p = np.arange(self.coeffs.shape[1])
        w = self.widths[:, None]
        return math.fsum((self.coeffs * w ** (p + 1) / (p + 1)).ravel())

    def eval_piece(self, i: int, x):
        """Polynomial of piece ``i`` at ``x``, ignoring the interval bounds."""
        local = np.asarray(x, dtype=float) - self.breakpoints[i]
        out = np.zeros_like(local)
        for c in self.coeffs[i, ::-1]:
            out = out * local + c
        return out

    def integrate_piece(self, i: int, lo: float, hi: float) -> float:
        """Integral of piece ``i`` over ``[lo, hi]`` (local antiderivative)."""
        t = self.breakpoints[i]
        c = self.coeffs[i]
        p = np.arange(c.size)
        a, b = lo - t, hi - t
        return float(np.sum(c * (b ** (p + 1) - a ** (p + 1)) / (p + 1)))

    def __repr__(self):
        return (
            f"PiecewisePolynomial(pieces={self.coeffs.shape[0]}, "
            f"degree={self.max_degree}, support={self.support})"
        )


@dataclass(frozen=True)
class BSplineSpec:
    order: int
    width: float

    def __post_init__(self):
        if self.order < 1 or int(self.order) != self.order:
            raise InvalidArgumentError(f"order must be a positive integer, got {self.order!r}")
        if not self.width > 0:
            raise InvalidArgumentError(f"width must be positive, got {self.width!r}")

    @classmethod
    def from_alpha(cls, order: int, n: int, alpha: float) -> "BSplineSpec":
        return cls(order, alpha / (2.0 * n))

    def alpha(self, n: int) -> float:
        return 2.0 * n * self.width

    def build(self) -> PiecewisePolynomial:
        return bspline(self.order, self.width)


def chi(h: float) -> PiecewisePolynomial:
    """Normalized indicator ``1/h`` on ``(-h/2, h/2)``."""
    if not h > 0:
        raise InvalidArgumentError(f"width must be positive, got {h!r}")
    return PiecewisePolynomial(np.array([-h / 2, h / 2]), np.array([[1.0 / h]]))


def bspline(k: int, h: float) -> PiecewisePolynomial:
    """``chi_h^k``: the ``k``-fold self-convolution of ``chi(h)``."""
    if k < 1 or int(k) != k:
        raise InvalidArgumentError(f"order must be a positive integer, got {k!r}")
    box = chi(h)
    return reduce(lambda acc, _: convolve(box, acc), range(int(k) - 1), box)


def _merge_breakpoints(points: np.ndarray) -> np.ndarray:
    pts = np.sort(points)
    keep = [pts[0]]
    for t in pts[1:]:
        if t - keep[-1] > MERGE_RTOL * max(1.0, abs(t)):
            keep.append(t)
    return np.array(keep)


def _polymul2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1))
    for i, j in zip(*np.nonzero(a)):
        out[i : i + b.shape[0], j : j + b.shape[1]] += a[i, j] * b
    return out


def _substitute(q: np.ndarray, c0: float, c1: float) -> np.ndarray:
    """Univariate coefficients in y of ``sum q[a, b] (c0 + c1 y)^a y^b``."""
    P = np.polynomial.polynomial
    out = np.zeros(q.shape[0] + q.shape[1])
    lin = np.array([c0, c1])
    power = np.array([1.0])
    for a in range(q.shape[0]):
        row = P.polymul(power, q[a])
        out[: row.size] += row
        power = P.polymul(power, lin)
    return out


def _pair_convolution(cf, a0, a1, cg, b0, b1, s, e) -> np.ndarray | None:
    """Coefficients in ``y = x - s`` of ``int f_i(u) g_j(x - u) du`` for x in [s, e]."""
    xm = 0.5 * (s + e)
    lo_const = a0 >= xm - b1
    hi_const = a1 <= xm - b0
    lo_m = a0 if lo_const else xm - b1
    hi_m = a1 if hi_const else xm - b0
    if hi_m - lo_m <= MERGE_RTOL * max(1.0, abs(xm)):
        return None
    # g(x - u) in local coords: (s - a0 - b0) + y - u', with u' = u - a0
    lin = np.zeros((2, 2))
    lin[0, 0] = s - a0 - b0
    lin[0, 1] = 1.0
    lin[1, 0] = -1.0
    g2 = np.zeros((cg.size, cg.size))
    power = np.ones((1, 1))
    for q, coef in enumerate(cg):
        g2[: power.shape[0], : power.shape[1]] += coef * power
        if q + 1 < cg.size:
            power = _polymul2(power, lin)
    prod = _polymul2(cf.reshape(-1, 1), g2)
    anti = np.zeros((prod.shape[0] + 1, prod.shape[1]))
    anti[1:] = prod / np.arange(1, prod.shape[0] + 1)[:, None]
    upper = _substitute(anti, a1 - a0, 0.0) if hi_const else _substitute(anti, s - b0 - a0, 1.0)
    lower = _substitute(anti, 0.0, 0.0) if lo_const else _substitute(anti, s - b1 - a0, 1.0)
    return upper - lower


def convolve(f: PiecewisePolynomial, g: PiecewisePolynomial) -> PiecewisePolynomial:
    """Exact convolution ``(f * g)(x) = int f(u) g(x - u) du``."""
    tf, tg = f.breakpoints, g.breakpoints
    bps = _merge_breakpoints((tf[:, None] + tg[None, :]).ravel())
    deg = f.max_degree + g.max_degree + 1
    coeffs = np.zeros((bps.size - 1, deg + 1))
    for i in range(tf.size - 1):
        for j in range(tg.size - 1):
            lo, hi = tf[i] + tg[j], tf[i + 1] + tg[j + 1]
            first = np.searchsorted(bps, lo - MERGE_RTOL * max(1.0, abs(lo)))
            for r in range(first, bps.size - 1):
                s, e = bps[r], bps[r + 1]
                if s >= hi - MERGE_RTOL * max(1.0, abs(hi)):
                    break
                piece = _pair_convolution(
                    f.coeffs[i], tf[i], tf[i + 1], g.coeffs[j], tg[j], tg[j + 1], s, e
                )
                if piece is not None:
                    coeffs[r, : piece.size] += piece[: deg + 1]
    return PiecewisePolynomial(bps, coeffs)


def evaluate(f: PiecewisePolynomial, x):
    """Evaluate ``f``; right-hand piece at breakpoints, left piece at ``t_M``, zero outside."""
    xa = np.asarray(x, dtype=float)
    t = f.breakpoints
    idx = np.searchsorted(t, xa, side="right") - 1
    idx = np.where(xa == t[-1], t.size - 2, idx)
    inside = (idx >= 0) & (idx < t.size - 1)
    safe = np.clip(idx, 0, t.size - 2)
    local = xa - t[safe]
    c = f.coeffs[safe]
    out = np.zeros_like(local)
    for p in range(f.coeffs.shape[1] - 1, -1, -1):
        out = out * local + c[..., p]
    out = np.where(inside, out, 0.0)
    return float(out) if out.ndim == 0 else out


def differentiate(f: PiecewisePolynomial) -> PiecewisePolynomial:
    """Piecewise derivative (the value at breakpoints follows the evaluation convention)."""
    c = f.coeffs
    if c.shape[1] == 1:
        return PiecewisePolynomial(f.breakpoints, np.zeros_like(c))
    p = np.arange(1, c.shape[1])
    return PiecewisePolynomial(f.breakpoints, c[:, 1:] * p)


def central_difference(f: Callable, h: float, k: int, x):
    """``sum_{j=0}^k (-1)^j C(k, j) f(x + k h / 2 - j h)``."""
    if not h > 0:
        raise InvalidArgumentError(f"step must be positive, got {h!r}")
    if k < 1:
        raise InvalidArgumentError(f"order must be positive, got {k!r}")
    x = np.asarray(x, dtype=float)
    total = sum(
        (-1) ** j * math.comb(k, j) * np.asarray(f(x + k * h / 2 - j * h), dtype=float)
        for j in range(k + 1)
    )
    return float(total) if np.ndim(total) == 0 else total


def _exp_moment(p: int, omega: float, w: float) -> complex:
    """``int_0^w s^p exp(-i omega s) ds``.

    For ``|omega w| <= p + 1`` the incomplete-gamma tail series is used; it has
    no cancellation and covers ``omega = 0``.  Otherwise the finite closed form.
    """
    z = 1j * omega
    x = z * w
    if abs(x) <= p + 1:
        term = w ** (p + 1) / (p + 1)
        total = term
        r = p + 1
        while True:
            term *= x / (r + 1)
            r += 1
            total += term
            if abs(term) <= 1e-18 * abs(total) or r > p + 200:
                break
        return complex(np.exp(-x) * total)
    partial = 0.0 + 0.0j
    term = 1.0 + 0.0j
    for r in range(p + 1):
        if r:
            term *= x / r
        partial += term
    return complex(math.factorial(p) / z ** (p + 1) * (1.0 - np.exp(-x) * partial))


def _check_one_period(f: PiecewisePolynomial) -> None:
    lo, hi = f.support
    if lo < -0.5 - 1e-12 or hi > 0.5 + 1e-12:
        raise UnsupportedInputError(
            f"support [{lo}, {hi}] is not contained in [-1/2, 1/2]"
        )


def fourier_coefficient(f: PiecewisePolynomial, m: int) -> complex:
    """``int f(u) exp(-2 pi i m u) du`` in closed form.

    The support of ``f`` must lie in one period ``[-1/2, 1/2]``.
    """
    _check_one_period(f)
    omega = 2.0 * math.pi * m
    total = 0.0 + 0.0j
    for i, t in enumerate(f.breakpoints[:-1]):
        w = float(f.breakpoints[i + 1] - t)
        piece = sum(c * _exp_moment(p, omega, w) for p, c in enumerate(f.coeffs[i]) if c != 0.0)
        total += np.exp(-1j * omega * t) * piece
    return complex(total)


def integrate_against_sign(f: PiecewisePolynomial, pattern) -> float:
    """Exact ``int f(u) * pattern(u) du`` for a square-wave sign pattern.

    ``pattern`` needs ``frequency``, ``shift`` and ``sign`` attributes with value
    ``sign * sign(cos(2 pi frequency (x - shift)))``.
    """
    n = pattern.frequency
    theta = pattern.shift
    parts = []
    for i in range(f.breakpoints.size - 1):
        a, b = float(f.breakpoints[i]), float(f.breakpoints[i + 1])
        # sign changes: theta + (2 nu + 1) / (4 n)
        nu_lo = math.ceil((4 * n * (a - theta) - 1) / 2)
        nu_hi = math.floor((4 * n * (b - theta) - 1) / 2)
        cuts = [theta + (2 * nu + 1) / (4 * n) for nu in range(nu_lo, nu_hi + 1)]
        edges = [a] + [c for c in cuts if a < c < b] + [b]
        for lo, hi in zip(edges[:-1], edges[1:]):
            mid = 0.5 * (lo + hi)
            s = math.copysign(1.0, math.cos(2 * math.pi * n * (mid - theta)))
            parts.append(s * f.integrate_piece(i, lo, hi))
    return pattern.sign * math.fsum(parts)


def to_json(f: PiecewisePolynomial) -> str:
    """Serialize as ``{"breakpoints": [...], "pieces": [[...], ...]}`` with 17 significant digits."""

    def fmt(values) -> str:
        return "[" + ", ".join(format(float(v), ".17g") for v in values) + "]"

    pieces = ", ".join(fmt(row) for row in f.coeffs)
    return f'{{"breakpoints": {fmt(f.breakpoints)}, "pieces": [{pieces}]}}'


def from_json(text: str) -> PiecewisePolynomial:
    data = json.loads(text)
    pieces = data["pieces"]
    width = max(len(p) for p in pieces)
    coeffs = np.zeros((len(pieces), width))
    for i, row in enumerate(pieces):
        coeffs[i, : len(row)] = row
    return PiecewisePolynomial(np.array(data["breakpoints"], dtype=float), coeffs)
