"""Best L1 approximation of compactly supported splines by trigonometric polynomials.

Two routes bracket ``E_n(f)_1``:

* a dual lower bound, ``int f g`` for square waves ``g = +-sign(cos(2 pi n (x - theta)))``,
  which are orthogonal to every trigonometric polynomial of degree below ``n``;
* a primal upper bound, the L1 norm of an explicit polynomial obtained from a
  discretized linear program, re-integrated exactly between the located sign
  changes of the residual.

When the two agree to the requested tolerance the result is certified.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import brentq

from .bsplines import PiecewisePolynomial, bspline, evaluate, integrate_against_sign
from .constants import theorem_bound
from .errors import InvalidArgumentError, UnsupportedInputError
from .simplex import initial_basis, l1_fit

__all__ = [
    "TrigPoly",
    "SignPattern",
    "ApproxResult",
    "eval_trig",
    "convolve_trig",
    "differentiate_trig",
    "dual_lower_bound",
    "lp_best_approx",
    "best_approx",
    "orthogonality_check",
    "l1_norm_exact",
]


@dataclass(frozen=True)
class TrigPoly:
    """``a0 + sum_{m=1}^{n-1} a[m-1] cos(2 pi m x) + b[m-1] sin(2 pi m x)``."""

    n: int
    a0: float
    a: tuple[float, ...]
    b: tuple[float, ...]

    def __post_init__(self):
        if self.n < 1:
            raise InvalidArgumentError(f"degree bound must be positive, got {self.n!r}")
        a = tuple(float(v) for v in self.a)
        b = tuple(float(v) for v in self.b)
        if len(a) != self.n - 1 or len(b) != self.n - 1:
            raise InvalidArgumentError(f"need {self.n - 1} cosine and sine coefficients")
        if not all(math.isfinite(v) for v in (self.a0, *a, *b)):
            raise InvalidArgumentError("coefficients must be finite")
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def zero(cls, n: int) -> "TrigPoly":
        return cls(n, 0.0, (0.0,) * (n - 1), (0.0,) * (n - 1))

    @classmethod
    def from_vector(cls, n: int, c) -> "TrigPoly":
        """From ``[a0, a_1..a_{n-1}, b_1..b_{n-1}]`` (the LP column order)."""
        c = np.asarray(c, dtype=float)
        return cls(n, c[0], tuple(c[1:n]), tuple(c[n:]))

    def vector(self) -> np.ndarray:
        return np.array((self.a0, *self.a, *self.b))

    def complex_coefficient(self, m: int) -> complex:
        if m == 0:
            return complex(self.a0)
        if abs(m) >= self.n:
            return 0j
        am, bm = self.a[abs(m) - 1], self.b[abs(m) - 1]
        return complex(am, -bm if m > 0 else bm) / 2

    def __call__(self, x):
        return eval_trig(self, x)


def trig_design(n: int, x: np.ndarray) -> np.ndarray:
    """Columns ``1, cos(2 pi m x), sin(2 pi m x)`` for ``m = 1..n-1``."""
    m = np.arange(1, n)
    arg = 2 * np.pi * np.outer(x, m)
    return np.hstack([np.ones((x.size, 1)), np.cos(arg), np.sin(arg)])


def eval_trig(t: TrigPoly, x):
    xa = np.asarray(x, dtype=float)
    m = np.arange(1, t.n)
    arg = 2 * np.pi * xa[..., None] * m
    out = t.a0 + np.cos(arg) @ np.array(t.a) + np.sin(arg) @ np.array(t.b) if t.n > 1 else t.a0 + 0 * xa
    return float(out) if np.ndim(out) == 0 else out


def convolve_trig(t: TrigPoly, k: int, h: float) -> TrigPoly:
    """``t * chi_h^k`` through the Fourier multiplier ``(sin(pi m h) / (pi m h))^k``."""
    if not h > 0:
        raise InvalidArgumentError(f"width must be positive, got {h!r}")
    mult = np.sinc(np.arange(1, t.n) * h) ** k
    return TrigPoly(t.n, t.a0, tuple(np.array(t.a) * mult), tuple(np.array(t.b) * mult))


def differentiate_trig(t: TrigPoly, order: int = 1) -> TrigPoly:
    """Term-wise ``order``-th derivative."""
    a, b = np.array(t.a), np.array(t.b)
    w = 2 * np.pi * np.arange(1, t.n)
    for _ in range(order):
        a, b = w * b, -w * a
    return TrigPoly(t.n, 0.0, tuple(a), tuple(b))


def _integrate_trig(t: TrigPoly, lo: float, hi: float) -> float:
    total = t.a0 * (hi - lo)
    if t.n > 1:
        w = 2 * np.pi * np.arange(1, t.n)
        total += np.dot(t.a, (np.sin(w * hi) - np.sin(w * lo)) / w)
        total += np.dot(t.b, (np.cos(w * lo) - np.cos(w * hi)) / w)
    return float(total)


@dataclass(frozen=True)
class SignPattern:
    """Square wave ``sign * sign(cos(2 pi frequency (x - shift)))`` of sup-norm 1."""

    frequency: int
    shift: float = 0.0
    sign: int = 1

    def __post_init__(self):
        if self.frequency < 1:
            raise InvalidArgumentError(f"frequency must be positive, got {self.frequency!r}")
        if self.sign not in (1, -1):
            raise InvalidArgumentError(f"sign must be +1 or -1, got {self.sign!r}")

    def __call__(self, x):
        xa = np.asarray(x, dtype=float)
        out = self.sign * np.sign(np.cos(2 * np.pi * self.frequency * (xa - self.shift)))
        return float(out) if out.ndim == 0 else out

    def sign_changes(self, lo: float, hi: float) -> np.ndarray:
        """Points ``shift + (2 nu + 1) / (4 frequency)`` strictly inside ``(lo, hi)``."""
        n = self.frequency
        nu = np.arange(
            math.ceil((4 * n * (lo - self.shift) - 1) / 2),
            math.floor((4 * n * (hi - self.shift) - 1) / 2) + 1,
        )
        pts = self.shift + (2 * nu + 1) / (4 * n)
        return pts[(pts > lo) & (pts < hi)]

    def fourier_coefficient(self, m: int) -> complex:
        """``int_{-1/2}^{1/2} pattern(x) exp(-2 pi i m x) dx`` from the sign-change points."""
        edges = np.concatenate(([-0.5], self.sign_changes(-0.5, 0.5), [0.5]))
        mids = 0.5 * (edges[:-1] + edges[1:])
        vals = self(mids)
        if m == 0:
            return complex(np.sum(vals * np.diff(edges)))
        w = 2 * np.pi * m
        seg = (np.exp(-1j * w * edges[:-1]) - np.exp(-1j * w * edges[1:])) / (1j * w)
        return complex(np.sum(vals * seg))


def orthogonality_check(p: SignPattern, n: int, tol: float = 1e-12) -> bool:
    """True iff every Fourier coefficient of ``p`` with ``|m| < n`` is below ``tol``."""
    return all(abs(p.fourier_coefficient(m)) < tol for m in range(-n + 1, n))


@dataclass
class ApproxResult:
    n: int
    k: int | None
    h: float | None
    primal_value: float
    approximant: TrigPoly
    dual_lower: float
    theorem_upper: float
    gap: float
    certified: bool
    grid_size: int
    witness: SignPattern | None = None
    lp_objective: float = math.nan
    discretization_error: float = math.nan
    iterations: int = 0
    lp_optimal: bool = True
    tol: float = 0.0
    grid_schedule: list[int] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def alpha(self) -> float | None:
        return None if self.h is None else 2 * self.n * self.h

    def to_dict(self) -> dict:
        d = asdict(self)
        d["approximant"] = {
            "n": self.approximant.n,
            "a0": self.approximant.a0,
            "a": list(self.approximant.a),
            "b": list(self.approximant.b),
        }
        d["witness"] = None if self.witness is None else asdict(self.witness)
        d["alpha"] = self.alpha
        return d

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _check_support(f: PiecewisePolynomial) -> None:
    lo, hi = f.support
    if lo < -0.5 - 1e-12 or hi > 0.5 + 1e-12:
        raise UnsupportedInputError(f"support [{lo}, {hi}] is not contained in [-1/2, 1/2]")


def dual_lower_bound(f: PiecewisePolynomial, n: int) -> tuple[float, SignPattern]:
    """Best of ``int f g`` over shifted square waves of frequency ``n``.

    Every candidate is orthogonal to degree-below-``n`` polynomials and has
    sup-norm 1, so each value is a valid lower bound for ``E_n(f)_1``.  Ties go
    to the smallest shift, then ``sign = +1``.
    """
    _check_support(f)
    best_value, best = -1.0, None
    for theta in (0.0, 1 / (4 * n), 1 / (2 * n), 3 / (4 * n)):
        v = integrate_against_sign(f, SignPattern(n, theta, 1))
        value, sign = (v, 1) if v >= 0 else (-v, -1)
        if value > best_value + 1e-15:
            best_value, best = value, SignPattern(n, theta, sign)
    return best_value, best


def _grid(f: PiecewisePolynomial, n: int, M: int) -> np.ndarray:
    edges = [np.linspace(-0.5, 0.5, M + 1), np.clip(f.breakpoints, -0.5, 0.5)]
    for theta in (0.0, 1 / (4 * n)):
        edges.append(SignPattern(n, theta).sign_changes(-0.5, 0.5))
    e = np.sort(np.concatenate(edges))
    keep = np.concatenate(([True], np.diff(e) > 1e-12))
    return e[keep]


def _segment_roots(g, lo: float, hi: float, samples: np.ndarray) -> list[float]:
    xs = np.concatenate(([lo], samples[(samples > lo) & (samples < hi)], [hi]))
    vals = g(xs)
    roots = []
    for i in range(xs.size - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0.0 and 0 < i:
            roots.append(float(xs[i]))
        elif a * b < 0:
            roots.append(brentq(g, xs[i], xs[i + 1], xtol=1e-14, rtol=4 * np.finfo(float).eps))
    return roots


def l1_norm_exact(f: PiecewisePolynomial, tau: TrigPoly, samples: np.ndarray) -> float:
    """``int_{-1/2}^{1/2} |f - tau|`` by closed-form integration between sign changes.

    Sign changes are bracketed on ``samples`` and refined with Brent's method.
    """
    segments = np.unique(np.concatenate(([-0.5], np.clip(f.breakpoints, -0.5, 0.5), [0.5])))
    total = []
    for lo, hi in zip(segments[:-1], segments[1:]):
        mid = 0.5 * (lo + hi)
        i = int(np.searchsorted(f.breakpoints, mid, side="right") - 1)
        inside = 0 <= i < f.breakpoints.size - 1

        def f_int(a, b, i=i, inside=inside):
            return f.integrate_piece(i, a, b) if inside else 0.0

        def g(x, i=i, inside=inside):
            fx = f.eval_piece(i, x) if inside else 0.0 * np.asarray(x)
            return fx - eval_trig(tau, x)

        cuts = [lo, *_segment_roots(g, lo, hi, samples), hi]
        for a, b in zip(cuts[:-1], cuts[1:]):
            if b <= a:
                continue
            s = np.sign(g(0.5 * (a + b)))
            total.append(s * (f_int(a, b) - _integrate_trig(tau, a, b)))
    return math.fsum(total)


def _l1_norm(f: PiecewisePolynomial) -> float:
    """``int |f|`` with each piece split at its real roots."""
    total = []
    for i, (t0, t1) in enumerate(zip(f.breakpoints[:-1], f.breakpoints[1:])):
        c = np.trim_zeros(f.coeffs[i], "b")
        if c.size == 0:
            continue
        r = P.polyroots(c) if c.size > 1 else np.empty(0)
        r = np.sort(r[np.abs(r.imag) < 1e-12].real) + t0
        cuts = [t0, *r[(r > t0) & (r < t1)], t1]
        for a, b in zip(cuts[:-1], cuts[1:]):
            total.append(abs(f.integrate_piece(i, a, b)))
    return math.fsum(total)


def lp_best_approx(
    f: PiecewisePolynomial,
    n: int,
    grid: int,
    tol: float = 1e-6,
    *,
    order: int | None = None,
    width: float | None = None,
    max_iter: int = 20000,
) -> ApproxResult:
    """Discretized primal solve for ``inf_tau ||f - tau||_1`` over degree below ``n``.

    The midpoint rule on a uniform ``grid``-cell partition of one period,
    refined at the breakpoints of ``f`` and at the witness sign changes,
    defines a weighted L1 regression solved by the dense simplex method in
    :mod:`trigl1.simplex`.  ``primal_value`` is the exact L1 norm of the
    resulting polynomial.  When the dual witness already attains ``||f||_1``
    the zero polynomial is optimal and is returned without solving, which
    also picks the minimum-norm solution where minimizers are not unique.
    ``order`` and ``width`` only feed ``theorem_upper``.
    """
    if grid < 8 * n:
        raise InvalidArgumentError(f"grid must be at least 8n = {8 * n}, got {grid}")
    if not tol > 0:
        raise InvalidArgumentError(f"tol must be positive, got {tol!r}")
    _check_support(f)
    start = time.perf_counter()
    edges = _grid(f, n, grid)
    x = 0.5 * (edges[:-1] + edges[1:])
    w = np.diff(edges)
    fx = evaluate(f, x)
    A = trig_design(n, x)
    dual, witness = dual_lower_bound(f, n)
    upper = theorem_bound(order, 2 * n * width) if order and width else math.inf
    norm = _l1_norm(f)
    if dual >= norm - 1e-12 * max(1.0, norm):
        # the witness certifies that tau = 0 is optimal; skip the LP
        return ApproxResult(
            n=n, k=order, h=width, primal_value=norm, approximant=TrigPoly.zero(n),
            dual_lower=dual, theorem_upper=upper, gap=norm - dual, certified=True,
            grid_size=int(edges.size - 1), witness=witness, lp_objective=norm,
            discretization_error=0.0, iterations=0, lp_optimal=True, tol=tol,
            grid_schedule=[grid], elapsed=time.perf_counter() - start,
        )
    fit = l1_fit(
        A, fx, w, initial_basis(x, A.shape[1]),
        tol=min(tol, 1e-9), max_iter=max_iter, signs=witness(x),
    )
    tau = TrigPoly.from_vector(n, fit.coef)
    primal = l1_norm_exact(f, tau, edges)
    gap = primal - dual
    return ApproxResult(
        n=n,
        k=order,
        h=width,
        primal_value=primal,
        approximant=tau,
        dual_lower=dual,
        theorem_upper=upper,
        gap=gap,
        certified=bool(fit.optimal and gap <= tol),
        grid_size=int(x.size),
        witness=witness,
        lp_objective=fit.objective,
        discretization_error=abs(primal - fit.objective),
        iterations=fit.iterations,
        lp_optimal=fit.optimal,
        tol=tol,
        grid_schedule=[grid],
        elapsed=time.perf_counter() - start,
    )


def best_approx(
    k: int,
    n: int,
    alpha: float,
    tol: float = 1e-6,
    *,
    grid: int = 4096,
    max_grid: int = 1 << 14,
) -> ApproxResult:
    """``E_n(chi^k_h)_1`` for ``h = alpha / (2n)`` with dual and theorem bounds attached.

    The grid doubles from ``grid`` until the result is certified, the primal
    value moves by less than ``tol`` between refinements, or ``max_grid``
    is reached.
    """
    if k < 1 or n < 1:
        raise InvalidArgumentError(f"k and n must be positive, got k={k}, n={n}")
    if k > n:
        raise InvalidArgumentError(f"need k <= n, got k={k}, n={n}")
    if not 0 < alpha <= 2 * n / k * (1 + 1e-12):
        raise InvalidArgumentError(
            f"alpha must lie in (0, 2n/k] = (0, {2 * n / k}] so the spline support "
            f"stays in [-1/2, 1/2]; got {alpha}"
        )
    h = alpha / (2 * n)
    f = bspline(k, h)
    schedule = []
    M = grid
    prev = None
    start = time.perf_counter()
    while True:
        res = lp_best_approx(f, n, M, tol, order=k, width=h)
        schedule.append(M)
        settled = prev is not None and abs(res.primal_value - prev.primal_value) <= tol
        if res.certified or settled or 2 * M > max_grid:
            break
        prev = res
        M *= 2
    res.grid_schedule = schedule
    res.elapsed = time.perf_counter() - start
    return res
