"""Verification suites, theorem sweeps, and table/plot output."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .bsplines import bspline, central_difference, differentiate, evaluate, convolve, chi
from .constants import bound_constant, favard_constant, theorem_bound
from .errors import InvalidArgumentError
from .eulersplines import (
    derivative_coefficients,
    derivative_relation_residual,
    euler_central_difference,
    euler_spline,
    evaluate_euler,
    integrate_euler,
)
from .l1approx import (
    ApproxResult,
    SignPattern,
    TrigPoly,
    best_approx,
    convolve_trig,
    differentiate_trig,
    dual_lower_bound,
    orthogonality_check,
)

__all__ = [
    "SweepSpec",
    "Case",
    "VerificationReport",
    "parse_alphas",
    "sharp_index",
    "verify_theorem",
    "verify_identities",
    "CriticalAlpha",
    "find_critical_alpha",
    "emit_table",
    "TABLE_COLUMNS",
]

TABLE_COLUMNS = ("n", "k", "alpha", "primal", "dual", "bound", "gap", "certified")


def parse_alphas(text: str) -> list[float]:
    """``"start:stop:step"`` (stop inclusive) or a comma-separated list."""
    if ":" in text:
        start, stop, step = (float(v) for v in text.split(":"))
        if step <= 0:
            raise InvalidArgumentError(f"step must be positive, got {step}")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 12) for i in range(count)]
    return [float(v) for v in text.split(",") if v.strip()]


@dataclass
class SweepSpec:
    n_values: list[int]
    k_values: list[int]
    alphas: list[float]
    tol: float = 1e-6
    grid: int = 4096
    fmt: str = "csv"
    skipped: list[tuple[int, int, float]] = field(default_factory=list)

    def __post_init__(self):
        if any(n < 1 for n in self.n_values) or any(k < 1 for k in self.k_values):
            raise InvalidArgumentError("n and k values must be positive")
        if any(a <= 0 for a in self.alphas):
            raise InvalidArgumentError("alphas must be positive")
        if self.fmt not in ("csv", "json", "svg"):
            raise InvalidArgumentError(f"unknown output format {self.fmt!r}")

    def cases(self) -> list[tuple[int, int, float]]:
        """Admissible ``(n, k, alpha)`` sorted by key; the rest land in ``skipped``."""
        keep, self.skipped = [], []
        for n in self.n_values:
            for k in self.k_values:
                for a in self.alphas:
                    ok = k <= n and a <= 2 * n / k * (1 + 1e-12)
                    (keep if ok else self.skipped).append((n, k, a))
        return sorted(keep)


@dataclass
class Case:
    id: str
    expected: float | str | None
    actual: float | str | None
    tolerance: float | None
    passed: bool


@dataclass
class VerificationReport:
    suite: str
    cases: list[Case] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def add(self, id, expected, actual, tolerance, passed=None):
        if passed is None:
            passed = abs(actual - expected) <= tolerance
        self.cases.append(Case(id, _num(expected), _num(actual), tolerance, bool(passed)))

    def extend(self, other: "VerificationReport") -> None:
        self.cases.extend(other.cases)
        self.elapsed += other.elapsed

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "elapsed": self.elapsed,
            "cases": [asdict(c) for c in sorted(self.cases, key=lambda c: c.id)],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    def summary_lines(self) -> list[str]:
        return [
            f"{'PASS' if c.passed else 'FAIL'} {c.id}: actual={c.actual} expected={c.expected} tol={c.tolerance}"
            for c in self.cases
        ]


def _num(v):
    if isinstance(v, (bool, str)) or v is None:
        return v
    v = float(v)
    return v if math.isfinite(v) else str(v)


def sharp_index(n: int, k: int, alpha: float) -> int | None:
    """``j`` when ``alpha = 2j + 1`` with ``j <= (2n - k) / (2k)``, else None."""
    j = (alpha - 1) / 2
    if abs(j - round(j)) > 1e-12 or j < 0:
        return None
    j = int(round(j))
    return j if j <= (2 * n - k) / (2 * k) + 1e-12 else None


def _solve_case(args) -> tuple[tuple[int, int, float], ApproxResult | str]:
    n, k, alpha, tol, grid = args
    try:
        return (n, k, alpha), best_approx(k, n, alpha, tol, grid=grid)
    except Exception as exc:  # recorded as a failing case
        return (n, k, alpha), f"{type(exc).__name__}: {exc}"


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list[tuple[tuple[int, int, float], ApproxResult | str]]:
    tasks = [(n, k, a, spec.tol, spec.grid) for n, k, a in spec.cases()]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            out = list(pool.map(_solve_case, tasks))
    else:
        out = [_solve_case(t) for t in tasks]
    return sorted(out, key=lambda item: item[0])


def verify_theorem(spec: SweepSpec, jobs: int = 1) -> tuple[VerificationReport, list[ApproxResult]]:
    """Check ``primal <= min(1, F_k alpha^-k)`` and, at sharp ``alpha``, the equality sandwich."""
    report = VerificationReport("theorem")
    start = time.perf_counter()
    results = []
    for (n, k, alpha), res in run_sweep(spec, jobs):
        key = f"theorem/n={n}/k={k}/alpha={alpha:g}"
        bound = theorem_bound(k, alpha)
        if isinstance(res, str):
            report.cases.append(Case(key + "/solve", None, res, None, False))
            continue
        results.append(res)
        slack = 10 * spec.tol + res.discretization_error
        report.add(key + "/bound", bound, res.primal_value, slack, res.primal_value <= bound + slack)
        j = sharp_index(n, k, alpha)
        if j is not None:
            exact = bound_constant(k).value / (2 * j + 1) ** k
            report.add(key + "/dual_exact", exact, res.dual_lower, 1e-10)
            report.add(key + "/primal_pinched", exact, res.primal_value, slack)
    report.elapsed = time.perf_counter() - start
    return report, results


def _random_trig(rng: np.random.Generator, grid: np.ndarray) -> TrigPoly:
    n = int(rng.integers(1, 10))
    t = TrigPoly(n, rng.normal(), rng.normal(size=n - 1), rng.normal(size=n - 1))
    scale = float(np.max(np.abs(t(grid))))
    return TrigPoly(n, t.a0 / scale, np.array(t.a) / scale, np.array(t.b) / scale)


def _constants_suite(report: VerificationReport) -> None:
    known = {0: 1.0, 1: math.pi / 2, 2: math.pi**2 / 8, 3: math.pi**3 / 24}
    for k, v in known.items():
        report.add(f"constants/K_{k}", v, favard_constant(k, 1e-12).value, 1e-12)
    for k, v in {1: 1.0, 2: 0.5, 3: 1 / 3}.items():
        report.add(f"constants/F_{k}", v, bound_constant(k).value, 1e-12)
    report.add("constants/F_4", 5 / 24, bound_constant(4).value, 1e-10)
    K = [favard_constant(k) for k in range(13)]
    limit = 4 / math.pi
    chain = True
    for k in range(13):
        margin = (K[k].value - limit) * (1 if k % 2 else -1)
        chain &= margin > K[k].abs_error_bound
        if k >= 2:
            step = (K[k - 2].value - K[k].value) * (1 if k % 2 else -1)
            chain &= step > K[k].abs_error_bound + K[k - 2].abs_error_bound
    report.add("constants/interleaving_k<=12", "chain", "chain" if chain else "broken", None, chain)


def _bspline_suite(report: VerificationReport, rng: np.random.Generator, samples: int) -> None:
    for k in range(1, 7):
        h = 1 / (k + 2)
        b = bspline(k, h)
        report.add(f"bsplines/support_k={k}", k * h, b.support[1] - b.support[0], 1e-14)
        report.add(f"bsplines/integral_k={k}", 1.0, b.integral(), 1e-14)
        if k >= 2:
            d = b
            for _ in range(k - 2):
                d = differentiate(d)
            inner = b.breakpoints[1:-1]
            left = np.array([d.eval_piece(i, t) for i, t in enumerate(inner)])
            right = np.array([d.eval_piece(i + 1, t) for i, t in enumerate(inner)])
            report.add(f"bsplines/smoothness_k={k}", 0.0, float(np.max(np.abs(left - right))), 1e-10)

    grid = np.linspace(-0.5, 0.5, 10_000, endpoint=False)
    worst_identity, worst_bound = 0.0, -math.inf
    for _ in range(samples):
        tau = _random_trig(rng, grid)
        k = int(rng.integers(1, 5))
        h = float(rng.uniform(0.05, 1.0))
        x = float(rng.uniform(-0.5, 0.5))
        deriv = differentiate_trig(convolve_trig(tau, k, h), k)
        rhs = central_difference(tau, h, k, x) / h**k
        worst_identity = max(worst_identity, abs(deriv(x) - rhs))
        worst_bound = max(worst_bound, float(np.max(np.abs(deriv(grid)))) - (h / 2) ** -k)
    report.add("bsplines/difference_identity", 0.0, worst_identity, 1e-9)
    report.add("bsplines/smoothing_bound_excess", 0.0, worst_bound, 1e-6, worst_bound <= 1e-6)

    f, g, p = chi(0.3), bspline(2, 0.2), bspline(3, 0.1)
    xs = np.linspace(-0.6, 0.6, 241)
    comm = np.max(np.abs(evaluate(convolve(f, g), xs) - evaluate(convolve(g, f), xs)))
    assoc = np.max(
        np.abs(evaluate(convolve(convolve(f, g), p), xs) - evaluate(convolve(f, convolve(g, p)), xs))
    )
    report.add("bsplines/convolve_commutative", 0.0, float(comm), 1e-10)
    report.add("bsplines/convolve_associative", 0.0, float(assoc), 1e-10)


def _euler_suite(report: VerificationReport, rng: np.random.Generator) -> None:
    for k in range(0, 7):
        e = euler_spline(k, 1e-6)
        nu = np.arange(-4, 5)
        err = float(np.max(np.abs(evaluate_euler(e, nu) - (-1.0) ** np.abs(nu))))
        report.add(f"euler/integers_k={k}", 0.0, err, 1e-12)
        grid = np.linspace(-1, 1, 10_001)
        report.add(f"euler/sup_norm_k={k}", 1.0, float(np.max(np.abs(evaluate_euler(e, grid)))), 1e-6)
        x = float(rng.uniform(-1, 1))
        report.add(f"euler/double_period_mean_k={k}", 0.0, integrate_euler(e, x - 1, x + 1), 1e-10)
        xs = rng.uniform(-1, 1, 16)
        sym = np.max(np.abs(evaluate_euler(e, -xs) - evaluate_euler(e, xs)))
        sym2 = np.max(np.abs(evaluate_euler(e, -xs - 0.5) - evaluate_euler(e, xs + 0.5)))
        report.add(f"euler/even_k={k}", 0.0, float(sym), 1e-12 + 2 * e.tail_bound)
        report.add(f"euler/half_shift_symmetry_k={k}", 0.0, float(sym2), 1e-12 + 2 * e.tail_bound)
    for j in range(1, 5):
        report.add(f"euler/derivative_relation_j={j}", 0.0, derivative_relation_residual(j), 1e-5)
    for k in (2, 4, 6):
        for j in (0, 1, 2):
            expected = 2.0**k * (-1) ** (k // 2)
            report.add(f"euler/central_difference_k={k}_j={j}", expected, euler_central_difference(k, j, 0.0), 1e-8)
    for k in (2, 3, 4, 5, 6):
        e = euler_spline(k, 1e-13)
        report.add(f"euler/favard_link_k={k}", math.pi / 4 * favard_constant(k).value, e.normalization, 1e-12)
    for k in (2, 4, 6):
        e = euler_spline(k, 1e-13)
        dk = derivative_coefficients(e, k)
        m = np.arange(e.harmonics)
        square = 4 / math.pi * (-1.0) ** m / (2 * m + 1)
        target = math.pi**k / favard_constant(k).value * (-1) ** (k // 2) * square
        rel = float(np.max(np.abs(dk - target)) / np.max(np.abs(target)))
        report.add(f"euler/even_derivative_relation_k={k}", 0.0, rel, 1e-12)


def _orthogonality_suite(report: VerificationReport) -> None:
    for n in range(1, 9):
        worst = 0.0
        for theta in (0.0, 1 / (4 * n), 1 / (2 * n), 3 / (4 * n)):
            for sign in (1, -1):
                p = SignPattern(n, theta, sign)
                worst = max(worst, max(abs(p.fourier_coefficient(m)) for m in range(-n + 1, n)))
        report.add(f"orthogonality/n={n}", 0.0, worst, 1e-12)
    p = SignPattern(4)
    report.add("orthogonality/first_harmonic_n=4", 2 / math.pi, abs(p.fourier_coefficient(4)), 1e-12)
    report.add("orthogonality/leak_detected", "False", str(orthogonality_check(SignPattern(1), 2)), None,
               not orthogonality_check(SignPattern(1), 2))


def verify_identities(tol: float = 1e-9, seed: int = 0, samples: int = 100) -> VerificationReport:
    """Property suites for constants, B-splines, Euler splines and witnesses.

    ``tol`` is only validated here; each case carries its own fixed tolerance.
    """
    if not tol > 0:
        raise InvalidArgumentError(f"tol must be positive, got {tol!r}")
    rng = np.random.default_rng(seed)
    report = VerificationReport("identities")
    start = time.perf_counter()
    _constants_suite(report)
    _bspline_suite(report, rng, samples)
    _euler_suite(report, rng)
    _orthogonality_suite(report)
    for n in range(2, 9):
        for k in (1, 2, 3):
            for j in range(0, int((2 * n - k) // (2 * k)) + 1):
                value, _ = dual_lower_bound(bspline(k, (2 * j + 1) / (2 * n)), n)
                exact = bound_constant(k).value / (2 * j + 1) ** k
                report.add(f"dual/n={n}/k={k}/j={j}", exact, value, 1e-10)
    report.elapsed = time.perf_counter() - start
    return report


@dataclass
class CriticalAlpha:
    alpha: float
    lower: float
    upper: float
    found: bool
    probes: int


def find_critical_alpha(k: int, n: int, tol: float = 1e-3, lp_tol: float = 1e-7) -> CriticalAlpha:
    """Bisect for the smallest ``alpha`` where the computed ``E_n(chi^k)_1`` drops below 1.

    The drop is declared when the primal value is below ``1 - 10 lp_tol``; the
    primal value is an exact L1 norm of an explicit polynomial, so a drop is
    never a discretization artefact.  This is a measurement, not a bound.
    """
    if k < 1 or k > n:
        raise InvalidArgumentError(f"need 1 <= k <= n, got k={k}, n={n}")
    if not tol > 0:
        raise InvalidArgumentError(f"tol must be positive, got {tol!r}")
    top = 2 * n / k
    probes = 0

    def drops(alpha: float) -> bool:
        nonlocal probes
        probes += 1
        return best_approx(k, n, alpha, lp_tol).primal_value < 1 - 10 * lp_tol

    if not drops(top):
        return CriticalAlpha(top, top, top, False, probes)
    lo, hi = 0.0, top
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if drops(mid):
            hi = mid
        else:
            lo = mid
    return CriticalAlpha(0.5 * (lo + hi), lo, hi, True, probes)


def _rows(results: list[ApproxResult]) -> list[dict]:
    rows = []
    for r in sorted(results, key=lambda r: (r.n, r.k, r.alpha)):
        rows.append(
            {
                "n": r.n,
                "k": r.k,
                "alpha": r.alpha,
                "primal": r.primal_value,
                "dual": r.dual_lower,
                "bound": r.theorem_upper,
                "gap": r.gap,
                "certified": r.certified,
            }
        )
    return rows


def _svg(results: list[ApproxResult], width: int = 720, height: int = 480) -> str:
    """Primal value and bound versus alpha, log10 vertical axis."""
    rows = _rows(results)
    pad = 60
    alphas = [r["alpha"] for r in rows]
    values = [v for r in rows for v in (r["primal"], r["bound"]) if v > 0]
    x0, x1 = min(alphas), max(alphas)
    if x1 == x0:
        x1 = x0 + 1
    y0, y1 = math.log10(min(values)), math.log10(max(values))
    if y1 == y0:
        y1 = y0 + 1

    def px(a):
        return pad + (a - x0) / (x1 - x0) * (width - 2 * pad)

    def py(v):
        return height - pad - (math.log10(v) - y0) / (y1 - y0) * (height - 2 * pad)

    palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<text x="{width / 2}" y="{height - 20}" text-anchor="middle">alpha</text>',
        f'<text x="15" y="{height / 2}" transform="rotate(-90 15 {height / 2})" '
        f'text-anchor="middle">E_n (log10)</text>',
    ]
    for i in range(5):
        a = x0 + i * (x1 - x0) / 4
        parts.append(f'<text x="{px(a):.1f}" y="{height - pad + 16}" text-anchor="middle">{a:.3g}</text>')
        v = 10 ** (y0 + i * (y1 - y0) / 4)
        parts.append(f'<text x="{pad - 6}" y="{py(v):.1f}" text-anchor="end">{v:.2g}</text>')
    ks = sorted({r["k"] for r in rows})
    for ci, k in enumerate(ks):
        color = palette[ci % len(palette)]
        for n in sorted({r["n"] for r in rows if r["k"] == k}):
            series = [r for r in rows if r["k"] == k and r["n"] == n]
            pts = " ".join(f"{px(r['alpha']):.2f},{py(max(r['primal'], 1e-300)):.2f}" for r in series)
            parts.append(
                f'<polyline class="primal" data-k="{k}" data-n="{n}" fill="none" stroke="{color}" points="{pts}"/>'
            )
        grid = np.linspace(x0, x1, 200)
        pts = " ".join(f"{px(a):.2f},{py(theorem_bound(k, a)):.2f}" for a in grid)
        parts.append(
            f'<polyline class="bound" data-k="{k}" fill="none" stroke="{color}" '
            f'stroke-dasharray="6 4" points="{pts}"/>'
        )
        parts.append(
            f'<text x="{width - pad - 4}" y="{pad + 16 * ci}" fill="{color}" text-anchor="end">k={k}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_table(spec: SweepSpec, results: list[ApproxResult], path=None, fmt: str | None = None) -> str:
    """Render results as CSV, JSON (full ApproxResult objects) or SVG; write to ``path`` if given."""
    if not results:
        raise InvalidArgumentError("no results to emit")
    fmt = fmt or spec.fmt
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=TABLE_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in _rows(results):
            writer.writerow({k: (format(v, ".12g") if isinstance(v, float) else v) for k, v in row.items()})
        text = buf.getvalue()
    elif fmt == "json":
        ordered = sorted(results, key=lambda r: (r.n, r.k, r.alpha))
        text = json.dumps([r.to_dict() for r in ordered], indent=2) + "\n"
    elif fmt == "svg":
        text = _svg(results)
    else:
        raise InvalidArgumentError(f"unknown output format {fmt!r}")
    if path is not None:
        Path(path).write_text(text)
    return text
