import math

import numpy as np
import pytest
from scipy import integrate

from trigl1 import (
    InvalidArgumentError,
    SignPattern,
    TrigPoly,
    UnsupportedInputError,
    best_approx,
    bound_constant,
    bspline,
    dual_lower_bound,
    lp_best_approx,
    orthogonality_check,
)
from trigl1.l1approx import convolve_trig, differentiate_trig, eval_trig, l1_norm_exact


def test_trig_poly_roundtrip_and_coefficients():
    t = TrigPoly(3, 0.5, (1.0, -2.0), (0.25, 4.0))
    assert np.array_equal(TrigPoly.from_vector(3, t.vector()).vector(), t.vector())
    assert t.complex_coefficient(1) == pytest.approx(complex(0.5, -0.125))
    assert t.complex_coefficient(-2) == pytest.approx(complex(-1.0, 2.0))
    assert t.complex_coefficient(3) == 0
    assert t(0.0) == pytest.approx(0.5 + 1.0 - 2.0)
    with pytest.raises(InvalidArgumentError):
        TrigPoly(2, 0.0, (1.0, 2.0), (0.0,))


def test_convolution_and_derivative_of_trig():
    t = TrigPoly(3, 0.2, (1.0, 0.5), (-0.3, 0.7))
    h, k = 0.13, 2
    f = bspline(k, h)
    for x in (0.0, 0.21, -0.4):
        ref, _ = integrate.quad(lambda u: t(x - u) * f(u), -h, h, points=[0.0])
        assert convolve_trig(t, k, h)(x) == pytest.approx(ref, abs=1e-12)
    eps = 1e-6
    d = differentiate_trig(t)
    assert d(0.1) == pytest.approx((t(0.1 + eps) - t(0.1 - eps)) / (2 * eps), abs=1e-6)


@pytest.mark.parametrize("n", range(1, 9))
def test_witnesses_are_orthogonal(n):
    for theta in (0.0, 1 / (4 * n), 1 / (2 * n), 3 / (4 * n)):
        for sign in (1, -1):
            assert orthogonality_check(SignPattern(n, theta, sign), n)


def test_orthogonality_check_detects_low_frequency():
    assert not orthogonality_check(SignPattern(1), 2)
    assert abs(SignPattern(4).fourier_coefficient(4)) == pytest.approx(2 / math.pi)


def test_witness_coefficients_against_quadrature():
    p = SignPattern(3, 0.07, -1)
    pts = list(p.sign_changes(-0.5, 0.5))
    for m in (0, 3, 5):
        re, _ = integrate.quad(lambda x: p(x) * math.cos(2 * math.pi * m * x), -0.5, 0.5, points=pts)
        assert p.fourier_coefficient(m).real == pytest.approx(re, abs=1e-12)


@pytest.mark.parametrize("n", range(2, 9))
@pytest.mark.parametrize("k", [1, 2, 3])
def test_dual_bound_sharp_values(n, k):
    for j in range(0, (2 * n - k) // (2 * k) + 1):
        value, witness = dual_lower_bound(bspline(k, (2 * j + 1) / (2 * n)), n)
        assert value == pytest.approx(bound_constant(k).value / (2 * j + 1) ** k, abs=1e-10)
        assert orthogonality_check(witness, n)


def test_dual_bound_is_below_primal_off_sharp():
    for k, n, alpha in [(1, 4, 2.0), (2, 4, 2.5), (3, 6, 1.7)]:
        res = best_approx(k, n, alpha)
        assert res.dual_lower <= res.primal_value + 1e-12


def test_dual_rejects_wide_support():
    with pytest.raises(UnsupportedInputError):
        dual_lower_bound(bspline(2, 0.6), 2)


@pytest.mark.parametrize(
    "k,n,alpha,expected",
    [(1, 4, 1, 1.0), (1, 4, 3, 1 / 3), (1, 4, 5, 1 / 5), (1, 4, 7, 1 / 7), (3, 6, 3, 1 / 81), (2, 4, 3, 1 / 18)],
)
def test_sharp_cases(k, n, alpha, expected):
    res = best_approx(k, n, alpha)
    assert res.certified
    assert res.primal_value == pytest.approx(expected, abs=1e-5)
    assert res.dual_lower == pytest.approx(expected, abs=1e-10)
    assert res.primal_value >= res.dual_lower - 1e-12
    assert res.theorem_upper == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("alpha", [0.2, 0.5, 0.9, 1.0])
def test_small_alpha_gives_zero_approximant(alpha):
    res = best_approx(1, 4, alpha)
    assert res.primal_value == pytest.approx(1.0, abs=1e-6)
    assert np.max(np.abs(res.approximant.vector())) < 1e-6


def test_bound_only_case():
    res = best_approx(2, 4, 2.5)
    assert res.primal_value <= 1 / (2 * 2.5**2) + 1e-5
    assert res.alpha == pytest.approx(2.5)


def test_primal_value_is_exact_norm():
    res = best_approx(2, 3, 2.0)
    f = bspline(2, 2.0 / 6)
    x = np.linspace(-0.5, 0.5, 2**21 + 1)
    ref = np.trapezoid(np.abs(f(x) - res.approximant(x)), x)
    assert res.primal_value == pytest.approx(ref, abs=1e-10)
    assert l1_norm_exact(f, TrigPoly.zero(3), np.array([-0.5, 0.5])) == pytest.approx(1.0, abs=1e-13)


def test_grid_refinement_schedule():
    res = best_approx(2, 4, 2.0, tol=1e-6)
    assert res.grid_schedule[0] == 4096
    assert all(b == 2 * a for a, b in zip(res.grid_schedule, res.grid_schedule[1:]))
    assert res.grid_schedule[-1] <= 1 << 14


def test_lp_outside_theorem_range():
    # k > n is outside best_approx's domain but the LP layer still solves it
    res = lp_best_approx(bspline(3, 0.25), 2, 4096)
    assert res.certified
    assert res.primal_value == pytest.approx(1 / 3, abs=1e-5)


@pytest.mark.parametrize(
    "args", [(0, 4, 1.0), (5, 4, 1.0), (1, 4, 0.0), (1, 4, 8.5), (2, 4, 4.01)]
)
def test_invalid_arguments(args):
    with pytest.raises(InvalidArgumentError):
        best_approx(*args)


def test_lp_grid_too_small():
    with pytest.raises(InvalidArgumentError):
        lp_best_approx(bspline(1, 0.1), 4, 16)


def test_result_serialization():
    res = best_approx(1, 2, 3.0)
    d = res.to_dict()
    assert d["alpha"] == pytest.approx(3.0)
    assert set(d["approximant"]) == {"n", "a0", "a", "b"}
    assert d["witness"]["frequency"] == 2
    assert '"certified": true' in res.to_json()


def test_eval_trig_shapes():
    t = TrigPoly.zero(1)
    assert eval_trig(t, 0.3) == 0.0
    assert eval_trig(TrigPoly(2, 1.0, (1.0,), (0.0,)), np.zeros((2, 2))).shape == (2, 2)


def test_constant_approximation():
    # n = 1: the best constant is a median level of f over the period
    assert best_approx(1, 1, 0.4).primal_value == pytest.approx(1.0, abs=1e-12)
    res = lp_best_approx(bspline(1, 0.75), 1, 4096)
    assert res.approximant.a0 == pytest.approx(4 / 3, abs=1e-9)
    assert res.primal_value == pytest.approx(0.25 * 4 / 3, abs=1e-9)
