"""Best L1 trigonometric approximation of B-splines, with certified duality bounds."""

from .bsplines import (
    BSplineSpec,
    PiecewisePolynomial,
    bspline,
    central_difference,
    chi,
    convolve,
    differentiate,
    evaluate,
    fourier_coefficient,
    integrate_against_sign,
)
from .constants import BoundConstant, FavardConstant, bound_constant, favard_constant, theorem_bound
from .errors import InvalidArgumentError, SolverError, UnsupportedInputError
from .eulersplines import EulerSpline, euler_central_difference, euler_spline, evaluate_euler
from .harness import (
    SweepSpec,
    VerificationReport,
    emit_table,
    find_critical_alpha,
    verify_identities,
    verify_theorem,
)
from .l1approx import (
    ApproxResult,
    SignPattern,
    TrigPoly,
    best_approx,
    dual_lower_bound,
    lp_best_approx,
    orthogonality_check,
)

__version__ = "0.1.0"

__all__ = [
    "ApproxResult",
    "BSplineSpec",
    "BoundConstant",
    "EulerSpline",
    "FavardConstant",
    "InvalidArgumentError",
    "PiecewisePolynomial",
    "SignPattern",
    "SolverError",
    "SweepSpec",
    "TrigPoly",
    "UnsupportedInputError",
    "VerificationReport",
    "best_approx",
    "bound_constant",
    "bspline",
    "central_difference",
    "chi",
    "convolve",
    "differentiate",
    "dual_lower_bound",
    "emit_table",
    "euler_central_difference",
    "euler_spline",
    "evaluate",
    "evaluate_euler",
    "favard_constant",
    "find_critical_alpha",
    "fourier_coefficient",
    "integrate_against_sign",
    "lp_best_approx",
    "orthogonality_check",
    "theorem_bound",
    "verify_identities",
    "verify_theorem",
]
