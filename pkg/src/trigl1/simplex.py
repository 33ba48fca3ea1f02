"""Dense simplex solver for weighted L1 regression.

Solves ``min_c sum_i w_i |f_i - (A c)_i|`` as the linear program with slack
magnitudes ``u_i >= |f_i - (A c)_i|``.  The iteration is the dual simplex
method on that LP written in L1 terms: a basis is a set of ``p`` rows where the
residual vanishes, the nonbasic rows sit at the bound ``y_i = w_i sign(r_i)``
of the dual variable, and a basic row whose dual value leaves ``[-w_i, w_i]``
is pivoted out with a long-step ratio test (a weighted-median line search
along the edge).  At termination ``y`` is an explicit dual certificate:
``A^T y = 0``, ``|y| <= w (1 + tol)`` and ``f^T y`` equals the primal value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["L1Fit", "l1_fit", "initial_basis"]


@dataclass
class L1Fit:
    coef: np.ndarray
    objective: float
    dual: np.ndarray
    dual_objective: float
    iterations: int
    basis: np.ndarray
    optimal: bool
    max_dual_violation: float


def initial_basis(x: np.ndarray, p: int) -> np.ndarray:
    """Rows nearest to ``p`` equispaced abscissae (well conditioned for trig bases)."""
    span = x[-1] - x[0]
    targets = x[0] + (np.arange(p) + 0.5) * span / p
    idx = np.clip(np.searchsorted(x, targets), 0, x.size - 1)
    return np.unique(idx)


def l1_fit(
    A: np.ndarray,
    f: np.ndarray,
    w: np.ndarray,
    basis: np.ndarray,
    tol: float = 1e-9,
    max_iter: int = 20000,
    signs: np.ndarray | None = None,
) -> L1Fit:
    """Weighted L1 fit of ``f`` by the columns of ``A`` starting from ``basis``.

    ``tol`` is the relative dual-feasibility tolerance at which the current
    vertex is declared optimal.  ``signs`` seeds the dual bound (``+-1``) of
    rows whose residual is zero; a good guess, such as a known dual witness,
    shortens degenerate stretches.  When ``max_iter`` is hit the best vertex
    found so far is returned with ``optimal=False``.
    """
    M, p = A.shape
    B = np.array(basis, dtype=int)
    if B.size != p:
        raise ValueError(f"basis has {B.size} rows, need {p}")
    in_basis = np.zeros(M, dtype=bool)
    in_basis[B] = True
    side = np.ones(M) if signs is None else np.where(np.asarray(signs) < 0, -1.0, 1.0)
    ztol = 1e-13 * max(1.0, float(np.max(np.abs(f))))
    qtol = 1e-14
    best = None
    it = 0
    while True:
        AB = A[B]
        c = np.linalg.solve(AB, f[B])
        r = f - A @ c
        r[B] = 0.0
        nonzero = np.abs(r) > ztol
        side = np.where(nonzero, np.sign(r), side)
        y = np.where(in_basis, 0.0, w * side)
        yB = -np.linalg.solve(AB.T, A.T @ y)
        y[B] = yB
        viol = np.abs(yB) / w[B] - 1.0
        worst = int(np.argmax(viol))
        objective = float(np.sum(w * np.abs(r)))
        if best is None or objective < best.objective:
            best = L1Fit(c, objective, y, float(f @ y), it, B.copy(), False, float(viol[worst]))
        if viol[worst] <= tol:
            return L1Fit(c, objective, y, float(f @ y), it, B.copy(), True, float(viol[worst]))
        if it >= max_iter:
            return best

        leave = B[worst]
        sigma = np.sign(yB[worst])
        e = np.zeros(p)
        e[worst] = -sigma
        d = np.linalg.solve(AB, e)
        q = A @ d
        q[B] = 0.0
        slope = w[leave] - abs(yB[worst])

        cand = (~in_basis) & (np.abs(q) > qtol)
        t = np.full(M, np.inf)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = r / q
        crossing = cand & nonzero & (ratio > 0)
        t[crossing] = ratio[crossing]
        # zero residuals pushed to the side opposite their recorded bound flip at t = 0
        flips = cand & ~nonzero & (-np.sign(q) != side)
        t[flips] = 0.0
        idx = np.nonzero(np.isfinite(t))[0]
        if idx.size == 0:
            raise RuntimeError("unbounded L1 direction; columns are linearly dependent")
        order = idx[np.argsort(t[idx], kind="stable")]
        cum = slope + np.cumsum(2.0 * w[order] * np.abs(q[order]))
        reached = cum >= 0
        stop = int(np.argmax(reached)) if reached.any() else order.size - 1
        enter = int(order[stop])
        # bound flips for zero residuals passed by the line search
        passed = order[:stop]
        passed = passed[~nonzero[passed]]
        side[passed] = -np.sign(q[passed])

        B[worst] = enter
        in_basis[leave] = False
        in_basis[enter] = True
        side[leave] = sigma
        it += 1
