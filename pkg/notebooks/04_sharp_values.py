"""Best L1 approximation of chi_h^k at the sharp widths alpha = 2j + 1.

The primal value comes from the simplex solver on a fine grid, re-integrated
exactly; the dual value from a shifted square wave.  Where the two meet, the
value is certified.
"""

# %%
from trigl1 import best_approx, bound_constant

# %%
print(" n  k  j   primal        dual          F_k/(2j+1)^k  certified")
for n in (2, 4, 6):
    for k in (1, 2, 3):
        if k > n:
            continue
        for j in range((2 * n - k) // (2 * k) + 1):
            r = best_approx(k, n, 2 * j + 1)
            exact = bound_constant(k).value / (2 * j + 1) ** k
            print(f"{n:2d} {k:2d} {j:2d}   {r.primal_value:.10f}  {r.dual_lower:.10f}  {exact:.10f}  {r.certified}")

# %% [markdown]
# Between sharp widths only the upper bound min(1, F_k / alpha^k) is known.

# %%
for alpha in (1.5, 2.0, 2.5, 3.0, 3.5, 4.0):
    r = best_approx(2, 4, alpha)
    print(f"alpha={alpha}  primal={r.primal_value:.6f}  dual={r.dual_lower:.6f}  bound={r.theorem_upper:.6f}")
