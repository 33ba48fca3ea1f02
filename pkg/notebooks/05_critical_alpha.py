"""Where does nontrivial approximation start?

For the step function (k = 1) the zero polynomial is optimal exactly when
alpha <= 1.  For larger k only an upper bound on the threshold is known;
here it is measured by bisection.
"""

# %%
from trigl1 import best_approx, find_critical_alpha

# %%
for alpha in (0.5, 0.9, 1.0, 1.05, 1.2):
    r = best_approx(1, 4, alpha)
    print(alpha, r.primal_value, max(abs(v) for v in r.approximant.vector()))

# %%
for k, n in ((1, 4), (2, 4), (3, 6)):
    c = find_critical_alpha(k, n)
    print(f"k={k} n={n}  alpha_0 ~ {c.alpha:.4f}  bracket [{c.lower:.4f}, {c.upper:.4f}]  upper bound {k ** (-1 / k):.4f}")
