"""Euler splines: the square wave averaged k times over unit windows."""

# %%
import math

import numpy as np

from trigl1 import euler_central_difference, euler_spline, favard_constant
from trigl1.eulersplines import derivative_relation_residual, integrate_euler

# %%
x = np.linspace(-1, 1, 9)
for k in range(5):
    e = euler_spline(k, 1e-8)
    print(k, e.harmonics, np.round(e(x), 6))

# %% [markdown]
# The normalization that makes E_k(0) = 1 is pi K_k / 4.

# %%
for k in range(2, 6):
    print(k, euler_spline(k, 1e-12).normalization, math.pi / 4 * favard_constant(k).value)

# %%
e = euler_spline(3, 1e-10)
print("mean over two periods:", integrate_euler(e, -0.3, 1.7))
print("derivative relation residuals:", [derivative_relation_residual(j) for j in (1, 2, 3)])

# %%
# central differences with odd steps at the origin, even k
for k in (2, 4, 6):
    print(k, [round(euler_central_difference(k, j, 0.0), 10) for j in range(3)])
