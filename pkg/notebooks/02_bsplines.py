"""Normalized B-splines chi_h^k as exact piecewise polynomials."""

# %%
import numpy as np

from trigl1 import bspline, central_difference, convolve, chi, differentiate, fourier_coefficient

# %%
f = bspline(3, 0.2)
print(f)
print("breakpoints", f.breakpoints)
print("integral", f.integral(), "value at 0", f(0.0))

# %% [markdown]
# Fourier coefficients are powers of sinc, computed here in closed form.

# %%
for m in range(5):
    print(m, fourier_coefficient(f, m).real, np.sinc(m * 0.2) ** 3)

# %% [markdown]
# Smoothing and differencing commute with the scale factor h^-k:
# D^k (tau * chi_h^k) = h^-k Delta_h^k tau.  Check with tau = cos(2 pi x),
# whose convolution with chi_h^k is sinc(h)^k cos(2 pi x).

# %%
h, k, x = 0.17, 3, 0.31
lhs = np.sinc(h) ** k * (2 * np.pi) ** 3 * np.sin(2 * np.pi * x)
rhs = central_difference(lambda t: np.cos(2 * np.pi * t), h, k, x) / h**k
print(lhs, rhs, lhs - rhs)

# %%
g = convolve(bspline(2, 0.1), chi(0.3))
print("support", g.support, "integral", g.integral())
print("derivative pieces\n", differentiate(f).coeffs)
