"""Favard constants and the bound constants F_k.

K_k = (4/pi) * sum over all integers j of (4j+1)^-(k+1).  The even orders
increase and the odd orders decrease, both towards 4/pi.
"""

# %%
import math

import numpy as np

from trigl1 import bound_constant, favard_constant

# %% [markdown]
# Print the first few constants with their certified error bounds.

# %%
for k in range(8):
    K = favard_constant(k)
    F = bound_constant(k).value if k else float("nan")
    print(f"k={k}  K={K.value:.16f}  +-{K.abs_error_bound:.1e}  F={F:.12f}  terms={K.terms}")

# %%
# closed forms for small orders
print(favard_constant(2).value - math.pi**2 / 8, favard_constant(3).value - math.pi**3 / 24)
print("F_4 =", bound_constant(4).value, "vs 5/24 =", 5 / 24)

# %% [markdown]
# The interleaving chain, and how fast it approaches 4/pi.

# %%
K = np.array([favard_constant(k).value for k in range(13)])
print("even:", np.round(K[0::2], 6))
print("odd: ", np.round(K[1::2], 6))
print("distance to 4/pi:", np.abs(K - 4 / math.pi))

# %%
# past the summed range the limit is returned and flagged
print(favard_constant(40))
