"""Convergence factor of a Chebyshev iteration on the complex plane.

Run with ``python3 demos/01_convergence_factor.py``.
"""
# %% [markdown]
# A Chebyshev iteration is described by a centre ``d`` and a squared focal
# distance ``c_sq``.  Its per-eigenvalue decay rate ``r(lam)`` is level on
# every ellipse with foci ``d +- c``, and equals 1 at the origin.

# %%
import numpy as np

from negmomentum import ChebParams, EllipseRegion, conv_factor, ellipse_rho, params_from_cheb
from negmomentum.dynamics import companion_spectral_radius

# %% [markdown]
# Real segment ``[1, 10]``: the classical heavy-ball setting.

# %%
seg = EllipseRegion(d=5.5, a=4.5, b=0.0)
p = ChebParams(seg.d, seg.c_sq)
print("rate on [1, 10]:", ellipse_rho(seg))
print("(sqrt(10) - 1) / (sqrt(10) + 1):", (np.sqrt(10) - 1) / (np.sqrt(10) + 1))
print("momentum parameters:", params_from_cheb(p))

# %% [markdown]
# A tall ellipse (``b > a``) has ``c_sq < 0`` and the matching momentum is negative.

# %%
tall = EllipseRegion(d=5.5, a=4.5, b=6.0)
q = ChebParams(tall.d, tall.c_sq)
m = params_from_cheb(q)
print("c_sq =", tall.c_sq, " eta =", m.eta, " beta =", m.beta)

# %% [markdown]
# The factor is flat along the boundary and matches the spectral radius of
# the momentum companion matrix pointwise.

# %%
pts = tall.boundary(12)
print("r on boundary:     ", np.round(conv_factor(pts, q), 12))
print("companion radius:  ", np.round(companion_spectral_radius(pts, m), 12))
print("ellipse rate:      ", ellipse_rho(tall))

# %% [markdown]
# A coarse map of ``r`` over a grid: values below the ellipse rate fall inside.

# %%
xs = np.linspace(0.5, 10.5, 11)
ys = np.linspace(-6, 6, 7)
grid = xs[None, :] + 1j * ys[:, None]
np.set_printoptions(linewidth=120, precision=3, suppress=True)
print(conv_factor(grid, q))
