"""Optimal momentum for strongly monotone games across condition numbers.

Run with ``python3 demos/02_negative_momentum_rates.py``.
"""
# %% [markdown]
# The Jacobian spectrum of a ``mu``-strongly monotone, ``L``-Lipschitz game
# lies in ``K_hat = {|lam| <= L, Re lam >= mu}``.  The optimal constant
# momentum on the inner triangle ``K1`` and on the outer box ``K2`` brackets
# the best rate on ``K_hat``.

# %%
import math

from negmomentum import SpectrumBound, lower_bound_rate, momentum_sign, solve_region_rate

# %%
s = SpectrumBound(mu=1.0, L=10.0)
for region in ("K1", "K2"):
    r = solve_region_rate(s, region)
    print(f"{region}: rho = {r.rho_hat:.6f}  eta = {r.params.eta:.5f}  beta = {r.params.beta:.5f}  "
          f"({momentum_sign(s, region).value})")
    print(f"    ellipse d = {r.d_star:.4f}, a = {r.a_star:.4f}, b = {r.b_star:.4f}; "
          f"vertex factors {[round(v, 12) for v in r.vertex_factors]}")
print("first-order lower bound:", lower_bound_rate(s))

# %% [markdown]
# Across condition numbers the gap ``1 - rho`` scales like ``kappa**-1.5``.

# %%
print(f"{'kappa':>8} {'1 - rho_K1':>12} {'1 - rho_K2':>12} {'kappa^-1.5':>12} {'beta_K1':>9}")
for kappa in (2, 5, 10, 50, 100, 1000, 10_000):
    s = SpectrumBound(1.0, kappa)
    r1, r2 = solve_region_rate(s, "K1"), solve_region_rate(s, "K2")
    print(f"{kappa:>8} {1 - r1.rho_hat:12.4e} {1 - r2.rho_hat:12.4e} {kappa**-1.5:12.4e} {r1.params.beta:9.4f}")

# %% [markdown]
# Near ``kappa = 1`` the box optimum need not carry negative momentum; the
# sign is certified only once ``L**2 > mu**2 + mu L``.

# %%
golden = (1 + math.sqrt(5)) / 2
for kappa in (1.2, 1.5, golden + 1e-3, 2.0):
    s = SpectrumBound(1.0, kappa)
    r2 = solve_region_rate(s, "K2")
    print(f"kappa = {kappa:.4f}: beta_K2 = {r2.params.beta:+.5f}, sign = {momentum_sign(s, 'K2').value}")
