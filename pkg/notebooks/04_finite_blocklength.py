# %% [markdown]
# # Normal-approximation error probability versus rate
#
# eps = Q(sqrt(n) (I - R) / sqrt(V)) with (I, V) estimated once per
# constellation at 22 dB.  Sample sizes here are smaller than the defaults
# so the script runs in a few seconds; `eal figure1` uses the full ones.

# %%
import numpy as np

from eal.infotheory import MonteCarloConfig, epsilon_rate_curve, estimate_iv, fbl_epsilon
from eal.lattice import build_voronoi_constellation

mc = MonteCarloConfig(mi_samples=200_000, h_samples=4_000, per_h_samples=100)
est = {}
for ring in ("eisenstein", "gaussian"):
    est[ring] = estimate_iv(build_voronoi_constellation(ring, 13), 22.0, mc)
    mi, d = est[ring]
    print(f"{ring}: I = {mi.mean:.4f}, V = {d.v:.4f}")

# %%
for n in (128, 256, 512, 1024):
    row = [fbl_epsilon(est[r][0].mean, est[r][1].v, n, 6.758) for r in est]
    print(f"n = {n:4d}: eps_E = {row[0]:.3g}  eps_G = {row[1]:.3g}")

# %%
grid = np.round(np.arange(6.0, 7.4001, 0.1), 10)
pts = epsilon_rate_curve(None, 22.0, [256], grid, estimates=est["eisenstein"])
for p in pts:
    print(f"R = {p.rate:.1f}: eps = {p.epsilon:.3g}")
