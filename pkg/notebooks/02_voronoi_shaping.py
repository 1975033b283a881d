# %% [markdown]
# # Square versus hexagonal Voronoi constellations
#
# Both constellations have p^2 points and unit minimum distance before
# normalisation.  The hexagonal one needs less average energy; as p grows
# the ratio tends to the ratio of cell second moments, 6/5.

# %%
from eal.lattice import (
    build_voronoi_constellation,
    distance_spectrum,
    second_moment_continuous,
    second_moment_numeric,
    shaping_gain_db,
)

for cell in ("square", "hexagon"):
    print(cell, second_moment_continuous(cell, 1.0), second_moment_numeric(cell, 1.0, 512))
print("continuous gain: %.4f dB" % shaping_gain_db(2 / 3, 5 / 9))

# %%
for p in (7, 13, 31, 61):
    sq = build_voronoi_constellation("gaussian", p).raw_energy
    hx = build_voronoi_constellation("eisenstein", p).raw_energy
    print(f"p = {p:2d}: E_sq = {sq:9.3f}  E_hex = {hx:9.3f}  gain = {shaping_gain_db(sq, hx):.4f} dB")

# %% [markdown]
# Nearest-neighbour counts matter too: the hexagonal lattice has six
# neighbours at the minimum distance, the square one four.

# %%
for ring in ("gaussian", "eisenstein"):
    c = build_voronoi_constellation(ring, 13)
    s = distance_spectrum(c)
    shells = list(s)[:3]
    print(ring, [(round(d / c.scale, 4), round(n, 3)) for d, n in shells])
