# %% [markdown]
# H^3_I(R) against H^6 supported at the origin, weight by weight
#
# H^6_J(R) has the monomial basis X^(-A-1), so its weight dimensions are
# counts of positive exponent matrices. The colimit estimate of H^3_I(R)
# agrees on these samples; this is an observation, not a theorem checked here.

# %%
from minorcoh.cohomology import h6j_comparison

for row in h6j_comparison():
    print(f"{str(row.weight):>20s}  H6_J: {row.h6j}  H3_I estimate: {row.colimit}")
