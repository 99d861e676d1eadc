# %% [markdown]
# Integral cohomology of the truncations and universal coefficients
#
# Over Z the truncated complexes at w* pick up torsion exactly at the primes
# where the class dies; reducing mod p is controlled by universal coefficients.

# %%
from minorcoh import W_STAR, ZZ, cohomology, universal_coefficients_check
from minorcoh.cohomology import divisibility_trace

for n in range(1, 6):
    groups = cohomology(W_STAR, n, ZZ).integer_groups
    print(n, ["Z^%d%s" % (f, "".join(f" + Z/{d}" for d in t)) for f, t in groups])

# %%
for n in range(1, 5):
    for p in (2, 3):
        u = universal_coefficients_check(W_STAR, n, p)
        print(f"n={n} p={p}: mod p {u.mod_p_dims} predicted {u.predicted} -> {'ok' if u.passed else 'MISMATCH'}")

# %% No multiple of 1/(f1 f2 f3) is an integral boundary: it is not even a rational one.
for row in divisibility_trace().as_dict()["rows"]:
    print(row)
