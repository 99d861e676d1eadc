# %% [markdown]
# Weight spaces of R = k[X11..X23]
#
# The torus grading puts X_ij in row i and column j. A weight space is the span
# of monomials with prescribed row and column sums.

# %%
from minorcoh import Weight, enumerate_basis, generators, weight_dim, ZZ
from minorcoh.weights import monomial_str

w = Weight(3, 3, 2, 2, 2)
print(f"dim R_({w}) =", weight_dim(w))
for a in enumerate_basis(w):
    print("  ", monomial_str(a))

# %% The three minors are weight vectors.
for i, f in enumerate(generators(ZZ), 1):
    print(f"f{i} = {f}    weight {f.weight}")

# %% Dimensions along the ray n*(3,3;2,2,2) grow quadratically.
print([weight_dim(n * w) for n in range(8)])
