# %% [markdown]
# 1/(f1 f2 f3) in characteristic zero and in characteristic p
#
# At truncation level n the class 1/(f1 f2 f3) is a Čech boundary iff
# (f1 f2 f3)^(n-1) lies in (f1^n, f2^n, f3^n). Over Q this never happens;
# over F_p it happens at a small level.

# %%
from minorcoh import GF, QQ, W_STAR, class_in_image, colimit_rank, death_level

print("over Q:", [class_in_image(n, QQ) for n in range(1, 7)])
for p in (2, 3, 5, 7):
    r = death_level(p, 10)
    print(f"over F{p}: dies at level {r.death_level}; membership {''.join('x' if m else '.' for m in r.membership)}")

# %% Image of the level-1 classes of H^3 at the next levels.
for dom in (QQ, GF(2), GF(3), GF(5)):
    t = colimit_rank(W_STAR, 3, 1, 6, dom, full_table=False)
    print(f"{dom}: {t.ranks}  stable value {t.stable_value}")

# %% The full table rank(H^3(a) -> H^3(b)) over Q; row tails settle at 1.
t = colimit_rank(W_STAR, 3, 1, 6, QQ)
for a, row in enumerate(t.table, 1):
    print(a, row)
print("estimate of dim H^3_I(R) at w*:", t.estimate)
