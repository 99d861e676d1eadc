"""Cohomology of the truncated Čech complexes and the questions built on them:
non-membership of 1/(f1 f2 f3) over Q, its death level over F_p, colimit
ranks, universal coefficients, and the comparison with H^6 supported at the origin."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .cech import W_STAR, TruncatedComplex, build_truncated_complex, canonical_class_vector, composed_transition
from .linalg import (
    divisibility_index,
    exact_matmul,
    integer_cohomology,
    is_zero,
    nullspace_over_field,
    rank_over_field,
    reduce_mod,
    solve_over_field,
)
from .polyring import GF, QQ, ZZ, Domain, is_prime
from .weights import Weight, weight_dim

IntegerGroup = Tuple[int, Tuple[int, ...]]  # (free rank, torsion invariant factors)


@dataclass(frozen=True)
class CohomologyResult:
    weight: Weight
    level: int
    domain: Domain
    dims: Tuple[int, int, int, int]
    field_dims: Optional[Tuple[int, int, int, int]] = None
    integer_groups: Optional[Tuple[IntegerGroup, ...]] = None

    def euler_characteristic(self) -> int:
        return sum((-1) ** j * d for j, d in enumerate(self.dims))

    def as_dict(self) -> dict:
        out = {
            "weight": str(self.weight),
            "level": self.level,
            "domain": str(self.domain),
            "dims": list(self.dims),
        }
        if self.field_dims is not None:
            out["h"] = list(self.field_dims)
        if self.integer_groups is not None:
            out["h_integer"] = [{"free": f, "torsion": list(t)} for f, t in self.integer_groups]
        return out


def _field_cohomology(X: TruncatedComplex) -> Tuple[int, ...]:
    ranks = [rank_over_field(d, X.domain) for d in X.differentials]
    ranks = [0] + ranks + [0]
    return tuple(X.dims[j] - ranks[j + 1] - ranks[j] for j in range(4))


def _integer_groups(differentials: Sequence[np.ndarray], dims: Sequence[int]) -> Tuple[IntegerGroup, ...]:
    """Cohomology of a cochain complex of free Z-modules 0 -> Z^dims[0] -> ... -> 0."""
    L = len(dims)
    full = [np.zeros((dims[0], 0), dtype=object)] + list(differentials) + [np.zeros((0, dims[-1]), dtype=object)]
    return tuple(integer_cohomology(full[j], full[j + 1]) for j in range(L))


def cohomology(w: Weight, n: int, domain: Domain = QQ) -> CohomologyResult:
    X = build_truncated_complex(w, n, domain)
    if domain.is_field:
        return CohomologyResult(w, n, domain, X.dims, field_dims=_field_cohomology(X))
    return CohomologyResult(w, n, domain, X.dims, integer_groups=_integer_groups(X.differentials, X.dims))


# ------------------------------------------------------- the class 1/(f1 f2 f3)


def class_in_image(n: int, domain: Domain) -> bool:
    """Is 1/(f1 f2 f3) a Čech boundary at truncation level n over the field?

    Equivalently: (f1 f2 f3)^(n-1) lies in (f1^n, f2^n, f3^n).
    """
    if not domain.is_field:
        raise ValueError("class_in_image needs a field; use class_divisibility over Z")
    X = build_truncated_complex(W_STAR, n, domain)
    v = canonical_class_vector(n, domain)
    return solve_over_field(X.differentials[2], v, domain) is not None


@dataclass(frozen=True)
class DeathReport:
    p: int
    death_level: Optional[int]
    probed: Tuple[int, int]
    membership: Tuple[bool, ...]

    @property
    def monotone(self) -> bool:
        """Once the class is a boundary it stays one at every later probed level."""
        if self.death_level is None:
            return not any(self.membership)
        return all(self.membership[self.death_level - self.probed[0] :])

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "death_level": self.death_level,
            "probed": list(self.probed),
            "membership": list(self.membership),
            "monotone": self.monotone,
        }


def death_level(p: int, n_max: int = 10, *, scan_all: bool = True) -> DeathReport:
    """Smallest n <= n_max at which 1/(f1 f2 f3) becomes a boundary over F_p.

    With ``scan_all`` every level up to ``n_max`` is probed so that
    monotonicity can be checked; otherwise the scan stops at the first hit.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    dom = GF(p)
    found = None
    membership = []
    for n in range(1, n_max + 1):
        hit = class_in_image(n, dom)
        membership.append(hit)
        if hit and found is None:
            found = n
            if not scan_all:
                break
    return DeathReport(p, found, (1, len(membership)), tuple(membership))


# ---------------------------------------------------------------- colimits


def induced_rank(w: Weight, j: int, source: int, target: int, domain: Domain) -> int:
    """Rank of H^j(level source) -> H^j(level target) over a field."""
    if not 0 <= j <= 3:
        raise ValueError("degree must be in 0..3")
    X = build_truncated_complex(w, source, domain)
    Y, maps = composed_transition(X, target)
    K = nullspace_over_field(X.differential(j), domain)
    if K.shape[1] == 0:
        return 0
    image = exact_matmul(maps[j], K, domain)
    B = Y.differential(j - 1)
    both = np.concatenate([image.astype(B.dtype), B], axis=1)
    return rank_over_field(both, domain) - rank_over_field(B, domain)


@dataclass(frozen=True)
class ColimitTable:
    """Ranks of H^j(level a) -> H^j(level b) for n_lo <= a <= b <= n_hi.

    ``ranks`` is the row a = n_lo: the image of the level-n_lo classes at each
    level b. ``estimate`` is the largest stabilised row tail, a lower bound
    for dim H^j_I(R)_w that is exact once the truncations have settled.
    """

    weight: Weight
    degree: int
    levels: Tuple[int, int]
    domain: Domain
    ranks: Tuple[int, ...]
    table: Tuple[Tuple[int, ...], ...]
    window: int

    @property
    def stabilized(self) -> bool:
        tail = self.ranks[-self.window :]
        return len(tail) == self.window and len(set(tail)) == 1

    @property
    def stable_value(self) -> Optional[int]:
        return self.ranks[-1] if self.stabilized else None

    @property
    def estimate(self) -> Optional[int]:
        best = None
        for row in self.table:
            tail = row[-self.window :]
            if len(tail) == self.window and len(set(tail)) == 1:
                best = tail[0] if best is None else max(best, tail[0])
        return best

    def as_dict(self) -> dict:
        return {
            "weight": str(self.weight),
            "degree": self.degree,
            "levels": list(self.levels),
            "domain": str(self.domain),
            "ranks": list(self.ranks),
            "table": [list(r) for r in self.table],
            "window": self.window,
            "stabilized": self.stabilized,
            "stable_value": self.stable_value,
            "estimate": self.estimate,
        }


def colimit_rank(
    w: Weight, j: int, n_lo: int, n_hi: int, domain: Domain, window: int = 3, full_table: bool = True
) -> ColimitTable:
    """Track classes through the transition maps towards the Čech colimit."""
    if not domain.is_field:
        raise ValueError("colimit_rank needs a field")
    if not 1 <= n_lo < n_hi:
        raise ValueError("need 1 <= n_lo < n_hi")
    rows = []
    for a in range(n_lo, n_hi + 1 if full_table else n_lo + 1):
        rows.append(tuple(induced_rank(w, j, a, b, domain) for b in range(a, n_hi + 1)))
    return ColimitTable(w, j, (n_lo, n_hi), domain, rows[0], tuple(rows), window)


# ------------------------------------------------------- universal coefficients


@dataclass(frozen=True)
class UctReport:
    p: int
    mod_p_dims: Tuple[int, ...]
    predicted: Tuple[int, ...]
    integer_groups: Tuple[IntegerGroup, ...]

    @property
    def passed(self) -> bool:
        return self.mod_p_dims == self.predicted

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "mod_p_dims": list(self.mod_p_dims),
            "predicted": list(self.predicted),
            "integer": [{"free": f, "torsion": list(t)} for f, t in self.integer_groups],
            "passed": self.passed,
        }


def uct_for_complex(differentials: Sequence[np.ndarray], dims: Sequence[int], p: int) -> UctReport:
    """Compare dim H^j(C (x) F_p) with free(H^j) + #p-torsion(H^j) + #p-torsion(H^(j+1))."""
    groups = _integer_groups(differentials, dims)
    dom = GF(p)
    ranks = [0] + [rank_over_field(reduce_mod(d, p), dom) for d in differentials] + [0]
    mod_p = tuple(dims[j] - ranks[j + 1] - ranks[j] for j in range(len(dims)))

    def p_torsion(j):
        if j >= len(groups):
            return 0
        return sum(1 for d in groups[j][1] if d % p == 0)

    predicted = tuple(groups[j][0] + p_torsion(j) + p_torsion(j + 1) for j in range(len(dims)))
    return UctReport(p, mod_p, predicted, groups)


def universal_coefficients_check(w: Weight, n: int, p: int) -> UctReport:
    X = build_truncated_complex(w, n, ZZ)
    return uct_for_complex(X.differentials, X.dims, p)


# ------------------------------------------------------------ integral class


@dataclass(frozen=True)
class DivisibilityTrace:
    levels: Tuple[int, ...]
    indices: Tuple[Optional[int], ...]
    prime_factors: Tuple[Tuple[int, ...], ...]
    dies_mod: Tuple[Tuple[int, ...], ...]
    primes: Tuple[int, ...]

    def as_dict(self) -> dict:
        return {
            "levels": list(self.levels),
            "primes": list(self.primes),
            "rows": [
                {"level": n, "index": m, "prime_factors": list(f), "dies_mod": list(d)}
                for n, m, f, d in zip(self.levels, self.indices, self.prime_factors, self.dies_mod)
            ],
        }


def _prime_factors(m: int) -> Tuple[int, ...]:
    out, d = [], 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return tuple(out)


def class_divisibility(n: int) -> Optional[int]:
    """Least m with m/(f1 f2 f3) a Čech boundary over Z at level n (None: not even over Q)."""
    X = build_truncated_complex(W_STAR, n, ZZ)
    return divisibility_index(X.differentials[2], canonical_class_vector(n, ZZ))


def divisibility_trace(levels: Sequence[int] = range(2, 7), primes: Sequence[int] = (2, 3, 5, 7)) -> DivisibilityTrace:
    idx, facs, dies = [], [], []
    for n in levels:
        m = class_divisibility(n)
        idx.append(m)
        facs.append(_prime_factors(m) if m else ())
        dies.append(tuple(p for p in primes if class_in_image(n, GF(p))))
    return DivisibilityTrace(tuple(levels), tuple(idx), tuple(facs), tuple(dies), tuple(primes))


# ------------------------------------------------ comparison with H^6_J(R)

ALL_ONES = Weight(3, 3, 2, 2, 2)


def h6j_weight_dim(w: Weight) -> int:
    """dim of the w-weight space of H^6 supported at the origin.

    Its monomial basis is X^(-A-1) for exponent matrices A >= 0, so this counts
    exponent matrices with all entries >= 1 and weight -w.
    """
    return weight_dim(-w - ALL_ONES)


@dataclass(frozen=True)
class H6jRow:
    weight: Weight
    h6j: int
    colimit: Optional[int]
    ranks: Tuple[int, ...]

    def as_dict(self) -> dict:
        return {"weight": str(self.weight), "h6j": self.h6j, "colimit_estimate": self.colimit, "ranks": list(self.ranks)}


DEFAULT_H6J_WEIGHTS = (
    W_STAR,
    Weight(0, 0, 0, 0, 0),
    Weight(-4, -3, -3, -2, -2),
    Weight(-3, -4, -2, -3, -2),
    Weight(-4, -4, -3, -3, -2),
    Weight(-4, -4, -2, -3, -3),
    Weight(-5, -3, -3, -3, -2),
    Weight(-2, -4, -2, -2, -2),
    Weight(-3, -3, -1, -2, -3),
    Weight(-4, -2, -2, -2, -2),
)


def h6j_comparison(weights: Sequence[Weight] = DEFAULT_H6J_WEIGHTS, n_hi: int = 5, domain: Domain = QQ) -> List[H6jRow]:
    """Exploratory table: H^6_J weight dimensions next to colimit estimates of H^3_I."""
    rows = []
    for w in weights:
        t = colimit_rank(w, 3, 1, n_hi, domain)
        rows.append(H6jRow(w, h6j_weight_dim(w), t.estimate, t.ranks))
    return rows
