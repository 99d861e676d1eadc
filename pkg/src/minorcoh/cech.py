"""Level-n, weight-w truncations of the Čech complex on (f1, f2, f3).

The term for a subset S of {1, 2, 3} is f_S^{-n} R_{w + n wt(f_S)}, i.e. the
fractions g / f_S^n of weight w. The localisation map to S + {i} is
g / f_S^n -> sign * g f_i^n / f_{S+i}^n, so every differential block is a
multiplication matrix by f_i^n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from .linalg import exact_matmul, is_zero
from .polyring import GENERATOR_WEIGHTS, Domain, ZZ, coordinates, minor_product, multiplication_matrix
from .weights import ZERO, Exponents, Weight, enumerate_basis

Subset = Tuple[int, ...]

SUBSETS: Tuple[Tuple[Subset, ...], ...] = (
    ((),),
    ((1,), (2,), (3,)),
    ((1, 2), (1, 3), (2, 3)),
    ((1, 2, 3),),
)

# w* = -wt(f1 f2 f3), the weight of 1/(f1 f2 f3)
W_STAR = Weight(-3, -3, -2, -2, -2)


def subset_weight(S: Subset) -> Weight:
    w = ZERO
    for i in S:
        w = w + GENERATOR_WEIGHTS[i - 1]
    return w


def _exps(S: Subset, n: int) -> Tuple[int, int, int]:
    return tuple(n if i in S else 0 for i in (1, 2, 3))


def sign(S: Subset, i: int) -> int:
    return -1 if sum(1 for j in S if j < i) % 2 else 1


@dataclass(frozen=True)
class TruncatedComplex:
    weight: Weight
    level: int
    domain: Domain
    bases: Dict[Subset, Tuple[Exponents, ...]]
    differentials: Tuple[np.ndarray, np.ndarray, np.ndarray]
    offsets: Dict[Subset, int] = field(repr=False)

    def term_weight(self, S: Subset) -> Weight:
        return self.weight + self.level * subset_weight(S)

    @property
    def dims(self) -> Tuple[int, int, int, int]:
        return tuple(sum(len(self.bases[S]) for S in SUBSETS[j]) for j in range(4))

    def differential(self, j: int) -> np.ndarray:
        """d_j : C_j -> C_{j+1}; degrees outside 0..2 give the zero maps at the ends."""
        dims = self.dims
        if j < 0:
            return np.zeros((dims[0], 0), dtype=self.domain.dtype)
        if j > 2:
            return np.zeros((0, dims[3]), dtype=self.domain.dtype)
        return self.differentials[j]

    def block(self, j: int, S: Subset) -> slice:
        start = self.offsets[S]
        return slice(start, start + len(self.bases[S]))

    def dump(self) -> str:
        """Triple-list dump of the differentials, one section per degree."""
        lines = []
        for j, d in enumerate(self.differentials):
            lines.append(f"{d.shape[0]} {d.shape[1]} {self.weight} {self.level} {j}")
            rows, cols = np.nonzero(d != 0) if d.size else ((), ())
            for r, c in zip(rows, cols):
                lines.append(f"{r} {c} {d[r, c]}")
        return "\n".join(lines) + "\n"


def _layout(w: Weight, n: int):
    bases, offsets = {}, {}
    for terms in SUBSETS:
        pos = 0
        for S in terms:
            bases[S] = enumerate_basis(w + n * subset_weight(S))
            offsets[S] = pos
            pos += len(bases[S])
    return bases, offsets


def build_truncated_complex(w: Weight, n: int, domain: Domain = ZZ) -> TruncatedComplex:
    if n < 1:
        raise ValueError("truncation level must be >= 1")
    bases, offsets = _layout(w, n)
    dims = [sum(len(bases[S]) for S in terms) for terms in SUBSETS]
    ds = []
    for j in range(3):
        d = np.zeros((dims[j + 1], dims[j]), dtype=domain.dtype)
        for S in SUBSETS[j]:
            if not bases[S]:
                continue
            src = w + n * subset_weight(S)
            cs = slice(offsets[S], offsets[S] + len(bases[S]))
            for i in (1, 2, 3):
                if i in S:
                    continue
                T = tuple(sorted(S + (i,)))
                if not bases[T]:
                    continue
                block = multiplication_matrix(minor_product(_exps((i,), n), domain), src)
                rs = slice(offsets[T], offsets[T] + len(bases[T]))
                if sign(S, i) < 0:
                    block = -block % domain.p if domain.kind == "fp" else -block
                d[rs, cs] = block
        ds.append(d)
    return TruncatedComplex(w, n, domain, bases, tuple(ds), offsets)


def transition_map(X: TruncatedComplex) -> Tuple[TruncatedComplex, Tuple[np.ndarray, ...]]:
    """Chain map from level n to level n + 1 (term S multiplied by f_S).

    Returns the level n + 1 complex and the four block-diagonal matrices.
    """
    w, n, dom = X.weight, X.level, X.domain
    Y = build_truncated_complex(w, n + 1, dom)
    maps = []
    for j, terms in enumerate(SUBSETS):
        T = np.zeros((Y.dims[j], X.dims[j]), dtype=dom.dtype)
        for S in terms:
            if not X.bases[S] or not Y.bases[S]:
                continue
            g = minor_product(_exps(S, 1), dom)
            T[Y.block(j, S), X.block(j, S)] = multiplication_matrix(g, X.term_weight(S))
        maps.append(T)
    return Y, tuple(maps)


def composed_transition(X: TruncatedComplex, target_level: int) -> Tuple[TruncatedComplex, Tuple[np.ndarray, ...]]:
    """Chain map from level n to ``target_level`` >= n, built directly from f_S^(m - n)."""
    if target_level < X.level:
        raise ValueError("target level below source level")
    w, n, dom = X.weight, X.level, X.domain
    Y = build_truncated_complex(w, target_level, dom)
    k = target_level - n
    maps = []
    for j, terms in enumerate(SUBSETS):
        T = np.zeros((Y.dims[j], X.dims[j]), dtype=dom.dtype)
        for S in terms:
            if not X.bases[S] or not Y.bases[S]:
                continue
            g = minor_product(_exps(S, k), dom)
            T[Y.block(j, S), X.block(j, S)] = multiplication_matrix(g, X.term_weight(S))
        maps.append(T)
    return Y, tuple(maps)


def is_chain_map(X: TruncatedComplex, Y: TruncatedComplex, maps) -> bool:
    for j in range(3):
        left = exact_matmul(Y.differentials[j], maps[j], X.domain)
        right = exact_matmul(maps[j + 1], X.differentials[j], X.domain)
        if X.domain.kind == "fp":
            left, right = left % X.domain.p, right % X.domain.p
        if left.shape != right.shape or not is_zero(left - right):
            return False
    return True


def is_complex(X: TruncatedComplex) -> bool:
    dom = X.domain
    for j in range(2):
        prod = exact_matmul(X.differentials[j + 1], X.differentials[j], dom)
        if not is_zero(prod):
            return False
    return True


def canonical_class_vector(n: int, domain: Domain = ZZ) -> np.ndarray:
    """1/(f1 f2 f3) written over (f1 f2 f3)^n: coordinates of (f1 f2 f3)^(n-1) in C_3 at w*."""
    if n < 1:
        raise ValueError("truncation level must be >= 1")
    g = minor_product((n - 1,) * 3, domain)
    return coordinates(g, (n - 1) * Weight(3, 3, 2, 2, 2))
