"""Torus weights of the 2x3 generic matrix ring and monomial bases of weight spaces.

A monomial X11^a11 ... X23^a23 is stored as its flattened exponent tuple
``(a11, a12, a13, a21, a22, a23)``. Its weight is the pair (row sums; column
sums) of the exponent matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Tuple

Exponents = Tuple[int, int, int, int, int, int]

VARIABLES = ("X11", "X12", "X13", "X21", "X22", "X23")


@dataclass(frozen=True, slots=True)
class Weight:
    r1: int
    r2: int
    c1: int
    c2: int
    c3: int

    @classmethod
    def parse(cls, text: str) -> "Weight":
        """Read the comma-separated form ``"r1,r2,c1,c2,c3"``."""
        parts = [p.strip() for p in text.replace(";", ",").split(",")]
        if len(parts) != 5:
            raise ValueError(f"weight needs 5 comma-separated integers, got {text!r}")
        try:
            return cls(*(int(p) for p in parts))
        except ValueError:
            raise ValueError(f"malformed weight {text!r}") from None

    def as_tuple(self) -> Tuple[int, int, int, int, int]:
        return (self.r1, self.r2, self.c1, self.c2, self.c3)

    @property
    def is_consistent(self) -> bool:
        return self.r1 + self.r2 == self.c1 + self.c2 + self.c3

    def __add__(self, other: "Weight") -> "Weight":
        if not isinstance(other, Weight):
            return NotImplemented
        return Weight(*(a + b for a, b in zip(self.as_tuple(), other.as_tuple())))

    def __sub__(self, other: "Weight") -> "Weight":
        if not isinstance(other, Weight):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "Weight":
        return Weight(*(-a for a in self.as_tuple()))

    def __mul__(self, k: int) -> "Weight":
        if not isinstance(k, int):
            return NotImplemented
        return Weight(*(k * a for a in self.as_tuple()))

    __rmul__ = __mul__

    def __str__(self) -> str:
        return ",".join(str(a) for a in self.as_tuple())


ZERO = Weight(0, 0, 0, 0, 0)


def weight_of_monomial(a: Iterable[int]) -> Weight:
    """Row sums and column sums of a flattened 2x3 exponent matrix."""
    a11, a12, a13, a21, a22, a23 = a
    if min(a11, a12, a13, a21, a22, a23) < 0:
        raise ValueError("exponents must be nonnegative")
    return Weight(a11 + a12 + a13, a21 + a22 + a23, a11 + a21, a12 + a22, a13 + a23)


@lru_cache(maxsize=4096)
def _basis(w: Weight) -> Tuple[Exponents, ...]:
    r1, r2, c1, c2, c3 = w.as_tuple()
    if not w.is_consistent or min(w.as_tuple()) < 0:
        return ()
    out = []
    # the first row determines the second; lex order on the first row is lex
    # order on the whole flattened tuple
    for a11 in range(min(r1, c1) + 1):
        for a12 in range(min(r1 - a11, c2) + 1):
            a13 = r1 - a11 - a12
            if a13 > c3:
                continue
            out.append((a11, a12, a13, c1 - a11, c2 - a12, c3 - a13))
    return tuple(out)


def enumerate_basis(w: Weight) -> Tuple[Exponents, ...]:
    """Monomials of weight ``w`` in lexicographic order of the flattened exponents.

    Inconsistent or negative weights give an empty basis.
    """
    return _basis(w)


@lru_cache(maxsize=4096)
def basis_index(w: Weight) -> dict:
    return {m: i for i, m in enumerate(_basis(w))}


def weight_dim(w: Weight) -> int:
    return len(_basis(w))


def monomial_str(a: Exponents) -> str:
    parts = []
    for name, e in zip(VARIABLES, a):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "·".join(parts) if parts else "1"
