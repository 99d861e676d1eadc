"""Exact sparse polynomials in X11..X23, the three 2x2 minors, and
multiplication matrices between weight spaces."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Dict, Mapping, Tuple

import numpy as np

from .weights import Exponents, Weight, basis_index, enumerate_basis, monomial_str, weight_of_monomial


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Domain:
    """Exact coefficient domain: ``z`` (integers), ``q`` (rationals) or ``fp`` (prime field)."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("z", "q", "fp"):
            raise ValueError(f"unknown coefficient domain {self.kind!r}")
        if self.kind == "fp" and not is_prime(self.p):
            raise ValueError(f"prime field needs a prime, got {self.p}")
        if self.kind != "fp" and self.p:
            raise ValueError("only prime fields take a modulus")

    @property
    def is_field(self) -> bool:
        return self.kind != "z"

    @property
    def characteristic(self) -> int:
        return self.p

    def convert(self, c):
        if self.kind == "z":
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise ValueError(f"{c} is not an integer")
                c = c.numerator
            return int(c)
        if self.kind == "q":
            c = Fraction(c)
            return c.numerator if c.denominator == 1 else c
        if isinstance(c, Fraction):
            return c.numerator * pow(c.denominator, -1, self.p) % self.p
        return int(c) % self.p

    @property
    def dtype(self):
        # entries mod p fit machine integers; z and q need Python objects
        return np.int64 if self.kind == "fp" else object

    def __str__(self) -> str:
        return f"F{self.p}" if self.kind == "fp" else {"z": "Z", "q": "Q"}[self.kind]


ZZ = Domain("z")
QQ = Domain("q")


def GF(p: int) -> Domain:
    return Domain("fp", p)


def parse_domain(spec: str, p: int | None = None) -> Domain:
    """``"z"``, ``"q"``, ``"fp"`` (with ``p``), or ``"f3"``-style shorthand."""
    s = spec.strip().lower()
    if s in ("z", "zz", "int"):
        return ZZ
    if s in ("q", "qq", "rat"):
        return QQ
    if s == "fp":
        if p is None:
            raise ValueError("fp needs a prime p")
        return GF(p)
    if s.startswith("f") and s[1:].isdigit():
        return GF(int(s[1:]))
    raise ValueError(f"unknown coefficient domain {spec!r}")


class SparsePolynomial:
    """Immutable map exponent tuple -> nonzero coefficient over a :class:`Domain`."""

    __slots__ = ("_terms", "domain", "_hash")

    def __init__(self, terms: Mapping[Exponents, object], domain: Domain):
        clean: Dict[Exponents, object] = {}
        for a, c in terms.items():
            a = tuple(a)
            if len(a) != 6 or min(a) < 0:
                raise ValueError(f"bad exponent tuple {a}")
            c = domain.convert(c)
            if c:
                clean[a] = domain.convert(clean.get(a, 0) + c)
                if not clean[a]:
                    del clean[a]
        self._terms = clean
        self.domain = domain
        self._hash = None

    @classmethod
    def constant(cls, c, domain: Domain) -> "SparsePolynomial":
        return cls({(0,) * 6: c}, domain)

    @classmethod
    def variable(cls, i: int, j: int, domain: Domain) -> "SparsePolynomial":
        """The variable X_ij with 1-based indices."""
        a = [0] * 6
        a[3 * (i - 1) + (j - 1)] = 1
        return cls({tuple(a): 1}, domain)

    @property
    def terms(self) -> Mapping[Exponents, object]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def weights(self) -> set:
        return {weight_of_monomial(a) for a in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.weights()) <= 1

    @property
    def weight(self) -> Weight:
        ws = self.weights()
        if len(ws) != 1:
            raise ValueError("polynomial is not weight-homogeneous")
        return next(iter(ws))

    def _check(self, other: "SparsePolynomial"):
        if not isinstance(other, SparsePolynomial):
            return False
        if other.domain != self.domain:
            raise ValueError(f"domain mismatch: {self.domain} vs {other.domain}")
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        out = dict(self._terms)
        for a, c in other._terms.items():
            out[a] = out.get(a, 0) + c
        return SparsePolynomial(out, self.domain)

    def __neg__(self):
        return SparsePolynomial({a: -c for a, c in self._terms.items()}, self.domain)

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * SparsePolynomial.constant(other, self.domain)
        if not self._check(other):
            return NotImplemented
        out: Dict[Exponents, object] = {}
        for a, c in self._terms.items():
            for b, d in other._terms.items():
                key = (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3], a[4] + b[4], a[5] + b[5])
                out[key] = out.get(key, 0) + c * d
        return SparsePolynomial(out, self.domain)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = SparsePolynomial.constant(1, self.domain)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self.domain == other.domain and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.domain, frozenset(self._terms.items())))
        return self._hash

    def reduce(self, domain: Domain) -> "SparsePolynomial":
        """Map the coefficients into another domain (e.g. reduction mod p)."""
        return SparsePolynomial(self._terms, domain)

    def evaluate(self, X):
        """Evaluate at numeric 2x3 matrices; ``X`` has shape (..., 2, 3)."""
        X = np.asarray(X)
        entries = [X[..., i, j] for i in range(2) for j in range(3)]
        total = np.zeros(X.shape[:-2], dtype=complex)
        for a, c in self._terms.items():
            term = complex(c)
            for x, e in zip(entries, a):
                if e:
                    term = term * x**e
            total = total + term
        return total

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for a in sorted(self._terms):
            c = self._terms[a]
            sign = "-" if (self.domain.kind != "fp" and c < 0) else "+"
            parts.append(f"{sign}{abs(c)}·{monomial_str(a)}" if any(a) else f"{sign}{abs(c)}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"SparsePolynomial({self}, {self.domain})"


_MINOR_TERMS = (
    {(0, 1, 0, 0, 0, 1): 1, (0, 0, 1, 0, 1, 0): -1},  # f1 = X12 X23 - X13 X22
    {(0, 0, 1, 1, 0, 0): 1, (1, 0, 0, 0, 0, 1): -1},  # f2 = X13 X21 - X11 X23
    {(1, 0, 0, 0, 1, 0): 1, (0, 1, 0, 1, 0, 0): -1},  # f3 = X11 X22 - X12 X21
)


@lru_cache(maxsize=None)
def generators(domain: Domain = ZZ) -> Tuple[SparsePolynomial, SparsePolynomial, SparsePolynomial]:
    """The three 2x2 minors (f1, f2, f3)."""
    return tuple(SparsePolynomial(t, domain) for t in _MINOR_TERMS)


GENERATOR_WEIGHTS = (Weight(1, 1, 0, 1, 1), Weight(1, 1, 1, 0, 1), Weight(1, 1, 1, 1, 0))


def multiply(p: SparsePolynomial, q: SparsePolynomial) -> SparsePolynomial:
    return p * q


@lru_cache(maxsize=None)
def minor_product(exps: Tuple[int, int, int], domain: Domain) -> SparsePolynomial:
    """f1^e1 f2^e2 f3^e3."""
    out = SparsePolynomial.constant(1, domain)
    for f, e in zip(generators(domain), exps):
        if e:
            out = out * _minor_power(f, e)
    return out


@lru_cache(maxsize=None)
def _minor_power(f: SparsePolynomial, e: int) -> SparsePolynomial:
    return f**e


def multiplication_matrix(g: SparsePolynomial, w: Weight) -> np.ndarray:
    """Matrix of R_w -> R_{w+u}, m -> g*m, in the enumerate_basis orders (u = weight of g)."""
    if g.is_zero():
        raise ValueError("zero polynomial has no weight")
    u = g.weight
    return _multiplication_matrix(g, w, u)


@lru_cache(maxsize=8192)
def _multiplication_matrix(g: SparsePolynomial, w: Weight, u: Weight) -> np.ndarray:
    dom = g.domain
    src = enumerate_basis(w)
    target_index = basis_index(w + u)
    M = np.zeros((len(target_index), len(src)), dtype=dom.dtype)
    for j, m in enumerate(src):
        for a, c in g.terms.items():
            key = (m[0] + a[0], m[1] + a[1], m[2] + a[2], m[3] + a[3], m[4] + a[4], m[5] + a[5])
            M[target_index[key], j] += c
    if dom.kind == "fp":
        M %= dom.p
    M.setflags(write=False)
    return M


def coordinates(g: SparsePolynomial, w: Weight | None = None) -> np.ndarray:
    """Coordinate vector of a weight-homogeneous polynomial in the basis of its weight."""
    if w is None:
        w = g.weight
    index = basis_index(w)
    v = np.zeros(len(index), dtype=g.domain.dtype)
    for a, c in g.terms.items():
        if a not in index:
            raise ValueError(f"monomial {a} is not of weight {w}")
        v[index[a]] = c
    return v
