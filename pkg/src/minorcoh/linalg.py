"""Exact dense linear algebra over Z, Q and F_p.

Matrices are numpy arrays: ``dtype=object`` holding Python ints (or
Fractions) for Z and Q, ``int64`` reduced into [0, p) for F_p. Elimination
runs on plain Python lists (Z, Q) or vectorised int64 rows (F_p).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .polyring import Domain, QQ, ZZ


def as_matrix(rows: Sequence[Sequence], domain: Domain = ZZ, shape: Tuple[int, int] | None = None) -> np.ndarray:
    """Build an exact matrix; ``shape`` is needed for matrices with no rows."""
    if shape is not None and len(rows) == 0:
        return np.zeros(shape, dtype=domain.dtype)
    M = np.array([[domain.convert(x) for x in r] for r in rows], dtype=domain.dtype)
    if M.ndim != 2:
        M = M.reshape(len(rows), -1)
    return M


def reduce_mod(M: np.ndarray, p: int) -> np.ndarray:
    """Entrywise reduction of an integer matrix mod p (as int64)."""
    if M.size == 0:
        return np.zeros(M.shape, dtype=np.int64)
    return np.array([[int(x) % p for x in row] for row in M], dtype=np.int64).reshape(M.shape)


def exact_matmul(A: np.ndarray, B: np.ndarray, domain: Domain | None = None) -> np.ndarray:
    """Matrix product staying exact (object dtype) or reduced mod p."""
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} x {B.shape}")
    if domain is not None and domain.kind == "fp":
        p = domain.p
        # entries < p, so a row-times-column sum is < cols * p^2: safe for small p
        if A.shape[1] * (p - 1) ** 2 < 2**62:
            return (A.astype(np.int64) @ B.astype(np.int64)) % p
        return reduce_mod(exact_matmul(A.astype(object), B.astype(object)), p)
    if A.shape[0] == 0 or B.shape[1] == 0 or A.shape[1] == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=object)
    return A.astype(object) @ B.astype(object)


def is_zero(M: np.ndarray) -> bool:
    return M.size == 0 or not np.any(M != 0)


# ---------------------------------------------------------------- F_p kernels


def _echelon_mod_p(M: np.ndarray, p: int, ncols: int | None = None):
    """Reduced row echelon form mod p; pivots searched among the first ``ncols`` columns."""
    A = np.array(M, dtype=np.int64) % p
    rows, cols = A.shape
    ncols = cols if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        col = A[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            A[mask] = (A[mask] - np.outer(col[mask], A[r])) % p
        pivots.append(c)
        r += 1
    return A, pivots


# ------------------------------------------------------------------ Q kernels


def _integer_rows(M: np.ndarray) -> List[List[int]]:
    """Rows of a rational matrix scaled to integers (row scaling keeps rank and row space)."""
    out = []
    for row in M.tolist():
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = den * x.denominator // gcd(den, x.denominator)
        out.append([int(x * den) if den != 1 else int(x) for x in row])
    return out


def _bareiss(A: List[List[int]], ncols: int | None = None):
    """Fraction-free (Bareiss) row echelon form in place; returns pivot columns.

    All divisions are exact, so entries stay bounded by minors of the input.
    """
    rows = len(A)
    cols = len(A[0]) if rows else 0
    ncols = cols if ncols is None else ncols
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        k = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if k is None:
            continue
        if k != r:
            A[r], A[k] = A[k], A[r]
        piv = A[r][c]
        row_r = A[r]
        for i in range(r + 1, rows):
            row_i = A[i]
            a = row_i[c]
            if a == 0:
                if piv != prev:
                    for j in range(c + 1, cols):
                        if row_i[j]:
                            row_i[j] = row_i[j] * piv // prev
                continue
            for j in range(c + 1, cols):
                row_i[j] = (piv * row_i[j] - a * row_r[j]) // prev
            row_i[c] = 0
        # rows above the pivot row that were already zero in this column need no update
        prev = piv
        pivots.append(c)
        r += 1
    return pivots


def rank_over_field(M: np.ndarray, domain: Domain) -> int:
    """Exact rank over Q (fraction-free elimination) or F_p."""
    if not domain.is_field:
        raise ValueError("rank over Z is not a field rank; use smith_normal_form")
    if M.shape[0] == 0 or M.shape[1] == 0:
        return 0
    if domain.kind == "fp":
        return len(_echelon_mod_p(M, domain.p)[1])
    return len(_bareiss(_integer_rows(M)))


def solve_over_field(M: np.ndarray, v: Sequence, domain: Domain) -> Optional[np.ndarray]:
    """A solution x of M x = v over the field, or None when v is not in the column space."""
    if not domain.is_field:
        raise ValueError("solve_over_field needs Q or F_p")
    v = np.asarray(v, dtype=object).reshape(-1)
    rows, cols = M.shape
    if v.shape[0] != rows:
        raise ValueError(f"dimension mismatch: matrix has {rows} rows, vector has {v.shape[0]}")
    if domain.kind == "fp":
        p = domain.p
        aug = np.zeros((rows, cols + 1), dtype=np.int64)
        aug[:, :cols] = np.asarray(M, dtype=np.int64) % p
        aug[:, cols] = [domain.convert(x) for x in v]
        R, pivots = _echelon_mod_p(aug, p, ncols=cols)
        r = len(pivots)
        if np.any(R[r:, cols] != 0):
            return None
        x = np.zeros(cols, dtype=np.int64)
        for i, c in enumerate(pivots):
            x[c] = R[i, cols]
        return x
    aug = np.empty((rows, cols + 1), dtype=object)
    aug[:, :cols] = M
    aug[:, cols] = [QQ.convert(x) for x in v]
    A = _integer_rows(aug)
    pivots = _bareiss(A, ncols=cols)
    r = len(pivots)
    if any(A[i][cols] != 0 for i in range(r, rows)):
        return None
    x = [Fraction(0)] * cols
    for i in reversed(range(r)):
        c = pivots[i]
        s = Fraction(A[i][cols])
        for j in range(c + 1, cols):
            if A[i][j] and x[j]:
                s -= A[i][j] * x[j]
        x[c] = s / A[i][c]
    return np.array([QQ.convert(t) for t in x], dtype=object)


def nullspace_over_field(M: np.ndarray, domain: Domain) -> np.ndarray:
    """Columns spanning ker M over the field (shape cols x nullity)."""
    rows, cols = M.shape
    if domain.kind == "fp":
        p = domain.p
        if rows == 0:
            return np.eye(cols, dtype=np.int64)
        R, pivots = _echelon_mod_p(M, p)
        free = [c for c in range(cols) if c not in set(pivots)]
        K = np.zeros((cols, len(free)), dtype=np.int64)
        for k, f in enumerate(free):
            K[f, k] = 1
            for i, c in enumerate(pivots):
                K[c, k] = (-R[i, f]) % p
        return K
    if not domain.is_field:
        raise ValueError("nullspace_over_field needs Q or F_p")
    if rows == 0:
        return np.eye(cols, dtype=int).astype(object)
    A = _integer_rows(M)
    pivots = _bareiss(A)
    pivset = set(pivots)
    free = [c for c in range(cols) if c not in pivset]
    K = np.zeros((cols, len(free)), dtype=object)
    for k, f in enumerate(free):
        x = [Fraction(0)] * cols
        x[f] = Fraction(1)
        for i in reversed(range(len(pivots))):
            c = pivots[i]
            s = Fraction(0)
            row = A[i]
            for j in range(c + 1, cols):
                if row[j] and x[j]:
                    s -= row[j] * x[j]
            x[c] = s / row[c]
        den = 1
        for t in x:
            den = den * t.denominator // gcd(den, t.denominator)
        K[:, k] = [int(t * den) for t in x]
    return K


# ---------------------------------------------------------------- Smith form


@dataclass(frozen=True)
class SnfResult:
    """U M V = diag(invariant_factors) padded with zeros; U, V unimodular."""

    invariant_factors: Tuple[int, ...]
    U: np.ndarray
    V: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    def diagonal(self, shape: Tuple[int, int]) -> np.ndarray:
        D = np.zeros(shape, dtype=object)
        for i, d in enumerate(self.invariant_factors):
            D[i, i] = d
        return D


def _identity(n: int) -> List[List[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(M: np.ndarray) -> SnfResult:
    """Smith normal form of an integer matrix with transforms.

    Classical row/column reduction: the pivot is always a nonzero entry of
    smallest magnitude in the remaining block, which keeps entries small.
    """
    m, n = M.shape
    A = [[int(x) for x in row] for row in M.tolist()] if m and n else [[0] * n for _ in range(m)]
    U = _identity(m)  # accumulates row operations
    V = _identity(n)  # accumulates column operations

    def swap_rows(i, k):
        if i != k:
            A[i], A[k] = A[k], A[i]
            U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        if j != k:
            for row in A:
                row[j], row[k] = row[k], row[j]
            for row in V:
                row[j], row[k] = row[k], row[j]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        a_d, a_s = A[dst], A[src]
        for j in range(n):
            if a_s[j]:
                a_d[j] -= q * a_s[j]
        u_d, u_s = U[dst], U[src]
        for j in range(m):
            if u_s[j]:
                u_d[j] -= q * u_s[j]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in A:
            if row[src]:
                row[dst] -= q * row[src]
        for row in V:
            if row[src]:
                row[dst] -= q * row[src]

    def smallest(t):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        return best
        return best

    factors = []
    for t in range(min(m, n)):
        best = smallest(t)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            piv = A[t][t]
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = _round_div(A[i][t], piv)
                    add_row(i, t, q)
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = _round_div(A[t][j], piv)
                    add_col(j, t, q)
                    if A[t][j]:
                        done = False
            if not done:
                # a remainder is smaller than the pivot: move the smallest to (t, t)
                cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            # pivot row and column are clear; enforce divisibility on the rest
            bad = next(
                (i for i in range(t + 1, m) if any(A[i][j] % piv for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, -1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        factors.append(A[t][t])

    Uo = np.array(U, dtype=object).reshape(m, m)
    Vo = np.array(V, dtype=object).reshape(n, n)
    return SnfResult(tuple(factors), Uo, Vo)


def _round_div(a: int, b: int) -> int:
    """Nearest-integer quotient, so |a - q b| <= |b| / 2."""
    q, r = divmod(a, b)
    if 2 * abs(r) > abs(b):
        q += 1 if (r > 0) == (b > 0) else -1
    return q


def integer_rank(M: np.ndarray) -> int:
    return rank_over_field(M, QQ)


def divisibility_index(M: np.ndarray, v: Sequence[int]) -> Optional[int]:
    """Least m >= 1 with m v in the integer column span of M (None if v is not in the Q-span)."""
    v = [int(x) for x in np.asarray(v, dtype=object).reshape(-1)]
    rows, cols = M.shape
    if len(v) != rows:
        raise ValueError("dimension mismatch")
    snf = smith_normal_form(M)
    w = [sum(int(snf.U[i, k]) * v[k] for k in range(rows) if v[k]) for i in range(rows)]
    r = snf.rank
    if any(w[i] for i in range(r, rows)):
        return None
    m = 1
    for d, x in zip(snf.invariant_factors, w):
        need = d // gcd(d, x)
        m = m * need // gcd(m, need)
    return m


def integer_cohomology(d_in: np.ndarray, d_out: np.ndarray) -> Tuple[int, Tuple[int, ...]]:
    """(free rank, torsion invariant factors) of ker d_out / im d_in.

    ``d_in`` is b x a, ``d_out`` is c x b.
    """
    b = d_in.shape[0]
    if d_out.shape[1] != b:
        raise ValueError(f"incompatible differentials {d_in.shape} then {d_out.shape}")
    if not is_zero(exact_matmul(d_out, d_in)):
        raise ValueError("d_out . d_in != 0: not a complex")
    snf_in = smith_normal_form(d_in)
    rank_out = integer_rank(d_out)
    free = b - rank_out - snf_in.rank
    return free, tuple(d for d in snf_in.invariant_factors if d > 1)
