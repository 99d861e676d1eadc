"""Numerical periods of phi * dX11 ^ ... ^ dX23 over the 6-cycles gamma_lambda.

gamma_lambda is the image of (torus T^3) x SU(2) under

    X = k @ [[-(1 - lam) t2, 1, -lam t1 t2 / t3],
             [-t3,           0,  t1           ]],

with t_j = exp(i theta_j) and k = [[u, -conj(v)], [v, conj(u)]],
u = cos(alpha) exp(i beta), v = sin(alpha) exp(i delta). lam = 0 is gamma.
The minors along gamma_lambda are (t1, t1 t2, t3) for every lam and k.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from numba import njit

from .polyring import QQ, SparsePolynomial

TWO_PI = 2.0 * math.pi
POLE_THRESHOLD = 1e-9


class PoleOnCycleError(ArithmeticError):
    """A denominator minor vanishes (numerically) at an evaluation node."""


@dataclass(frozen=True)
class CycleParams:
    theta1: float
    theta2: float
    theta3: float
    alpha: float
    beta: float
    delta: float
    lam: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.alpha <= math.pi / 2:
            raise ValueError("alpha must lie in [0, pi/2]")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError("lambda must lie in [0, 1]")

    def angles(self) -> np.ndarray:
        return np.array([self.theta1, self.theta2, self.theta3, self.alpha, self.beta, self.delta])


# ------------------------------------------------------------------ integrands


@dataclass(frozen=True)
class Integrand:
    """phi = numerator / (f1^e1 f2^e2 f3^e3)."""

    name: str
    numerator: SparsePolynomial
    denominator: Tuple[int, int, int]

    def __call__(self, X: np.ndarray) -> np.ndarray:
        f = minors(X)
        den = np.ones(X.shape[:-2], dtype=complex)
        for fi, e in zip(f, self.denominator):
            if e:
                if np.min(np.abs(fi)) < POLE_THRESHOLD:
                    raise PoleOnCycleError(f"{self.name}: denominator vanishes on the cycle")
                den = den * fi**e
        return self.numerator.evaluate(X) / den

    def __add__(self, other: "Integrand") -> "Integrand":
        # common denominator f^max(e, e')
        e = tuple(max(a, b) for a, b in zip(self.denominator, other.denominator))
        return Integrand(
            f"({self.name}+{other.name})",
            self._lift(e) + other._lift(e),
            e,
        )

    def arrays(self):
        """(exponents, coefficients) as numpy arrays for compiled evaluation."""
        items = sorted(self.numerator.terms.items())
        exps = np.array([a for a, _ in items], dtype=np.int64).reshape(-1, 6)
        coefs = np.array([complex(c) for _, c in items], dtype=np.complex128)
        return exps, coefs

    def scale(self, c) -> "Integrand":
        return Integrand(f"{c}*{self.name}", self.numerator * c, self.denominator)

    def _lift(self, e) -> SparsePolynomial:
        from .polyring import minor_product

        extra = tuple(a - b for a, b in zip(e, self.denominator))
        return self.numerator * minor_product(extra, self.numerator.domain)


def custom(numerator: SparsePolynomial, denominator: Sequence[int], name: str = "custom") -> Integrand:
    if len(denominator) != 3 or min(denominator) < 0:
        raise ValueError("denominator needs three nonnegative exponents")
    return Integrand(name, numerator.reduce(QQ), tuple(int(e) for e in denominator))


_ONE = SparsePolynomial.constant(1, QQ)
_X11_X23 = SparsePolynomial({(1, 0, 0, 0, 0, 1): 1}, QQ)

INTEGRANDS: Dict[str, Integrand] = {
    "inv_f123": Integrand("inv_f123", _ONE, (1, 1, 1)),
    "inv_f12": Integrand("inv_f12", _ONE, (1, 1, 0)),
    "inv_f13": Integrand("inv_f13", _ONE, (1, 0, 1)),
    "inv_f23": Integrand("inv_f23", _ONE, (0, 1, 1)),
    "poly_over_f23_sq": Integrand("poly_over_f23_sq", _X11_X23, (0, 2, 2)),
}


def integrand(selector) -> Integrand:
    if isinstance(selector, Integrand):
        return selector
    try:
        return INTEGRANDS[selector]
    except KeyError:
        raise ValueError(f"unknown integrand {selector!r}; choose from {sorted(INTEGRANDS)}") from None


# --------------------------------------------------------------------- geometry


def minors(X: np.ndarray):
    """(f1, f2, f3) evaluated on an array of 2x3 matrices."""
    x11, x12, x13 = X[..., 0, 0], X[..., 0, 1], X[..., 0, 2]
    x21, x22, x23 = X[..., 1, 0], X[..., 1, 1], X[..., 1, 2]
    return (x12 * x23 - x13 * x22, x13 * x21 - x11 * x23, x11 * x22 - x12 * x21)


def _torus_matrix(theta: np.ndarray, lam: float) -> np.ndarray:
    """M(t, lam), shape (..., 2, 3); theta has shape (..., 3)."""
    t = np.exp(1j * np.asarray(theta, dtype=float))
    t1, t2, t3 = t[..., 0], t[..., 1], t[..., 2]
    M = np.zeros(t.shape[:-1] + (2, 3), dtype=complex)
    M[..., 0, 0] = -(1.0 - lam) * t2
    M[..., 0, 1] = 1.0
    M[..., 0, 2] = -lam * t1 * t2 / t3
    M[..., 1, 0] = -t3
    M[..., 1, 2] = t1
    return M


def _torus_derivatives(theta: np.ndarray, lam: float) -> np.ndarray:
    """dM/dtheta_l stacked on a new axis: shape (..., 3, 2, 3)."""
    t = np.exp(1j * np.asarray(theta, dtype=float))
    t1, t2, t3 = t[..., 0], t[..., 1], t[..., 2]
    q = 1j * lam * t1 * t2 / t3
    D = np.zeros(t.shape[:-1] + (3, 2, 3), dtype=complex)
    D[..., 0, 0, 2] = -q
    D[..., 0, 1, 2] = 1j * t1
    D[..., 1, 0, 0] = -(1.0 - lam) * 1j * t2
    D[..., 1, 0, 2] = -q
    D[..., 2, 0, 2] = q
    D[..., 2, 1, 0] = -1j * t3
    return D


def su2_matrix(alpha, beta, delta) -> np.ndarray:
    alpha, beta, delta = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (alpha, beta, delta)))
    u = np.cos(alpha) * np.exp(1j * beta)
    v = np.sin(alpha) * np.exp(1j * delta)
    k = np.empty(alpha.shape + (2, 2), dtype=complex)
    k[..., 0, 0] = u
    k[..., 0, 1] = -np.conj(v)
    k[..., 1, 0] = v
    k[..., 1, 1] = np.conj(u)
    return k


def _su2_derivatives(alpha, beta, delta) -> np.ndarray:
    """dk/d(alpha, beta, delta): shape (..., 3, 2, 2)."""
    alpha, beta, delta = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (alpha, beta, delta)))
    eb, ed = np.exp(1j * beta), np.exp(1j * delta)
    u = np.cos(alpha) * eb
    v = np.sin(alpha) * ed
    du = (-np.sin(alpha) * eb, 1j * u, np.zeros_like(u))
    dv = (np.cos(alpha) * ed, np.zeros_like(v), 1j * v)
    D = np.empty(alpha.shape + (3, 2, 2), dtype=complex)
    for l in range(3):
        D[..., l, 0, 0] = du[l]
        D[..., l, 0, 1] = -np.conj(dv[l])
        D[..., l, 1, 0] = dv[l]
        D[..., l, 1, 1] = np.conj(du[l])
    return D


def cycle_point(p: CycleParams) -> np.ndarray:
    """The 2x3 complex matrix X(p) on gamma_lambda."""
    k = su2_matrix(p.alpha, p.beta, p.delta)
    return k @ _torus_matrix(np.array([p.theta1, p.theta2, p.theta3]), p.lam)


def _jacobian_matrix(theta, alpha, beta, delta, lam) -> np.ndarray:
    k = su2_matrix(alpha, beta, delta)
    M = _torus_matrix(theta, lam)
    dM = _torus_derivatives(theta, lam)
    dk = _su2_derivatives(alpha, beta, delta)
    cols_t = np.einsum("...ab,...lbc->...lac", k, dM)
    cols_k = np.einsum("...lab,...bc->...lac", dk, M)
    cols = np.concatenate([cols_t, cols_k], axis=-3)  # (..., 6, 2, 3)
    J = cols.reshape(cols.shape[:-2] + (6,))
    return np.swapaxes(J, -1, -2)  # rows: X11..X23, columns: theta1..delta


def pullback_jacobian(p: CycleParams) -> complex:
    """det of d(X11, ..., X23) / d(theta1, theta2, theta3, alpha, beta, delta)."""
    J = _jacobian_matrix(np.array([p.theta1, p.theta2, p.theta3]), p.alpha, p.beta, p.delta, p.lam)
    return complex(np.linalg.det(J))


def _torus_jacobian_factor(theta: np.ndarray, lam: float) -> np.ndarray:
    """G(theta) with jacobian = G(theta) * sin(2 alpha).

    X = k M, so dX = k (k^-1 dk M + dM); k^-1 dk is built from left-invariant
    forms on SU(2), whose wedge is the Haar density sin(alpha) cos(alpha) in
    these coordinates. Evaluating at alpha = pi/4, beta = delta = 0 fixes G.
    """
    shape = theta.shape[:-1]
    J = _jacobian_matrix(theta, np.full(shape, math.pi / 4), np.zeros(shape), np.zeros(shape), lam)
    return np.linalg.det(J)


# ------------------------------------------------------------------ quadrature


@dataclass(frozen=True)
class QuadratureSpec:
    nodes: int = 16
    method: str = "quad"
    samples: int = 1_000_000
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.method not in ("quad", "mc"):
            raise ValueError("method must be 'quad' or 'mc'")
        if self.nodes < 1 or self.samples < 2:
            raise ValueError("grid too small")


@dataclass(frozen=True)
class IntegralResult:
    value: complex
    error: float
    evaluations: int
    method: str
    lam: float
    integrand: str
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "integrand": self.integrand,
            "lambda": self.lam,
            "method": self.method,
            "value": {"re": self.value.real, "im": self.value.imag},
            "abs": abs(self.value),
            "error": self.error,
            "evaluations": self.evaluations,
            **self.extra,
        }


def _periodic_rule(n: int):
    return TWO_PI * np.arange(n) / n, np.full(n, TWO_PI / n)


def _alpha_rule(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    half = math.pi / 4
    return half * (x + 1.0), half * w


@njit(cache=True)
def _grid_kernel(M, G, K, wk, exps, coefs, den, threshold):
    """Per-torus-node sums of phi(k M) * weight over the SU(2) nodes.

    Returns the partial sums and the smallest |f_i| met for any i with a
    positive denominator exponent (poles are reported, not divided by).
    """
    nt = M.shape[0]
    nk = K.shape[0]
    nterms = exps.shape[0]
    out = np.zeros(nt, dtype=np.complex128)
    smallest = np.inf
    x = np.empty(6, dtype=np.complex128)
    for i in range(nt):
        acc = 0j
        for j in range(nk):
            for c in range(3):
                x[c] = K[j, 0, 0] * M[i, 0, c] + K[j, 0, 1] * M[i, 1, c]
                x[3 + c] = K[j, 1, 0] * M[i, 0, c] + K[j, 1, 1] * M[i, 1, c]
            f1 = x[1] * x[5] - x[2] * x[4]
            f2 = x[2] * x[3] - x[0] * x[5]
            f3 = x[0] * x[4] - x[1] * x[3]
            d = 1.0 + 0j
            for f, e in ((f1, den[0]), (f2, den[1]), (f3, den[2])):
                if e > 0:
                    a = abs(f)
                    if a < smallest:
                        smallest = a
                    for _ in range(e):
                        d *= f
            num = 0j
            for t in range(nterms):
                term = coefs[t]
                for v in range(6):
                    for _ in range(exps[t, v]):
                        term *= x[v]
                num += term
            if smallest < threshold:
                return out, smallest
            acc += wk[j] * num / d
        out[i] = acc * G[i]
    return out, smallest


def _product_sum(phi: Integrand, lam: float, n: int, workers: int = 1) -> complex:
    th, wt = _periodic_rule(n)
    al, wa = _alpha_rule(n)
    T1, T2, T3 = np.meshgrid(th, th, th, indexing="ij")
    theta = np.stack([T1.ravel(), T2.ravel(), T3.ravel()], axis=-1)
    w_torus = (wt[:, None, None] * wt[None, :, None] * wt[None, None, :]).ravel()
    A, B, D = np.meshgrid(al, th, th, indexing="ij")
    k = su2_matrix(A.ravel(), B.ravel(), D.ravel())
    w_su2 = (wa[:, None, None] * wt[None, :, None] * wt[None, None, :]).ravel() * np.sin(2 * A.ravel())

    M = _torus_matrix(theta, lam)
    G = _torus_jacobian_factor(theta, lam) * w_torus
    exps, coefs = phi.arrays()
    den = np.array(phi.denominator, dtype=np.int64)

    # fixed chunking over torus nodes: the reduction order does not depend on workers
    chunks = [slice(s, min(s + 64, len(G))) for s in range(0, len(G), 64)]

    def partial(sl):
        sums, smallest = _grid_kernel(M[sl], G[sl], k, w_su2, exps, coefs, den, POLE_THRESHOLD)
        if smallest < POLE_THRESHOLD:
            raise PoleOnCycleError(f"{phi.name}: denominator vanishes on the cycle")
        return sums

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(partial, chunks))
    else:
        parts = [partial(sl) for sl in chunks]
    sums = np.concatenate(parts)
    return complex(math.fsum(sums.real), math.fsum(sums.imag))


def _monte_carlo(phi: Integrand, lam: float, samples: int, seed: int, workers: int):
    volume = TWO_PI**5 * (math.pi / 2)
    chunk = 2**16
    sizes = [min(chunk, samples - s) for s in range(0, samples, chunk)]
    streams = np.random.SeedSequence(seed).spawn(len(sizes))

    def partial(args):
        size, ss = args
        rng = np.random.default_rng(ss)
        theta = rng.uniform(0.0, TWO_PI, size=(size, 3))
        alpha = rng.uniform(0.0, math.pi / 2, size=size)
        beta = rng.uniform(0.0, TWO_PI, size=size)
        delta = rng.uniform(0.0, TWO_PI, size=size)
        X = su2_matrix(alpha, beta, delta) @ _torus_matrix(theta, lam)
        F = phi(X) * _torus_jacobian_factor(theta, lam) * np.sin(2 * alpha)
        return complex(F.sum()), float(np.sum(np.abs(F) ** 2))

    jobs = list(zip(sizes, streams))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(partial, jobs))
    else:
        parts = [partial(j) for j in jobs]
    s = complex(math.fsum(p[0].real for p in parts), math.fsum(p[0].imag for p in parts))
    s2 = math.fsum(p[1] for p in parts)
    mean = s / samples
    var = max(s2 / samples - abs(mean) ** 2, 0.0)
    return volume * mean, volume * math.sqrt(var / samples)


def integrate(selector, lam: float = 0.0, grid: Optional[QuadratureSpec] = None) -> IntegralResult:
    """Integrate phi * omega over gamma_lambda.

    ``quad``: trapezoid in the five periodic angles, Gauss-Legendre in alpha,
    ``grid.nodes`` points each; the error estimate is the change against a
    grid with half as many nodes. ``mc``: uniform samples over the parameter
    box with a standard-error estimate.
    """
    grid = grid or QuadratureSpec()
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lambda must lie in [0, 1]")
    phi = integrand(selector)
    if grid.method == "mc":
        value, err = _monte_carlo(phi, lam, grid.samples, grid.seed, grid.workers)
        return IntegralResult(value, err, grid.samples, "mc", lam, phi.name, {"samples": grid.samples, "seed": grid.seed})
    value = _product_sum(phi, lam, grid.nodes, grid.workers)
    coarse_n = max(grid.nodes // 2, 1)
    coarse = _product_sum(phi, lam, coarse_n, grid.workers)
    evals = grid.nodes**6 + coarse_n**6
    return IntegralResult(value, abs(value - coarse), evals, "quad", lam, phi.name, {"nodes": grid.nodes})


@dataclass(frozen=True)
class HomotopyReport:
    integrand: str
    lambdas: Tuple[float, ...]
    values: Tuple[complex, ...]
    max_deviation: float
    relative_deviation: float
    tolerance: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "integrand": self.integrand,
            "lambdas": list(self.lambdas),
            "values": [{"re": z.real, "im": z.imag} for z in self.values],
            "max_deviation": self.max_deviation,
            "relative_deviation": self.relative_deviation,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def homotopy_invariance_check(
    selector,
    lambdas: Sequence[float] = (0.0, 0.25, 0.5, 0.75, 1.0),
    grid: Optional[QuadratureSpec] = None,
    rtol: float = 1e-4,
    scale: Optional[float] = None,
) -> HomotopyReport:
    """Integrals over gamma_lambda for each lambda agree within ``rtol``.

    Deviations are measured relative to ``scale`` (default: the largest |I|,
    or 1 when every integral vanishes to rounding).
    """
    phi = integrand(selector)
    values = tuple(integrate(phi, lam, grid).value for lam in lambdas)
    dev = max((abs(z - values[0]) for z in values), default=0.0)
    ref = scale if scale is not None else max((abs(z) for z in values), default=0.0)
    ref = ref if ref > 1e-8 else 1.0
    rel = dev / ref
    return HomotopyReport(phi.name, tuple(lambdas), values, dev, rel, rtol, rel <= rtol)


EXACT_INV_F123 = -1j * TWO_PI**5
"""Period of omega / (f1 f2 f3): the pulled-back form is -2i sin(alpha) cos(alpha) dtheta dalpha dbeta ddelta."""
