import math

import numpy as np
import pytest
import sympy as sp

from minorcoh.polyring import QQ, SparsePolynomial
from minorcoh.residue import (
    EXACT_INV_F123,
    INTEGRANDS,
    CycleParams,
    Integrand,
    PoleOnCycleError,
    QuadratureSpec,
    _grid_kernel,
    _torus_jacobian_factor,
    custom,
    cycle_point,
    homotopy_invariance_check,
    integrate,
    minors,
    pullback_jacobian,
)

rng = np.random.default_rng(20240611)


def random_params(n, lam=None, alpha_margin=0.0):
    out = []
    for _ in range(n):
        th = rng.uniform(0, 2 * math.pi, 3)
        a = rng.uniform(alpha_margin, math.pi / 2 - alpha_margin)
        b, d = rng.uniform(0, 2 * math.pi, 2)
        out.append(CycleParams(*th, a, b, d, rng.uniform() if lam is None else lam))
    return out


def test_cycle_point_at_identity():
    X = cycle_point(CycleParams(0.0, 0.0, 0.0, 0.0, 0.0, 1.3, 0.0))
    assert np.allclose(X, [[-1, 1, 0], [-1, 0, 1]], atol=1e-15)


def test_minors_on_gamma():
    for p in random_params(50, lam=0.0):
        t = np.exp(1j * np.array([p.theta1, p.theta2, p.theta3]))
        f = minors(cycle_point(p))
        assert np.allclose(f, [t[0], t[0] * t[1], t[2]], atol=1e-12)


def test_minors_independent_of_lambda_and_su2():
    for p in random_params(50):
        base = CycleParams(p.theta1, p.theta2, p.theta3, 0.0, 0.0, 0.0, 0.0)
        f0 = np.array(minors(cycle_point(base)))
        f = np.array(minors(cycle_point(p)))
        assert np.max(np.abs(f - f0)) < 1e-10


def test_params_validated():
    with pytest.raises(ValueError):
        CycleParams(0, 0, 0, 2.0, 0, 0)
    with pytest.raises(ValueError):
        CycleParams(0, 0, 0, 0.1, 0, 0, lam=1.5)


def finite_difference_jacobian(p, h=1e-5):
    x0 = p.angles()
    cols = []
    for l in range(6):
        e = np.zeros(6)
        e[l] = h
        plus = CycleParams(*(x0 + e), lam=p.lam) if l != 3 else _alpha_shift(p, h)
        minus = CycleParams(*(x0 - e), lam=p.lam) if l != 3 else _alpha_shift(p, -h)
        cols.append((cycle_point(plus) - cycle_point(minus)).ravel() / (2 * h))
    return np.linalg.det(np.array(cols).T)


def _alpha_shift(p, h):
    return CycleParams(p.theta1, p.theta2, p.theta3, p.alpha + h, p.beta, p.delta, p.lam)


def test_jacobian_matches_finite_differences():
    for p in random_params(100, alpha_margin=1e-3):
        exact = pullback_jacobian(p)
        fd = finite_difference_jacobian(p)
        assert abs(exact - fd) <= 1e-6 * max(abs(exact), 1e-12)


def test_jacobian_finite_at_alpha_zero():
    p = CycleParams(0.3, 1.1, 2.0, 0.0, 0.7, 0.2, 0.4)
    value = pullback_jacobian(p)
    assert np.isfinite(value)
    # one-sided limit from inside the chart
    h = 1e-6
    inside = pullback_jacobian(CycleParams(0.3, 1.1, 2.0, h, 0.7, 0.2, 0.4))
    assert abs(value - inside) < 1e-4


def test_jacobian_continuous_in_lambda():
    p = random_params(1)[0]
    vals = [pullback_jacobian(CycleParams(*p.angles(), lam=l)) for l in np.linspace(0, 1, 41)]
    steps = np.abs(np.diff(vals))
    assert steps.max() < 0.2 * max(abs(v) for v in vals)


def test_jacobian_closed_form_symbolic():
    """Symbolic oracle: det J = -i sin(2 alpha) t1^2 t2 t3 for every lambda."""
    th1, th2, th3, a, b, d, lam = sp.symbols("theta1 theta2 theta3 alpha beta delta lambda", real=True)
    t1, t2, t3 = (sp.exp(sp.I * x) for x in (th1, th2, th3))
    u, v = sp.cos(a) * sp.exp(sp.I * b), sp.sin(a) * sp.exp(sp.I * d)
    k = sp.Matrix([[u, -sp.conjugate(v)], [v, sp.conjugate(u)]])
    X = k * sp.Matrix([[-(1 - lam) * t2, 1, -lam * t1 * t2 / t3], [-t3, 0, t1]])
    J = sp.Matrix([[sp.diff(x, q) for q in (th1, th2, th3, a, b, d)] for x in X])
    ratio = sp.simplify(sp.expand(J.det(method="berkowitz") / (t1**2 * t2 * t3)))
    assert sp.simplify(ratio + sp.I * sp.sin(2 * a)) == 0
    # so the period of omega / (f1 f2 f3) is -i (2 pi)^5 * int_0^{pi/2} sin(2 alpha) = -i (2 pi)^5
    assert EXACT_INV_F123 == pytest.approx(-1j * (2 * math.pi) ** 5)
    for p in random_params(5):
        t = np.exp(1j * p.angles()[:3])
        expected = -1j * math.sin(2 * p.alpha) * t[0] ** 2 * t[1] * t[2]
        assert abs(pullback_jacobian(p) - expected) < 1e-12


def test_factorised_jacobian():
    for p in random_params(30):
        G = _torus_jacobian_factor(p.angles()[None, :3], p.lam)[0]
        assert abs(G * math.sin(2 * p.alpha) - pullback_jacobian(p)) < 1e-12


def test_inv_f123_exact_value():
    r = integrate("inv_f123", 0.0, QuadratureSpec(nodes=8))
    assert abs(r.value - EXACT_INV_F123) < 1e-9 * abs(EXACT_INV_F123)


@pytest.mark.parametrize("name", ["inv_f12", "inv_f13", "inv_f23", "poly_over_f23_sq"])
@pytest.mark.parametrize("lam", [0.0, 1.0])
def test_partial_localisations_vanish(name, lam):
    r = integrate(name, lam, QuadratureSpec(nodes=8))
    assert abs(r.value) <= 1e-3 * abs(EXACT_INV_F123)


def test_inv_f23_same_on_gamma_and_gamma_one():
    grid = QuadratureSpec(nodes=8)
    a = integrate("inv_f23", 0.0, grid).value
    b = integrate("inv_f23", 1.0, grid).value
    assert abs(a - b) < 1e-9 * abs(EXACT_INV_F123)


def test_linearity():
    grid = QuadratureSpec(nodes=6)
    f12, f123 = INTEGRANDS["inv_f12"], INTEGRANDS["inv_f123"]
    combo = f12.scale(2) + f123.scale(3)
    lhs = integrate(combo, 0.3, grid).value
    rhs = 2 * integrate(f12, 0.3, grid).value + 3 * integrate(f123, 0.3, grid).value
    assert abs(lhs - rhs) < 1e-9 * abs(rhs)


def test_custom_integrand_and_non_trivial_numerator():
    # X11 X22 - X12 X21 = f3, so f3 / (f1 f2 f3^2) = 1/(f1 f2 f3)
    num = SparsePolynomial({(1, 0, 0, 0, 1, 0): 1, (0, 1, 0, 1, 0, 0): -1}, QQ)
    phi = custom(num, (1, 1, 2), name="f3_over")
    r = integrate(phi, 0.5, QuadratureSpec(nodes=8))
    assert abs(r.value - EXACT_INV_F123) < 1e-9 * abs(EXACT_INV_F123)


def test_refinement_converges():
    diffs = []
    prev = None
    for n in (2, 4, 8, 16):
        v = integrate("inv_f123", 0.5, QuadratureSpec(nodes=n)).value
        if prev is not None:
            diffs.append(abs(v - prev))
        prev = v
    assert diffs[0] > diffs[1] > diffs[2]


def test_pole_detection():
    X = np.array([[[1, 1, 1], [0, 1, 1]]], dtype=complex)  # f1 = 0, f2 = -1, f3 = 1
    with pytest.raises(PoleOnCycleError):
        INTEGRANDS["inv_f12"](X)
    INTEGRANDS["inv_f23"](X)  # f1 is not a denominator here
    M = X.copy()
    K = np.eye(2, dtype=complex)[None]
    exps, coefs = INTEGRANDS["inv_f12"].arrays()
    _, smallest = _grid_kernel(M, np.ones(1, complex), K, np.ones(1), exps, coefs, np.array([1, 1, 0]), 1e-9)
    assert smallest < 1e-9


def test_deterministic_across_workers():
    a = integrate("poly_over_f23_sq", 0.25, QuadratureSpec(nodes=6, workers=1)).value
    b = integrate("poly_over_f23_sq", 0.25, QuadratureSpec(nodes=6, workers=3)).value
    assert a == b
    m1 = integrate("inv_f123", 0.0, QuadratureSpec(method="mc", samples=50_000, seed=3)).value
    m2 = integrate("inv_f123", 0.0, QuadratureSpec(method="mc", samples=50_000, seed=3, workers=2)).value
    assert m1 == m2


def test_monte_carlo_error_estimate():
    r = integrate("inv_f123", 0.0, QuadratureSpec(method="mc", samples=200_000, seed=1))
    assert abs(r.value - EXACT_INV_F123) < 5 * r.error


def test_homotopy_single_lambda_trivial():
    rep = homotopy_invariance_check("inv_f123", [0.5], QuadratureSpec(nodes=4))
    assert rep.passed and rep.max_deviation == 0


def test_homotopy_small_grid():
    rep = homotopy_invariance_check("inv_f23", (0.0, 0.5, 1.0), QuadratureSpec(nodes=6), scale=abs(EXACT_INV_F123))
    assert rep.passed


def test_unknown_selector():
    with pytest.raises(ValueError):
        integrate("nope")
