import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st
from scipy.integrate import solve_bvp, solve_ivp

from nonlocal_waves import certify_inequality, kappa_of, make_bump, make_chi
from nonlocal_waves.auxiliaries import scan_x_tilde, x_tilde_oscillatory

KAPPA = kappa_of(0.3)
ROOT = math.sqrt(KAPPA)
SPEEDS = [-ROOT, 0.0, ROOT, 2 * ROOT, 3 * ROOT]


def test_kappa_values():
    assert kappa_of(0.5) == pytest.approx(0.03125, abs=1e-15)
    assert kappa_of(0.3) == pytest.approx(0.02625, abs=1e-15)
    assert 0 < kappa_of(1e-9) < 1e-9


@pytest.mark.parametrize("theta", [0.0, 1.0, 2.0])
def test_kappa_rejects(theta):
    with pytest.raises(ValueError):
        kappa_of(theta)


def test_bump_zero_speed_x_tilde():
    assert make_bump(KAPPA, 0.0).x_tilde == pytest.approx(math.pi / math.sqrt(4 * KAPPA), rel=1e-15)


@pytest.mark.parametrize("c", SPEEDS)
def test_bump_normalization(c):
    b = make_bump(KAPPA, c)
    assert b(0.0) == 0.0
    assert b(b.x_tilde) == pytest.approx(1.0, abs=1e-14)
    assert b.X > b.x_tilde
    x = np.linspace(0, b.X, 2001)
    v = b(x)
    assert v.min() >= -1e-12 and v.max() <= 1 + 1e-12
    # x_tilde is the maximum of the bump
    assert b.d1(b.x_tilde) == pytest.approx(0.0, abs=1e-10)


@pytest.mark.parametrize("c", SPEEDS)
def test_bump_certified(c):
    b = make_bump(KAPPA, c)
    cert = certify_inequality(b, c, KAPPA, (0.0, b.X), "<=")
    assert cert.passed and cert.worst_margin >= -1e-8


@pytest.mark.parametrize("c", [-ROOT, 0.0, ROOT])
def test_oscillatory_branch_is_equality(c):
    b = make_bump(KAPPA, c)
    assert b.branch == "oscillatory"
    assert b.X == pytest.approx(2 * math.pi / math.sqrt(4 * KAPPA - c * c), rel=1e-14)
    cert = certify_inequality(b, c, KAPPA, (0.0, b.X), "=")
    assert cert.passed and abs(cert.worst_margin) < 1e-10


def test_large_speed_branch_symbolic():
    # derivatives from sympy, evaluated numerically on [0, x_tilde]
    c = 3 * ROOT
    b = make_bump(KAPPA, c)
    assert b.branch == "large_c"
    x = sp.symbols("x", real=True)
    r = sp.sqrt(sp.Rational(KAPPA).limit_denominator(10**12))
    psi = sp.exp(-r / 2 * x) * sp.sin(r / 2 * x)
    expr = sp.lambdify(x, -sp.diff(psi, x, 2) - c * sp.diff(psi, x) - KAPPA * psi)
    xs = np.linspace(0, b.x_tilde, 1000)
    assert np.max(expr(xs) * b.scale) <= 1e-8
    assert b.x_tilde == pytest.approx(math.pi / math.sqrt(4 * KAPPA))
    # the analytic derivatives agree with sympy
    d2 = sp.lambdify(x, sp.diff(psi, x, 2))
    assert np.max(np.abs(b.d2(xs) - b.scale * d2(xs))) < 1e-10


def test_large_speed_X_is_where_inequality_stops():
    for c in (2 * ROOT, 3 * ROOT):
        b = make_bump(KAPPA, c)
        end = math.pi / b.freq
        m = -b.d2(b.X) - c * b.d1(b.X) - KAPPA * b(b.X)
        assert b.X == pytest.approx(end) or abs(m) < 1e-10


class Negated:
    def __init__(self, f):
        self.f = f

    def __call__(self, x):
        return -self.f(x)

    def d1(self, x):
        return -self.f.d1(x)

    def d2(self, x):
        return -self.f.d2(x)


def test_negated_bump_fails():
    # on the large-speed branch the inequality is strict, so -psi violates it
    c = 3 * ROOT
    b = make_bump(KAPPA, c)
    assert certify_inequality(b, c, KAPPA, (0.0, b.x_tilde), "<=").passed
    assert not certify_inequality(Negated(b), c, KAPPA, (0.0, b.x_tilde), "<=").passed


def test_bump_rejects_slow_speed():
    with pytest.raises(ValueError):
        make_bump(KAPPA, -2 * ROOT)
    with pytest.raises(ValueError):
        make_bump(-1.0, 0.0)


def test_x_tilde_continuous_at_zero():
    left = x_tilde_oscillatory(KAPPA, -1e-9)
    right = x_tilde_oscillatory(KAPPA, 1e-9)
    mid = x_tilde_oscillatory(KAPPA, 0.0)
    assert abs(left - mid) < 1e-6 and abs(right - mid) < 1e-6


def test_x_tilde_scan_finite_and_attained_near_left_end():
    A = scan_x_tilde(KAPPA, delta=1e-3)
    assert math.isfinite(A)
    assert A >= x_tilde_oscillatory(KAPPA, 0.0)
    assert A == pytest.approx(x_tilde_oscillatory(KAPPA, -2 * ROOT + 1e-3), rel=1e-9)


@pytest.mark.parametrize("rho,b,c", [(1.0, 1.0, 0.0), (0.3, 4.0, -1.5), (2.0, 0.5, 2.0)])
def test_chi_boundary_and_residual(rho, b, c):
    chi = make_chi(rho, b, c)
    assert chi(0.0) == pytest.approx(1.0, abs=1e-12)
    assert chi(b) == pytest.approx(0.0, abs=1e-12)
    x = np.linspace(-1, b + 1, 100)
    assert np.max(np.abs(-chi.d2(x) - c * chi.d1(x) + rho * chi(x))) < 1e-10
    cert = certify_inequality(chi, c, -rho, (0.0, b), "=", tol=1e-10)
    assert cert.passed


def test_chi_half_matches_bvp_integration():
    chi = make_chi(1.0, 1.0, 0.0)
    sol = solve_bvp(lambda x, y: np.vstack([y[1], y[0]]),
                    lambda ya, yb: np.array([ya[0] - 1.0, yb[0]]),
                    np.linspace(0, 1, 11), np.zeros((2, 11)), tol=1e-10, max_nodes=100000)
    assert sol.success
    assert chi(0.5) == pytest.approx(float(sol.sol(0.5)[0]), abs=1e-8)
    assert chi(0.5) == pytest.approx(math.sinh(0.5) / math.sinh(1.0), abs=1e-14)


def test_chi_half_matches_shooting():
    chi = make_chi(1.0, 1.0, 0.0)
    ivp = solve_ivp(lambda x, y: [y[1], y[0]], (0, 0.5), [1.0, float(chi.d1(0.0))],
                    rtol=1e-13, atol=1e-14)
    assert ivp.y[0, -1] == pytest.approx(chi(0.5), abs=1e-8)


def test_chi_monotone_on_parameter_grid():
    for rho in np.linspace(0.1, 2.0, 5):
        for b in np.linspace(0.5, 5.0, 5):
            for c in np.linspace(-2.0, 2.0, 5):
                chi = make_chi(rho, b, c)
                v = chi(np.linspace(0, b, 200))
                assert np.all(np.diff(v) < 0)


@pytest.mark.parametrize("rho,b", [(0.0, 1.0), (1.0, 0.0), (-1.0, 2.0)])
def test_chi_rejects(rho, b):
    with pytest.raises(ValueError):
        make_chi(rho, b, 0.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-3, 0.5), st.floats(-0.999, 4.0))
def test_bump_certified_property(kappa, frac):
    c = frac * 2 * math.sqrt(kappa)
    b = make_bump(kappa, c)
    assert certify_inequality(b, c, kappa, (0.0, b.X), "<=", samples=2000).passed
    assert b(b.x_tilde) == pytest.approx(1.0, abs=1e-12)
