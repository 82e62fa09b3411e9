"""Closed-form local solutions: the linear box problem and the cubic bistable wave."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def _check_theta(theta: float) -> None:
    if not 0.0 < theta < 1.0:
        raise ValueError(f"theta must lie in (0, 1), got {theta}")


def explicit_u0(c: float, a: float, x):
    """Solution of ``-u'' - c u' = 0`` on ``[-a, a]`` with ``u(-a)=1, u(a)=0``."""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > a * (1 + 1e-12)):
        raise ValueError("x outside [-a, a]")
    if abs(c) * a < 1e-8:
        out = 0.5 - x / (2.0 * a)
    elif c > 0:
        # (e^{-cx} - e^{-ca}) / (e^{ca} - e^{-ca}) with everything scaled by e^{-ca}
        out = np.exp(-c * (x + a)) * np.expm1(-c * (a - x)) / math.expm1(-2 * c * a)
    else:
        d = -c
        out = -np.expm1(d * (x - a)) / -math.expm1(-2 * d * a)
    return out if out.ndim else float(out)


def find_c0_box(theta: float, a: float, tol: float = 0.0) -> float:
    """Speed at which the linear box solution passes through theta at x = 0.

    Bisection runs until ``|u0(0) - theta| <= tol`` or the bracket can no
    longer shrink in floating point (the default).
    """
    _check_theta(theta)
    if theta == 0.5:
        return 0.0

    def g(c):
        return explicit_u0(c, a, 0.0) - theta

    # u0(0) decreases in c, so grow a bracket on the side where the root sits
    step = 1.0 / a
    lo, hi = (0.0, step) if theta < 0.5 else (-step, 0.0)
    while g(lo) < 0:
        lo -= step
        step *= 2
    while g(hi) > 0:
        hi += step
        step *= 2
    while True:
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if abs(gm) <= tol or mid in (lo, hi):
            return mid
        if gm > 0:
            lo = mid
        else:
            hi = mid


@dataclass(frozen=True)
class LocalWaveRef:
    """Travelling wave of ``U'' + c0 U' + U (U - theta)(1 - U) = 0`` pinned at ``U(0) = theta``."""

    theta: float
    c0: float

    @property
    def _shift(self) -> float:
        return 1.0 / self.theta - 1.0

    def __call__(self, x):
        e = self._shift * np.exp(np.asarray(x, dtype=float) / math.sqrt(2.0))
        return 1.0 / (1.0 + e)

    def derivative(self, x, order: int = 1):
        u = self(x)
        du = -u * (1 - u) / math.sqrt(2.0)
        if order == 1:
            return du
        if order == 2:
            return -du * (1 - 2 * u) / math.sqrt(2.0)
        raise ValueError("order must be 1 or 2")

    def ode_residual(self, x):
        u = self(x)
        return (
            self.derivative(x, 2)
            + self.c0 * self.derivative(x, 1)
            + u * (u - self.theta) * (1 - u)
        )


def exact_cubic_wave(theta: float) -> LocalWaveRef:
    _check_theta(theta)
    ref = LocalWaveRef(theta, (1.0 - 2.0 * theta) / math.sqrt(2.0))
    x = np.linspace(-30.0, 30.0, 200)
    err = np.max(np.abs(ref.ode_residual(x)))
    if not err < 1e-8:
        raise RuntimeError(f"closed-form wave fails substitution check ({err:.2e})")
    return ref

