"""Closed-form comparison functions for ``-w'' - c w'`` and a certifier for them.

``Bump`` is a compactly supported sub-solution of ``-w'' - c w' <= kappa w``
on ``(0, X)`` normalized to peak value 1 at ``x_tilde``. ``AuxChi`` solves
``-w'' - c w' = -rho w`` with ``w(0) = 1`` and ``w(b) = 0``. Both carry exact
first and second derivatives.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize


def kappa_of(theta: float) -> float:
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must lie in (0, 1)")
    return theta * (1.0 - theta) / 8.0


@dataclass(frozen=True)
class Bump:
    kappa: float
    c: float
    x_tilde: float
    X: float
    decay: float  # psi ~ exp(-decay x) sin(freq x)
    freq: float
    scale: float  # 1 / psi(x_tilde)

    @property
    def branch(self) -> str:
        return "oscillatory" if abs(self.c) < 2 * math.sqrt(self.kappa) else "large_c"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.scale * np.exp(-self.decay * x) * np.sin(self.freq * x)

    def d1(self, x):
        x = np.asarray(x, dtype=float)
        e, s, co = np.exp(-self.decay * x), np.sin(self.freq * x), np.cos(self.freq * x)
        return self.scale * e * (self.freq * co - self.decay * s)

    def d2(self, x):
        x = np.asarray(x, dtype=float)
        e, s, co = np.exp(-self.decay * x), np.sin(self.freq * x), np.cos(self.freq * x)
        p, w = self.decay, self.freq
        return self.scale * e * ((p * p - w * w) * s - 2 * p * w * co)


def x_tilde_oscillatory(kappa: float, c: float) -> float:
    """Location of the maximum of ``exp(-c x / 2) sin(sqrt(4 kappa - c^2) x / 2)``."""
    s = math.sqrt(4 * kappa - c * c)
    if c > 0:
        return 2.0 / s * math.atan(s / c)
    if c == 0:
        return math.pi / math.sqrt(4 * kappa)
    return 2.0 / s * (math.atan(s / c) + math.pi)


def _margin(f, c: float, kappa: float, x):
    """``-f'' - c f' - kappa f``."""
    return -f.d2(x) - c * f.d1(x) - kappa * f(x)


def make_bump(kappa: float, c: float) -> Bump:
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    root = math.sqrt(kappa)
    if not c > -2 * root:
        raise ValueError("bump requires c > -2 sqrt(kappa)")
    if c < 2 * root:
        freq = math.sqrt(4 * kappa - c * c) / 2
        decay = c / 2
        xt = x_tilde_oscillatory(kappa, c)
        X = math.pi / freq
    else:
        freq = decay = root / 2
        xt = math.pi / math.sqrt(4 * kappa)
        X = None
    peak = math.exp(-decay * xt) * math.sin(freq * xt)
    b = Bump(kappa, c, xt, X if X is not None else xt, decay, freq, 1.0 / peak)
    if X is None:
        b = Bump(kappa, c, xt, _largest_X(b), decay, freq, 1.0 / peak)
    return b


def _largest_X(b: Bump) -> float:
    """First point past x_tilde where the sub-solution inequality fails.

    Capped at the next zero of psi so the bump stays nonnegative.
    """
    end = math.pi / b.freq
    xs = np.linspace(b.x_tilde, end, 4001)
    m = _margin(b, b.c, b.kappa, xs)
    bad = np.flatnonzero(m > 0)
    if bad.size == 0:
        return end
    i = bad[0]
    return float(optimize.brentq(lambda x: _margin(b, b.c, b.kappa, x), xs[i - 1], xs[i],
                                 xtol=1e-14))


@dataclass(frozen=True)
class AuxChi:
    rho: float
    b: float
    c: float

    @property
    def _coef(self):
        s = math.sqrt(self.c**2 + 4 * self.rho)
        A = 1.0 / -math.expm1(-s * self.b)
        return 1.0 - A, A, (-self.c + s) / 2, (-self.c - s) / 2

    def _terms(self, x, order):
        x = np.asarray(x, dtype=float)
        p, q, lp, lm = self._coef
        return p * lp**order * np.exp(lp * x) + q * lm**order * np.exp(lm * x)

    def __call__(self, x):
        return self._terms(x, 0)

    def d1(self, x):
        return self._terms(x, 1)

    def d2(self, x):
        return self._terms(x, 2)


def make_chi(rho: float, b: float, c: float) -> AuxChi:
    if not rho > 0:
        raise ValueError("rho must be positive")
    if not b > 0:
        raise ValueError("b must be positive")
    return AuxChi(rho, b, c)


@dataclass(frozen=True)
class Certificate:
    passed: bool
    worst_margin: float
    worst_x: float


def certify_inequality(f, c: float, kappa: float, interval: tuple[float, float],
                       direction: str = "<=", tol: float = 1e-8,
                       samples: int = 10_000) -> Certificate:
    """Check ``-f'' - c f'  (direction)  kappa f`` on a uniform sample.

    ``direction`` is ``"<="``, ``">="`` or ``"="``. The margin is signed so
    that it is nonnegative where the relation holds.
    """
    lo, hi = interval
    x = np.linspace(lo, hi, samples)
    e = _margin(f, c, kappa, x)
    if direction == "<=":
        m = -e
    elif direction == ">=":
        m = e
    elif direction == "=":
        m = -np.abs(e)
    else:
        raise ValueError(f"unknown direction {direction!r}")
    i = int(np.argmin(m))
    return Certificate(bool(m[i] >= -tol), float(m[i]), float(x[i]))


def scan_x_tilde(kappa: float, delta: float = 1e-3, num: int = 2001) -> float:
    """Sup of x_tilde(c) over ``c`` in ``(-2 sqrt(kappa) + delta, 2 sqrt(kappa))``."""
    root = math.sqrt(kappa)
    cs = np.linspace(-2 * root + delta, 2 * root, num)[:-1]
    return max(x_tilde_oscillatory(kappa, float(c)) for c in cs)
