"""Semi-implicit time stepping of the nonlocal parabolic equation.

Each step solves ``(I - dt D2) u^{n+1} = u^n + dt f(u^n, phi * u^n)`` with
Dirichlet values clamped at both ends. The theta level set is tracked to
measure front speeds independently of the boundary-value solver.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

from . import reaction
from .grid import Grid, Profile, convolution_operator, extend_value, make_grid
from .kernel import Kernel

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MarchConfig:
    L: float = 40.0
    dx: float = 0.05
    dt: float = 0.01
    T: float = 20.0
    initial: str = "step"  # "step", "wave" or "custom"
    left_value: float = 1.0
    right_value: float = 0.0
    sample_every: float = 0.1
    fit_window: tuple[float, float] | None = None  # defaults to [T/2, T]
    nonlinearity: str = "bistable"

    def __post_init__(self):
        if not (self.L > 0 and self.dx > 0 and self.dt > 0 and self.T > 0):
            raise ValueError("L, dx, dt and T must be positive")
        if self.initial not in ("step", "wave", "custom"):
            raise ValueError(f"unknown initial condition {self.initial!r}")
        reaction.get(self.nonlinearity)

    @property
    def window(self) -> tuple[float, float]:
        return self.fit_window or (0.5 * self.T, self.T)

    def check_domain(self, expected_speed: float) -> None:
        need = 2.0 * (abs(expected_speed) * self.T + 10.0)
        if self.L < need:
            raise ValueError(f"domain half-length {self.L} too small; need L >= {need:.3g}")


@dataclass
class FrontTrace:
    times: np.ndarray
    positions: np.ndarray
    speed: float = math.nan
    fit_residual: float = math.nan

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("t,x_f\n")
            for t, xf in zip(self.times, self.positions):
                fh.write(f"{t!r},{xf!r}\n")


@dataclass
class MarchResult:
    trace: FrontTrace
    grid: Grid
    profile: Profile
    history_min: float = field(default=math.inf)
    history_max: float = field(default=-math.inf)


class BlowUp(RuntimeError):
    pass


def front_position(x: np.ndarray, u: np.ndarray, level: float) -> float:
    """Rightmost crossing of ``level`` (linear interpolation between nodes)."""
    above = u >= level
    idx = np.flatnonzero(above[:-1] & ~above[1:])
    if idx.size == 0:
        return math.nan
    i = idx[-1]
    return float(x[i] + (u[i] - level) / (u[i] - u[i + 1]) * (x[i + 1] - x[i]))


def measure_front_speed(trace: FrontTrace, window: tuple[float, float] | None = None,
                        min_samples: int = 20) -> tuple[float, float]:
    """Least-squares slope of x_f(t) over the window and a normalized residual.

    The residual is the RMS misfit divided by the distance travelled (or by 1
    for a nearly stationary front).
    """
    t = np.asarray(trace.times, dtype=float)
    xf = np.asarray(trace.positions, dtype=float)
    keep = np.isfinite(xf)
    if window is not None:
        keep &= (t >= window[0] - 1e-9) & (t <= window[1] + 1e-9)
    t, xf = t[keep], xf[keep]
    if t.size < min_samples:
        raise ValueError(f"need at least {min_samples} samples in the fit window, got {t.size}")
    A = np.vstack([t, np.ones_like(t)]).T
    (slope, icpt), *_ = np.linalg.lstsq(A, xf, rcond=None)
    rms = float(np.sqrt(np.mean((A @ [slope, icpt] - xf) ** 2)))
    span = max(abs(slope) * (t[-1] - t[0]), 1.0)
    trace.speed, trace.fit_residual = float(slope), rms / span
    return float(slope), rms / span


def march(cfg: MarchConfig, theta: float, kernel: Kernel, initial=None,
          blowup_level: float | None = None) -> MarchResult:
    """Evolve from ``initial`` and record the theta front every ``sample_every``.

    ``initial`` may be a callable of x, an array on the march grid, or a
    :class:`~nonlocal_waves.bvp.WaveSolution` (interpolated with its
    extension). With ``cfg.initial == "step"`` it defaults to the unit step.
    """
    g = make_grid(cfg.L, cfg.dx)
    x, h = g.x, g.h
    u = _initial_values(cfg, g, initial)
    u[0], u[-1] = cfg.left_value, cfg.right_value

    op = convolution_operator(kernel, g)
    f = reaction.get(cfg.nonlinearity)
    r = cfg.dt / h**2
    n = g.n
    ab = np.zeros((3, n))
    ab[0, 2:] = -r
    ab[1, :] = 1 + 2 * r
    ab[2, :-2] = -r
    ab[1, 0] = ab[1, -1] = 1.0  # Dirichlet rows

    nsteps = int(round(cfg.T / cfg.dt))
    every = max(1, int(round(cfg.sample_every / cfg.dt)))
    limit = blowup_level if blowup_level is not None else 10.0 * _default_bound(kernel)
    times, fronts = [0.0], [front_position(x, u, theta)]
    lo, hi = float(u.min()), float(u.max())
    for step in range(1, nsteps + 1):
        v = op.apply(u, cfg.left_value, cfg.right_value)
        rhs = u + cfg.dt * f(u, v, theta)[0]
        rhs[0], rhs[-1] = cfg.left_value, cfg.right_value
        u = solve_banded((1, 1), ab, rhs, check_finite=False)
        lo, hi = min(lo, float(u.min())), max(hi, float(u.max()))
        if not np.all(np.isfinite(u)) or hi > limit or -lo > limit:
            raise BlowUp(f"|u| exceeded {limit:.3g} at t={step * cfg.dt:.4g}")
        if step % every == 0:
            times.append(step * cfg.dt)
            fronts.append(front_position(x, u, theta))
    trace = FrontTrace(np.array(times), np.array(fronts))
    try:
        measure_front_speed(trace, cfg.window)
    except ValueError:
        log.warning("too few front samples to fit a speed")
    return MarchResult(trace, g, Profile(u, cfg.left_value, cfg.right_value), lo, hi)


def _default_bound(kernel: Kernel) -> float:
    from .verify import amplitude_bound

    b = amplitude_bound(kernel)
    return b if math.isfinite(b) else 1e6


def _initial_values(cfg: MarchConfig, g: Grid, initial) -> np.ndarray:
    x = g.x
    if initial is None:
        if cfg.initial != "step":
            raise ValueError(f"initial condition {cfg.initial!r} needs data")
        return np.where(x < 0, cfg.left_value, np.where(x > 0, cfg.right_value,
                                                         0.5 * (cfg.left_value + cfg.right_value)))
    if callable(initial):
        return np.asarray(initial(x), dtype=float).copy()
    if hasattr(initial, "profile") and hasattr(initial, "grid"):
        return np.asarray(extend_value(initial.profile, initial.grid, x), dtype=float)
    vals = np.asarray(initial, dtype=float)
    if vals.shape != x.shape:
        raise ValueError("initial array does not match the march grid")
    return vals.copy()
