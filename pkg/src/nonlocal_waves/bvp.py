"""Travelling waves in a box by Newton's method and continuation in tau.

The discrete problem on a grid ``x_0 = -a < ... < x_{n-1} = a`` is

    -(u_{i+1} - 2 u_i + u_{i-1}) / h^2 - c (u_{i+1} - u_{i-1}) / (2h)
        = tau * f(u_i, (phi * u)_i),            i = 1, ..., n-2,

with ``u_0 = 1``, ``u_{n-1} = 0`` and ``u_m = theta`` at the centre node.
The three pinned values are eliminated, leaving ``n - 3`` nodal unknowns
plus the speed ``c`` against the ``n - 2`` interior equations. tau = 0 is
the linear advection-diffusion problem with explicit solution; tau = 1 is
the nonlocal problem.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import sparse
from scipy.sparse import linalg as spla

from . import reaction
from .grid import Grid, Profile, convolution_operator, make_grid
from .kernel import Kernel
from .local_wave import explicit_u0, find_c0_box

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    tau_start: float = 0.0
    tau_end: float = 1.0
    dtau: float = 0.1
    dtau_min: float = 1e-3
    dtau_max: float = 0.1
    newton_tol: float = 1e-8
    newton_max_iters: int = 50
    damping: float = 0.5
    min_step: float = 2.0**-10
    nonlinearity: str = "bistable"

    def __post_init__(self):
        if not 0.0 <= self.tau_start <= self.tau_end <= 1.0:
            raise ValueError("need 0 <= tau_start <= tau_end <= 1")
        for name in ("dtau", "dtau_min", "dtau_max", "newton_tol", "min_step"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.damping < 1:
            raise ValueError("damping factor must lie in (0, 1)")
        if self.newton_max_iters < 1:
            raise ValueError("newton_max_iters must be at least 1")
        reaction.get(self.nonlinearity)


@dataclass
class WaveSolution:
    grid: Grid
    profile: Profile
    c: float
    tau: float
    theta: float
    kernel: Kernel
    nonlinearity: str = "bistable"
    residual_norm: float = np.inf
    newton_iterations_total: int = 0
    continuation_steps: int = 0
    jacobian_cond: float | None = field(default=None, repr=False)

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    @property
    def u(self) -> np.ndarray:
        return self.profile.values


class SolverFailure(RuntimeError):
    """Base class for solver breakdowns; carries the last usable state."""


class NewtonFailure(SolverFailure):
    def __init__(self, message, last_iterate: WaveSolution, history: list[float]):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.history = history


class ContinuationBreakdown(SolverFailure):
    def __init__(self, message, last_tau: float, last_solution: WaveSolution | None):
        super().__init__(message)
        self.last_tau = last_tau
        self.last_solution = last_solution


# -- discrete operator ---------------------------------------------------


def ode_rows(values, c, tau, theta, k: Kernel, g: Grid, nl: str = "bistable",
             left_ext: float = 1.0, right_ext: float = 0.0) -> np.ndarray:
    """Residual of the differential equation at the interior nodes 1..n-2."""
    u = np.asarray(values, dtype=float)
    h = g.h
    v = convolution_operator(k, g).apply(u, left_ext, right_ext)
    f, _, _ = reaction.get(nl)(u[1:-1], v[1:-1], theta)
    d2 = (u[2:] - 2 * u[1:-1] + u[:-2]) / h**2
    d1 = (u[2:] - u[:-2]) / (2 * h)
    return -d2 - c * d1 - tau * f


def residual(p: Profile, c, tau, theta, k: Kernel, g: Grid, nl: str = "bistable") -> np.ndarray:
    """Assembled residual of length n: Dirichlet rows, pinning row, ODE rows.

    The centre row holds ``u(0) - theta``. The differential equation at the
    centre node is still part of the solved system; see :func:`ode_rows`.
    """
    u = p.values
    if u.shape != (g.n,):
        raise ValueError("profile length does not match grid")
    r = np.empty(g.n)
    r[1:-1] = ode_rows(u, c, tau, theta, k, g, nl, p.left_ext, p.right_ext)
    r[0] = u[0] - 1.0
    r[-1] = u[-1]
    r[g.center] = u[g.center] - theta
    return r


def _full_norm(u, c, tau, theta, k, g, nl) -> float:
    rows = ode_rows(u, c, tau, theta, k, g, nl)
    pins = max(abs(u[0] - 1.0), abs(u[-1]), abs(u[g.center] - theta))
    return float(max(np.max(np.abs(rows)), pins))


def _free_index(g: Grid) -> np.ndarray:
    idx = np.arange(1, g.n - 1)
    return idx[idx != g.center]


def jacobian(u, c, tau, theta, k: Kernel, g: Grid, nl: str = "bistable") -> sparse.csc_matrix:
    """Exact linearization of :func:`ode_rows` in (free nodal values, c).

    Tridiagonal stencil + banded kernel block from d(phi*u)/du, plus the
    dense column d/dc = -u'.
    """
    h = g.h
    n = g.n
    op = convolution_operator(k, g)
    v = op.apply(u)
    _, fu, fv = reaction.get(nl)(u, v, theta)
    lower = np.full(n - 1, -1 / h**2 + c / (2 * h))
    upper = np.full(n - 1, -1 / h**2 - c / (2 * h))
    main = np.full(n, 2 / h**2)
    A = sparse.diags([lower, main - tau * fu, upper], [-1, 0, 1], format="csr")
    A = A - tau * (sparse.diags(fv) @ op.W)
    free = _free_index(g)
    A = A[1:-1][:, free]
    dc = -(u[2:] - u[:-2]) / (2 * h)
    return sparse.hstack([A, sparse.csr_matrix(dc[:, None])], format="csc")


def _pin(u: np.ndarray, theta: float, g: Grid) -> np.ndarray:
    u = u.copy()
    u[0], u[-1], u[g.center] = 1.0, 0.0, theta
    return u


def condition_estimate(J: sparse.spmatrix) -> float:
    lu = spla.splu(sparse.csc_matrix(J))
    inv = spla.LinearOperator(
        J.shape, matvec=lu.solve, rmatvec=lambda x: lu.solve(x, trans="T"), dtype=float
    )
    return float(spla.onenormest(J) * spla.onenormest(inv))


def newton_solve(initial: WaveSolution, tau: float, cfg: SolverConfig) -> WaveSolution:
    """Damped Newton iteration for the box problem at fixed tau."""
    g, k, theta = initial.grid, initial.kernel, initial.theta
    nl = cfg.nonlinearity
    free = _free_index(g)
    u = _pin(initial.profile.values, theta, g)
    c = float(initial.c)
    norm = _full_norm(u, c, tau, theta, k, g, nl)
    history = [norm]
    iters = 0

    def state(uu, cc, rn):
        return replace(initial, profile=Profile(uu, 1.0, 0.0), c=cc, tau=tau,
                       nonlinearity=nl, residual_norm=rn,
                       newton_iterations_total=initial.newton_iterations_total + iters)

    while not norm <= cfg.newton_tol:
        if iters >= cfg.newton_max_iters or not np.isfinite(norm):
            raise NewtonFailure(
                f"no convergence at tau={tau:.4g} after {iters} iterations "
                f"(residual {norm:.3e})", state(u, c, norm), history)
        F = ode_rows(u, c, tau, theta, k, g, nl)
        J = jacobian(u, c, tau, theta, k, g, nl)
        try:
            delta = spla.spsolve(J, -F)
        except RuntimeError as exc:  # singular factorization
            raise NewtonFailure(str(exc), state(u, c, norm), history) from exc
        if not np.all(np.isfinite(delta)):
            raise NewtonFailure("singular Newton system", state(u, c, norm), history)
        iters += 1
        step = 1.0
        while True:
            ut = u.copy()
            ut[free] += step * delta[:-1]
            ct = c + step * delta[-1]
            trial = _full_norm(ut, ct, tau, theta, k, g, nl)
            if trial < norm:
                u, c, norm = ut, ct, trial
                break
            step *= cfg.damping
            if step < cfg.min_step:
                raise NewtonFailure(
                    f"line search stalled at tau={tau:.4g} (residual {norm:.3e})",
                    state(u, c, norm), history)
        history.append(norm)
        log.debug("tau=%.4f newton %d: |F|=%.3e step=%g c=%.8f", tau, iters, norm, step, c)
    return state(u, c, norm)


def seed_solution(theta: float, k: Kernel, g: Grid, nl: str = "bistable") -> WaveSolution:
    """Explicit tau = 0 box solution sampled on the grid."""
    c0 = find_c0_box(theta, g.a)
    u = explicit_u0(c0, g.a, np.clip(g.x, -g.a, g.a))
    u = _pin(u, theta, g)
    return WaveSolution(grid=g, profile=Profile(u, 1.0, 0.0), c=c0, tau=0.0, theta=theta,
                        kernel=k, nonlinearity=nl,
                        residual_norm=_full_norm(u, c0, 0.0, theta, k, g, nl))


def continuation(cfg: SolverConfig, theta: float, k: Kernel, g: Grid,
                 initial: WaveSolution | None = None) -> WaveSolution:
    """Follow the branch from the explicit local solution up to ``cfg.tau_end``.

    The tau = 0 problem is solved on the grid first, so the returned
    solution always satisfies the discrete equations to ``newton_tol``.
    """
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must lie in (0, 1)")
    nl = cfg.nonlinearity
    start = initial if initial is not None else seed_solution(theta, k, g, nl)
    start = replace(start, kernel=k, theta=theta, nonlinearity=nl)
    try:
        sol = newton_solve(start, cfg.tau_start, cfg)
    except NewtonFailure as exc:
        raise ContinuationBreakdown(
            f"could not solve the starting problem at tau={cfg.tau_start}",
            cfg.tau_start, None) from exc

    tau, dtau = cfg.tau_start, min(cfg.dtau, cfg.dtau_max)
    steps, streak = 0, 0
    while tau < cfg.tau_end:
        target = min(cfg.tau_end, tau + dtau)
        full = target - tau >= dtau * (1 - 1e-12)
        try:
            nxt = newton_solve(sol, target, cfg)
        except NewtonFailure as exc:
            dtau *= 0.5
            streak = 0
            log.info("newton failed at tau=%.4f, halving dtau to %.3g", target, dtau)
            if dtau < cfg.dtau_min:
                raise ContinuationBreakdown(
                    f"continuation broke down after tau={tau:.4g}: {exc}", tau, sol
                ) from exc
            continue
        sol, tau = nxt, target
        steps += 1
        streak = streak + 1 if full else 0
        if streak >= 2 and dtau < cfg.dtau_max:
            dtau, streak = min(2 * dtau, cfg.dtau_max), 0
        log.debug("reached tau=%.4f c=%.8f", tau, sol.c)
    sol.continuation_steps = steps
    sol.jacobian_cond = condition_estimate(
        jacobian(sol.u, sol.c, sol.tau, theta, k, g, nl))
    return sol


def solve_wave(theta: float, kernel: Kernel, a: float = 40.0, h: float = 0.05,
               cfg: SolverConfig | None = None):
    """Grid, continuation to tau = 1 and the full verification report."""
    from .verify import full_report

    cfg = cfg or SolverConfig()
    g = make_grid(a, h)
    sol = continuation(cfg, theta, kernel, g)
    return sol, full_report(sol, kernel, theta)
