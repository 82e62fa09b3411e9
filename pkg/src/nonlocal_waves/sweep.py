"""Focusing sweeps: solve for a decreasing list of kernel scales sigma."""
from __future__ import annotations

import logging
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

from .bvp import (
    SolverConfig, SolverFailure, WaveSolution, continuation, newton_solve,
)
from .grid import make_grid
from .kernel import Kernel, focus
from .local_wave import exact_cubic_wave
from .verify import full_report

log = logging.getLogger(__name__)


@dataclass
class SweepRow:
    sigma: float
    c: float = math.nan
    max_u: float = math.nan
    left_state: float = math.nan
    criterion: bool = False
    passed_checks: int = 0
    total_checks: int = 0
    c_error: float = math.nan
    error: str | None = None


@dataclass
class SweepResult:
    theta: float
    c0: float
    rows: list[SweepRow] = field(default_factory=list)
    solutions: dict = field(default_factory=dict, repr=False)

    @property
    def sigma0(self) -> float | None:
        """Largest sigma whose left state exceeds 0.99."""
        ok = [r.sigma for r in self.rows if r.error is None and r.left_state > 0.99]
        return max(ok) if ok else None

    def to_dict(self) -> dict:
        return {
            "theta": self.theta,
            "c0": self.c0,
            "sigma0": self.sigma0,
            "rows": [asdict(r) for r in self.rows],
        }

    def to_csv(self, path) -> None:
        cols = list(SweepRow.__dataclass_fields__)
        with open(path, "w") as fh:
            fh.write(",".join(cols) + "\n")
            for r in self.rows:
                vals = [getattr(r, c) for c in cols]
                fh.write(",".join("" if v is None else repr(v) if isinstance(v, float)
                                  else str(v) for v in vals) + "\n")


def _solve_row(theta, kernel, a, h, cfg, seed: WaveSolution | None):
    g = make_grid(a, h)
    if seed is not None:
        try:
            return newton_solve(replace(seed, kernel=kernel), cfg.tau_end, cfg)
        except SolverFailure:
            log.info("seeded solve failed for sigma=%g; running full continuation",
                     kernel.sigma)
    return continuation(cfg, theta, kernel, g)


def _row(theta, kernel: Kernel, sol: WaveSolution, c0: float) -> SweepRow:
    rep = full_report(sol, kernel, theta)
    fc = rep["focusing_criterion"].measured
    return SweepRow(
        sigma=kernel.sigma,
        c=sol.c,
        max_u=rep.measured_M,
        left_state=fc["left_state"],
        criterion=fc["criterion"],
        passed_checks=rep.n_passed,
        total_checks=len(rep.checks),
        c_error=abs(sol.c - c0),
    )


def _independent(args):
    theta, kernel, a, h, cfg, c0 = args
    try:
        sol = _solve_row(theta, kernel, a, h, cfg, None)
    except SolverFailure as exc:
        return SweepRow(sigma=kernel.sigma, error=str(exc)), None
    return _row(theta, kernel, sol, c0), sol


def sweep_sigma(theta: float, base: Kernel, sigmas, a: float = 40.0, h: float = 0.05,
                cfg: SolverConfig | None = None, workers: int = 1) -> SweepResult:
    """Solve for each sigma (strictly decreasing) and compare with the local speed.

    Sequential sweeps seed every solve with the previous sigma's wave; with
    ``workers > 1`` the rows run independently in separate processes.
    """
    sigmas = [float(s) for s in sigmas]
    if any(s <= 0 for s in sigmas) or any(b >= a_ for a_, b in zip(sigmas, sigmas[1:])):
        raise ValueError("sigma list must be positive and strictly decreasing")
    if theta == 0.5:
        warnings.warn("theta = 1/2: the local speed vanishes and the left-state "
                      "prediction does not apply", stacklevel=2)
    cfg = cfg or SolverConfig()
    c0 = exact_cubic_wave(theta).c0
    base = base.base()
    result = SweepResult(theta, c0)
    kernels = [focus(base, s) for s in sigmas]

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(_independent, [(theta, k, a, h, cfg, c0) for k in kernels]))
        for (row, sol), s in zip(out, sigmas):
            result.rows.append(row)
            if sol is not None:
                result.solutions[s] = sol
        return result

    prev = None
    for k in kernels:
        try:
            sol = _solve_row(theta, k, a, h, cfg, prev)
        except SolverFailure as exc:
            result.rows.append(SweepRow(sigma=k.sigma, error=str(exc)))
            continue
        prev = sol
        result.solutions[k.sigma] = sol
        result.rows.append(_row(theta, k, sol, c0))
    return result
