"""Command-line entry points.

    nonlocal-waves solve       --theta 0.3 --kernel gaussian --sigma 0.2
    nonlocal-waves sweep-sigma --theta 0.3 --sigmas 0.4,0.2,0.1,0.05
    nonlocal-waves ignition    --theta 0.3 --sigma 0.2
    nonlocal-waves march       --theta 0.3 --initial wave --solution out/solution.csv
    nonlocal-waves verify      --solution out/solution.csv

Every key may also come from a ``--config`` file of ``key = value`` lines
(``#`` starts a comment); command-line flags win.

Exit codes: 0 ok, 1 verification failure, 2 solver failure, 64 usage error.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from . import io
from .bvp import ContinuationBreakdown, SolverConfig, SolverFailure, continuation
from .grid import make_grid
from .ignition import ignition_report
from .kernel import FAMILIES, Kernel
from .march import BlowUp, MarchConfig, march
from .sweep import sweep_sigma
from .verify import check_theta_crossing, full_report

EXIT_OK, EXIT_VERIFY, EXIT_SOLVER, EXIT_USAGE = 0, 1, 2, 64
COMMANDS = ("solve", "sweep-sigma", "ignition", "march", "verify")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    theta: float = 0.3
    kernel: str = "gaussian"
    sigma: float = 0.2
    width: float = 1.0
    a: float = 40.0
    h: float = 0.05
    sigmas: str = "0.4,0.2,0.1,0.05"
    out: str = "out"
    workers: int = 1
    dtau: float = 0.1
    dtau_min: float = 1e-3
    newton_tol: float = 1e-8
    newton_max_iters: int = 50
    solution: str = ""
    initial: str = "step"
    initial_csv: str = ""
    L: float = 40.0
    dx: float = 0.05
    dt: float = 0.01
    T: float = 20.0

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.command != "verify" and not 0.0 < self.theta < 1.0:
            raise UsageError(f"theta must lie in (0, 1), got {self.theta}")
        if self.h <= 0 or self.a <= 0 or self.h >= self.a:
            raise UsageError("need 0 < h < a")
        if self.sigma <= 0:
            raise UsageError("sigma must be positive")
        if self.command == "sweep-sigma":
            s = self.sigma_list
            if not s or any(b >= a for a, b in zip(s, s[1:])):
                raise UsageError("--sigmas must be a strictly decreasing list")
        if self.command == "verify" and not self.solution:
            raise UsageError("verify needs --solution")
        if self.kernel not in FAMILIES[:3] and not Path(self.kernel).is_file():
            raise UsageError(f"kernel must be one of {FAMILIES[:3]} or a CSV path")

    @property
    def sigma_list(self) -> list[float]:
        try:
            return [float(s) for s in str(self.sigmas).split(",") if s.strip()]
        except ValueError as exc:
            raise UsageError(f"bad --sigmas value: {exc}") from exc

    def make_kernel(self, sigma: float | None = None) -> Kernel:
        s = self.sigma if sigma is None else sigma
        if self.kernel in FAMILIES[:3]:
            return Kernel(self.kernel, sigma=s, width=self.width)
        return Kernel.from_csv(self.kernel, sigma=s)

    def solver(self, nonlinearity: str = "bistable") -> SolverConfig:
        return SolverConfig(dtau=self.dtau, dtau_min=self.dtau_min,
                            newton_tol=self.newton_tol,
                            newton_max_iters=self.newton_max_iters,
                            nonlinearity=nonlinearity)


def read_config_file(path) -> dict[str, str]:
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = val
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nonlocal-waves", description=__doc__.split("\n")[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config")
    p.add_argument("-v", "--verbose", action="store_true")
    for f in fields(RunConfig):
        if f.name == "command":
            continue
        p.add_argument(f"--{f.name.replace('_', '-')}", dest=f.name, default=None)
    return p


def parse_config(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    values: dict = {}
    if ns.config:
        try:
            values.update(read_config_file(ns.config))
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
    values.update({k: v for k, v in vars(ns).items()
                   if v is not None and k not in ("command", "config", "verbose")})
    kinds = {f.name: f.type for f in fields(RunConfig)}
    unknown = set(values) - set(kinds)
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    cast = {"float": float, "int": int, "str": str}
    try:
        typed = {k: cast[kinds[k]](v) for k, v in values.items()}
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    cfg = RunConfig(command=ns.command, **typed)
    cfg.validate()
    if ns.verbose:
        logging.basicConfig(level=logging.INFO)
    return cfg


def _write_run(cfg: RunConfig, out: Path, extra: dict | None = None) -> None:
    io.write_json(out / "run.json", {"config": asdict(cfg), **(extra or {})})


def run_solve(cfg: RunConfig) -> int:
    out = Path(cfg.out)
    k = cfg.make_kernel()
    g = make_grid(cfg.a, cfg.h)
    try:
        sol = continuation(cfg.solver(), cfg.theta, k, g)
    except ContinuationBreakdown as exc:
        if exc.last_solution is not None:
            io.write_solution(out / "last_good", exc.last_solution)
        _write_run(cfg, out, {"status": "solver_failure", "last_good_tau": exc.last_tau,
                              "message": str(exc)})
        print(f"solver failure: {exc} (last good tau = {exc.last_tau:.4g})", file=sys.stderr)
        return EXIT_SOLVER
    report = full_report(sol, k, cfg.theta)
    io.write_solution(out / "solution", sol)
    io.write_json(out / "report.json", report.to_dict())
    _write_run(cfg, out, {"status": "ok" if report.passed else "verification_failure",
                          "c": sol.c})
    print(f"c = {sol.c:.10f}  residual = {sol.residual_norm:.2e}")
    print(report.table())
    return EXIT_OK if report.passed else EXIT_VERIFY


def run_sweep_sigma(cfg: RunConfig) -> int:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    res = sweep_sigma(cfg.theta, cfg.make_kernel(1.0), cfg.sigma_list, cfg.a, cfg.h,
                      cfg.solver(), workers=cfg.workers)
    res.to_csv(out / "sweep.csv")
    io.write_json(out / "sweep.json", res.to_dict())
    _write_run(cfg, out)
    print(f"local speed c0 = {res.c0:.8f}")
    for r in res.rows:
        if r.error:
            print(f"sigma={r.sigma:<8g} FAILED: {r.error}")
        else:
            print(f"sigma={r.sigma:<8g} c={r.c:.8f} |c-c0|={r.c_error:.3e} "
                  f"left={r.left_state:.6f} criterion={r.criterion} "
                  f"checks={r.passed_checks}/{r.total_checks}")
    if any(r.error for r in res.rows):
        return EXIT_SOLVER
    return EXIT_OK if all(r.passed_checks == r.total_checks for r in res.rows) else EXIT_VERIFY


def run_ignition(cfg: RunConfig) -> int:
    out = Path(cfg.out)
    k = cfg.make_kernel()
    try:
        sol = continuation(cfg.solver("ignition"), cfg.theta, k, make_grid(cfg.a, cfg.h))
    except ContinuationBreakdown as exc:
        if exc.last_solution is not None:
            io.write_solution(out / "last_good", exc.last_solution)
        _write_run(cfg, out, {"status": "solver_failure", "last_good_tau": exc.last_tau})
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    rep = ignition_report(sol)
    crossing = check_theta_crossing(sol, cfg.theta)
    io.write_solution(out / "solution", sol)
    io.write_json(out / "ignition_report.json",
                  rep.to_dict() | {"theta_crossing": crossing.passed})
    ok = rep.c_positive and rep.tail_fit_error < 1e-4 and crossing.passed
    _write_run(cfg, out, {"status": "ok" if ok else "verification_failure"})
    print(f"c = {rep.c:.10f}  tail error = {rep.tail_fit_error:.2e}  "
          f"box formula error = {rep.box_formula_error:.2e}  crossing = {crossing.passed}")
    return EXIT_OK if ok else EXIT_VERIFY


def run_march(cfg: RunConfig) -> int:
    out = Path(cfg.out)
    k = cfg.make_kernel()
    mc = MarchConfig(L=cfg.L, dx=cfg.dx, dt=cfg.dt, T=cfg.T, initial=cfg.initial)
    initial, c_ref = None, math.nan
    if cfg.initial == "wave":
        if cfg.solution:
            initial = io.read_solution(cfg.solution)
        else:
            initial = continuation(cfg.solver(), cfg.theta, k, make_grid(cfg.a, cfg.h))
        c_ref = initial.c
    elif cfg.initial == "custom":
        if not cfg.initial_csv:
            raise UsageError("initial = custom needs --initial-csv")
        g0, p0, _ = io.read_profile(cfg.initial_csv)
        from .bvp import WaveSolution

        initial = WaveSolution(g0, p0, 0.0, 1.0, cfg.theta, k)
    try:
        res = march(mc, cfg.theta, k, initial)
    except BlowUp as exc:
        _write_run(cfg, out, {"status": "solver_failure", "message": str(exc)})
        print(f"blow-up: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    out.mkdir(parents=True, exist_ok=True)
    res.trace.to_csv(out / "trace.csv")
    io.write_profile(out / "final", res.grid, res.profile, {"t": cfg.T})
    info = {"speed": res.trace.speed, "fit_residual": res.trace.fit_residual,
            "bvp_speed": c_ref,
            "relative_difference": abs(res.trace.speed - c_ref) / abs(c_ref)
            if c_ref == c_ref and c_ref != 0 else None}
    io.write_json(out / "march.json", info)
    _write_run(cfg, out, {"status": "ok"})
    print(f"front speed = {res.trace.speed:.8f}  fit residual = {res.trace.fit_residual:.2e}")
    if c_ref == c_ref:
        print(f"BVP speed   = {c_ref:.8f}  relative difference = {info['relative_difference']:.3e}")
    return EXIT_OK


def run_verify(cfg: RunConfig) -> int:
    out = Path(cfg.out)
    sol = io.read_solution(cfg.solution)
    report = full_report(sol, sol.kernel, sol.theta)
    io.write_json(out / "report.json", report.to_dict())
    _write_run(cfg, out, {"status": "ok" if report.passed else "verification_failure"})
    print(report.table())
    return EXIT_OK if report.passed else EXIT_VERIFY


RUNNERS = {
    "solve": run_solve,
    "sweep-sigma": run_sweep_sigma,
    "ignition": run_ignition,
    "march": run_march,
    "verify": run_verify,
}


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
        return RUNNERS[cfg.command](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverFailure as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
