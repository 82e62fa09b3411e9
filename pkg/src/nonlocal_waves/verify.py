"""A-priori bounds and qualitative properties checked on a computed wave."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .auxiliaries import kappa_of
from .bvp import WaveSolution
from .kernel import Kernel, moments, tail_mass


@dataclass
class Check:
    name: str
    passed: bool
    measured: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)
    note: str = ""


@dataclass
class VerificationReport:
    checks: list[Check]
    measured_M: float
    measured_eps: float
    measured_xbar: float
    R_used: float
    Q_used: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def n_passed(self) -> int:
        return sum(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return _jsonable(asdict(self)) | {"passed": self.passed}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def table(self) -> str:
        lines = [f"{'check':<22} {'result':<6} measured / bounds"]
        for c in self.checks:
            vals = ", ".join(f"{k}={_fmt(v)}" for k, v in {**c.measured, **c.bounds}.items())
            lines.append(f"{c.name:<22} {'PASS' if c.passed else 'FAIL':<6} {vals}")
        return "\n".join(lines)


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else str(f)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


# -- bounds ----------------------------------------------------------------


def amplitude_bound(k: Kernel) -> float:
    """Kernel-only upper bound on solutions of the box problem."""
    m = moments(k)
    inner = (8.0 / 3.0) * (1.0 + (3.0 / 32.0) * m.sup_deriv_unit) / m.value_at_zero
    return max(4.0 / 3.0, inner**2)


def tail_radius(k: Kernel, M: float, theta: float, tol: float = 1e-10) -> float:
    """Smallest R with ``M * mass outside [-R, R] <= (1 - theta) / 8`` (bisection)."""
    target = (1.0 - theta) / 8.0
    lo, hi = 0.0, k.truncation_radius
    if M * tail_mass(k, lo) <= target:
        return 0.0
    while hi - lo > tol * k.truncation_radius:
        mid = 0.5 * (lo + hi)
        if M * tail_mass(k, mid) <= target:
            hi = mid
        else:
            lo = mid
    return hi


def speed_bounds(k: Kernel, M: float, theta: float) -> dict:
    Q = M * (M + theta) * (1 + M)
    R = tail_radius(k, M, theta)
    return {
        "c_max": 2.0 * math.sqrt(2.0 * M),
        "c_min": -128.0 * Q * R / (theta * (1 - theta) ** 2),
        "Q": Q,
        "R": R,
    }


# -- individual checks -----------------------------------------------------


def check_amplitude_bound(sol: WaveSolution, k: Kernel) -> Check:
    M = float(np.max(sol.u))
    bound = amplitude_bound(k)
    return Check("amplitude_bound", M <= bound + 1e-6, {"max_u": M}, {"M_bound": bound})


def check_speed_bounds(sol: WaveSolution, k: Kernel, theta: float) -> Check:
    M = float(np.max(sol.u))
    b = speed_bounds(k, M, theta)
    ok = b["c_min"] <= sol.c <= b["c_max"]
    return Check("speed_bounds", bool(ok), {"c": float(sol.c), "M": M}, b)


def check_theta_crossing(sol: WaveSolution, theta: float, dead_band: int = 3,
                         tol: float = 1e-6) -> Check:
    x, u = sol.x, sol.u
    h = sol.grid.h
    a = sol.grid.a
    d = u - theta
    left = (x >= -a + h - 1e-12) & (x <= -dead_band * h + 1e-12)
    right = (x >= dead_band * h - 1e-12) & (x <= a - h + 1e-12)
    min_left = float(np.min(d[left]))
    max_right = float(np.max(d[right]))
    s = np.sign(d[d != 0])
    changes = int(np.count_nonzero(s[1:] != s[:-1]))
    ok = min_left > tol and max_right < -tol and changes == 1
    return Check("theta_crossing", bool(ok),
                 {"min_left_gap": min_left, "max_right_gap": max_right, "sign_changes": changes},
                 {"tol": tol, "dead_band_nodes": dead_band})


def monotone_tail_start(x: np.ndarray, u: np.ndarray) -> float:
    """Smallest node beyond which nodal differences are strictly negative."""
    neg = np.diff(u) < 0
    if not neg[-1]:
        return float(x[-1])
    bad = np.flatnonzero(~neg)
    return float(x[0] if bad.size == 0 else x[bad[-1] + 1])


def plateau_epsilon(x: np.ndarray, u: np.ndarray, theta: float, a: float) -> float:
    """Largest eps >= 1/a with ``u >= theta + eps`` on ``[-a, -1/eps]`` (0 if none)."""
    neg = x < 0
    xs, gap = x[neg], (u - theta)[neg]
    runmin = np.minimum.accumulate(gap)
    cands = np.concatenate([-1.0 / xs, runmin])
    cands = cands[(cands >= 1.0 / a) & np.isfinite(cands)]
    if cands.size == 0:
        return 0.0
    idx = np.searchsorted(xs, -1.0 / cands, side="right") - 1
    valid = (idx >= 0) & (runmin[np.maximum(idx, 0)] >= cands)
    return float(cands[valid].max()) if np.any(valid) else 0.0


def check_tail_and_plateau(sol: WaveSolution, theta: float) -> Check:
    x, u, a = sol.x, sol.u, sol.grid.a
    xbar = monotone_tail_start(x, u)
    edge = (x >= a - 5) & (x < a)
    edge_max = float(np.max(u[edge]))
    eps = plateau_epsilon(x, u, theta, a)
    kappa = kappa_of(theta)
    branches = []
    if sol.c < 2 * math.sqrt(kappa):
        branches.append("left")
    sub = {
        "decreasing_tail": xbar < a / 2,
        "right_edge_small": edge_max < 1e-3,
        "left_plateau": eps > 0,
    }
    right_max = float("nan")
    if sol.c > -2 * math.sqrt(kappa):
        branches.append("right")
        if eps > 0:
            zone = x >= 1.0 / eps
            right_max = float(np.max(u[zone])) if np.any(zone) else -math.inf
        sub["away_from_theta_right"] = eps > 0 and right_max <= theta / 2
    return Check(
        "tail_and_plateau",
        all(sub.values()),
        {"xbar": xbar, "edge_max": edge_max, "eps": eps, "right_max": right_max,
         "branches": "+".join(branches), **{f"ok_{k}": v for k, v in sub.items()}},
        {"xbar_max": a / 2, "edge_tol": 1e-3, "right_level": theta / 2},
    )


def check_focusing_criterion(sol: WaveSolution, k: Kernel) -> Check:
    """Evaluate ``sigma sqrt(m2) M^2 < |c|`` and, when it holds, the left state."""
    m2 = moments(k.base()).m2
    M = float(np.max(sol.u))
    lhs = k.sigma * math.sqrt(m2) * M**2
    rhs = abs(sol.c)
    holds = lhs < rhs
    x, a = sol.x, sol.grid.a
    left_state = float(np.mean(sol.u[x <= -a + 2 + 1e-12]))
    predicted = left_state > 0.99
    return Check(
        "focusing_criterion",
        bool(predicted or not holds),
        {"criterion": bool(holds), "lhs": lhs, "abs_c": rhs, "left_state": left_state,
         "left_state_near_one": bool(predicted)},
        {"left_state_min": 0.99},
    )


def full_report(sol: WaveSolution, k: Kernel, theta: float) -> VerificationReport:
    checks = [
        check_amplitude_bound(sol, k),
        check_speed_bounds(sol, k, theta),
        check_theta_crossing(sol, theta),
        check_tail_and_plateau(sol, theta),
        check_focusing_criterion(sol, k),
    ]
    sb = checks[1].bounds
    tp = checks[3].measured
    return VerificationReport(
        checks=checks,
        measured_M=float(np.max(sol.u)),
        measured_eps=tp["eps"],
        measured_xbar=tp["xbar"],
        R_used=sb["R"],
        Q_used=sb["Q"],
    )
