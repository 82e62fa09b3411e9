"""Travelling waves for ``u_t = u_xx + u (u - theta)(1 - phi * u)`` and its ignition variant."""
from .auxiliaries import certify_inequality, kappa_of, make_bump, make_chi
from .bvp import (
    ContinuationBreakdown, NewtonFailure, SolverConfig, WaveSolution, continuation,
    newton_solve, residual, solve_wave,
)
from .grid import Grid, Profile, convolve, extend_value, make_grid
from .ignition import box_tail_formula, ignition_f, solve_ignition
from .kernel import Kernel, KernelMoments, eval_kernel, focus, moments
from .local_wave import exact_cubic_wave, explicit_u0, find_c0_box
from .march import MarchConfig, march, measure_front_speed
from .sweep import sweep_sigma
from .verify import VerificationReport, full_report

__all__ = [
    "Kernel", "KernelMoments", "eval_kernel", "focus", "moments",
    "Grid", "Profile", "make_grid", "extend_value", "convolve",
    "explicit_u0", "find_c0_box", "exact_cubic_wave",
    "SolverConfig", "WaveSolution", "residual", "newton_solve", "continuation",
    "solve_wave", "NewtonFailure", "ContinuationBreakdown",
    "VerificationReport", "full_report",
    "kappa_of", "make_bump", "make_chi", "certify_inequality",
    "ignition_f", "box_tail_formula", "solve_ignition",
    "MarchConfig", "march", "measure_front_speed",
    "sweep_sigma",
]
