"""From the explicit linear box solution to the nonlocal bistable wave.

The box problem on [-a, a] is deformed from tau = 0 (no reaction, explicit
profile) to tau = 1 (full nonlocal reaction). We follow the speed along the
way and then check the finished wave against its a-priori bounds.
"""
import numpy as np

from nonlocal_waves import (
    Kernel, SolverConfig, continuation, explicit_u0, find_c0_box, full_report, make_grid,
)

theta = 0.3
k = Kernel.gaussian(0.2)
g = make_grid(40.0, 0.05)

# %% tau = 0: the linear problem -u'' - c u' = 0 has a closed-form solution
c_lin = find_c0_box(theta, g.a)
print(f"linear box speed c = {c_lin:.6e}  (u(0) = {explicit_u0(c_lin, g.a, 0.0):.12f})")

# %% march in tau, keeping every intermediate solution
sol = None
print("\n  tau        c          max u")
for tau in np.linspace(0.0, 1.0, 11):
    sol = continuation(SolverConfig(tau_end=float(tau)), theta, k, g, initial=sol)
    print(f"  {tau:4.1f}  {sol.c:10.6f}  {sol.u.max():.6f}")

# %% the finished wave and its verification report
rep = full_report(sol, k, theta)
print(f"\nresidual {sol.residual_norm:.2e}, Jacobian condition ~ {sol.jacobian_cond:.3g}")
print(rep.table())

# the left plateau and the exponential right tail
for x0 in (-30, -10, -1, 0, 1, 10, 30):
    i = int(np.argmin(np.abs(sol.x - x0)))
    print(f"  u({x0:+3d}) = {sol.u[i]:.6e}")
