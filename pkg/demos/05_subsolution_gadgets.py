"""The bump and auxiliary functions used as sub-solutions, certified numerically."""
import math

from nonlocal_waves import certify_inequality, kappa_of, make_bump, make_chi
from nonlocal_waves.auxiliaries import scan_x_tilde

theta = 0.3
kappa = kappa_of(theta)
r = math.sqrt(kappa)
print(f"kappa = {kappa}")

print("\n  c/sqrt(k)  branch        x_tilde       X        worst margin")
for m in (-1.5, -1.0, 0.0, 1.0, 2.0, 3.0):
    c = m * r
    b = make_bump(kappa, c)
    cert = certify_inequality(b, c, kappa, (0.0, b.X), "<=")
    print(f"  {m:+5.1f}     {b.branch:12s}  {b.x_tilde:9.4f}  {b.X:9.4f}  {cert.worst_margin:+.2e}")

print(f"\nsup of x_tilde over (-2 sqrt(k) + 1e-3, 2 sqrt(k)): {scan_x_tilde(kappa):.3f}")
print(f"(it blows up as c -> -2 sqrt(k): with delta = 1e-5 it is {scan_x_tilde(kappa, 1e-5):.3f})")

chi = make_chi(1.0, 1.0, 0.0)
print(f"\nchi(1/2) = {float(chi(0.5)):.15f}; sinh(1/2)/sinh(1) = {math.sinh(0.5) / math.sinh(1):.15f}")
