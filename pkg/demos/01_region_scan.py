"""
Mapping the admissible parameter regions
========================================

The two-solution structure only exists on an explicit region of the
(lambda, nu, theta) space.  This script evaluates the four membership
tests on a theta ramp and shows where the geometry constants
(alpha, rho) come from.
"""

import numpy as np

from logcrit import (
    ProblemParams,
    ball_volume,
    bessel_lambda1,
    best_sobolev_constant,
    region_membership,
)

N = 4
S = best_sobolev_constant(N)
lam1 = bessel_lambda1(N, 1.0)
vol = ball_volume(N, 1.0)
print(f"N = {N}:  S = {S:.6f},  lambda1 = {lam1:.6f},  |Omega| = {vol:.6f}")
print()

# sweep the log coefficient at nu = 0: weak theta keeps both nu <= 0
# memberships, strong theta kills them
print(f"{'theta':>10} {'in_M1':>6} {'in_M2':>6} {'alpha':>12} {'rho':>10}")
for theta in (-0.01, -0.1, -1.0, -5.0, -20.0):
    p = ProblemParams(N=N, q=3.0, mu=1.0, nu=0.0, lam=0.0, theta=theta)
    rep = region_membership(p, S, lam1, vol)
    alpha = "-" if rep.alpha is None else f"{rep.alpha:12.6f}"
    rho = "-" if rep.rho is None else f"{rep.rho:10.6f}"
    print(f"{theta:>10} {str(rep.in_M1):>6} {str(rep.in_M2):>6} {alpha:>12} {rho:>10}")

print()

# with nu > 0 the exponential weight e^{-2nu/(q theta)} takes over; the
# region boundary in nu is sharp
print(f"{'nu':>6} {'in_M3':>6} {'in_M4':>6} {'geometry':>9} {'rho':>10}")
for nu in np.arange(0.1, 0.9, 0.1):
    p = ProblemParams(N=N, q=3.0, mu=1.0, nu=float(nu), lam=0.0, theta=-0.1)
    rep = region_membership(p, S, lam1, vol)
    rho = "-" if rep.rho is None else f"{rep.rho:10.6f}"
    case = rep.geometry_case or "-"
    print(f"{nu:>6.1f} {str(rep.in_M3):>6} {str(rep.in_M4):>6} {case:>9} {rho:>10}")

print()
print("the search ball shrinks as nu grows, then the region closes entirely")
