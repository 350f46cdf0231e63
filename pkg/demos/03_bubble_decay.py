"""
Concentration rates of cut-off extremal profiles
================================================

The cut-off Sobolev extremals U_n concentrate at the origin as n grows.
Their gradient and critical norms approach the optimal constant at
explicit polynomial rates, and the subcritical norms decay with
exponents that depend on the dimension, including a ln n correction
exactly at p = N/(N-2).  All rates are recovered here by log-log fits.
"""

from logcrit import (
    DEFAULT_N_LIST,
    build_grid,
    expected_lp_exponent,
    fit_gap_exponent,
    fit_grid_for,
    fit_norm_exponent,
    log_corrected,
    sobolev_constant_closed_form,
)

# gap decay toward the optimal constant, by adaptive quadrature
print("decay of | |grad U_n|^2 - S^{N/2} |  and  | |U_n|_{2*}^{2*} - S^{N/2} |")
print(f"{'N':>3} {'S':>10} {'grad slope':>11} {'crit slope':>11}")
for N in (3, 4, 5):
    s_grad, _, _ = fit_gap_exponent(N, (16, 32, 64, 128, 256), 0.25, "grad")
    s_crit, _, _ = fit_gap_exponent(N, (16, 32, 64, 128, 256), 0.25, "crit")
    print(
        f"{N:>3} {sobolev_constant_closed_form(N):>10.5f} "
        f"{s_grad:>11.4f} {s_crit:>11.4f}"
    )
print("expected: grad ~ -(N-2), crit ~ -N")
print()

# subcritical L2 decay, sampled on a grid fine enough to resolve the core
print("decay of |U_n|_2^2 (grid quadrature)")
print(f"{'N':>3} {'fitted':>9} {'expected':>9} {'ln-corrected':>13}")
for N in (3, 4, 5):
    g = build_grid(N, 1.0, fit_grid_for(1.0, DEFAULT_N_LIST))
    slope, _, _ = fit_norm_exponent(g, DEFAULT_N_LIST, 2.0)
    print(
        f"{N:>3} {slope:>9.4f} {expected_lp_exponent(N, 2.0):>9.1f} "
        f"{str(log_corrected(N, 2.0)):>13}"
    )
print()
print("N = 4 carries the ln n factor: the fit divides it out first")
