"""Extremal Sobolev profiles, their cut-offs, and norm-decay fits.

The scaled profile u_{1/n}(r) = [N(N-2)]^{(N-2)/4} (n/(1+n^2 r^2))^{(N-2)/2}
is the radial minimizer of the Sobolev quotient on R^N.  The cut-off
version U_n keeps u_{1/n} on [0, r0], tapers it linearly to 0 on
[r0, 2r0], and vanishes beyond.  As n grows U_n concentrates at the
origin with

    |grad U_n|_2^2   = S^{N/2} + O(n^{-(N-2)})
    |U_n|_{2s}^{2s}  = S^{N/2} + O(n^{-N})
    |U_n|_p^p        = O(n^{-min{(N-2)p/2, N-(N-2)p/2}})

up to ln n corrections at p = N/(N-2), and for p = 2 exactly at N = 4.
The decay fits below verify these rates empirically.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .grid import sphere_area

# Large n needs both fine grids (core width 1/n) and a wide window;
# this geometric ladder keeps every fitted slope within the 5% band
# when the sampling grid has M = CORE_NODES * max(n_list) cells.
DEFAULT_N_LIST = (128, 256, 512, 1024, 2048)
CORE_NODES = 16


@dataclass(frozen=True)
class BubbleSpec:
    N: int
    n: int
    r0: float

    def __post_init__(self):
        if self.N < 3:
            raise ValueError("dimension N must be >= 3")
        if self.n < 1:
            raise ValueError("scale n must be a positive integer")
        if not (self.r0 > 0):
            raise ValueError("truncation radius r0 must be positive")


def bubble_value(spec, r):
    """The untruncated profile u_{1/n} at radius r (scalar or array)."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius must be nonnegative")
    N, n = spec.N, spec.n
    amp = (N * (N - 2.0)) ** ((N - 2.0) / 4.0)
    val = amp * (n / (1.0 + (n * r) ** 2)) ** ((N - 2.0) / 2.0)
    if val.ndim == 0:
        return float(val)
    return val


def _taper(spec, r):
    """Cut-off factor: 1 on [0,r0], (2r0-r)/r0 on [r0,2r0], 0 beyond."""
    r = np.asarray(r, dtype=float)
    fac = np.clip((2.0 * spec.r0 - r) / spec.r0, 0.0, 1.0)
    return fac


def truncated_bubble(spec, g):
    """Sample the cut-off bubble U_n at the grid nodes.

    Requires 4 r0 <= R so the support sits well inside the domain.
    """
    if 4.0 * spec.r0 > g.R:
        raise ValueError("need 4*r0 <= R for the cut-off bubble")
    if spec.N != g.N:
        raise ValueError("bubble and grid dimensions differ")
    return bubble_value(spec, g.r) * _taper(spec, g.r)


# -- reference norms by adaptive quadrature ----------------------------
# Grid quadrature cannot resolve the O(n^{-N}) gap at large n (the core
# spans ~1/n), so the decay-rate checks integrate the closed form.


def bubble_h1_quadrature(spec):
    """|grad U_n|_2^2 by adaptive quadrature of the closed form."""
    N, n, r0 = spec.N, spec.n, spec.r0
    amp = (N * (N - 2.0)) ** ((N - 2.0) / 4.0)
    m = (N - 2.0) / 2.0

    def du_core(r):
        # d/dr u_{1/n}: amp n^m * d/dr (1+n^2r^2)^{-m}
        return amp * n**m * (-m) * (1.0 + (n * r) ** 2) ** (-m - 1.0) * 2.0 * n * n * r

    def u_val(r):
        return amp * (n / (1.0 + (n * r) ** 2)) ** m

    def integrand_core(r):
        return du_core(r) ** 2 * r ** (N - 1.0)

    def integrand_taper(r):
        t = (2.0 * r0 - r) / r0
        dt = -1.0 / r0
        du = dt * u_val(r) + t * du_core(r)
        return du**2 * r ** (N - 1.0)

    cut = min(1.0 / n, r0)
    a, _ = quad(integrand_core, 0.0, cut, epsabs=1e-15, epsrel=1e-13, limit=300)
    b = 0.0
    if cut < r0:
        b, _ = quad(integrand_core, cut, r0, epsabs=1e-15, epsrel=1e-13, limit=300)
    c, _ = quad(integrand_taper, r0, 2.0 * r0, epsabs=1e-15, epsrel=1e-13, limit=300)
    return sphere_area(N) * (a + b + c)


def bubble_lp_quadrature(spec, p):
    """int U_n^p over R^N by adaptive quadrature of the closed form."""
    if not (p > 0):
        raise ValueError("exponent p must be positive")
    N, n, r0 = spec.N, spec.n, spec.r0
    amp = (N * (N - 2.0)) ** ((N - 2.0) / 4.0)
    m = (N - 2.0) / 2.0

    def u_val(r):
        return amp * (n / (1.0 + (n * r) ** 2)) ** m

    def integrand_core(r):
        return u_val(r) ** p * r ** (N - 1.0)

    def integrand_taper(r):
        return (((2.0 * r0 - r) / r0) * u_val(r)) ** p * r ** (N - 1.0)

    cut = min(1.0 / n, r0)
    a, _ = quad(integrand_core, 0.0, cut, epsabs=1e-15, epsrel=1e-13, limit=300)
    b = 0.0
    if cut < r0:
        b, _ = quad(integrand_core, cut, r0, epsabs=1e-15, epsrel=1e-13, limit=300)
    c, _ = quad(integrand_taper, r0, 2.0 * r0, epsabs=1e-15, epsrel=1e-13, limit=300)
    return sphere_area(N) * (a + b + c)


# -- decay-rate fits ----------------------------------------------------


def fit_loglog(ns, vals):
    """Least-squares line of log(vals) against log(ns).

    Returns (slope, intercept, residual).  Rejects degenerate inputs.
    """
    ns = np.asarray(ns, dtype=float)
    vals = np.asarray(vals, dtype=float)
    if len(ns) < 2 or np.ptp(np.log(ns)) == 0:
        raise ValueError("degenerate fit abscissa")
    if np.any(vals <= 0):
        raise ValueError("fit needs positive values")
    x = np.log(ns)
    y = np.log(vals)
    A = np.vstack([x, np.ones_like(x)]).T
    coef, res, _, _ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.sqrt(res[0])) if res.size else 0.0
    return float(coef[0]), float(coef[1]), resid


def log_corrected(N, p):
    """Whether |U_n|_p^p carries a ln n factor: p = N/(N-2), or p = 2 at N = 4."""
    if abs(p - N / (N - 2.0)) < 1e-12:
        return True
    return False


def expected_lp_exponent(N, p):
    """-min{(N-2)p/2, N - (N-2)p/2}, the displayed decay rate of |U_n|_p^p."""
    return -min((N - 2.0) * p / 2.0, N - (N - 2.0) * p / 2.0)


def fit_norm_exponent(g, n_list, p, r0=None):
    """Fit the decay exponent of |U_n|_p^p sampled on the grid.

    n_list must be geometric with at least 5 entries; p in [1, 2*).
    For the ln-corrected cases the values are divided by ln n before
    fitting.  Returns (slope, intercept, residual).
    """
    n_list = [int(n) for n in n_list]
    if len(n_list) < 5:
        raise ValueError("need at least 5 scales for a stable fit")
    ratios = [n_list[i + 1] / n_list[i] for i in range(len(n_list) - 1)]
    if max(ratios) / min(ratios) > 1.01:
        raise ValueError("n_list must be geometric")
    ts = 2.0 * g.N / (g.N - 2.0)
    if not (1.0 <= p < ts):
        raise ValueError(f"exponent p must lie in [1, {ts:g})")
    if r0 is None:
        r0 = g.R / 4.0
    vals = []
    for n in n_list:
        u = truncated_bubble(BubbleSpec(N=g.N, n=n, r0=r0), g)
        v = g.lp_norm_p(u, p)
        if log_corrected(g.N, p):
            v /= np.log(n)
        vals.append(v)
    return fit_loglog(n_list, vals)


def fit_gap_exponent(N, n_list, r0, which):
    """Fit the decay exponent of |value - S^{N/2}| for the two critical norms.

    which = "grad" uses |grad U_n|_2^2, which = "crit" uses |U_n|_{2s}^{2s};
    both are evaluated by adaptive quadrature since the gaps sit far below
    grid resolution at large n.  Returns (slope, intercept, residual).
    """
    from .grid import sobolev_constant_closed_form

    target = sobolev_constant_closed_form(N) ** (N / 2.0)
    gaps = []
    for n in n_list:
        spec = BubbleSpec(N=N, n=int(n), r0=r0)
        if which == "grad":
            v = bubble_h1_quadrature(spec)
        elif which == "crit":
            v = bubble_lp_quadrature(spec, 2.0 * N / (N - 2.0))
        else:
            raise ValueError("which must be 'grad' or 'crit'")
        gaps.append(abs(v - target))
    return fit_loglog(n_list, gaps)


def fit_grid_for(R, n_list):
    """Mesh size that puts CORE_NODES cells across the smallest core width 1/n."""
    return int(np.ceil(CORE_NODES * R * max(int(n) for n in n_list)))
