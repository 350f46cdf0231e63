"""The energy functional, its weighted L^2 gradient, and the fiber profile.

For parameters (mu, nu, lambda, theta, q) the functional on H^1_0 of the
ball is

    I(u) = 1/2 |grad u|_2^2 - mu/2s int u+^{2s} - nu/q int u+^q
           - lam/2 int u+^2 - theta/2 int u+^2 (log u+^2 - 1)

with 2s = 2N/(N-2) the critical exponent.  Only the positive part u+
enters the potential terms.  The log integrand is extended by 0 at u = 0.
"""

from dataclasses import dataclass, field

import numpy as np

XLOG_CLAMP = 1e-300  # below this amplitude the log term is exactly 0


@dataclass(frozen=True)
class ProblemParams:
    """Equation parameters.  lam is the linear coefficient (JSON key "lambda")."""

    N: int
    q: float
    mu: float
    nu: float
    lam: float
    theta: float
    R: float = 1.0
    two_star: float = field(init=False)

    def __post_init__(self):
        if self.N < 3:
            raise ValueError("dimension N must be >= 3")
        ts = 2.0 * self.N / (self.N - 2.0)
        if not (self.mu > 0):
            raise ValueError("mu must be positive")
        if not (self.theta < 0):
            raise ValueError("theta must be negative")
        if not (2.0 < self.q < ts):
            raise ValueError(f"q must lie in (2, {ts:g}), got {self.q}")
        if not (self.R > 0):
            raise ValueError("R must be positive")
        object.__setattr__(self, "two_star", ts)


def safe_xlog(s):
    """s^2 log s^2 for amplitudes s >= 0, with the continuous extension 0 at 0.

    Scalar or array.  Amplitudes below 1e-300 are treated as 0 so squaring
    cannot produce underflow noise.  Minimum value -1/e at s = e^{-1/2}.
    """
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ValueError("safe_xlog takes nonnegative amplitudes")
    out = np.zeros_like(s)
    mask = s > XLOG_CLAMP
    sm = s[mask]
    out[mask] = sm * sm * 2.0 * np.log(sm)
    if out.ndim == 0:
        return float(out)
    return out


def _pos(u):
    return np.maximum(u, 0.0)


def energy_terms(p, g, u):
    """The five integral pieces of the functional, separately.

    Returns (kinetic, critical, subcritical, linear, logarithmic) such
    that the energy is kinetic - critical - subcritical - linear - log.
    """
    up = _pos(np.asarray(u, dtype=float))
    kin = 0.5 * g.h1_seminorm_sq(u)
    ts = p.two_star
    crit = (p.mu / ts) * g.integrate(up**ts)
    sub = (p.nu / p.q) * g.integrate(up**p.q)
    lin = (p.lam / 2.0) * g.integrate(up * up)
    logt = (p.theta / 2.0) * g.integrate(safe_xlog(up) - up * up)
    return kin, crit, sub, lin, logt


def energy_value(p, g, u):
    """I(u) by the grid quadrature."""
    kin, crit, sub, lin, logt = energy_terms(p, g, u)
    return kin - crit - sub - lin - logt


def energy_value_shifted(p, g, u):
    """Equivalent form absorbing the linear term into the log term.

    I(u) = 1/2|grad u|^2 - mu/2s int u+^{2s} - nu/q int u+^q
           - theta/2 int u+^2 (log u+^2 + lam/theta - 1).

    Agrees with energy_value identically; kept as a cross-check view.
    """
    up = _pos(np.asarray(u, dtype=float))
    ts = p.two_star
    val = 0.5 * g.h1_seminorm_sq(u)
    val -= (p.mu / ts) * g.integrate(up**ts)
    val -= (p.nu / p.q) * g.integrate(up**p.q)
    val -= (p.theta / 2.0) * g.integrate(
        safe_xlog(up) + (p.lam / p.theta - 1.0) * up * up
    )
    return val


def source_term(p, u):
    """f(u) = mu u+^{2s-1} + nu u+^{q-1} + lam u+ + theta u+ log u+^2, nodewise.

    This is the nonlinearity whose zero-level set with -Delta u gives the
    Euler-Lagrange equation.  The log factor uses the same continuous
    extension as safe_xlog (u log u^2 -> 0 as u -> 0+).
    """
    up = _pos(np.asarray(u, dtype=float))
    out = p.mu * up ** (p.two_star - 1.0) + p.nu * up ** (p.q - 1.0) + p.lam * up
    mask = up > XLOG_CLAMP
    um = up[mask]
    out[mask] += p.theta * um * 2.0 * np.log(um)
    return out


def source_derivative(p, u, clamp=-1e6):
    """f'(u) nodewise, for the Newton linearization.

    f'(u) = mu(2s-1)u^{2s-2} + nu(q-1)u^{q-2} + lam + theta(log u^2 + 2)
    on {u > 0} and 0 on {u <= 0}.  The second derivative of s^2 log s^2
    is 2 log s^2 + 6, divergent at 0; that factor is clamped below at
    `clamp` so the Jacobian diagonal stays bounded on near-zero nodes.
    """
    up = _pos(np.asarray(u, dtype=float))
    out = np.zeros_like(up)
    mask = up > XLOG_CLAMP
    um = up[mask]
    L = np.maximum(4.0 * np.log(um) + 6.0, clamp)  # 2 log u^2 + 6
    out[mask] = (
        p.mu * (p.two_star - 1.0) * um ** (p.two_star - 2.0)
        + p.nu * (p.q - 1.0) * um ** (p.q - 2.0)
        + p.lam
        + p.theta * (0.5 * L - 1.0)
    )
    return out


def gradient_field(p, g, u):
    """Weighted-L^2 gradient of the energy: A u - f(u) at the nodes.

    <gradient_field(u), v>_w is the directional derivative of energy_value
    at u in direction v.
    """
    u = np.asarray(u, dtype=float)
    return g.apply_neg_laplacian(u) - source_term(p, u)


@dataclass(frozen=True)
class FiberProfile:
    """Samples of t -> I(t u) and the sign-change count of its derivative."""

    t: np.ndarray
    values: np.ndarray
    sign_changes: int


def g_profile(p, g, u, t_max=2.0, samples=256):
    """Sample the fiber map g(t) = I(t u) on (0, t_max].

    Counts sign changes of the centered finite-difference derivative.
    The fiber of a critical point has at most two extreme points, so the
    count is a cheap structural check.
    """
    if not (t_max > 1.0):
        raise ValueError("t_max must exceed 1")
    if samples < 64:
        raise ValueError("need at least 64 samples")
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0):
        raise ValueError("fiber profile expects a positive function")
    ts = np.linspace(t_max / samples, t_max, samples)
    vals = np.array([energy_value(p, g, t * u) for t in ts])
    dv = np.diff(vals)
    signs = np.sign(dv)
    signs = signs[signs != 0]
    changes = int(np.sum(signs[1:] != signs[:-1]))
    return FiberProfile(t=ts, values=vals, sign_changes=changes)
