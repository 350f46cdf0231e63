"""Empirical certification of the scalar expansion inequalities.

Three families of pointwise bounds control how the energy of u0 + tU_n
splits into the energy of u0, the bubble terms, and remainders:

    g(t,y)    = (t+y)^2 ln (t+y)^2 - t^2 ln t^2 - 2ty(ln t^2 + 1)
    f(p,t,y)  = (t+y)^p - t^p - y^p - p t^{p-1} y
    f1(m,t,y) = (t+y)^m - t^m - m t^{m-1} y

for t in [C1, C2] and y > 0.  The finders scan a box and return the
smallest constants certifying the bounds there, with 10% headroom so a
re-scan at finer resolution still passes.  All three functions are
evaluated in cancellation-stable forms (log1p/expm1) because the
interesting margins sit at y several orders below t.
"""

from dataclasses import dataclass

import numpy as np

HEADROOM = 1.1
Y_GRID_FLOOR = 1e-6


@dataclass(frozen=True)
class BoxSpec:
    """Scan box [C1, C2] x (0, y_max] with a geometric y grid from 1e-6."""

    C1: float
    C2: float
    y_max: float = 1e3
    t_samples: int = 1000
    y_samples: int = 1000

    def __post_init__(self):
        if not (0 < self.C1 < self.C2):
            raise ValueError("need 0 < C1 < C2")
        if not (self.y_max > 0):
            raise ValueError("y_max must be positive")
        if self.t_samples * self.y_samples < 1000:
            raise ValueError("need at least 1000 grid points in total")

    def t_grid(self):
        return np.linspace(self.C1, self.C2, self.t_samples)

    def y_grid(self):
        lo = min(Y_GRID_FLOOR, self.y_max / 10.0)
        return np.geomspace(lo, self.y_max, self.y_samples)


# -- stable scalar forms ------------------------------------------------


def g_term(t, y):
    """(t+y)^2 ln(t+y)^2 - t^2 ln t^2 - 2ty(ln t^2 + 1), stable for y << t.

    Rewrite with ln(t+y)^2 = ln t^2 + 2 log1p(y/t):
    g = y^2 ln t^2 + 2 (t+y)^2 log1p(y/t) - 2ty.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    return y * y * 2.0 * np.log(t) + 2.0 * (t + y) ** 2 * np.log1p(y / t) - 2.0 * t * y


def f_term(p, t, y):
    """(t+y)^p - t^p - y^p - p t^{p-1} y via expm1(p log1p(y/t))."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    return t**p * np.expm1(p * np.log1p(y / t)) - p * t ** (p - 1.0) * y - y**p


def f1_term(m, t, y):
    """(t+y)^m - t^m - m t^{m-1} y via expm1(m log1p(y/t))."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    return t**m * np.expm1(m * np.log1p(y / t)) - m * t ** (m - 1.0) * y


def pointwise_log_bound_margin(s, C1):
    """s^2 log s^2 + C1 s^2 + e^{-1-C1}, nonnegative for all s >= 0.

    The integrand-level inequality that bounds the logarithmic part of
    the energy from below by -e^{-1-C1} |Omega|.
    """
    from .energy import safe_xlog

    return safe_xlog(s) + C1 * np.asarray(s, dtype=float) ** 2 + np.exp(-1.0 - C1)


# -- constant finders ----------------------------------------------------


def scan_sup_A1(box, eps):
    """Supremum of (g - y^{2+eps}) / y^2 over the box grid."""
    if not (eps > 0):
        raise ValueError("eps must be positive")
    t = box.t_grid()[:, None]
    y = box.y_grid()[None, :]
    ratio = (g_term(t, y) - y ** (2.0 + eps)) / (y * y)
    return float(np.max(ratio))


def find_A1(box, eps):
    """Smallest A1 (with headroom) certifying g(t,y) <= y^{2+eps} + A1 y^2 on the box.

    The small-y profile of g/y^2 approaches ln t^2 + 3, so A1 is at least
    3 + ln C2^2 once the y grid reaches far enough down.
    """
    return HEADROOM * max(scan_sup_A1(box, eps), 0.0)


def scan_sup_f(p, box, lower=None):
    """Suprema behind the two f bounds: (lower-bound sup or None, |f| sup)."""
    if not (p > 2):
        raise ValueError("exponent p must exceed 2")
    if lower is None:
        lower = p > 3
    if lower and not (p > 3):
        raise ValueError("lower bound certificate requires p > 3")
    t = box.t_grid()[:, None]
    y = box.y_grid()[None, :]
    f = f_term(p, t, y)
    sup_low = None
    if lower:
        ratio = (0.5 * p * box.C1 * y ** (p - 1.0) - f) / (y * y)
        sup_low = float(np.max(ratio))
    ratio_hat = (np.abs(f) - 0.5 * p * p * box.C2 ** (p - 2.0) * y * y) / (
        box.C2 * y ** (p - 1.0)
    )
    return sup_low, float(np.max(ratio_hat))


def find_f_constants(p, box, lower=None):
    """Constants (A2, A2_hat) for the two bounds on f(p,t,y) over the box.

        f  >= (p/2) C1 y^{p-1} - A2 y^2        (needs p > 3)
        |f| <= (p^2/2) C2^{p-2} y^2 + A2_hat C2 y^{p-1}

    lower=None computes A2 only when p > 3 (returned as None otherwise);
    lower=True insists on it and rejects p <= 3, where no y^2 correction
    can rescue the y^{p-1} lower bound near y = 0.
    """
    sup_low, sup_hat = scan_sup_f(p, box, lower)
    A2 = None if sup_low is None else HEADROOM * max(sup_low, 0.0)
    return A2, HEADROOM * max(sup_hat, 0.0)


def scan_sup_A3(m, box):
    """Supremum of both sandwich defects for f1, normalized by y^2."""
    if not (m > 2):
        raise ValueError("exponent m must exceed 2")
    t = box.t_grid()[:, None]
    y = box.y_grid()[None, :]
    f1 = f1_term(m, t, y)
    upper = (f1 - 2.0 * y**m) / (y * y)
    low = (0.5 * y**m - f1) / (y * y)
    return float(max(np.max(upper), np.max(low)))


def find_A3(m, box):
    """Smallest A3 (with headroom) for 2 y^m + A3 y^2 >= f1 >= y^m/2 - A3 y^2."""
    return HEADROOM * max(scan_sup_A3(m, box), 0.0)


# -- transfer to the solution-plus-bubble decomposition ------------------


@dataclass(frozen=True)
class CorollaryVerdict:
    ok: bool
    worst_margin: float
    worst_bound: str
    L1: float
    L2: float
    B1: float
    B2: float
    B3: float
    margins: dict


def check_corollary(p, u0, bubbles, t_n, eps=None, box_samples=400):
    """Verify the four pointwise bounds for g, f, f1 at y = t_n U_n, t = u0.

    The support mask comes from the bubbles themselves (they vanish at
    and beyond the taper edge), so L1/L2 are the extremes of u0 on the
    union of supports.  Constants B1, B2, B3 come from the scalar
    finders over the box [L1, L2].  Bounds:

        g(u0, y)        <=  y^{2+eps} + B1 y^2
        f(2s, u0, y)    >=  (2s/2) L1 y^{2s-1} - B2 y^2     (only 2s > 3)
        |f(2s, u0, y)|  <=  (2s^2/2) L2^{2s-2} y^2 + B2 L2 y^{2s-1}
        2 y^q + B3 y^2  >=  f1(q, u0, y)  >=  y^q/2 - B3 y^2

    Margins are normalized by y^2 (both sides scale like y^2 near the
    taper edge), so they stay bounded away from 0 as t_n shrinks.
    Returns the worst margin over all nodes, scales, and bounds.
    """
    u0 = np.asarray(u0, dtype=float)
    if np.any(u0 <= 0):
        raise ValueError("u0 must be positive everywhere")
    bubbles = [np.asarray(b, dtype=float) for b in bubbles]
    t_n = [float(t) for t in t_n]
    if len(bubbles) != len(t_n):
        raise ValueError("need one scale factor per bubble")
    if eps is None:
        eps = p.q - 2.0

    support = np.zeros(u0.shape, dtype=bool)
    for b in bubbles:
        support |= b > 0
    if not np.any(support):
        raise ValueError("all bubbles vanish identically")
    L1 = float(np.min(u0[support]))
    L2 = float(np.max(u0[support]))
    if L1 == L2:
        L2 = L1 * (1.0 + 1e-12)

    y_top = max(t * float(np.max(b)) for t, b in zip(t_n, bubbles))
    box = BoxSpec(
        C1=L1,
        C2=L2,
        y_max=max(1.05 * y_top, 1e-3),
        t_samples=box_samples,
        y_samples=box_samples,
    )
    ts = p.two_star
    B1 = find_A1(box, eps)
    A2, A2_hat = find_f_constants(ts, box)
    B2 = max(A2 if A2 is not None else 0.0, A2_hat)
    B3 = find_A3(p.q, box)

    margins = {
        "g_upper": np.inf,
        "f_lower": np.inf,
        "f_abs": np.inf,
        "f1_upper": np.inf,
        "f1_lower": np.inf,
    }
    for t_fac, b in zip(t_n, bubbles):
        mask = b > 0
        t = u0[mask]
        y = t_fac * b[mask]
        y2 = y * y
        gval = g_term(t, y)
        fval = f_term(ts, t, y)
        f1val = f1_term(p.q, t, y)
        margins["g_upper"] = min(
            margins["g_upper"],
            float(np.min((y ** (2.0 + eps) + B1 * y2 - gval) / y2)),
        )
        if ts > 3:
            margins["f_lower"] = min(
                margins["f_lower"],
                float(
                    np.min((fval - 0.5 * ts * L1 * y ** (ts - 1.0) + B2 * y2) / y2)
                ),
            )
        margins["f_abs"] = min(
            margins["f_abs"],
            float(
                np.min(
                    (
                        0.5 * ts * ts * L2 ** (ts - 2.0) * y2
                        + B2 * L2 * y ** (ts - 1.0)
                        - np.abs(fval)
                    )
                    / y2
                )
            ),
        )
        margins["f1_upper"] = min(
            margins["f1_upper"],
            float(np.min((2.0 * y**p.q + B3 * y2 - f1val) / y2)),
        )
        margins["f1_lower"] = min(
            margins["f1_lower"],
            float(np.min((f1val - 0.5 * y**p.q + B3 * y2) / y2)),
        )
    if ts <= 3:
        del margins["f_lower"]  # no lower-bound certificate in high dimension

    worst_bound = min(margins, key=lambda k: margins[k])
    worst = margins[worst_bound]
    return CorollaryVerdict(
        ok=bool(worst >= 0.0),
        worst_margin=float(worst),
        worst_bound=worst_bound,
        L1=L1,
        L2=L2,
        B1=B1,
        B2=B2,
        B3=B3,
        margins=margins,
    )
