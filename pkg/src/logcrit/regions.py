"""Parameter-region membership tests and the minimax geometry constants.

Four admissible regions, each the positivity set of an explicit expression
in (lambda, mu, nu, theta) built from the Sobolev constant S, the principal
eigenvalue lambda1 and the domain volume.  M1/M2 apply when nu <= 0, M3/M4
when nu > 0; M1/M3 additionally need 0 <= lambda < lambda1.  The same
expressions double as the level floor alpha on the sphere of radius rho in
the gradient norm.
"""

from dataclasses import dataclass
from math import exp


@dataclass(frozen=True)
class RegionReport:
    in_M1: bool
    in_M2: bool
    in_M3: bool
    in_M4: bool
    S: float
    lambda1: float
    volume: float
    alpha: float | None
    rho: float | None
    applicable_case: str  # nu_nonpositive | nu_positive
    geometry_case: str | None  # which display produced (alpha, rho)

    def any_membership(self):
        return self.in_M1 or self.in_M2 or self.in_M3 or self.in_M4


def kappa(p, nu=None):
    """q/(q mu + 2* nu); reduces to 1/mu at nu = 0."""
    if nu is None:
        nu = p.nu
    return p.q / (p.q * p.mu + p.two_star * nu)


def _exp_sat(x):
    # e^x saturating to inf; the callers multiply by theta/2 < 0, so a
    # saturated value just drives the test value to -inf (membership false)
    try:
        return exp(x)
    except OverflowError:
        return float("inf")


# -- the four displayed test values (sign > 0 is membership) -----------


def m1_test_value(p, S, lambda1, volume):
    """(mu/N)((lambda1-lam)/(mu lambda1))^{N/2} S^{N/2} + (theta/2)|Omega|."""
    N = p.N
    return (p.mu / N) * ((lambda1 - p.lam) / (p.mu * lambda1)) ** (N / 2.0) * S ** (
        N / 2.0
    ) + 0.5 * p.theta * volume


def m2_test_value(p, S, lambda1, volume):
    """(1/N) mu^{-(N-2)/2} S^{N/2} + (theta/2) e^{-lam/theta} |Omega|."""
    N = p.N
    return (1.0 / N) * p.mu ** (-(N - 2) / 2.0) * S ** (N / 2.0) + 0.5 * p.theta * _exp_sat(
        -p.lam / p.theta
    ) * volume


def m3_test_value(p, S, lambda1, volume, nu=None):
    """(1/N) ell^{N/2} kappa^{(N-2)/2} S^{N/2} + (theta/2) e^{-2nu/(q theta)} |Omega|.

    ell = (lambda1 - lam)/lambda1.  Also the level floor alpha of the
    spectral-interval geometry case.
    """
    if nu is None:
        nu = p.nu
    N = p.N
    ell = (lambda1 - p.lam) / lambda1
    kap = kappa(p, nu)
    return (1.0 / N) * ell ** (N / 2.0) * kap ** ((N - 2) / 2.0) * S ** (
        N / 2.0
    ) + 0.5 * p.theta * _exp_sat(-2.0 * nu / (p.q * p.theta)) * volume


def m4_test_value(p, S, lambda1, volume, nu=None):
    """(1/N) kappa^{(N-2)/2} S^{N/2} + (theta/2) e^{-2nu/(q theta)-lam/theta} |Omega|.

    Also the level floor alpha of the lambda-free geometry case.
    """
    if nu is None:
        nu = p.nu
    N = p.N
    kap = kappa(p, nu)
    return (1.0 / N) * kap ** ((N - 2) / 2.0) * S ** (N / 2.0) + 0.5 * p.theta * _exp_sat(
        -2.0 * nu / (p.q * p.theta) - p.lam / p.theta
    ) * volume


def _rho_interval(p, S, lambda1, nu):
    ell = (lambda1 - p.lam) / lambda1
    return (ell * kappa(p, nu)) ** ((p.N - 2) / 4.0) * S ** (p.N / 4.0)


def _rho_exponential(p, S, nu):
    return kappa(p, nu) ** ((p.N - 2) / 4.0) * S ** (p.N / 4.0)


def region_membership(p, S, lambda1, volume):
    """Evaluate the applicable membership tests and the geometry constants.

    Booleans are literal sign tests of the displayed expressions; M1/M2
    are tested only when nu <= 0 and M3/M4 only when nu > 0.  When a
    membership holds, (alpha, rho) come from the geometry display of the
    member region; with several members the larger rho wins, so the
    minimizer search gets the wider ball.  geometry_case records the
    winner.  For nu <= 0 the geometry formulas are those of the nu > 0
    cases evaluated at nu = 0: dropping a nonpositive nu-term only lowers
    the energy, so the nu = 0 floor still certifies the sphere.
    """
    if not (S > 0 and lambda1 > 0 and volume > 0):
        raise ValueError("S, lambda1, volume must be positive")
    nu_pos = p.nu > 0
    lam_in_interval = 0.0 <= p.lam < lambda1

    in_M1 = in_M2 = in_M3 = in_M4 = False
    candidates = []  # (rho, alpha, name)
    if nu_pos:
        if lam_in_interval:
            a = m3_test_value(p, S, lambda1, volume)
            in_M3 = a > 0
            if in_M3:
                candidates.append((_rho_interval(p, S, lambda1, p.nu), a, "M3"))
        a = m4_test_value(p, S, lambda1, volume)
        in_M4 = a > 0
        if in_M4:
            candidates.append((_rho_exponential(p, S, p.nu), a, "M4"))
    else:
        if lam_in_interval:
            in_M1 = m1_test_value(p, S, lambda1, volume) > 0
            if in_M1:
                a = m3_test_value(p, S, lambda1, volume, nu=0.0)
                candidates.append((_rho_interval(p, S, lambda1, 0.0), a, "M1"))
        in_M2 = m2_test_value(p, S, lambda1, volume) > 0
        if in_M2:
            a = m4_test_value(p, S, lambda1, volume, nu=0.0)
            candidates.append((_rho_exponential(p, S, 0.0), a, "M2"))

    if candidates:
        rho, alpha, which = max(candidates, key=lambda c: c[0])
    else:
        rho = alpha = which = None
    return RegionReport(
        in_M1=in_M1,
        in_M2=in_M2,
        in_M3=in_M3,
        in_M4=in_M4,
        S=float(S),
        lambda1=float(lambda1),
        volume=float(volume),
        alpha=None if alpha is None else float(alpha),
        rho=None if rho is None else float(rho),
        applicable_case="nu_positive" if nu_pos else "nu_nonpositive",
        geometry_case=which,
    )


def geometry_constants(p, S, lambda1, volume):
    """(alpha, rho) for the admissible parameter set; error when none holds."""
    rep = region_membership(p, S, lambda1, volume)
    if not rep.any_membership():
        raise ValueError("no region membership holds; geometry undefined")
    return rep.alpha, rep.rho
