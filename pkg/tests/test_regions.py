import numpy as np
import pytest

import logcrit as lc
from conftest import random_dirichlet_profile

# frozen constants for the (N=4, q=3, mu=1, nu=0, lambda=0, theta=-0.01)
# showcase configuration on the unit ball
SHOWCASE_ALPHA = 26.294271058568889
SHOWCASE_RHO = 10.260398641294911


def showcase_params(**over):
    kw = dict(N=4, q=3.0, mu=1.0, nu=0.0, lam=0.0, theta=-0.01, R=1.0)
    kw.update(over)
    return lc.ProblemParams(**kw)


def spectral_data(p):
    S = lc.best_sobolev_constant(p.N)
    lam1 = lc.bessel_lambda1(p.N, p.R)
    vol = lc.ball_volume(p.N, p.R)
    return S, lam1, vol


def test_showcase_membership_and_constants():
    p = showcase_params()
    rep = lc.region_membership(p, *spectral_data(p))
    assert rep.in_M1 and rep.in_M2
    assert not rep.in_M3 and not rep.in_M4
    assert rep.applicable_case == "nu_nonpositive"
    assert rep.alpha == pytest.approx(SHOWCASE_ALPHA, rel=1e-12)
    assert rep.rho == pytest.approx(SHOWCASE_RHO, rel=1e-12)
    # at lam = 0 the interval and exponential radii coincide
    assert rep.rho == pytest.approx(rep.S, rel=1e-12)
    assert rep.geometry_case in ("M1", "M2")


def test_kappa_reduces_to_inverse_mu():
    p = showcase_params(mu=2.5)
    assert lc.kappa(p) == pytest.approx(0.4, rel=1e-15)
    p2 = showcase_params(nu=1.0, q=3.0)
    # q/(q mu + 2* nu) with 2* = 4
    assert lc.kappa(p2) == pytest.approx(3.0 / 7.0, rel=1e-15)


def test_strong_log_coefficient_excludes_everything():
    p = showcase_params(theta=-1e6)
    rep = lc.region_membership(p, *spectral_data(p))
    assert not rep.any_membership()
    assert rep.alpha is None and rep.rho is None and rep.geometry_case is None
    with pytest.raises(ValueError, match="membership"):
        lc.geometry_constants(p, *spectral_data(p))


def test_near_eigenvalue_boundary_drops_out():
    S, lam1, vol = spectral_data(showcase_params())
    p = showcase_params(lam=lam1 - 1e-6, theta=-2.0)
    rep = lc.region_membership(p, S, lam1, vol)
    # the interval factor collapses and the exponential weight explodes
    assert not rep.in_M1 and not rep.in_M2


def test_interval_condition_gates_m1_and_m3():
    S, lam1, vol = spectral_data(showcase_params())
    rep = lc.region_membership(showcase_params(lam=-1.0), S, lam1, vol)
    assert not rep.in_M1 and rep.in_M2
    repp = lc.region_membership(showcase_params(nu=0.5, lam=-1.0), S, lam1, vol)
    assert not repp.in_M3 and repp.in_M4
    assert repp.applicable_case == "nu_positive"


def test_displays_are_continuous_across_nu_zero():
    rng = np.random.default_rng(21)
    for _ in range(50):
        N = int(rng.integers(3, 6))
        p = lc.ProblemParams(
            N=N,
            q=float(rng.uniform(2.05, 2 * N / (N - 2) - 0.05)),
            mu=float(rng.uniform(0.2, 3.0)),
            nu=0.0,
            lam=float(rng.uniform(-2.0, 2.0)),
            theta=float(-rng.uniform(0.01, 3.0)),
        )
        S, lam1, vol = spectral_data(p)
        assert lc.m3_test_value(p, S, lam1, vol, nu=0.0) == pytest.approx(
            lc.m1_test_value(p, S, lam1, vol), rel=1e-12
        )
        assert lc.m4_test_value(p, S, lam1, vol, nu=0.0) == pytest.approx(
            lc.m2_test_value(p, S, lam1, vol), rel=1e-12
        )


def test_alpha_recomposes_from_radius_and_weight():
    # interval case: alpha = (ell/N) rho^2 + (theta/2) e^{-2nu/(q theta)} |Omega|
    # exponential case: alpha = (1/N) rho^2 + (theta/2) e^{-2nu/(q theta)-lam/theta} |Omega|
    rng = np.random.default_rng(22)
    seen = {"M3": 0, "M4": 0}
    for _ in range(200):
        N = int(rng.integers(3, 6))
        p = lc.ProblemParams(
            N=N,
            q=float(rng.uniform(2.05, 2 * N / (N - 2) - 0.05)),
            mu=float(rng.uniform(0.2, 3.0)),
            nu=float(rng.uniform(0.01, 2.0)),
            lam=float(rng.uniform(-1.0, 5.0)),
            theta=float(-rng.uniform(0.005, 0.2)),
        )
        S, lam1, vol = spectral_data(p)
        rep = lc.region_membership(p, S, lam1, vol)
        if rep.geometry_case is None:
            continue
        seen[rep.geometry_case] += 1
        if rep.geometry_case == "M3":
            ell = (lam1 - p.lam) / lam1
            expected = (ell / N) * rep.rho**2 + 0.5 * p.theta * np.exp(
                -2.0 * p.nu / (p.q * p.theta)
            ) * vol
        else:
            expected = (1.0 / N) * rep.rho**2 + 0.5 * p.theta * np.exp(
                -2.0 * p.nu / (p.q * p.theta) - p.lam / p.theta
            ) * vol
        assert rep.alpha == pytest.approx(expected, rel=1e-12)
    assert seen["M3"] > 0 and seen["M4"] > 0


def test_radius_shrinks_as_subcritical_weight_grows():
    # theta = -0.1 keeps all three points inside M4; the exponential weight
    # e^{-2nu/(q theta)} grows so fast that larger nu leaves the region
    p0 = showcase_params(nu=0.1, theta=-0.1)
    S, lam1, vol = spectral_data(p0)
    radii = []
    for nu in (0.1, 0.3, 0.5):
        rep = lc.region_membership(
            showcase_params(nu=nu, theta=-0.1), S, lam1, vol
        )
        assert rep.in_M4
        radii.append(rep.rho)
    assert all(a > b for a, b in zip(radii, radii[1:]))


def test_level_floor_certifies_the_sphere():
    # 50 random profiles scaled onto the gradient sphere of radius rho must
    # sit at energy >= alpha (up to discretization slack)
    p = showcase_params()
    S, lam1, vol = spectral_data(p)
    alpha, rho = lc.geometry_constants(p, S, lam1, vol)
    g = lc.build_grid(p.N, p.R, 400)
    rng = np.random.default_rng(23)
    for _ in range(50):
        v = random_dirichlet_profile(g, rng)
        v *= rho / np.sqrt(g.h1_seminorm_sq(v))
        assert np.sqrt(g.h1_seminorm_sq(v)) == pytest.approx(rho, rel=1e-12)
        assert lc.energy_value(p, g, v) >= alpha - 1e-6 * abs(alpha)


def test_exponential_weight_overflow_is_membership_false():
    # large lambda with tiny |theta| drives e^{-lam/theta} past the float
    # range; the test value must saturate to -inf instead of raising
    p = showcase_params(lam=8.0)
    S, lam1, vol = spectral_data(p)
    val = lc.m2_test_value(p, S, lam1, vol)
    assert val == -np.inf
    rep = lc.region_membership(p, S, lam1, vol)
    assert not rep.in_M2


def test_spectral_inputs_must_be_positive():
    p = showcase_params()
    with pytest.raises(ValueError):
        lc.region_membership(p, -1.0, 10.0, 1.0)
    with pytest.raises(ValueError):
        lc.region_membership(p, 10.0, 0.0, 1.0)
