import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import logcrit as lc

# first Dirichlet eigenvalues of the unit ball, from Bessel zeros
LAMBDA1_REF = {3: np.pi**2, 4: 14.681970642123893, 5: 20.190728556426629}
# closed-form sharp constants pi N (N-2) (Gamma(N/2)/Gamma(N))^{2/N}
SOBOLEV_REF = {3: 5.47790408953, 4: 10.26039864130, 5: 14.81191172001}


def test_sphere_area_and_volume():
    assert lc.sphere_area(3) == pytest.approx(4 * np.pi, rel=1e-14)
    assert lc.sphere_area(4) == pytest.approx(2 * np.pi**2, rel=1e-14)
    assert lc.ball_volume(3, 1.0) == pytest.approx(4 * np.pi / 3, rel=1e-14)
    assert lc.ball_volume(4, 1.0) == pytest.approx(np.pi**2 / 2, rel=1e-14)
    assert lc.ball_volume(3, 2.0) == pytest.approx(8 * 4 * np.pi / 3, rel=1e-14)


def test_weight_sum_is_ball_volume():
    g = lc.build_grid(3, 1.0, 200)
    vol = lc.ball_volume(3, 1.0)
    assert g.integrate(np.ones(g.M)) == pytest.approx(vol, rel=1e-3)


def test_weight_sum_second_order():
    vol = lc.ball_volume(3, 1.0)
    errs = [
        abs(lc.build_grid(3, 1.0, M).integrate(np.ones(M)) - vol)
        for M in (200, 400, 800)
    ]
    assert 3.5 <= errs[0] / errs[1] <= 4.5
    assert 3.5 <= errs[1] / errs[2] <= 4.5


def test_polynomial_quadrature_oracles():
    g = lc.build_grid(3, 1.0, 512)
    u = 1.0 - g.r**2
    # int |grad(1-r^2)|^2 = 16 pi/5 and int (1-r^2)^2 = 32 pi/105 on B(0,1)
    assert g.h1_seminorm_sq(u) == pytest.approx(16 * np.pi / 5, rel=1e-4)
    assert g.l2_norm_sq(u) == pytest.approx(32 * np.pi / 105, rel=1e-5)
    assert g.lp_norm_p(u, 2.0) == pytest.approx(g.l2_norm_sq(u), rel=1e-13)


def test_operator_symmetry_in_weighted_inner_product():
    g = lc.build_grid(4, 1.0, 256)
    rng = np.random.default_rng(3)
    for _ in range(10):
        u = rng.standard_normal(g.M)
        v = rng.standard_normal(g.M)
        a = g.dot(u, g.apply_neg_laplacian(v))
        b = g.dot(v, g.apply_neg_laplacian(u))
        assert abs(a - b) <= 1e-10 * max(1.0, abs(a))


def test_quadratic_form_matches_seminorm():
    g = lc.build_grid(3, 1.0, 256)
    rng = np.random.default_rng(4)
    u = rng.standard_normal(g.M)
    assert g.dot(u, g.apply_neg_laplacian(u)) == pytest.approx(
        g.h1_seminorm_sq(u), rel=1e-12
    )


def test_stencil_consistency_on_parabola():
    # -Lap(1 - r^2) = 2N; pointwise truncation error decays like 1/i^2,
    # so check away from the origin; the last node carries the folded
    # boundary weight and is excluded (variational, not pointwise, row)
    for N in (3, 4, 5):
        g = lc.build_grid(N, 1.0, 512)
        out = g.apply_neg_laplacian(1.0 - g.r**2)
        inner = out[32:-1]
        assert np.max(np.abs(inner - 2.0 * N)) / (2.0 * N) < 1e-3


def test_solve_inverts_apply():
    g = lc.build_grid(5, 1.0, 128)
    rng = np.random.default_rng(5)
    u = rng.standard_normal(g.M)
    assert np.allclose(g.solve_neg_laplacian(g.apply_neg_laplacian(u)), u, atol=1e-9)


@pytest.mark.parametrize("N", [3, 4, 5])
def test_bessel_oracle(N):
    assert lc.bessel_lambda1(N, 1.0) == pytest.approx(LAMBDA1_REF[N], rel=1e-12)
    assert lc.bessel_lambda1(N, 2.0) == pytest.approx(LAMBDA1_REF[N] / 4.0, rel=1e-12)


@pytest.mark.parametrize("N", [3, 4, 5])
def test_principal_eigenpair_matches_bessel(N):
    g = lc.build_grid(N, 1.0, 800)
    lam, phi = lc.principal_eigenpair(g)
    assert lam == pytest.approx(LAMBDA1_REF[N], rel=1e-3)
    assert np.all(phi > 0)
    assert g.l2_norm_sq(phi) == pytest.approx(1.0, rel=1e-12)
    # eigen-residual in the weighted norm (dominated by O(h^2) truncation)
    res = g.apply_neg_laplacian(phi) - lam * phi
    assert np.sqrt(g.l2_norm_sq(res)) < 1e-5 * lam


def test_eigenvalue_scales_with_radius():
    lam_1, _ = lc.principal_eigenpair(lc.build_grid(3, 1.0, 400))
    lam_2, _ = lc.principal_eigenpair(lc.build_grid(3, 2.0, 400))
    assert lam_2 == pytest.approx(lam_1 / 4.0, rel=1e-10)


@pytest.mark.parametrize("N", [3, 4, 5])
def test_sobolev_constant_matches_closed_form(N):
    S = lc.best_sobolev_constant(N)
    assert S == pytest.approx(lc.sobolev_constant_closed_form(N), rel=1e-12)
    assert S == pytest.approx(SOBOLEV_REF[N], rel=1e-10)


def test_poincare_and_sobolev_bounds_hold_discretely():
    g = lc.build_grid(3, 1.0, 400)
    lam1, _ = lc.principal_eigenpair(g)
    S = lc.best_sobolev_constant(3)
    ts = 6.0
    rng = np.random.default_rng(11)
    for _ in range(25):
        # smooth random Dirichlet profiles: random combination of parabola bumps
        u = (1.0 - g.r**2) * (0.2 + np.abs(rng.standard_normal()) + g.r * rng.standard_normal())
        h1 = g.h1_seminorm_sq(u)
        assert h1 >= lam1 * g.lp_norm_p(u, 2.0) * (1.0 - 1e-10)
        assert h1 >= 0.95 * S * g.lp_norm_p(u, ts) ** (2.0 / ts)


def test_csv_round_trip_is_bit_exact(tmp_path):
    g = lc.build_grid(3, 1.0, 64)
    rng = np.random.default_rng(6)
    vals = rng.standard_normal(g.M) * np.pi
    path = tmp_path / "profile.csv"
    lc.save_grid_function(path, g, vals)
    back = lc.load_grid_function(path, g)
    assert np.array_equal(back, vals)
    r, v = lc.load_grid_function(path)
    assert np.array_equal(r, g.r) and np.array_equal(v, vals)


def test_csv_rejects_mismatched_grid(tmp_path):
    g = lc.build_grid(3, 1.0, 64)
    path = tmp_path / "profile.csv"
    lc.save_grid_function(path, g, np.zeros(64))
    with pytest.raises(ValueError):
        lc.load_grid_function(path, lc.build_grid(3, 1.0, 128))


def test_constructor_rejections():
    with pytest.raises(ValueError):
        lc.build_grid(2, 1.0, 64)
    with pytest.raises(ValueError):
        lc.build_grid(3, 0.0, 64)
    with pytest.raises(ValueError):
        lc.build_grid(3, 1.0, 7)
    g = lc.build_grid(3, 1.0, 64)
    with pytest.raises(ValueError):
        g.integrate(np.ones(65))
    with pytest.raises(ValueError):
        g.l2_norm_sq(np.full(64, np.nan))
    with pytest.raises(ValueError):
        g.lp_norm_p(np.ones(64), 0.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=8, max_value=300), st.integers(min_value=3, max_value=6))
def test_weights_positive_and_faces_monotone(M, N):
    g = lc.build_grid(N, 1.0, M)
    assert np.all(g.w > 0)
    assert np.all(g.fw > 0)
    assert np.all(np.diff(g.fw) > 0)


@settings(max_examples=20, deadline=None)
@given(st.floats(min_value=0.3, max_value=5.0))
def test_integrate_is_linear_in_radius_scaling(R):
    # int_B(0,R) 1 = |B| for every radius
    g = lc.build_grid(3, R, 400)
    assert g.integrate(np.ones(g.M)) == pytest.approx(
        lc.ball_volume(3, R), rel=1e-3
    )
