"""Two-solution pipeline: ball-constrained minimization and path deformation.

The search runs in the gradient norm ||u||^2 = int |grad u|^2.  Stage one
minimizes the energy over the ball {||u|| <= rho(1 - 1e-3)} by projected,
preconditioned descent started at t0*phi1 with I(t0 phi1) < 0, then
polishes with damped Newton.  Stage two deforms the segment from u0 to a
far endpoint u0 + T U_n downhill until its crest stops moving, then hands
the crest node to Newton and validates the saddle.

Gradient and residual sizes are measured in the dual norm
sqrt(<v, A^{-1} v>_w) of the discrete operator A = -Laplacian: it is the
norm in which a first-order step predicts its own energy decrease, and it
is mesh-robust (a plain weighted L^2 residual has an M^2 eps floor).
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .bubbles import truncated_bubble
from .energy import XLOG_CLAMP, energy_value, gradient_field, g_profile, source_derivative
from .grid import ball_volume, best_sobolev_constant, principal_eigenpair
from .regions import region_membership

BALL_MARGIN = 1e-3  # constraint radius rho*(1 - BALL_MARGIN)
ARMIJO = 1e-4


class UsableRegionError(RuntimeError):
    """Raised when no negative-energy starting scale exists on this grid."""


class PathCollapseError(RuntimeError):
    """Raised when the path crest falls to the endpoint levels."""


class ConcentrationStallError(RuntimeError):
    """Raised when deformation stalls and Newton finds no nearby saddle."""


# -- norms and linear algebra -------------------------------------------


def _h1_norm(g, u):
    return np.sqrt(g.h1_seminorm_sq(u))


def _dual_norm_sq(g, band, field):
    """<field, A^{-1} field>_w, the squared dual norm of a gradient field."""
    pre = solve_banded((1, 1), band, field)
    return max(float(np.dot(g.w, field * pre)), 0.0), pre


def _project_ball(g, u, radius):
    nrm = _h1_norm(g, u)
    if nrm > radius:
        return u * (radius / nrm)
    return u


# -- stage one: minimizer in the ball ------------------------------------


def _negative_start(p, g, phi1, lam1, radius):
    """Scale t0 with I(t0 phi1) < 0 and t0 ||phi1|| inside the ball.

    Halving scan.  When theta is small the required t0 is e^{-lambda1/|theta|}
    -ish; if t0 underflows before the energy goes negative, the instance
    is not solvable on this arithmetic and we say so.
    """
    t = min(0.5, 0.5 * radius / np.sqrt(lam1))
    # below this scale u^2 leaves the normal range and energy signs are
    # roundoff noise, so a negative value there proves nothing
    t_floor = np.sqrt(np.finfo(float).tiny) / float(np.max(phi1))
    for _ in range(1200):
        if t == 0.0 or t < max(t_floor, XLOG_CLAMP):
            break
        if energy_value(p, g, t * phi1) < 0.0:
            return t
        t *= 0.5
    raise UsableRegionError(
        "no scale of the principal mode reaches negative energy before "
        "underflow; parameters lie outside the usable region of this grid"
    )


def _descend_in_ball(p, g, u, radius, gtol=1e-3, itmax=5000):
    """Projected preconditioned descent; returns (u, iterations)."""
    band = g.neg_laplacian_banded()
    e = energy_value(p, g, u)
    for it in range(itmax):
        grad = gradient_field(p, g, u)
        gn2, pre = _dual_norm_sq(g, band, grad)
        if np.sqrt(gn2) < gtol:
            return u, it
        s = 1.0
        while True:
            cand = _project_ball(g, u - s * pre, radius)
            ec = energy_value(p, g, cand)
            if ec <= e - ARMIJO * s * gn2:
                break
            s *= 0.5
            if s < 1e-14:
                return u, it  # no descent step left at this resolution
        u, e = cand, ec
        if _h1_norm(g, u) > 2.0 * radius / (1.0 - BALL_MARGIN):
            raise RuntimeError("descent iterate left the expected bounded set")
    return u, itmax


@dataclass(frozen=True)
class NewtonResult:
    u: np.ndarray
    converged: bool
    residual: float
    iterations: int


def _newton(p, g, u, tol=1e-10, itmax=50):
    """Damped Newton on A u = f(u); residual measured in the dual norm."""
    band = g.neg_laplacian_banded()

    def res_norm(v):
        r = gradient_field(p, g, v)
        rn2, _ = _dual_norm_sq(g, band, r)
        return np.sqrt(rn2), r

    rn, res = res_norm(u)
    best, best_rn, its = u, rn, 0
    for it in range(itmax):
        if rn < tol:
            return NewtonResult(u=u, converged=True, residual=rn, iterations=it)
        J = band.copy()
        J[1] -= source_derivative(p, u)
        try:
            step = solve_banded((1, 1), J, res)
        except np.linalg.LinAlgError:
            break
        s = 1.0
        while s >= 1e-12:
            cand = u - s * step
            rt, res_t = res_norm(cand)
            if rt < rn * (1.0 - 0.25 * s):
                u, rn, res = cand, rt, res_t
                break
            s *= 0.5
        else:
            break
        its = it + 1
        if rn < best_rn:
            best, best_rn = u, rn
    if rn < tol:
        return NewtonResult(u=u, converged=True, residual=rn, iterations=its)
    return NewtonResult(u=best, converged=False, residual=best_rn, iterations=its)


def newton_refine(p, g, u, tol=1e-10, itmax=50):
    """Quadratic polish of a near-critical point.

    Requires a nontrivial nonnegative-part iterate whose gradient dual
    norm is already below 1e-3.  Non-convergence returns the best iterate
    with converged=False rather than raising.
    """
    u = np.asarray(u, dtype=float)
    if not np.any(u > 0):
        raise ValueError("not near-critical in the positive cone")
    band = g.neg_laplacian_banded()
    gn2, _ = _dual_norm_sq(g, band, gradient_field(p, g, u))
    if np.sqrt(gn2) >= 1e-3:
        raise ValueError("input is not near-critical (gradient norm >= 1e-3)")
    return _newton(p, g, u, tol=tol, itmax=itmax)


def find_ball_minimizer(p, g, rho, gtol=1e-8):
    """Local minimizer of the energy inside {||u|| < rho}.

    Returns (u0, c_rho).  Postconditions checked here: negative energy,
    strictly interior norm, gradient dual norm below gtol.
    """
    u0, c_rho, _ = _minimize_with_stats(p, g, rho, gtol=gtol)
    return u0, c_rho


def _minimize_with_stats(p, g, rho, gtol=1e-8):
    radius = rho * (1.0 - BALL_MARGIN)
    lam1, phi1 = principal_eigenpair(g)
    t0 = _negative_start(p, g, phi1, lam1, radius)
    u, iters = _descend_in_ball(p, g, t0 * phi1, radius)
    nres = _newton(p, g, u)
    u = nres.u
    c = energy_value(p, g, u)
    if not (c < 0.0):
        raise RuntimeError("ball minimizer ended at nonnegative energy")
    if not (_h1_norm(g, u) < radius):
        raise RuntimeError("ball constraint active at the minimizer")
    if not (nres.residual < gtol):
        raise RuntimeError(
            f"minimizer residual {nres.residual:.3e} above tolerance {gtol:.1e}"
        )
    stats = {"iters_minimize": iters, "iters_newton0": nres.iterations,
             "residual0": nres.residual}
    return u, c, stats


# -- stage two: endpoint, path deformation, saddle ------------------------


def _geometry(p, g):
    S = best_sobolev_constant(p.N)
    lam1, _ = principal_eigenpair(g)
    vol = ball_volume(p.N, p.R)
    rep = region_membership(p, S, lam1, vol)
    return S, rep


def select_endpoint(p, g, u0, spec):
    """Smallest doubling T past 4 rho / S^{N/4} with I(u0 + T U_n) < I(u0).

    Returns (T, endpoint).  The critical term dominates at large scale,
    so the doubling always terminates for mu > 0.
    """
    S, rep = _geometry(p, g)
    if not rep.any_membership():
        raise ValueError("no region membership holds; no minimax geometry")
    rho = rep.rho
    Un = truncated_bubble(spec, g)
    e0 = energy_value(p, g, u0)
    T = 4.0 * rho / S ** (p.N / 4.0) * (1.0 + 1e-6)
    for _ in range(60):
        if energy_value(p, g, u0 + T * Un) < e0:
            return T, u0 + T * Un
        T *= 2.0
    raise RuntimeError("endpoint search failed to pass below the base energy")


@dataclass(frozen=True)
class PathState:
    """Snapshot of the deformed path: node functions and their energies."""

    nodes: np.ndarray  # (P, M)
    energies: np.ndarray  # (P,)
    max_index: int
    iterations: int
    newton_iterations: int
    exit_reason: str


def _path_energies(p, g, Z):
    """Energies of every path node, batched over the (P, M) array."""
    d = np.empty_like(Z)
    d[:, :-1] = Z[:, 1:] - Z[:, :-1]
    d[:, -1] = -Z[:, -1]
    kin = 0.5 * ((d / g.h) ** 2) @ g.fw
    up = np.maximum(Z, 0.0)
    ts = p.two_star
    pot = (p.mu / ts) * (up**ts) @ g.w
    pot += (p.nu / p.q) * (up**p.q) @ g.w
    pot += (p.lam / 2.0) * (up * up) @ g.w
    xl = np.zeros_like(up)
    mask = up > XLOG_CLAMP
    xl[mask] = up[mask] ** 2 * 2.0 * np.log(up[mask])
    pot += (p.theta / 2.0) * (xl - up * up) @ g.w
    return kin - pot


def _seg_lengths(g, Z):
    d = Z[1:] - Z[:-1]
    dd = np.empty_like(d)
    dd[:, :-1] = d[:, 1:] - d[:, :-1]
    dd[:, -1] = -d[:, -1]
    return np.sqrt(((dd / g.h) ** 2) @ g.fw)


def _resample_polyline(Z, lens, n_out):
    """n_out nodes equidistributed by arc length along the polyline Z."""
    cum = np.concatenate([[0.0], np.cumsum(lens)])
    total = cum[-1]
    if total == 0.0:
        return np.repeat(Z[:1], n_out, axis=0)
    targets = np.linspace(0.0, total, n_out)
    out = np.empty((n_out, Z.shape[1]))
    out[0] = Z[0]
    out[-1] = Z[-1]
    for j in range(1, n_out - 1):
        k = int(np.searchsorted(cum, targets[j], side="right")) - 1
        k = min(k, len(lens) - 1)
        seg = lens[k]
        frac = 0.0 if seg == 0.0 else (targets[j] - cum[k]) / seg
        out[j] = Z[k] + frac * (Z[k + 1] - Z[k])
    return out


def _resample_anchored(g, Z, anchor):
    """Equidistribute nodes by arc length separately on each side of anchor.

    The anchored split keeps the freshly moved crest node exactly where
    the descent step put it; a global resample would cut the corner it
    just created and undo the progress.
    """
    P = Z.shape[0]
    lens = _seg_lengths(g, Z)
    left = _resample_polyline(Z[: anchor + 1], lens[:anchor], anchor + 1)
    right = _resample_polyline(Z[anchor:], lens[anchor:], P - anchor)
    out = np.vstack([left, right[1:]])
    out[0] = Z[0]
    out[-1] = Z[-1]
    out[anchor] = Z[anchor]
    return out


def mountain_pass(
    p,
    g,
    u0,
    endpoint,
    P=33,
    gtol=1e-6,
    itmax=20000,
    stall_window=100,
    stall_eps=1e-6,
):
    """Deform the segment from u0 to endpoint downhill at its crest.

    Each sweep moves the maximal-energy interior node one backtracking
    preconditioned step (start step capped at half the mean segment
    length so the node cannot tunnel across the ridge), then re-spaces
    the nodes by arc length on both sides of the moved node.  The loop
    exits when the crest gradient passes gtol or when the crest level
    stops moving; either way the crest node is handed to Newton, which
    is the actual convergence arbiter.  Returns (u_mp, c_M, PathState).
    """
    if P < 32:
        raise ValueError("need at least 32 path nodes")
    u0 = np.asarray(u0, dtype=float)
    endpoint = np.asarray(endpoint, dtype=float)
    e0 = energy_value(p, g, u0)
    e_end = energy_value(p, g, endpoint)
    if not (e_end < e0):
        raise ValueError("endpoint energy must fall below the base energy")

    _, rep = _geometry(p, g)
    alpha = rep.alpha if rep.any_membership() else None
    bound = 2.0 * max(rep.rho or 0.0, _h1_norm(g, endpoint))
    band = g.neg_laplacian_banded()

    ts_path = np.linspace(0.0, 1.0, P)
    Z = u0[None, :] + ts_path[:, None] * (endpoint - u0)[None, :]
    crest_hist = []
    exit_reason = "itmax"
    it = 0
    for it in range(itmax):
        E = _path_energies(p, g, Z)
        k = 1 + int(np.argmax(E[1:-1]))  # ties: lowest index
        if E[k] <= max(E[0], E[-1]):
            raise PathCollapseError(
                "interior crest fell below the endpoint levels; "
                "no minimax geometry along this path"
            )
        crest_hist.append(E[k])
        grad = gradient_field(p, g, Z[k])
        gn2, pre = _dual_norm_sq(g, band, grad)
        gn = np.sqrt(gn2)
        if gn < gtol:
            exit_reason = "gradient"
            break
        if len(crest_hist) > stall_window and abs(
            crest_hist[-stall_window - 1] - crest_hist[-1]
        ) < stall_eps * max(1.0, abs(crest_hist[-1])):
            exit_reason = "stalled"
            break
        seg_mean = float(np.mean(_seg_lengths(g, Z)))
        pre_n = _h1_norm(g, pre)
        s = min(1.0, 0.5 * seg_mean / pre_n) if pre_n > 0 else 1.0
        moved = False
        while s >= 1e-14:
            cand = Z[k] - s * pre
            if _path_energies(p, g, cand[None, :])[0] <= E[k] - ARMIJO * s * gn2:
                Z[k] = cand
                moved = True
                break
            s *= 0.5
        if not moved:
            exit_reason = "no-step"
            break
        if _h1_norm(g, Z[k]) > bound:
            raise RuntimeError(
                f"path iterate norm exceeded the bounded-set limit {bound:.3e}"
            )
        Z = _resample_anchored(g, Z, k)

    E = _path_energies(p, g, Z)
    k = 1 + int(np.argmax(E[1:-1]))
    nres = _newton(p, g, Z[k])
    if not nres.converged:
        raise ConcentrationStallError(
            "deformation stalled (reason: %s, crest gradient not resolved) and "
            "Newton found no saddle near the crest; energy may be concentrating "
            "at scales below this grid. crest level %.6e, residual %.3e"
            % (exit_reason, E[k], nres.residual)
        )
    u_mp = nres.u
    c_M = energy_value(p, g, u_mp)
    if not (c_M > 0.0):
        raise RuntimeError(f"saddle level is not positive: {c_M:.6e}")
    if alpha is not None and c_M < alpha * (1.0 - 1e-9):
        raise RuntimeError(
            f"saddle level {c_M:.6e} fell below the geometry floor {alpha:.6e}"
        )
    if _h1_norm(g, u_mp - u0) < 1e-6 * max(1.0, _h1_norm(g, u0)):
        raise RuntimeError("saddle coincides with the base minimizer")
    state = PathState(
        nodes=Z,
        energies=E,
        max_index=k,
        iterations=it + 1,
        newton_iterations=nres.iterations,
        exit_reason=exit_reason,
    )
    assert np.array_equal(Z[0], u0), "base node must never move"
    return u_mp, c_M, state


# -- report and verification ----------------------------------------------


@dataclass(frozen=True)
class SolveReport:
    u0: np.ndarray
    c_rho: float
    residual0: float
    u_mp: np.ndarray
    c_M: float
    residual_mp: float
    gap_bound: float
    gap_ok: bool
    sign_changes: int
    t_local_min: float
    rho: float
    alpha: float
    iters_minimize: int
    iters_newton0: int
    iters_path: int
    iters_newton_path: int
    path_exit: str


@dataclass(frozen=True)
class VerifyVerdict:
    ok: bool
    failures: tuple


def _profile_local_min_near_one(prof):
    """Location of the sampled local minimum of the fiber profile nearest t=1."""
    v = prof.values
    idx = [
        i
        for i in range(1, len(v) - 1)
        if v[i] <= v[i - 1] and v[i] <= v[i + 1]
    ]
    if not idx:
        return np.inf
    ts = prof.t[idx]
    return float(ts[np.argmin(np.abs(ts - 1.0))])


def verify_two_level_structure(p, g, u0, u_mp, report):
    """Check the ordering, least-energy, fiber, and interior-ball assertions.

    (i)   I(u0) < 0 < I(u_mp);
    (ii)  I(u0) is the least energy among the pipeline's critical points
          (within 1e-6) -- the computable shadow of least-energy equality;
    (iii) the fiber profile of u0 has at most two extreme points and its
          sampled local minimum sits at t = 1 within 0.05;
    (iv)  ||u0|| < rho and I(t u0) < 0 for all sampled t in (0, 1].
    Each failed assertion is named in the verdict.
    """
    failures = []
    c0 = report.c_rho if report is not None else energy_value(p, g, u0)
    cm = report.c_M if report is not None else energy_value(p, g, u_mp)
    if not (c0 < 0.0 < cm):
        failures.append("ordering: need I(u0) < 0 < I(u_mp)")
    crit_levels = [c0, cm]
    if min(crit_levels) < c0 - 1e-6:
        failures.append("least-energy: a pipeline critical point sits below u0")
    prof = g_profile(p, g, u0, t_max=2.0, samples=256)
    if prof.sign_changes > 2:
        failures.append(
            f"fiber: {prof.sign_changes} derivative sign changes (max 2)"
        )
    t_min = _profile_local_min_near_one(prof)
    if not (abs(t_min - 1.0) <= 0.05):
        failures.append(f"fiber: local minimum at t={t_min:.4f}, not near 1")
    _, rep = _geometry(p, g)
    if rep.rho is not None and not (_h1_norm(g, u0) < rep.rho):
        failures.append("ball: ||u0|| is not inside rho")
    sub = prof.values[prof.t <= 1.0]
    if not np.all(sub < 0.0):
        failures.append("ray: I(t u0) >= 0 for some t in (0, 1]")
    return VerifyVerdict(ok=not failures, failures=tuple(failures))


def solve_problem(p, M, n=16, P=33, r0=None):
    """Run the full two-solution pipeline on a fresh grid.

    Returns (report, path_state, grid).  Raises UsableRegionError when the
    negative-energy start does not exist, ValueError when no region
    membership holds.
    """
    from .bubbles import BubbleSpec
    from .grid import build_grid

    g = build_grid(p.N, p.R, M)
    S, rep = _geometry(p, g)
    if not rep.any_membership():
        raise ValueError("no region membership holds for these parameters")
    if r0 is None:
        r0 = p.R / 4.0
    u0, c_rho, stats = _minimize_with_stats(p, g, rep.rho)
    spec = BubbleSpec(N=p.N, n=n, r0=r0)
    _, endpoint = select_endpoint(p, g, u0, spec)
    u_mp, c_M, path = mountain_pass(p, g, u0, endpoint, P=P)
    band = g.neg_laplacian_banded()
    rn2, _ = _dual_norm_sq(g, band, gradient_field(p, g, u_mp))
    prof = g_profile(p, g, u0, t_max=2.0, samples=256)
    gap_bound = c_rho + (1.0 / p.N) * p.mu ** (-(p.N - 2.0) / 2.0) * S ** (p.N / 2.0)
    report = SolveReport(
        u0=u0,
        c_rho=c_rho,
        residual0=stats["residual0"],
        u_mp=u_mp,
        c_M=c_M,
        residual_mp=float(np.sqrt(rn2)),
        gap_bound=gap_bound,
        gap_ok=bool(c_M < gap_bound),
        sign_changes=prof.sign_changes,
        t_local_min=_profile_local_min_near_one(prof),
        rho=rep.rho,
        alpha=rep.alpha,
        iters_minimize=stats["iters_minimize"],
        iters_newton0=stats["iters_newton0"],
        iters_path=path.iterations,
        iters_newton_path=path.newton_iterations,
        path_exit=path.exit_reason,
    )
    return report, path, g
