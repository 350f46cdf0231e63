"""Batch front end: regions / solve / verify / sweep over flat JSON configs.

Exit codes: 0 success, 1 config error, 2 hypothesis or region gate,
3 verification failure.  All emitted files use fixed 17-significant-digit
float formatting and fixed orderings, so identical configs produce
byte-identical outputs.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from itertools import product

import numpy as np

from . import bubbles, inequalities, solvers
from .energy import ProblemParams
from .grid import ball_volume, best_sobolev_constant, build_grid, principal_eigenpair, save_grid_function
from .regions import region_membership

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_GATE = 2
EXIT_VERIFY = 3

GAP_N_LIST = (16, 32, 64, 128, 256)  # quadrature-based decay fits

CONFIG_DEFAULTS = {
    # problem
    "N": 4,
    "q": 3.0,
    "mu": 1.0,
    "nu": 0.0,
    "lambda": 0.0,
    "theta": -0.01,
    "R": 1.0,
    # discretization / solver
    "M": 400,
    "n": 16,
    "r0": None,  # defaults to R/4
    "P": 33,
    "gtol": 1e-8,
    "path_gtol": 1e-6,
    # output
    "out": ".",
    # verify knobs
    "n_list": list(bubbles.DEFAULT_N_LIST),
    "fit_p": [2.0],
    "C1": 0.5,
    "C2": 2.0,
    "y_max": 1e3,
    "t_samples": 1000,
    "y_samples": 1000,
    # sweep ranges (lists of values; empty = not swept)
    "sweep_lambda": [],
    "sweep_mu": [],
    "sweep_nu": [],
    "sweep_q": [],
    "sweep_theta": [],
    "sweep_solve": False,
}

SWEEP_KEYS = ("sweep_lambda", "sweep_mu", "sweep_nu", "sweep_q", "sweep_theta")


class ConfigError(ValueError):
    pass


# -- deterministic serialization ------------------------------------------


def fmt_float(x):
    return "%.17g" % float(x)


def canonical_json(obj, indent=0):
    """JSON text with %.17g floats, sorted keys, stable layout."""
    pad = " " * indent
    if isinstance(obj, dict):
        items = [
            '%s "%s": %s' % (pad, k, canonical_json(obj[k], indent + 1).lstrip())
            for k in sorted(obj)
        ]
        return "%s{\n%s\n%s}" % (pad, ",\n".join(items), pad)
    if isinstance(obj, (list, tuple)):
        items = [canonical_json(v, indent + 1) for v in obj]
        return "%s[\n%s\n%s]" % (pad, ",\n".join(items), pad)
    if isinstance(obj, bool):
        return pad + ("true" if obj else "false")
    if obj is None:
        return pad + "null"
    if isinstance(obj, (int, np.integer)):
        return pad + str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return pad + fmt_float(obj)
    if isinstance(obj, str):
        return pad + json.dumps(obj)
    raise TypeError(f"not serializable: {obj!r}")


def write_text(path, text):
    with open(path, "w") as f:
        f.write(text)
        if not text.endswith("\n"):
            f.write("\n")


# -- configuration ---------------------------------------------------------


def load_config(path):
    if path is None:
        raw = {}
    else:
        with open(path) as f:
            raw = json.load(f)
    if not isinstance(raw, dict):
        raise ConfigError("config must be a flat JSON object")
    unknown = sorted(set(raw) - set(CONFIG_DEFAULTS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    cfg = dict(CONFIG_DEFAULTS)
    cfg.update(raw)
    return cfg


def problem_from(cfg):
    try:
        return ProblemParams(
            N=int(cfg["N"]),
            q=float(cfg["q"]),
            mu=float(cfg["mu"]),
            nu=float(cfg["nu"]),
            lam=float(cfg["lambda"]),
            theta=float(cfg["theta"]),
            R=float(cfg["R"]),
        )
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e)) from e


def validate_numerics(cfg):
    if int(cfg["M"]) < 8:
        raise ConfigError("M: need at least 8 mesh cells")
    if int(cfg["n"]) < 1:
        raise ConfigError("n: bubble scale must be a positive integer")
    if int(cfg["P"]) < 32:
        raise ConfigError("P: need at least 32 path nodes")
    r0 = cfg["r0"]
    if r0 is not None and 4.0 * float(r0) > float(cfg["R"]):
        raise ConfigError("r0: need 4*r0 <= R")
    if not (0 < float(cfg["C1"]) < float(cfg["C2"])):
        raise ConfigError("C1: need 0 < C1 < C2")
    if len(cfg["n_list"]) < 5:
        raise ConfigError("n_list: need at least 5 scales")


def hypothesis_gate(p, explore):
    """Saddle-branch dimension restriction for nonpositive nu."""
    if p.nu <= 0 and p.N >= 6 and not explore:
        raise ConfigError(
            "hypothesis violated: the saddle existence branch for nu <= 0 "
            "requires 3 <= N <= 5; pass --explore-open-problem to run anyway"
        )


def _outdir(cfg, args):
    out = args.out if args.out is not None else cfg["out"]
    os.makedirs(out, exist_ok=True)
    return out


# -- subcommands ------------------------------------------------------------


def cmd_regions(cfg, args):
    p = problem_from(cfg)
    validate_numerics(cfg)
    g = build_grid(p.N, p.R, int(cfg["M"]))
    S = best_sobolev_constant(p.N)
    lam1, _ = principal_eigenpair(g)
    vol = ball_volume(p.N, p.R)
    rep = region_membership(p, S, lam1, vol)
    out = _outdir(cfg, args)
    payload = {
        "in_M1": rep.in_M1,
        "in_M2": rep.in_M2,
        "in_M3": rep.in_M3,
        "in_M4": rep.in_M4,
        "S": rep.S,
        "lambda1": rep.lambda1,
        "volume": rep.volume,
        "alpha": rep.alpha,
        "rho": rep.rho,
        "applicable_case": rep.applicable_case,
        "geometry_case": rep.geometry_case,
    }
    write_text(os.path.join(out, "regions.json"), canonical_json(payload))
    return EXIT_OK if rep.any_membership() else EXIT_GATE


def cmd_solve(cfg, args):
    p = problem_from(cfg)
    validate_numerics(cfg)
    hypothesis_gate(p, args.explore_open_problem)
    out = _outdir(cfg, args)
    r0 = cfg["r0"]
    try:
        report, path, g = solvers.solve_problem(
            p,
            M=int(cfg["M"]),
            n=int(cfg["n"]),
            P=int(cfg["P"]),
            r0=None if r0 is None else float(r0),
        )
    except ValueError as e:
        print(f"solve gate: {e}", file=sys.stderr)
        return EXIT_GATE
    except solvers.UsableRegionError as e:
        print(f"solve stage minimize: {e}", file=sys.stderr)
        return EXIT_GATE
    except solvers.PathCollapseError as e:
        print(f"solve stage deform: {e}", file=sys.stderr)
        return EXIT_GATE
    except solvers.ConcentrationStallError as e:
        print(f"solve stage saddle: {e}", file=sys.stderr)
        return EXIT_VERIFY

    verdict = solvers.verify_two_level_structure(p, g, report.u0, report.u_mp, report)
    payload = {
        "c_rho": report.c_rho,
        "residual0": report.residual0,
        "c_M": report.c_M,
        "residual_mp": report.residual_mp,
        "gap_bound": report.gap_bound,
        "gap_ok": report.gap_ok,
        "sign_changes": report.sign_changes,
        "t_local_min": report.t_local_min,
        "rho": report.rho,
        "alpha": report.alpha,
        "iters_minimize": report.iters_minimize,
        "iters_newton0": report.iters_newton0,
        "iters_path": report.iters_path,
        "iters_newton_path": report.iters_newton_path,
        "path_exit": report.path_exit,
        "verified": verdict.ok,
        "failures": list(verdict.failures),
        "exploratory": bool(args.explore_open_problem),
    }
    write_text(os.path.join(out, "solve.json"), canonical_json(payload))
    save_grid_function(os.path.join(out, "u0.csv"), g, report.u0)
    save_grid_function(os.path.join(out, "ump.csv"), g, report.u_mp)
    P = path.nodes.shape[0]
    lines = ["node_index,t,energy"]
    for k in range(P):
        lines.append(
            "%d,%s,%s" % (k, fmt_float(k / (P - 1.0)), fmt_float(path.energies[k]))
        )
    write_text(os.path.join(out, "path.csv"), "\n".join(lines))
    return EXIT_OK if (verdict.ok and report.gap_ok) else EXIT_VERIFY


def _inequality_certificates(p, cfg):
    box = inequalities.BoxSpec(
        C1=float(cfg["C1"]),
        C2=float(cfg["C2"]),
        y_max=float(cfg["y_max"]),
        t_samples=int(cfg["t_samples"]),
        y_samples=int(cfg["y_samples"]),
    )
    box_payload = {
        "C1": box.C1,
        "C2": box.C2,
        "y_max": box.y_max,
        "t_samples": box.t_samples,
        "y_samples": box.y_samples,
    }
    grid_sizes = [box.t_samples, box.y_samples]
    eps = p.q - 2.0
    ts = p.two_star
    certs = []

    sup = inequalities.scan_sup_A1(box, eps)
    A1 = inequalities.HEADROOM * max(sup, 0.0)
    certs.append(
        {
            "lemma": "g_upper",
            "box": box_payload,
            "constant": A1,
            "margin": A1 - sup,
            "grid_sizes": grid_sizes,
        }
    )
    sup_low, sup_hat = inequalities.scan_sup_f(ts, box)
    if sup_low is not None:
        A2 = inequalities.HEADROOM * max(sup_low, 0.0)
        certs.append(
            {
                "lemma": "f_lower",
                "box": box_payload,
                "constant": A2,
                "margin": A2 - sup_low,
                "grid_sizes": grid_sizes,
            }
        )
    A2h = inequalities.HEADROOM * max(sup_hat, 0.0)
    certs.append(
        {
            "lemma": "f_abs",
            "box": box_payload,
            "constant": A2h,
            "margin": A2h - sup_hat,
            "grid_sizes": grid_sizes,
        }
    )
    sup3 = inequalities.scan_sup_A3(p.q, box)
    A3 = inequalities.HEADROOM * max(sup3, 0.0)
    certs.append(
        {
            "lemma": "f1_sandwich",
            "box": box_payload,
            "constant": A3,
            "margin": A3 - sup3,
            "grid_sizes": grid_sizes,
        }
    )
    return certs


def _decay_certificates(p, cfg):
    """Quadrature-based decay rates of the two critical bubble norms."""
    r0 = cfg["r0"]
    r0 = p.R / 4.0 if r0 is None else float(r0)
    certs = []
    slope, _, _ = bubbles.fit_gap_exponent(p.N, GAP_N_LIST, r0, "grad")
    thresh = -0.9 * (p.N - 2.0)
    certs.append(
        {
            "lemma": "grad_norm_gap_decay",
            "box": {"n_list": list(GAP_N_LIST), "r0": r0},
            "constant": slope,
            "margin": thresh - slope,
            "grid_sizes": [len(GAP_N_LIST)],
        }
    )
    slope, _, _ = bubbles.fit_gap_exponent(p.N, GAP_N_LIST, r0, "crit")
    thresh = -(p.N - 1.0)
    certs.append(
        {
            "lemma": "critical_norm_gap_decay",
            "box": {"n_list": list(GAP_N_LIST), "r0": r0},
            "constant": slope,
            "margin": thresh - slope,
            "grid_sizes": [len(GAP_N_LIST)],
        }
    )
    return certs


def cmd_verify(cfg, args):
    p = problem_from(cfg)
    validate_numerics(cfg)
    out = _outdir(cfg, args)

    certs = _inequality_certificates(p, cfg) + _decay_certificates(p, cfg)
    write_text(os.path.join(out, "certificates.json"), canonical_json(certs))

    n_list = [int(n) for n in cfg["n_list"]]
    M = bubbles.fit_grid_for(p.R, n_list)
    g = build_grid(p.N, p.R, M)
    r0 = cfg["r0"]
    r0 = p.R / 4.0 if r0 is None else float(r0)
    rows = ["N,p,slope,intercept,residual"]
    slope_ok = True
    for pexp in cfg["fit_p"]:
        pexp = float(pexp)
        slope, inter, resid = bubbles.fit_norm_exponent(g, n_list, pexp, r0=r0)
        rows.append(
            "%d,%s,%s,%s,%s"
            % (p.N, fmt_float(pexp), fmt_float(slope), fmt_float(inter), fmt_float(resid))
        )
        expected = bubbles.expected_lp_exponent(p.N, pexp)
        if abs(slope - expected) > 0.05 * abs(expected):
            slope_ok = False
            print(
                f"slope fit p={pexp:g}: {slope:.4f} vs expected {expected:g}",
                file=sys.stderr,
            )
    write_text(os.path.join(out, "slopes.csv"), "\n".join(rows))

    bad = [c["lemma"] for c in certs if not (c["margin"] > 0)]
    for lemma in bad:
        print(f"certificate margin not positive: {lemma}", file=sys.stderr)
    return EXIT_OK if (not bad and slope_ok) else EXIT_VERIFY


def _sweep_instance(cfg, combo, keys, do_solve):
    sub = dict(cfg)
    for k, v in zip(keys, combo):
        sub[k.replace("sweep_", "")] = v
    row = {k.replace("sweep_", ""): v for k, v in zip(keys, combo)}
    base = {
        "lambda": float(sub["lambda"]),
        "mu": float(sub["mu"]),
        "nu": float(sub["nu"]),
        "q": float(sub["q"]),
        "theta": float(sub["theta"]),
    }
    base.update(row)
    out = {
        "params": base,
        "in_M1": "",
        "in_M2": "",
        "in_M3": "",
        "in_M4": "",
        "alpha": "",
        "rho": "",
        "c_rho": "",
        "c_M": "",
        "gap_ok": "",
        "status": "ok",
    }
    try:
        p = ProblemParams(
            N=int(sub["N"]),
            q=base["q"],
            mu=base["mu"],
            nu=base["nu"],
            lam=base["lambda"],
            theta=base["theta"],
            R=float(sub["R"]),
        )
    except ValueError:
        out["status"] = "invalid-params"
        return out
    g = build_grid(p.N, p.R, int(sub["M"]))
    S = best_sobolev_constant(p.N)
    lam1, _ = principal_eigenpair(g)
    vol = ball_volume(p.N, p.R)
    rep = region_membership(p, S, lam1, vol)
    for name in ("in_M1", "in_M2", "in_M3", "in_M4"):
        out[name] = "true" if getattr(rep, name) else "false"
    if rep.alpha is not None:
        out["alpha"] = fmt_float(rep.alpha)
        out["rho"] = fmt_float(rep.rho)
    if not rep.any_membership():
        out["status"] = "no-membership"
        return out
    if do_solve:
        try:
            report, _, _ = solvers.solve_problem(
                p, M=int(sub["M"]), n=int(sub["n"]), P=int(sub["P"])
            )
            out["c_rho"] = fmt_float(report.c_rho)
            out["c_M"] = fmt_float(report.c_M)
            out["gap_ok"] = "true" if report.gap_ok else "false"
        except solvers.UsableRegionError:
            out["status"] = "usable-region"
        except solvers.PathCollapseError:
            out["status"] = "collapse"
        except solvers.ConcentrationStallError:
            out["status"] = "stall"
        except (ValueError, RuntimeError) as e:
            out["status"] = "error:%s" % type(e).__name__
    return out


def cmd_sweep(cfg, args):
    validate_numerics(cfg)
    ranges = {k: sorted(float(v) for v in cfg[k]) for k in SWEEP_KEYS if cfg[k]}
    if not ranges:
        raise ConfigError("sweep: at least one sweep_* range must be nonempty")
    keys = sorted(ranges)  # lexicographic in parameter names, then values
    combos = list(product(*(ranges[k] for k in keys)))
    do_solve = bool(cfg["sweep_solve"])
    out = _outdir(cfg, args)

    with ThreadPoolExecutor(max_workers=min(8, len(combos))) as ex:
        results = list(
            ex.map(lambda c: _sweep_instance(cfg, c, keys, do_solve), combos)
        )

    header = "lambda,mu,nu,q,theta,in_M1,in_M2,in_M3,in_M4,alpha,rho,c_rho,c_M,gap_ok,status"
    lines = [header]
    for row in results:
        pr = row["params"]
        lines.append(
            ",".join(
                [
                    fmt_float(pr["lambda"]),
                    fmt_float(pr["mu"]),
                    fmt_float(pr["nu"]),
                    fmt_float(pr["q"]),
                    fmt_float(pr["theta"]),
                    row["in_M1"],
                    row["in_M2"],
                    row["in_M3"],
                    row["in_M4"],
                    row["alpha"],
                    row["rho"],
                    row["c_rho"],
                    row["c_M"],
                    row["gap_ok"],
                    row["status"],
                ]
            )
        )
    write_text(os.path.join(out, "sweep.csv"), "\n".join(lines))
    return EXIT_OK


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="logcrit",
        description="radial two-solution solver and verification suite",
    )
    parser.add_argument("command", choices=["regions", "solve", "verify", "sweep"])
    parser.add_argument("--config", default=None, help="flat JSON config file")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument(
        "--explore-open-problem",
        action="store_true",
        help="unlock N >= 6 with nu <= 0 (exploratory; outside proven range)",
    )
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        handler = {
            "regions": cmd_regions,
            "solve": cmd_solve,
            "verify": cmd_verify,
            "sweep": cmd_sweep,
        }[args.command]
        return handler(cfg, args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, json.JSONDecodeError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
