"""Command-line surface: check, random, sweep, certify, wigner-compare.

Exit codes: 0 separable / success, 1 entangled / verification failure,
2 undetermined, 64 input or usage error.
"""

import argparse
import csv
import os
import sys
import time

import numpy as np

from . import __version__
from .ensembles import KINDS, EnsembleSpec, generate_sigmas
from .errors import GaussepError, NotBonaFide, NotSymplectic, StateFileError
from .separability import (
    Entangled,
    Separable,
    SolverConfig,
    Undetermined,
    certificate_check,
    decide_separability,
    ppt_test,
)
from .serialize import (
    certificate_to_dict,
    dumps,
    format_float,
    load,
    load_state_file,
    parse_certificate_dict,
    save,
    state_to_dict,
)
from .states import (
    Partition,
    QuadConfig,
    make_state,
    purity,
    pure_gaussian_from_symplectic,
    pure_gaussian_wavefunction,
    pure_gaussian_wigner_closed,
    recommended_cutoff,
    wigner_transform_numeric_1d,
)
from .symplectic import is_symplectic, symplectic_eigenvalues

EXIT_SEPARABLE = 0
EXIT_ENTANGLED = 1
EXIT_UNDETERMINED = 2
EXIT_INPUT = 64


def _fail(msg):
    print("error: %s" % msg, file=sys.stderr)
    return EXIT_INPUT


def _solver_config(args):
    cfg = SolverConfig()
    if getattr(args, "tol", None) is not None:
        cfg = SolverConfig(
            max_iter=cfg.max_iter,
            residual_tol=args.tol,
            stall_window=cfg.stall_window,
            stall_factor=cfg.stall_factor,
            cert_tol=args.tol,
        )
    if getattr(args, "max_iter", None) is not None:
        cfg = SolverConfig(
            max_iter=args.max_iter,
            residual_tol=cfg.residual_tol,
            stall_window=cfg.stall_window,
            stall_factor=cfg.stall_factor,
            cert_tol=cfg.cert_tol,
        )
    return cfg


def _config_echo(cfg, hbar):
    return {
        "hbar": float(hbar),
        "max_iter": cfg.max_iter,
        "residual_tol": cfg.residual_tol,
        "stall_window": cfg.stall_window,
        "stall_factor": cfg.stall_factor,
        "cert_tol": cfg.cert_tol,
    }


def _verdict_report(state, verdict, ppt, cfg, wall_ms):
    report = {
        "verdict": {
            Separable: "separable",
            Entangled: "entangled",
            Undetermined: "undetermined",
        }[type(verdict)],
        "diagnostics": {
            "symplectic_eigenvalues": symplectic_eigenvalues(
                state.sigma, state.partition.form()
            ),
            "purity": purity(state),
            "ppt_eigenvalues": ppt.nu_tilde,
            "solver_iterations": 0,
            "residuals": 0.0,
            "wall_time_ms": wall_ms,
        },
        "tool_version": __version__,
        "config_echo": _config_echo(cfg, state.hbar),
    }
    if isinstance(verdict, Separable):
        report["certificate"] = certificate_to_dict(verdict.certificate)
    elif isinstance(verdict, Entangled):
        report["witness"] = {
            "kind": verdict.witness.kind,
            "nu_tilde_min": verdict.witness.nu_tilde_min,
            "threshold": verdict.witness.threshold,
        }
    else:
        report["diagnostics"]["solver_iterations"] = verdict.iterations
        report["diagnostics"]["residuals"] = verdict.residual
    return report


def cmd_check(args):
    try:
        sigma, mean, file_hbar, partition, _label = load_state_file(args.state)
    except StateFileError as exc:
        return _fail(str(exc))
    hbar = args.hbar if args.hbar is not None else file_hbar
    cfg = _solver_config(args)
    try:
        state = make_state(sigma, mean, hbar, partition)
    except NotBonaFide as exc:
        return _fail("state is not bona fide: %s" % exc)
    except GaussepError as exc:
        return _fail(str(exc))
    t0 = time.perf_counter()
    ppt = ppt_test(state, tol=cfg.cert_tol)
    verdict = decide_separability(state, cfg)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    report = _verdict_report(state, verdict, ppt, cfg, wall_ms)
    text = dumps(report)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text)
        print("verdict: %s (report written to %s)" % (report["verdict"], args.report))
    else:
        sys.stdout.write(text)
    return {
        "separable": EXIT_SEPARABLE,
        "entangled": EXIT_ENTANGLED,
        "undetermined": EXIT_UNDETERMINED,
    }[report["verdict"]]


def _parse_modes(text):
    parts = text.split("+")
    if len(parts) != 2:
        raise ValueError("--modes must look like A+B, e.g. 1+1")
    return Partition(n_A=int(parts[0]), n_B=int(parts[1]))


def cmd_random(args):
    seed = args.seed
    env_seed = os.environ.get("GAUSSEP_SEED")
    if env_seed is not None:
        try:
            seed = int(env_seed)
        except ValueError:
            return _fail("GAUSSEP_SEED must be an integer, got %r" % env_seed)
    try:
        partition = _parse_modes(args.modes)
        nus = None
        if args.nu:
            nus = [float(v) for v in args.nu.split(",")]
        spec = EnsembleSpec(
            kind=args.kind,
            count=args.count,
            seed=seed,
            nus=nus,
            spread=args.spread,
            r=args.r,
            t=args.t,
            hbar=args.hbar,
        )
        sigmas = generate_sigmas(spec, partition)
    except (ValueError, GaussepError) as exc:
        return _fail(str(exc))
    os.makedirs(args.out, exist_ok=True)
    for i, sigma in enumerate(sigmas):
        label = "%s seed=%d idx=%d" % (args.kind, seed, i)
        path = os.path.join(args.out, "%s_%03d.json" % (args.kind, i))
        save(path, state_to_dict(sigma, partition, args.hbar, label=label))
        print(path)
    return 0


def cmd_sweep(args):
    if args.kind != "tmsv_noisy":
        return _fail("sweep supports --kind tmsv_noisy only")
    if args.steps < 1:
        return _fail("--steps must be >= 1")
    if args.t_max < args.t_min:
        return _fail("--t-max must be >= --t-min")
    partition = Partition(1, 1)
    cfg = _solver_config(args)
    if args.steps == 1:
        ts = [args.t_min]
    else:
        ts = list(np.linspace(args.t_min, args.t_max, args.steps))
    rows = []
    for t in ts:
        spec = EnsembleSpec(kind="tmsv_noisy", r=args.r, t=float(t), hbar=args.hbar)
        sigma = generate_sigmas(spec, partition)[0]
        state = make_state(sigma, hbar=args.hbar, partition=partition)
        ppt = ppt_test(state, tol=cfg.cert_tol)
        verdict = decide_separability(state, cfg)
        if isinstance(verdict, Separable):
            name, extra, iters = "separable", verdict.certificate.slack, 0
        elif isinstance(verdict, Entangled):
            name, extra, iters = "entangled", None, 0
        else:
            name, extra, iters = "undetermined", verdict.residual, verdict.iterations
        rows.append(
            [
                format_float(t),
                "true" if ppt.passed else "false",
                format_float(ppt.nu_tilde[-1]),
                name,
                "" if extra is None else format_float(extra),
                str(iters),
            ]
        )
    try:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["t", "ppt_pass", "nu_tilde_min", "verdict", "slack_or_residual", "iterations"]
            )
            writer.writerows(rows)
    except OSError as exc:
        return _fail("cannot write %s: %s" % (args.out, exc))
    print("wrote %d rows to %s" % (len(rows), args.out))
    return 0


def cmd_certify(args):
    try:
        sigma, _mean, hbar, _partition, _label = load_state_file(args.state)
        p_a, p_b = parse_certificate_dict(load(args.certificate))
    except StateFileError as exc:
        return _fail(str(exc))
    tol = args.tol if args.tol is not None else 1e-9
    try:
        slack = certificate_check(sigma, p_a, p_b, hbar, predicate_tol=tol)
    except NotSymplectic as exc:
        print("REJECTED: %s" % exc)
        return 1
    except GaussepError as exc:
        return _fail(str(exc))
    print("slack = %s" % format_float(slack))
    if slack >= -tol:
        print("VERIFIED: certificate holds")
        return 0
    print("REJECTED: negative slack")
    return 1


def _parse_grid(text):
    def axis(part):
        bits = part.split(":")
        if len(bits) != 3:
            raise ValueError("grid axis must be start:stop:count")
        lo, hi, num = float(bits[0]), float(bits[1]), int(bits[2])
        if num < 1:
            raise ValueError("grid count must be >= 1")
        return np.linspace(lo, hi, num) if num > 1 else np.array([lo])

    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError('grid must look like "x0:x1:nx,p0:p1:np"')
    return axis(parts[0]), axis(parts[1])


def cmd_wigner_compare(args):
    try:
        obj = load(args.S)
        if not isinstance(obj, dict) or "S" not in obj:
            return _fail("S file must be a JSON object with an 'S' matrix")
        s = np.array(obj["S"], dtype=float)
        hbar = float(obj.get("hbar", 1.0))
        xs, ps = _parse_grid(args.grid)
    except (StateFileError, ValueError, TypeError) as exc:
        return _fail(str(exc))
    if s.shape != (2, 2):
        return _fail("wigner-compare supports one mode only (S must be 2x2)")
    if not is_symplectic(s, tol=1e-9):
        return _fail("S is not symplectic")
    pg = pure_gaussian_from_symplectic(s, hbar)
    cfg = QuadConfig(cutoff=recommended_cutoff(s, hbar), nodes=args.nodes)

    def psi(pts):
        return pure_gaussian_wavefunction(pg, pts)

    max_err = 0.0
    print("%22s %22s %24s %24s %12s" % ("x", "p", "closed_form", "quadrature", "abs_err"))
    for x in xs:
        for p in ps:
            closed = float(pure_gaussian_wigner_closed(s, np.array([x, p]), hbar))
            numer = wigner_transform_numeric_1d(psi, float(x), float(p), hbar, cfg)
            err = abs(closed - numer)
            max_err = max(max_err, err)
            print(
                "%22s %22s %24s %24s %12.3e"
                % (format_float(x), format_float(p), format_float(closed), format_float(numer), err)
            )
    print("max_abs_err = %.3e" % max_err)
    return 0 if max_err <= args.max_err else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gaussep",
        description="Separability of bipartite Gaussian states from covariance matrices.",
    )
    parser.add_argument("--version", action="version", version="gaussep " + __version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide separability of a state file")
    p.add_argument("state")
    p.add_argument("--hbar", type=float, default=None, help="override the file's hbar")
    p.add_argument("--tol", type=float, default=None, help="residual and certificate tolerance")
    p.add_argument("--max-iter", dest="max_iter", type=int, default=None)
    p.add_argument("--report", default=None, help="write the report here instead of stdout")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("random", help="generate reproducible state files")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--modes", default="1+1", help="subsystem modes, e.g. 1+1 or 2+1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--spread", type=float, default=0.5)
    p.add_argument("--r", type=float, default=0.5)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--nu", default=None, help="comma-separated thermal nu list")
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("sweep", help="noise sweep of a TMSV family, CSV output")
    p.add_argument("--kind", default="tmsv_noisy")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--t-min", dest="t_min", type=float, required=True)
    p.add_argument("--t-max", dest="t_max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--max-iter", dest="max_iter", type=int, default=None)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("certify", help="re-verify a separability certificate")
    p.add_argument("state")
    p.add_argument("certificate")
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser(
        "wigner-compare",
        help="closed-form vs quadrature Wigner function of a pure Gaussian",
    )
    p.add_argument("--S", required=True, help="JSON file with a 2x2 symplectic S")
    p.add_argument("--grid", required=True, help='grid spec "x0:x1:nx,p0:p1:np"')
    p.add_argument("--nodes", type=int, default=2048)
    p.add_argument("--max-err", dest="max_err", type=float, default=1e-5)
    p.set_defaults(func=cmd_wigner_compare)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; map to the input-error code
        return EXIT_INPUT if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except StateFileError as exc:
        return _fail(str(exc))
    except GaussepError as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
