"""``qcorr`` command line.

Exit status: 0 when every executed check passes, 1 when any check fails,
2 when the configuration or input files cannot be parsed or validated.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import entanglement, tomography, verify
from .bell import bell_value, lhv_enumeration
from .config import ExperimentConfig, load_config
from .errors import ConfigParseError, ConfigValidationError, NotADistribution, NotPositive, QcorrError
from .linalg import min_eigenvalue, trace_distance
from .report import build_report, dumps
from .sampling import ShotPlan, estimate_bell
from .verify import CheckResult, VerifyContext

REPORT_DIR_ENV = "QCORR_REPORT_DIR"


class InputError(Exception):
    """Bad configuration or input file; maps to exit status 2."""


def _context(cfg: ExperimentConfig) -> VerifyContext:
    try:
        return VerifyContext(
            state=cfg.density(),
            observables=cfg.observable_set(),
            tolerances=cfg.tolerances,
            plan=cfg.shots,
            sweep_seed=cfg.sweep_seed,
        )
    except QcorrError as exc:
        raise InputError(str(exc)) from None


def _matrix_block(m: np.ndarray) -> dict:
    return {"real": np.real(m).tolist(), "imag": np.imag(m).tolist()}


# -- subcommands ------------------------------------------------------------------------

def cmd_verify_bell(args, cfg):
    ctx = _context(cfg)
    checks = [verify.run_check(verify.check_max_violation, ctx), verify.run_check(verify.check_dichotomy, ctx)]
    return {"bell": checks[0].detail, "dichotomy": checks[1].detail}, checks


def cmd_lhv_bound(args, cfg):
    enum = lhv_enumeration()
    block = {
        "maximum": enum.maximum,
        "assignments": [{"e": list(e), "f": list(f), "value": v} for e, f, v in enum.assignments],
        "maximizer_count": len(enum.maximizers),
    }
    ok = enum.maximum == 2
    return {"lhv": block}, [CheckResult(2, "lhv_bound", ok, {}, "" if ok else f"LHV maximum {enum.maximum} != 2")]


def cmd_tsirelson(args, cfg):
    ctx = _context(cfg)
    fn = lambda c: verify.check_tsirelson(c, samples=args.samples)
    res = verify.run_check(fn, ctx)
    res.id, res.name = 3, "tsirelson"
    return {"tsirelson": res.detail}, [res]


def cmd_tomography(args, cfg):
    if args.input:
        try:
            c = tomography.CorrelationVector.from_csv(args.input)
        except (OSError, ValueError) as exc:
            raise InputError(f"cannot read correlation CSV {args.input}: {exc}") from None
        try:
            w = tomography.reconstruct(c)
        except NotPositive as exc:
            return {"tomography": {"source": str(args.input)}}, [
                CheckResult(5, "tomography_physical", False, {}, f"NotPositive: {exc}")
            ]
        block = {
            "source": str(args.input),
            "qubit_count": w.qubit_count,
            "state": _matrix_block(w.matrix),
            "min_eigenvalue": min_eigenvalue(w.matrix),
        }
        return {"tomography": block}, [CheckResult(5, "tomography_physical", True, {})]
    ctx = _context(cfg)
    c = tomography.correlations_of(ctx.state)
    if args.write_csv:
        c.to_csv(args.write_csv)
    back = tomography.reconstruct(c)
    dist = trace_distance(back, ctx.state)
    tol = ctx.tol("roundtrip")
    ok = dist <= tol
    block = {"qubit_count": c.qubit_count, "nonzero_coefficients": int(np.sum(np.abs(c.coefficients) > 1e-12)),
             "trace_distance": dist}
    return {"tomography": block}, [
        CheckResult(5, "tomography_roundtrip", ok, {}, "" if ok else f"round-trip trace distance {dist:.3e} > {tol}")
    ]


def cmd_counting(args, cfg):
    try:
        rep = tomography.real_hilbert_counting(args.d)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    ok = not rep.sufficient
    return {"counting": rep.to_dict()}, [
        CheckResult(6, "real_hilbert_counting", ok, {}, "" if ok else "subsystem parameters suffice")
    ]


def cmd_demo(args, cfg):
    ctx = _context(cfg)
    if args.which == "mix":
        res = verify.run_check(verify.check_mixing, ctx)
    elif args.which == "swap":
        if args.pairs == "psi_minus,psi_minus":
            res = verify.run_check(verify.check_swap, ctx)
        else:
            try:
                p12, p34 = args.pairs.split(",")
                rep = entanglement.swap_protocol(p12, p34)
            except ValueError as exc:
                raise InputError(f"--pairs: {exc}") from None
            tol = ctx.tol("swap")
            ok = all(abs(o.probability - 0.25) <= tol and abs(o.fidelity_to_bell - 1) <= tol for o in rep.outcomes)
            res = CheckResult(8, "entanglement_swapping", ok, rep.to_dict(), "" if ok else "swap contract violated")
    else:
        res = verify.run_check(verify.check_flow, ctx)
    return {f"demo_{args.which}": res.detail}, [res]


def cmd_sample(args, cfg):
    ctx = _context(cfg)
    plan = ShotPlan(
        args.shots if args.shots is not None else cfg.shots.shots_per_setting,
        args.seed if args.seed is not None else cfg.shots.seed,
    )
    exp = ctx.experiment()
    est = estimate_bell(exp, plan)
    exact = bell_value(exp).S
    if args.counts_csv:
        est.counts_csv(args.counts_csv)
    k = ctx.tol("sampling_sigmas")
    gap = abs(est.S - exact)
    ok = gap <= k * est.sigma_S
    checks = [CheckResult(
        10, "sampling_consistency", ok, {},
        "" if ok else f"estimate {est.S:.6g} is {gap:.3g} from exact {exact:.6g}",
    )]
    if abs(exact) > 2.0 + ctx.tol("violation"):
        v = est.violation_sigmas
        ok = v is not None and v > ctx.tol("min_violation_sigmas")
        checks.append(CheckResult(10, "statistical_violation", ok, {}, "" if ok else f"violation only {v} sigma"))
    block = {**est.to_dict(), "exact_S": exact}
    return {"sampling": block}, checks


def cmd_verify_paper(args, cfg):
    ctx = _context(cfg)
    checks = verify.verify_paper(ctx)
    return {f"criterion_{c.id:02d}_{c.name}": c.detail for c in checks}, checks


COMMANDS = {
    "verify-bell": cmd_verify_bell,
    "lhv-bound": cmd_lhv_bound,
    "tsirelson": cmd_tsirelson,
    "tomography": cmd_tomography,
    "counting": cmd_counting,
    "demo": cmd_demo,
    "sample": cmd_sample,
    "verify-paper": cmd_verify_paper,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="YAML or JSON experiment config")
    common.add_argument("--output", type=Path, help="write the JSON report here")
    common.add_argument("--quiet", action="store_true", help="do not print the report")

    parser = argparse.ArgumentParser(prog="qcorr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify-bell", parents=[common], help="four-qubit maximal violation")
    sub.add_parser("lhv-bound", parents=[common], help="enumerate the local bound")
    p = sub.add_parser("tsirelson", parents=[common], help="operator-norm sweep")
    p.add_argument("--samples", type=int, default=500)
    p = sub.add_parser("tomography", parents=[common], help="reconstruct a state from correlations")
    p.add_argument("--input", type=Path, help="word,coefficient CSV to reconstruct")
    p.add_argument("--write-csv", type=Path, help="write the configured state's correlations")
    p = sub.add_parser("counting", parents=[common], help="real Hilbert space parameter count")
    p.add_argument("--d", type=int, default=2)
    p = sub.add_parser("demo", parents=[common], help="entanglement demonstrations")
    p.add_argument("which", choices=["mix", "swap", "flow"])
    p.add_argument("--pairs", default="psi_minus,psi_minus", help="Bell states of pairs (1,2) and (3,4)")
    p = sub.add_parser("sample", parents=[common], help="finite-shot CHSH estimate")
    p.add_argument("--shots", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--counts-csv", type=Path)
    sub.add_parser("verify-paper", parents=[common], help="run every check")
    return parser


def _report_path(args, cfg) -> Path | None:
    if args.output:
        return args.output
    if cfg.output:
        return Path(cfg.output)
    env = os.environ.get(REPORT_DIR_ENV)
    if env:
        return Path(env) / f"{args.command}.json"
    return None


def run_command(argv=None, stdout=None, stderr=None) -> tuple[int, dict | None]:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else ExperimentConfig()
        if getattr(args, "shots", None) is not None and args.shots < 1:
            raise InputError("--shots must be >= 1")
        results, checks = COMMANDS[args.command](args, cfg)
    except (ConfigParseError, ConfigValidationError, InputError, NotADistribution) as exc:
        print(f"qcorr: error: {exc}", file=stderr)
        return 2, None
    report = build_report(args.command, cfg.echo(), results, checks)
    text = dumps(report)
    path = _report_path(args, cfg)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    if not args.quiet:
        stdout.write(text)
    failed = [c for c in checks if not c.passed]
    for c in failed:
        print(f"qcorr: check {c.id} ({c.name}) failed: {c.message}", file=stderr)
    return (1 if failed else 0), report


def main(argv=None) -> int:
    code, _ = run_command(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
