"""The full battery of numerical checks behind ``qcorr verify-paper``.

Each check returns a :class:`CheckResult` whose ``detail`` block holds every
number used to decide pass or fail.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import bell, entanglement, tomography
from .bell import (
    TSIRELSON_BOUND,
    BellExperiment,
    DichotomicObservable,
    bell_value,
    lhv_enumeration,
    random_dichotomic,
    tsirelson_check,
)
from .errors import QcorrError
from .linalg import hermiticity_error, trace_distance
from .sampling import ShotPlan, estimate_bell
from .states import (
    DensityOperator,
    projector_of,
    random_density,
    random_separable_state,
)

DEFAULT_TOLERANCES: dict[str, float] = {
    "violation": 1e-10,
    "dichotomy": 1e-10,
    "tsirelson": 1e-9,
    "separable_bound": 1e-9,
    "roundtrip": 1e-10,
    "identity": 1e-12,
    "swap": 1e-10,
    "sampling_sigmas": 5.0,
    "min_violation_sigmas": 10.0,
}
DEFAULT_SWEEP_SEED = 1969


@dataclass
class CheckResult:
    id: int
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    message: str = ""

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "passed": bool(self.passed),
            "message": self.message,
            "detail": self.detail,
        }


@dataclass
class VerifyContext:
    state: DensityOperator
    observables: tuple[DichotomicObservable, DichotomicObservable, DichotomicObservable, DichotomicObservable]
    tolerances: dict[str, float]
    plan: ShotPlan
    sweep_seed: int = DEFAULT_SWEEP_SEED

    @classmethod
    def default(cls, **overrides) -> "VerifyContext":
        base = dict(
            state=bell.four_qubit_state(),
            observables=bell.pair_observables(),
            tolerances=dict(DEFAULT_TOLERANCES),
            plan=ShotPlan(),
        )
        base.update(overrides)
        return cls(**base)

    def tol(self, key: str) -> float:
        return float(self.tolerances.get(key, DEFAULT_TOLERANCES[key]))

    def experiment(self, state: DensityOperator | None = None) -> BellExperiment:
        a, ap, b, bp = self.observables
        return BellExperiment(state if state is not None else self.state, (a, ap), (b, bp))

    def rng(self, salt: int) -> np.random.Generator:
        return np.random.default_rng([self.sweep_seed, salt])


def check_max_violation(ctx: VerifyContext) -> CheckResult:
    rep = bell_value(ctx.experiment())
    dev = abs(abs(rep.S) - TSIRELSON_BOUND)
    ok = dev <= ctx.tol("violation")
    return CheckResult(
        1, "maximal_violation", ok, {**rep.to_dict(), "deviation_from_2sqrt2": dev},
        "" if ok else f"|S| = {abs(rep.S):.15g} differs from 2*sqrt(2) by {dev:.3e}",
    )


def check_classical_bound(ctx: VerifyContext, samples: int = 1000) -> CheckResult:
    enum = lhv_enumeration()
    rng = ctx.rng(2)
    worst = 0.0
    for _ in range(samples):
        s = abs(bell_value(ctx.experiment(random_separable_state(4, rng))).S)
        worst = max(worst, s)
    limit = 2.0 + ctx.tol("separable_bound")
    ok = enum.maximum == 2 and worst <= limit
    return CheckResult(
        2, "classical_bound", ok,
        {
            "lhv_maximum": enum.maximum,
            "lhv_maximizers": len(enum.maximizers),
            "separable_samples": samples,
            "max_abs_S_separable": worst,
        },
        "" if ok else f"LHV max {enum.maximum}, separable max |S| {worst:.12g} (limit {limit})",
    )


def check_tsirelson(ctx: VerifyContext, samples: int = 500) -> CheckResult:
    rng = ctx.rng(3)
    tol = ctx.tol("tsirelson")
    worst = 0.0
    for _ in range(samples):
        quad = [random_dichotomic(2, rng) for _ in range(4)]
        worst = max(worst, tsirelson_check(*quad).norm)
    try:
        reference_norm = tsirelson_check(*ctx.observables).norm
    except QcorrError as exc:
        return CheckResult(3, "tsirelson", False, {"random_samples": samples, "max_random_norm": worst}, str(exc))
    attained = abs(reference_norm - TSIRELSON_BOUND) <= tol
    ok = worst <= TSIRELSON_BOUND + tol and attained
    return CheckResult(
        3, "tsirelson", ok,
        {"random_samples": samples, "max_random_norm": worst, "reference_norm": reference_norm},
        "" if ok else f"max random norm {worst:.12g}, reference norm {reference_norm:.12g}",
    )


def check_dichotomy(ctx: VerifyContext) -> CheckResult:
    # a dichotomic observable is Hermitian and squares to 1; a non-Hermitian
    # matrix can still square to 1, so both residuals are needed
    names = [o.name or f"obs{i}" for i, o in enumerate(ctx.observables)]
    sq = {k: o.dichotomy_residual() for k, o in zip(names, ctx.observables)}
    herm = {k: hermiticity_error(o.matrix) for k, o in zip(names, ctx.observables)}
    tol = ctx.tol("dichotomy")
    bad = [k for k in names if not (sq[k] <= tol and herm[k] <= tol)]
    return CheckResult(
        4, "dichotomy", not bad, {"max_abs_square_minus_identity": sq, "max_abs_hermiticity_defect": herm},
        "" if not bad else f"observable(s) {', '.join(bad)} are not Hermitian involutions",
    )


def check_ssc_roundtrip(ctx: VerifyContext, samples: int = 100) -> CheckResult:
    rng = ctx.rng(5)
    worst = {}
    for n in (1, 2, 3, 4):
        w_max = 0.0
        for _ in range(samples):
            w = random_density(n, rng)
            w_max = max(w_max, trace_distance(tomography.reconstruct(tomography.correlations_of(w)), w))
        worst[str(n)] = w_max
    anti = tomography.CorrelationVector.from_mapping({"II": 1.0, "XX": -1.0, "YY": -1.0, "ZZ": -1.0})
    singlet_dev = float(np.max(np.abs(tomography.reconstruct(anti).matrix - projector_of("psi_minus"))))
    tol = ctx.tol("roundtrip")
    ok = all(v <= tol for v in worst.values()) and singlet_dev <= ctx.tol("identity")
    return CheckResult(
        5, "ssc_roundtrip", ok,
        {"samples_per_n": samples, "max_trace_distance": worst, "singlet_max_entry_deviation": singlet_dev},
        "" if ok else "reconstruction from correlations did not reproduce the state",
    )


def check_counting(ctx: VerifyContext) -> CheckResult:
    reports = {d: tomography.real_hilbert_counting(d) for d in range(2, 11)}
    r2 = reports[2]
    ok = r2.composite_params == 10 and r2.product_params == 9 and not any(r.sufficient for r in reports.values())
    return CheckResult(
        6, "real_hilbert_counting", ok,
        {str(d): r.to_dict() for d, r in reports.items()},
        "" if ok else "counting argument does not show a deficit",
    )


def check_mixing(ctx: VerifyContext) -> CheckResult:
    rep = entanglement.mixing_away_demo()
    ok = rep.max_entry_difference <= ctx.tol("identity") and rep.passed
    return CheckResult(7, "mixing_away", ok, rep.to_dict(), "" if ok else "mixing-away identity failed")


def check_swap(ctx: VerifyContext) -> CheckResult:
    rep = entanglement.swap_protocol()
    tol = ctx.tol("swap")
    probs_ok = all(abs(o.probability - 0.25) <= tol for o in rep.outcomes)
    fid_ok = all(
        o.matched_bell == o.outcome_label and abs(o.fidelity_to_bell - 1.0) <= tol for o in rep.outcomes
    )
    outer_dev = float(np.max(np.abs(rep.initial_outer.matrix - np.eye(4) / 4)))
    ok = probs_ok and fid_ok and outer_dev <= tol
    return CheckResult(8, "entanglement_swapping", ok, rep.to_dict(), "" if ok else "swap outcome contract violated")


def check_flow(ctx: VerifyContext) -> CheckResult:
    rep = entanglement.flow_demo()
    return CheckResult(9, "entanglement_flow", rep.passed, rep.to_dict(), "" if rep.passed else "flow claims failed")


def check_sampling(ctx: VerifyContext) -> CheckResult:
    exp = ctx.experiment()
    first = estimate_bell(exp, ctx.plan)
    second = estimate_bell(exp, ctx.plan)
    identical = first.to_json() == second.to_json()
    k = ctx.tol("sampling_sigmas")
    gap = abs(abs(first.S) - TSIRELSON_BOUND)
    near = first.sigma_S > 0 and gap <= k * first.sigma_S
    viol = first.violation_sigmas is not None and first.violation_sigmas > ctx.tol("min_violation_sigmas")
    ok = identical and near and viol
    detail = {**first.to_dict(), "distance_to_2sqrt2_in_sigmas": gap / first.sigma_S if first.sigma_S else None,
              "byte_identical_rerun": identical}
    return CheckResult(10, "statistical_sufficiency", ok, detail, "" if ok else "finite-shot estimate failed its contract")


def check_single_qubit_chsh(ctx: VerifyContext) -> CheckResult:
    rep = bell.single_qubit_chsh()
    dev = abs(abs(rep.S) - TSIRELSON_BOUND)
    ok = dev <= ctx.tol("violation")
    # diagnostic only: the largest |S| over the four placements of the minus sign
    e = list(rep.terms)
    best = max(abs(sum(e) - 2 * e[k]) for k in range(4))
    return CheckResult(
        11, "single_qubit_chsh", ok,
        {**rep.to_dict(), "deviation_from_2sqrt2": dev, "max_abs_S_any_sign_placement": best},
        "" if ok else f"|S| = {abs(rep.S):.6g} for the single-qubit settings on (|uu>-|dd>)/sqrt2",
    )


CHECKS: tuple[Callable[[VerifyContext], CheckResult], ...] = (
    check_max_violation,
    check_classical_bound,
    check_tsirelson,
    check_dichotomy,
    check_ssc_roundtrip,
    check_counting,
    check_mixing,
    check_swap,
    check_flow,
    check_sampling,
    check_single_qubit_chsh,
)


def run_check(fn: Callable[[VerifyContext], CheckResult], ctx: VerifyContext) -> CheckResult:
    try:
        return fn(ctx)
    except ValueError as exc:
        name = fn.__name__.removeprefix("check_")
        idx = CHECKS.index(fn) + 1 if fn in CHECKS else 0
        return CheckResult(idx, name, False, {}, f"{type(exc).__name__}: {exc}")


def verify_paper(ctx: VerifyContext | None = None) -> list[CheckResult]:
    ctx = ctx or VerifyContext.default()
    return [run_check(fn, ctx) for fn in CHECKS]
