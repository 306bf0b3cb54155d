"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or directly with ``python3 tests/test_acceptance.py``.
"""

import io
import json
import math
import sys
import tempfile
from pathlib import Path

import pytest

from qcorr import verify
from qcorr.bell import pair_observable
from qcorr.cli import run_command

SQRT8 = 2 * math.sqrt(2)
RESULTS: dict[int, tuple[str, bool, str]] = {}


def record(n: int, name: str, ok: bool, detail: str) -> None:
    RESULTS[n] = (name, bool(ok), detail)
    assert ok, f"criterion {n} ({name}): {detail}"


def summary_lines() -> list[str]:
    return [f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {name}: {detail}" for n, (name, ok, detail) in sorted(RESULTS.items())]


@pytest.fixture(scope="module")
def ctx():
    return verify.VerifyContext.default()


def test_criterion_01_maximal_violation(ctx):
    res = verify.check_max_violation(ctx)
    s = res.detail["S"]
    ok = abs(abs(s) - SQRT8) <= 1e-10
    record(1, "maximal violation", ok and res.passed, f"S = {s:.15f}, |S| - 2sqrt2 = {abs(s) - SQRT8:.2e}")


def test_criterion_02_classical_bound(ctx):
    res = verify.check_classical_bound(ctx, samples=1000)
    d = res.detail
    ok = d["lhv_maximum"] == 2 and d["max_abs_S_separable"] <= 2 + 1e-9
    record(2, "classical bound", ok and res.passed,
           f"LHV max {d['lhv_maximum']}, max |S| over 1000 separable states {d['max_abs_S_separable']:.6f}")


def test_criterion_03_tsirelson(ctx):
    res = verify.check_tsirelson(ctx, samples=500)
    d = res.detail
    ok = d["max_random_norm"] <= SQRT8 + 1e-9 and abs(d["reference_norm"] - SQRT8) <= 1e-9
    record(3, "Tsirelson bound", ok and res.passed,
           f"max norm over 500 quadruples {d['max_random_norm']:.6f}, reference quadruple {d['reference_norm']:.12f}")


def test_criterion_04_dichotomy(ctx):
    res = verify.check_dichotomy(ctx)
    worst = max(res.detail["max_abs_square_minus_identity"].values())
    herm = max(res.detail["max_abs_hermiticity_defect"].values())
    record(4, "dichotomy", worst <= 1e-10 and herm <= 1e-10 and res.passed,
           f"max |O^2 - 1| = {worst:.1e}, max |O - O^H| = {herm:.1e}")


def test_criterion_05_ssc_roundtrip(ctx):
    res = verify.check_ssc_roundtrip(ctx, samples=100)
    d = res.detail
    worst = max(d["max_trace_distance"].values())
    ok = worst <= 1e-10 and d["singlet_max_entry_deviation"] <= 1e-12
    record(5, "correlation round trip", ok and res.passed,
           f"max trace distance {worst:.1e}, singlet projector deviation {d['singlet_max_entry_deviation']:.1e}")


def test_criterion_06_counting(ctx):
    res = verify.check_counting(ctx)
    d2 = res.detail["2"]
    ok = d2["composite_params"] == 10 and d2["subsystem_params_squared"] == 9
    ok = ok and all(not v["sufficient"] for v in res.detail.values())
    record(6, "real Hilbert space counting", ok and res.passed,
           f"d=2: {d2['composite_params']} > {d2['subsystem_params_squared']}; insufficient for d=2..10")


def test_criterion_07_mixing(ctx):
    res = verify.check_mixing(ctx)
    d = res.detail
    ok = (
        d["max_entry_difference"] <= 1e-12
        and all(v["verdict"] == "entangled" for v in d["components"].values())
        and d["mixture"]["verdict"] == "separable"
    )
    record(7, "mixing away", ok and res.passed,
           f"entrywise gap {d['max_entry_difference']:.1e}, mixture min PT eigenvalue {d['mixture']['min_pt_eigenvalue']:.3f}")


def test_criterion_08_swap(ctx):
    res = verify.check_swap(ctx)
    d = res.detail
    probs = [o["probability"] for o in d["outcomes"]]
    fids = [o["fidelity_to_bell"] for o in d["outcomes"]]
    ok = (
        all(abs(p - 0.25) <= 1e-10 for p in probs)
        and all(abs(f - 1) <= 1e-10 for f in fids)
        and all(o["matched_bell_state"] == o["outcome"] for o in d["outcomes"])
        and d["initial_outer_max_deviation_from_I4"] <= 1e-10
    )
    record(8, "entanglement swapping", ok and res.passed,
           f"max |p - 1/4| {max(abs(p - 0.25) for p in probs):.1e}, min fidelity {min(fids):.12f}")


def test_criterion_09_flow(ctx):
    res = verify.check_flow(ctx)
    d = res.detail
    ok = all(v["verdict"] == "separable" for v in d["reductions"].values())
    ok = ok and all(v["verdict"] == "entangled" for v in d["components_23"].values())
    mins = ", ".join(f"{k}:{v['min_pt_eigenvalue']:.3f}" for k, v in d["reductions"].items())
    record(9, "entanglement flow", ok and res.passed, f"reduction min PT eigenvalues {mins}")


def test_criterion_10_statistical_sufficiency(ctx):
    assert ctx.plan.shots_per_setting == 10**5
    res = verify.check_sampling(ctx)
    d = res.detail
    ok = (
        abs(d["S"]) - 2 > 10 * d["sigma_S"]
        and abs(abs(d["S"]) - SQRT8) <= 5 * d["sigma_S"]
        and d["byte_identical_rerun"]
    )
    record(10, "statistical sufficiency", ok and res.passed,
           f"S = {d['S']:.4f} +- {d['sigma_S']:.4f}, {d['violation_sigmas']:.0f} sigma above 2, rerun identical")


def test_criterion_11_single_qubit_chsh(ctx):
    res = verify.check_single_qubit_chsh(ctx)
    s = res.detail["S"]
    ok = abs(abs(s) - SQRT8) <= 1e-10
    record(11, "single-qubit CHSH on (|uu>-|dd>)/sqrt2", ok and res.passed,
           f"S = {s:.12f}, terms {[round(t, 6) for t in res.detail['terms'].values()]}")


def _mutated_config(i: int, j: int) -> dict:
    m = pair_observable("b").matrix.copy()
    m[i, j] += 1e-3
    rows = [[[z.real, z.imag] for z in row] for row in m]
    return {"observables": {"b": {"matrix": rows}}}


def _cli(argv, cfg, tmp_path):
    p = tmp_path / "mut.json"
    p.write_text(json.dumps(cfg))
    return run_command(argv + ["--config", str(p), "--quiet"], io.StringIO(), io.StringIO())


def test_criterion_12_mutation_sensitivity(tmp_path):
    caught = []
    # every entry through the checks that guard the observables (1 and 4)
    for i in range(4):
        for j in range(4):
            code, report = _cli(["verify-bell"], _mutated_config(i, j), tmp_path)
            failed = {c["id"] for c in report["summary"]["checks"] if not c["passed"]}
            caught.append(code == 1 and bool(failed & {1, 4}))
    # the full battery on a diagonal and an off-diagonal mutation
    full = []
    for i, j in ((0, 0), (1, 2)):
        code, report = _cli(["verify-paper"], _mutated_config(i, j), tmp_path)
        failed = {c["id"] for c in report["summary"]["checks"] if not c["passed"]}
        full.append(code == 1 and bool(failed & {1, 4}))
    ok = all(caught) and all(full)
    record(12, "mutation sensitivity", ok,
           f"{sum(caught)}/16 single-entry mutations of b caught, full run caught {sum(full)}/2")


if __name__ == "__main__":
    c = verify.VerifyContext.default()
    for key, fn in sorted(globals().items()):
        if not key.startswith("test_criterion_"):
            continue
        try:
            if "tmp_path" in fn.__code__.co_varnames:
                with tempfile.TemporaryDirectory() as d:
                    fn(Path(d))
            else:
                fn(c)
        except AssertionError:
            pass
    print("\n".join(summary_lines()))
    sys.exit(0 if all(ok for _, ok, _ in RESULTS.values()) else 1)
