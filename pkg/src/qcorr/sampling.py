"""Finite-shot Born-rule sampling of the four CHSH settings.

Every shot draws one of the 16 joint eigenprojector cells ``(i, j)`` of the
two party observables, then records the party-level signs. Randomness is a
counter-based hash keyed by ``(seed, setting index, shot index)``, so counts
do not depend on how shots are batched or ordered.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _backend
from .bell import (
    CLASSICAL_BOUND,
    SETTING_SIGNS,
    SETTINGS,
    TSIRELSON_BOUND,
    BellExperiment,
    DichotomicObservable,
)
from .states import DensityOperator

NEGATIVE_NOISE = -1e-12
DEFAULT_SHOTS = 100_000
DEFAULT_SEED = 20070412
_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class ShotPlan:
    shots_per_setting: int = DEFAULT_SHOTS
    seed: int = DEFAULT_SEED
    settings: tuple[tuple[str, str], ...] = SETTINGS

    def __post_init__(self):
        if int(self.shots_per_setting) != self.shots_per_setting or self.shots_per_setting < 1:
            raise ValueError(f"shots_per_setting must be a positive integer, got {self.shots_per_setting!r}")
        object.__setattr__(self, "shots_per_setting", int(self.shots_per_setting))
        object.__setattr__(self, "seed", int(self.seed))


def born_cells(state: DensityOperator, obs_I: DichotomicObservable, obs_II: DichotomicObservable) -> np.ndarray:
    """Joint probabilities ``Tr[W (P_i (x) Q_j)]`` over the signed eigenprojectors.

    Rows follow ``obs_I.signed_projectors()``, columns ``obs_II``'s.
    """
    left = obs_I.signed_projectors()
    right = obs_II.signed_projectors()
    if not left or not right:
        raise ValueError("observables carry no eigenprojectors to sample from")
    p = np.empty((len(left), len(right)))
    for i, (_, pi) in enumerate(left):
        for j, (_, pj) in enumerate(right):
            p[i, j] = np.real(np.trace(state.matrix @ np.kron(pi, pj)))
    if np.any(p < NEGATIVE_NOISE):
        raise ValueError(f"negative Born probability {p.min():.3e}")
    p = np.clip(p, 0.0, None)
    return p / p.sum()


@dataclass(frozen=True)
class SettingCounts:
    cells: np.ndarray = field(repr=False)
    row_signs: tuple[int, ...]
    col_signs: tuple[int, ...]

    @property
    def shots(self) -> int:
        return int(self.cells.sum())

    def sign_counts(self) -> dict[tuple[int, int], int]:
        """Counts keyed by party-level outcome ``(a, c)``."""
        out = {(a, c): 0 for a in (1, -1) for c in (1, -1)}
        for i, a in enumerate(self.row_signs):
            for j, c in enumerate(self.col_signs):
                out[(a, c)] += int(self.cells[i, j])
        return out

    def frequencies(self) -> np.ndarray:
        return self.cells / self.cells.sum()


def _cell_counts(probs: np.ndarray, seed: int, stream: int, shots: int) -> np.ndarray:
    flat = probs.reshape(-1)
    cdf = np.cumsum(flat)
    counts = _backend.sample_categories(cdf, seed & _U64, stream, 0, shots)
    return np.asarray(counts, dtype=np.int64).reshape(probs.shape)


def sample_setting(
    state: DensityOperator,
    obs_I: DichotomicObservable,
    obs_II: DichotomicObservable,
    shots: int,
    seed: int,
    stream: int = 0,
) -> SettingCounts:
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if obs_I.qubit_count + obs_II.qubit_count != state.qubit_count:
        raise ValueError("observables do not match the state's party split")
    probs = born_cells(state, obs_I, obs_II)
    cells = _cell_counts(probs, seed, stream, shots)
    return SettingCounts(
        cells,
        tuple(s for s, _ in obs_I.signed_projectors()),
        tuple(s for s, _ in obs_II.signed_projectors()),
    )


@dataclass(frozen=True)
class EstimatedBellReport:
    plan: ShotPlan
    counts: tuple[dict[tuple[int, int], int], ...]
    terms: tuple[float, ...]
    standard_errors: tuple[float, ...]
    S: float
    sigma_S: float
    violation_sigmas: float | None

    def to_dict(self) -> dict:
        def key(a: int, c: int) -> str:
            return f"{a:+d},{c:+d}"

        return {
            "shots_per_setting": self.plan.shots_per_setting,
            "seed": self.plan.seed,
            "settings": [
                {
                    "setting": f"{x},{y}",
                    "counts": {key(a, c): n for (a, c), n in sorted(cnt.items(), reverse=True)},
                    "E": e,
                    "standard_error": se,
                }
                for (x, y), cnt, e, se in zip(self.plan.settings, self.counts, self.terms, self.standard_errors)
            ],
            "S": self.S,
            "abs_S": abs(self.S),
            "sigma_S": self.sigma_S,
            "violation_sigmas": self.violation_sigmas,
            "classical_bound": CLASSICAL_BOUND,
            "tsirelson_bound": TSIRELSON_BOUND,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def counts_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["setting", "a", "c", "count"])
        for (x, y), cnt in zip(self.plan.settings, self.counts):
            for (a, c), n in sorted(cnt.items(), reverse=True):
                w.writerow([f"{x}{y}", f"{a:+d}", f"{c:+d}", n])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text


def _estimate(counts: dict[tuple[int, int], int]) -> tuple[float, float]:
    n = sum(counts.values())
    same = counts[(1, 1)] + counts[(-1, -1)]
    e = (2 * same - n) / n
    if n < 2:
        return e, 0.0
    # sample variance (ddof=1) of a +-1 variable with mean e
    var = n * (1.0 - e * e) / (n - 1)
    return e, math.sqrt(max(var, 0.0) / n)


def estimate_bell(exp: BellExperiment, plan: ShotPlan | None = None) -> EstimatedBellReport:
    plan = plan or ShotPlan()
    counts = []
    terms = []
    errors = []
    for stream, (x, y) in enumerate(exp.setting_pairs()):
        sc = sample_setting(exp.state, x, y, plan.shots_per_setting, plan.seed, stream)
        cnt = sc.sign_counts()
        e, se = _estimate(cnt)
        counts.append(cnt)
        terms.append(e)
        errors.append(se)
    s = float(sum(sign * e for sign, e in zip(SETTING_SIGNS, terms)))
    sigma = math.sqrt(sum(se * se for se in errors))
    viol = (abs(s) - CLASSICAL_BOUND) / sigma if sigma > 0 else None
    return EstimatedBellReport(plan, tuple(counts), tuple(terms), tuple(errors), s, sigma, viol)


def total_variation(freqs: np.ndarray, probs: np.ndarray) -> float:
    return 0.5 * float(np.sum(np.abs(np.asarray(freqs) - np.asarray(probs))))
