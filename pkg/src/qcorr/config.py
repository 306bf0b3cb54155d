"""YAML/JSON experiment configuration.

Example::

    state: four_particle_Psi
    observables: {a: a, a_prime: a_prime, b: b, b_prime: b_prime}
    shots: {shots_per_setting: 100000, seed: 7}
    tolerances: {violation: 1.0e-10}
    output: report.json

``state`` may also be a list of amplitudes; each amplitude is a number, a
``[re, im]`` pair or a string such as ``"0.5-0.5j"``. An observable may be a
preset name, ``{plus: [kets], minus: [kets]}`` or ``{matrix: rows}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from . import bell
from .bell import OBSERVABLE_NAMES, DichotomicObservable
from .errors import ConfigParseError, ConfigValidationError, QcorrError
from .sampling import DEFAULT_SEED, DEFAULT_SHOTS, ShotPlan
from .states import PRESET_NAMES, DensityOperator, StateVector, density_from_ket, named_state
from .verify import DEFAULT_SWEEP_SEED, DEFAULT_TOLERANCES

TOP_KEYS = {"state", "observables", "shots", "tolerances", "output", "sweep_seed"}
SHOT_KEYS = {"shots_per_setting", "seed"}
AMPLITUDE_NORM_TOL = 1e-9


@dataclass
class ExperimentConfig:
    state: str | list[complex] = "four_particle_Psi"
    observables: dict[str, Any] = field(default_factory=lambda: {n: n for n in OBSERVABLE_NAMES})
    shots: ShotPlan = field(default_factory=ShotPlan)
    tolerances: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output: str | None = None
    sweep_seed: int = DEFAULT_SWEEP_SEED

    def density(self) -> DensityOperator:
        if isinstance(self.state, str):
            return density_from_ket(named_state(self.state))
        return density_from_ket(StateVector.from_amplitudes(self.state, normalize=True))

    def observable_set(self) -> tuple[DichotomicObservable, ...]:
        return tuple(build_observable(n, self.observables[n]) for n in OBSERVABLE_NAMES)

    def echo(self) -> dict:
        state = self.state if isinstance(self.state, str) else [[z.real, z.imag] for z in self.state]
        obs = {k: (v if isinstance(v, str) else "explicit") for k, v in self.observables.items()}
        return {
            "state": state,
            "observables": obs,
            "shots": {"shots_per_setting": self.shots.shots_per_setting, "seed": self.shots.seed},
            "tolerances": dict(sorted(self.tolerances.items())),
            "sweep_seed": self.sweep_seed,
        }


def _complex(value, where: str) -> complex:
    try:
        if isinstance(value, (list, tuple)):
            if len(value) != 2:
                raise ValueError
            return complex(float(value[0]), float(value[1]))
        if isinstance(value, str):
            return complex(value.replace(" ", ""))
        if isinstance(value, bool):
            raise ValueError
        return complex(value)
    except (TypeError, ValueError):
        raise ConfigValidationError(f"cannot read {value!r} as a complex number", where) from None


def _amplitudes(values, where: str) -> list[complex]:
    if not isinstance(values, list) or not values:
        raise ConfigValidationError("amplitude list must be a nonempty list", where)
    amps = [_complex(v, f"{where}[{i}]") for i, v in enumerate(values)]
    n = len(amps)
    if n < 2 or n & (n - 1):
        raise ConfigValidationError(f"amplitude list length {n} is not a power of two", where)
    norm = float(np.sqrt(sum(abs(z) ** 2 for z in amps)))
    if abs(norm - 1.0) > AMPLITUDE_NORM_TOL:
        raise ConfigValidationError(f"amplitudes have norm {norm:.12g}, expected 1", where)
    return amps


def build_observable(name: str, spec) -> DichotomicObservable:
    where = f"observables.{name}"
    try:
        if isinstance(spec, str):
            return bell.pair_observable(spec)
        if not isinstance(spec, dict):
            raise ConfigValidationError("must be a preset name or a mapping", where)
        if "matrix" in spec:
            if set(spec) != {"matrix"}:
                raise ConfigValidationError("'matrix' cannot be combined with other keys", where)
            rows = spec["matrix"]
            if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
                raise ConfigValidationError("matrix must be a list of rows", where)
            m = np.array([[_complex(v, where) for v in r] for r in rows], dtype=complex)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ConfigValidationError(f"matrix shape {m.shape} is not square", where)
            # kept unchecked; verification reports a broken matrix as a failed check
            return DichotomicObservable.from_matrix(m, name, check=False)
        if set(spec) != {"plus", "minus"}:
            raise ConfigValidationError(f"unknown keys {sorted(set(spec) - {'plus', 'minus'})}", where)
        plus = [_amplitudes(k, f"{where}.plus[{i}]") for i, k in enumerate(spec["plus"])]
        minus = [_amplitudes(k, f"{where}.minus[{i}]") for i, k in enumerate(spec["minus"])]
        return DichotomicObservable.from_kets(plus, minus, name)
    except ConfigValidationError:
        raise
    except QcorrError as exc:
        raise ConfigValidationError(str(exc), where) from None


def parse_config(data: Any) -> ExperimentConfig:
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigValidationError("top level must be a mapping")
    unknown = set(data) - TOP_KEYS
    if unknown:
        raise ConfigValidationError(f"unknown key(s) {sorted(unknown)}", sorted(unknown)[0])
    cfg = ExperimentConfig()

    if "state" in data:
        s = data["state"]
        if isinstance(s, str):
            if s not in PRESET_NAMES:
                raise ConfigValidationError(f"unknown preset {s!r}", "state")
            cfg.state = s
        else:
            cfg.state = _amplitudes(s, "state")

    if "observables" in data:
        obs = data["observables"]
        if not isinstance(obs, dict):
            raise ConfigValidationError("must be a mapping of observable names", "observables")
        unknown = set(obs) - set(OBSERVABLE_NAMES)
        if unknown:
            raise ConfigValidationError(f"unknown observable(s) {sorted(unknown)}", "observables")
        cfg.observables.update(obs)
        for name in OBSERVABLE_NAMES:
            build_observable(name, cfg.observables[name])

    if "shots" in data:
        sh = data["shots"]
        if isinstance(sh, int) and not isinstance(sh, bool):
            sh = {"shots_per_setting": sh}
        if not isinstance(sh, dict) or set(sh) - SHOT_KEYS:
            raise ConfigValidationError(f"expected a mapping with keys {sorted(SHOT_KEYS)}", "shots")
        try:
            cfg.shots = ShotPlan(sh.get("shots_per_setting", DEFAULT_SHOTS), sh.get("seed", DEFAULT_SEED))
        except (TypeError, ValueError) as exc:
            raise ConfigValidationError(str(exc), "shots") from None

    if "tolerances" in data:
        tol = data["tolerances"]
        if not isinstance(tol, dict):
            raise ConfigValidationError("must be a mapping", "tolerances")
        unknown = set(tol) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ConfigValidationError(f"unknown tolerance(s) {sorted(unknown)}", "tolerances")
        for k, v in tol.items():
            if isinstance(v, bool) or not isinstance(v, (int, float)) or v < 0:
                raise ConfigValidationError(f"must be a nonnegative number, got {v!r}", f"tolerances.{k}")
            cfg.tolerances[k] = float(v)

    if "output" in data:
        if not isinstance(data["output"], str):
            raise ConfigValidationError("must be a path string", "output")
        cfg.output = data["output"]

    if "sweep_seed" in data:
        if isinstance(data["sweep_seed"], bool) or not isinstance(data["sweep_seed"], int):
            raise ConfigValidationError("must be an integer", "sweep_seed")
        cfg.sweep_seed = data["sweep_seed"]
    return cfg


def load_config(path) -> ExperimentConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigParseError(f"cannot read {p}: {exc.strerror}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        line = exc.problem_mark.line + 1 if exc.problem_mark is not None else None
        raise ConfigParseError(f"invalid YAML: {exc.problem}", line=line) from None
    except yaml.YAMLError as exc:
        raise ConfigParseError(f"invalid YAML: {exc}") from None
    return parse_config(data)
