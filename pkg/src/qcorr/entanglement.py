"""PPT separability test and the mixing, swapping and flow demonstrations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import InvalidBipartition
from .states import (
    BELL_LABELS,
    DensityOperator,
    bell_projectors,
    density_from_ket,
    embed,
    fidelity_to_pure,
    mix,
    named_state,
    partial_trace,
    partial_transpose,
    product_ket,
    projective_measure,
    projector_of,
)

ENTANGLED_BELOW = -1e-10
SEPARABLE = "separable"
ENTANGLED = "entangled"


@dataclass(frozen=True)
class SeparabilityVerdict:
    bipartition: tuple[tuple[int, ...], tuple[int, ...]]
    min_pt_eigenvalue: float
    verdict: str
    conclusive: bool

    @property
    def separable(self) -> bool:
        return self.verdict == SEPARABLE

    @property
    def negativity(self) -> float:
        return max(0.0, -self.min_pt_eigenvalue)

    def to_dict(self) -> dict:
        return {
            "bipartition": [list(self.bipartition[0]), list(self.bipartition[1])],
            "min_pt_eigenvalue": self.min_pt_eigenvalue,
            "verdict": self.verdict,
            "conclusive": self.conclusive,
        }


def _as_split(bipartition, n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if isinstance(bipartition, str):
        raise InvalidBipartition("bipartition must be a pair of qubit-label sets")
    try:
        left, right = bipartition
    except (TypeError, ValueError):
        raise InvalidBipartition("bipartition must be a pair of qubit-label sets") from None
    left = tuple(sorted(int(i) for i in left))
    right = tuple(sorted(int(i) for i in right))
    if not left or not right:
        raise InvalidBipartition("both sides of the bipartition must be nonempty")
    if set(left) & set(right):
        raise InvalidBipartition(f"sides overlap: {sorted(set(left) & set(right))}")
    if set(left) | set(right) != set(range(1, n + 1)):
        raise InvalidBipartition(f"bipartition {left}|{right} does not cover qubits 1..{n}")
    return left, right


def ppt_check(w: DensityOperator, bipartition) -> SeparabilityVerdict:
    """Peres-Horodecki test; transposes the second side of the split.

    Necessary and sufficient for separability only when the two sides have
    dimensions 2x2 or 2x3, which for qubits means one qubit each.
    """
    left, right = _as_split(bipartition, w.qubit_count)
    pt = partial_transpose(w, right)
    lo = linalg.min_eigenvalue(pt)
    dims = sorted((1 << len(left), 1 << len(right)))
    conclusive = dims in ([2, 2], [2, 3])
    return SeparabilityVerdict(
        (left, right), lo, ENTANGLED if lo < ENTANGLED_BELOW else SEPARABLE, conclusive
    )


def projector_state(*names: str) -> DensityOperator:
    return density_from_ket(product_ket(*names))


# -- mixing away ---------------------------------------------------------------------------------

@dataclass(frozen=True)
class MixingReport:
    max_entry_difference: float
    components: dict[str, SeparabilityVerdict]
    mixture: SeparabilityVerdict

    @property
    def passed(self) -> bool:
        return (
            self.max_entry_difference <= 1e-12
            and all(v.verdict == ENTANGLED for v in self.components.values())
            and self.mixture.separable
            and self.mixture.conclusive
        )

    def to_dict(self) -> dict:
        return {
            "max_entry_difference": self.max_entry_difference,
            "components": {k: v.to_dict() for k, v in self.components.items()},
            "mixture": self.mixture.to_dict(),
            "passed": self.passed,
        }


def mixing_away_demo() -> MixingReport:
    """Equal mixture of psi+ and psi- equals the mixture of |ud> and |du>."""
    psi_p = density_from_ket(named_state("psi_plus"))
    psi_m = density_from_ket(named_state("psi_minus"))
    lhs = mix([(0.5, psi_p), (0.5, psi_m)])
    rhs = mix([(0.5, projector_state("up", "down")), (0.5, projector_state("down", "up"))])
    diff = float(np.max(np.abs(lhs.matrix - rhs.matrix)))
    split = ((1,), (2,))
    return MixingReport(
        diff,
        {"psi_plus": ppt_check(psi_p, split), "psi_minus": ppt_check(psi_m, split)},
        ppt_check(lhs, split),
    )


# -- swapping --------------------------------------------------------------------------------------

@dataclass(frozen=True)
class SwapOutcome:
    outcome_label: str
    probability: float
    conditional_state: DensityOperator | None
    matched_bell: str | None
    fidelity_to_bell: float

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome_label,
            "probability": self.probability,
            "matched_bell_state": self.matched_bell,
            "fidelity_to_bell": self.fidelity_to_bell,
            "purity": None if self.conditional_state is None else self.conditional_state.purity(),
        }


@dataclass(frozen=True)
class SwapReport:
    sources: tuple[str, str]
    outcomes: tuple[SwapOutcome, ...]
    initial_outer: DensityOperator
    initial_outer_verdict: SeparabilityVerdict

    @property
    def probability_sum(self) -> float:
        return float(sum(o.probability for o in self.outcomes))

    def to_dict(self) -> dict:
        return {
            "sources": {"pair_12": self.sources[0], "pair_34": self.sources[1]},
            "outcomes": [o.to_dict() for o in self.outcomes],
            "probability_sum": self.probability_sum,
            "initial_outer_max_deviation_from_I4": float(
                np.max(np.abs(self.initial_outer.matrix - np.eye(4) / 4))
            ),
            "initial_outer_verdict": self.initial_outer_verdict.to_dict(),
        }


def swap_protocol(pair_12: str = "psi_minus", pair_34: str = "psi_minus") -> SwapReport:
    """Bell-state measurement on qubits 2 and 3 of two independent Bell pairs.

    Each outcome leaves qubits 1 and 4, which never interacted, in a Bell
    state. Outcomes are listed in the order psi-, psi+, phi+, phi-.
    """
    for label in (pair_12, pair_34):
        if label not in BELL_LABELS:
            raise ValueError(f"source pairs must be Bell states {BELL_LABELS}, got {label!r}")
    initial = density_from_ket(named_state(pair_12).tensor(named_state(pair_34)))
    projectors = [embed(p, (2, 3), 4) for p in bell_projectors()]
    results = projective_measure(initial, projectors)
    outcomes = []
    for label, res in zip(BELL_LABELS, results):
        if res.state is None:
            outcomes.append(SwapOutcome(label, res.probability, None, None, 0.0))
            continue
        outer = partial_trace(res.state, (1, 4))
        fids = {b: fidelity_to_pure(outer, named_state(b)) for b in BELL_LABELS}
        best = max(BELL_LABELS, key=lambda b: fids[b])
        outcomes.append(SwapOutcome(label, res.probability, outer, best, fids[best]))
    outer0 = partial_trace(initial, (1, 4))
    return SwapReport(
        (pair_12, pair_34), tuple(outcomes), outer0, ppt_check(outer0, ((1,), (2,)))
    )


# -- flow into a three-particle state --------------------------------------------------------------

FLOW_PAIRS = ((1, 2), (1, 3), (2, 3))


@dataclass(frozen=True)
class FlowReport:
    state: DensityOperator
    reductions: dict[tuple[int, int], SeparabilityVerdict]
    reduction_23_deviation: float
    component_23: dict[str, SeparabilityVerdict]

    @property
    def passed(self) -> bool:
        return (
            abs(np.trace(self.state.matrix).real - 1.0) <= 1e-12
            and all(v.separable and v.conclusive for v in self.reductions.values())
            and all(v.verdict == ENTANGLED for v in self.component_23.values())
            and self.reduction_23_deviation <= 1e-12
        )

    def to_dict(self) -> dict:
        return {
            "trace": float(np.trace(self.state.matrix).real),
            "reductions": {f"{i}{j}": v.to_dict() for (i, j), v in self.reductions.items()},
            "reduction_23_deviation": self.reduction_23_deviation,
            "components_23": {k: v.to_dict() for k, v in self.component_23.items()},
            "passed": self.passed,
        }


def flow_components() -> tuple[DensityOperator, DensityOperator]:
    """Normalized |u>(x)|psi-> and |d>(x)|psi+> on qubits 1, (2,3)."""
    return (
        density_from_ket(product_ket("up", "psi_minus")),
        density_from_ket(product_ket("down", "psi_plus")),
    )


def flow_state() -> DensityOperator:
    first, second = flow_components()
    return mix([(0.5, first), (0.5, second)])


def flow_demo() -> FlowReport:
    w = flow_state()
    reductions = {}
    for pair in FLOW_PAIRS:
        reduced = partial_trace(w, pair)
        reductions[pair] = ppt_check(reduced, ((1,), (2,)))
    r23 = partial_trace(w, (2, 3))
    target = 0.5 * (projector_of("psi_minus") + projector_of("psi_plus"))
    dev = float(np.max(np.abs(r23.matrix - target)))
    first, second = flow_components()
    comps = {
        "up_psi_minus": ppt_check(partial_trace(first, (2, 3)), ((1,), (2,))),
        "down_psi_plus": ppt_check(partial_trace(second, (2, 3)), ((1,), (2,))),
    }
    return FlowReport(w, reductions, dev, comps)

