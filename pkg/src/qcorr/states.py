"""Multi-qubit kets, density operators, mixtures, reductions and measurements.

Qubits are labelled 1..n, label 1 being the leftmost tensor factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatch,
    IncompleteProjectorSet,
    InvalidSubsystem,
    NotADensityOperator,
    NotNormalized,
    UnknownPreset,
    WeightSumInvalid,
)

NORM_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_FLOOR = -1e-10
PROJECTOR_TOL = 1e-10
UNREACHABLE_BELOW = 1e-12

SQRT2 = np.sqrt(2.0)


def _qubits_for_dim(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 2 or (1 << n) != dim:
        raise DimensionMismatch(f"dimension {dim} is not a power of two >= 2")
    return n


@dataclass(frozen=True)
class StateVector:
    qubit_count: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != 1 << self.qubit_count:
            raise DimensionMismatch(
                f"{amps.size} amplitudes for {self.qubit_count} qubits"
            )
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise NotNormalized(f"sum |amplitude|^2 = {norm2!r}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize: bool = False) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        n = _qubits_for_dim(amps.size)
        if normalize:
            amps = amps / np.linalg.norm(amps)
        return cls(n, amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def tensor(self, other: "StateVector") -> "StateVector":
        return StateVector(
            self.qubit_count + other.qubit_count, np.kron(self.amplitudes, other.amplitudes)
        )

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, np.conj(self.amplitudes))


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian, unit-trace, positive semidefinite matrix on ``qubit_count`` qubits."""

    qubit_count: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = linalg.frozen(self.matrix)
        dim = 1 << self.qubit_count
        if m.shape != (dim, dim):
            raise DimensionMismatch(f"matrix shape {m.shape} for {self.qubit_count} qubits")
        herr = linalg.hermiticity_error(m)
        if herr > linalg.HERMITIAN_TOL:
            raise NotADensityOperator(f"not Hermitian: max|W - W^H| = {herr:.3e}")
        tr = np.trace(m)
        if abs(tr - 1.0) > TRACE_TOL:
            raise NotADensityOperator(f"trace {tr.real:.15g} != 1")
        lo = linalg.min_eigenvalue(m)
        if lo < PSD_FLOOR:
            raise NotADensityOperator(f"minimum eigenvalue {lo:.3e} < {PSD_FLOOR:.0e}")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_matrix(cls, matrix) -> "DensityOperator":
        m = linalg.as_matrix(matrix)
        return cls(_qubits_for_dim(m.shape[0]), m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def expectation(self, operator) -> complex:
        return complex(np.trace(self.matrix @ linalg.as_matrix(operator)))

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def tensor(self, other: "DensityOperator") -> "DensityOperator":
        return DensityOperator(
            self.qubit_count + other.qubit_count, np.kron(self.matrix, other.matrix)
        )


@dataclass(frozen=True)
class MixtureSpec:
    components: tuple[tuple[float, DensityOperator], ...]

    def __post_init__(self):
        comps = tuple((float(w), s) for w, s in self.components)
        if not comps:
            raise WeightSumInvalid("empty mixture")
        if any(w < 0 for w, _ in comps):
            raise WeightSumInvalid("negative weight")
        total = sum(w for w, _ in comps)
        if abs(total - 1.0) > 1e-12:
            raise WeightSumInvalid(f"weights sum to {total!r}")
        n = comps[0][1].qubit_count
        if any(s.qubit_count != n for _, s in comps):
            raise DimensionMismatch("mixture components have different qubit counts")
        object.__setattr__(self, "components", comps)


# -- presets -----------------------------------------------------------------

C_PLUS = (4.0 + 2.0 * SQRT2) ** -0.5
C_MINUS = (4.0 - 2.0 * SQRT2) ** -0.5


def _basis(bits: str) -> np.ndarray:
    v = np.zeros(1 << len(bits), dtype=np.complex128)
    v[int(bits.replace("u", "0").replace("d", "1"), 2)] = 1.0
    return v


def _preset_amplitudes() -> dict[str, np.ndarray]:
    ud, du, uu, dd = _basis("ud"), _basis("du"), _basis("uu"), _basis("dd")
    return {
        "up": _basis("u"),
        "down": _basis("d"),
        "psi_plus": (ud + du) / SQRT2,
        "psi_minus": (ud - du) / SQRT2,
        "phi_plus": (uu + dd) / SQRT2,
        "phi_minus": (uu - dd) / SQRT2,
        "four_particle_Psi": (_basis("udud") - _basis("dudu")) / SQRT2,
        "b_plus": C_PLUS * (ud + (1.0 + SQRT2) * du),
        "b_minus": C_MINUS * (ud + (1.0 - SQRT2) * du),
        "bprime_plus": C_MINUS * (ud + (-1.0 + SQRT2) * du),
        "bprime_minus": C_PLUS * (ud + (-1.0 - SQRT2) * du),
    }


_PRESETS = _preset_amplitudes()
PRESET_NAMES = tuple(_PRESETS)
BELL_LABELS = ("psi_minus", "psi_plus", "phi_plus", "phi_minus")


def named_state(preset: str) -> StateVector:
    try:
        amps = _PRESETS[preset]
    except KeyError:
        raise UnknownPreset(f"unknown state preset {preset!r}; known: {', '.join(PRESET_NAMES)}") from None
    return StateVector.from_amplitudes(amps)


def product_ket(*names: str) -> StateVector:
    out = named_state(names[0])
    for name in names[1:]:
        out = out.tensor(named_state(name))
    return out


def projector_of(preset: str) -> np.ndarray:
    return named_state(preset).projector()


# -- constructors ---------------------------------------------------------------

def density_from_ket(psi: StateVector) -> DensityOperator:
    amps = np.asarray(psi.amplitudes, dtype=np.complex128)
    norm2 = float(np.vdot(amps, amps).real)
    if abs(norm2 - 1.0) > NORM_TOL:
        raise NotNormalized(f"sum |amplitude|^2 = {norm2!r}")
    return DensityOperator(psi.qubit_count, np.outer(amps, np.conj(amps)))


def maximally_mixed(qubit_count: int) -> DensityOperator:
    dim = 1 << qubit_count
    return DensityOperator(qubit_count, np.eye(dim) / dim)


def mix(spec: MixtureSpec | Iterable[tuple[float, DensityOperator]]) -> DensityOperator:
    if not isinstance(spec, MixtureSpec):
        spec = MixtureSpec(tuple(spec))
    n = spec.components[0][1].qubit_count
    total = sum(w * s.matrix for w, s in spec.components)
    return DensityOperator(n, total)


# -- subsystem index handling ------------------------------------------------------

def _check_subsystems(indices: Iterable[int], n: int, allow_empty: bool = True) -> tuple[int, ...]:
    idx = tuple(sorted(set(int(i) for i in indices)))
    if not allow_empty and not idx:
        raise InvalidSubsystem("subsystem set is empty")
    bad = [i for i in idx if not 1 <= i <= n]
    if bad:
        raise InvalidSubsystem(f"qubit labels {bad} outside 1..{n}")
    return idx


def partial_trace(w: DensityOperator, keep: Iterable[int]) -> DensityOperator:
    """Reduce ``w`` to the qubits in ``keep`` (kept in ascending label order)."""
    n = w.qubit_count
    kept = _check_subsystems(keep, n, allow_empty=False)
    gone = [i for i in range(1, n + 1) if i not in kept]
    t = w.matrix.reshape((2,) * (2 * n))
    # axes 0..n-1 are row qubits, n..2n-1 column qubits
    for offset, q in enumerate(gone):
        ax = q - 1 - offset
        cur = n - offset
        t = np.trace(t, axis1=ax, axis2=ax + cur)
    k = len(kept)
    return DensityOperator(k, t.reshape(1 << k, 1 << k))


def partial_transpose(w, transposed: Iterable[int], qubit_count: int | None = None) -> np.ndarray:
    """Transpose the listed qubit factors; returns a plain matrix."""
    m = w.matrix if isinstance(w, DensityOperator) else linalg.as_matrix(w)
    n = w.qubit_count if isinstance(w, DensityOperator) else (qubit_count or _qubits_for_dim(m.shape[0]))
    idx = _check_subsystems(transposed, n)
    t = m.reshape((2,) * (2 * n))
    axes = list(range(2 * n))
    for q in idx:
        axes[q - 1], axes[n + q - 1] = axes[n + q - 1], axes[q - 1]
    return np.ascontiguousarray(t.transpose(axes).reshape(m.shape))


def embed(operator, qubits: Sequence[int], qubit_count: int) -> np.ndarray:
    """Lift a k-qubit operator acting on ``qubits`` to the full n-qubit space."""
    op = linalg.as_matrix(operator)
    qs = [int(q) for q in qubits]
    if len(set(qs)) != len(qs):
        raise InvalidSubsystem(f"repeated qubit labels {qs}")
    _check_subsystems(qs, qubit_count, allow_empty=False)
    k = len(qs)
    if op.shape != (1 << k, 1 << k):
        raise DimensionMismatch(f"operator shape {op.shape} does not fit {k} qubits")
    rest = [q for q in range(1, qubit_count + 1) if q not in qs]
    full = np.kron(op, np.eye(1 << len(rest)))
    order = qs + rest  # current factor order
    perm = [order.index(q) for q in range(1, qubit_count + 1)]
    n = qubit_count
    t = full.reshape((2,) * (2 * n))
    t = t.transpose(perm + [n + p for p in perm])
    return np.ascontiguousarray(t.reshape(1 << n, 1 << n))


# -- measurement -------------------------------------------------------------------

@dataclass(frozen=True)
class MeasurementOutcome:
    index: int
    probability: float
    state: DensityOperator | None

    @property
    def reachable(self) -> bool:
        return self.state is not None


def check_projector_set(projectors: Sequence[np.ndarray], tol: float = PROJECTOR_TOL) -> list[np.ndarray]:
    ps = [linalg.as_matrix(p) for p in projectors]
    if not ps:
        raise IncompleteProjectorSet("no projectors given")
    dim = ps[0].shape[0]
    for i, p in enumerate(ps):
        if p.shape != (dim, dim):
            raise DimensionMismatch(f"projector {i} has shape {p.shape}")
        if np.max(np.abs(p @ p - p)) > tol or not linalg.is_hermitian(p, tol):
            raise IncompleteProjectorSet(f"element {i} is not an orthogonal projector")
    for i in range(len(ps)):
        for j in range(i + 1, len(ps)):
            if np.max(np.abs(ps[i] @ ps[j])) > tol:
                raise IncompleteProjectorSet(f"projectors {i} and {j} are not orthogonal")
    resid = np.max(np.abs(sum(ps) - np.eye(dim)))
    if resid > tol:
        raise IncompleteProjectorSet(f"projectors sum to identity only within {resid:.3e}")
    return ps


def projective_measure(w: DensityOperator, projectors: Sequence[np.ndarray]) -> list[MeasurementOutcome]:
    """Born-rule probabilities and post-measurement states for a complete projector set.

    Outcomes with probability at or below 1e-12 are returned with ``state=None``.
    """
    ps = check_projector_set(projectors)
    if ps[0].shape != w.matrix.shape:
        raise DimensionMismatch(f"projectors are {ps[0].shape}, state is {w.matrix.shape}")
    out = []
    for k, p in enumerate(ps):
        prob = float(np.real(np.trace(w.matrix @ p)))
        state = None
        if prob > UNREACHABLE_BELOW:
            post = p @ w.matrix @ p / prob
            post = 0.5 * (post + linalg.dagger(post))
            state = DensityOperator(w.qubit_count, post)
        out.append(MeasurementOutcome(k, max(prob, 0.0), state))
    return out


def bell_projectors() -> list[np.ndarray]:
    """Two-qubit Bell-basis projectors in the order psi-, psi+, phi+, phi-."""
    return [projector_of(label) for label in BELL_LABELS]


def fidelity_to_pure(w: DensityOperator, psi: StateVector) -> float:
    a = psi.amplitudes
    return float(np.real(np.vdot(a, w.matrix @ a)))


# -- random states used by property sweeps --------------------------------------------

def random_ket(qubit_count: int, rng: np.random.Generator) -> StateVector:
    dim = 1 << qubit_count
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return StateVector(qubit_count, z / np.linalg.norm(z))


def random_density(qubit_count: int, rng: np.random.Generator, rank: int | None = None) -> DensityOperator:
    """Ginibre-ensemble density operator (full rank unless ``rank`` is given)."""
    dim = 1 << qubit_count
    r = rank or dim
    g = rng.standard_normal((dim, r)) + 1j * rng.standard_normal((dim, r))
    m = g @ linalg.dagger(g)
    m = 0.5 * (m + linalg.dagger(m))
    return DensityOperator(qubit_count, m / np.trace(m).real)


def random_product_state(qubit_count: int, rng: np.random.Generator) -> DensityOperator:
    m = linalg.kron_all([random_ket(1, rng).projector() for _ in range(qubit_count)])
    return DensityOperator(qubit_count, m)


def random_separable_state(qubit_count: int, rng: np.random.Generator, max_terms: int = 8) -> DensityOperator:
    terms = int(rng.integers(1, max_terms + 1))
    weights = rng.dirichlet(np.ones(terms))
    weights = weights / weights.sum()
    m = sum(w * random_product_state(qubit_count, rng).matrix for w in weights)
    m = 0.5 * (m + linalg.dagger(m))
    return DensityOperator(qubit_count, m / np.trace(m).real)
