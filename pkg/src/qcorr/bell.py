"""Correlation Bell inequality: observables, Bell operator, LHV and Tsirelson bounds.

Party I holds qubits 1 and 2, party II holds qubits 3 and 4. Each party
measures one of two dichotomic observables on its pair; the CHSH combination
is ``E(A,B) + E(A,B') + E(A',B) - E(A',B')``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg
from .errors import DichotomyViolated, DimensionMismatch, NotADistribution, UnknownName
from .states import (
    SQRT2,
    DensityOperator,
    StateVector,
    density_from_ket,
    named_state,
    projector_of,
    _qubits_for_dim,
)

DICHOTOMY_TOL = 1e-10
VIOLATION_TOL = 1e-10
TSIRELSON_TOL = 1e-9
CLASSICAL_BOUND = 2.0
TSIRELSON_BOUND = float(2.0 * SQRT2)

SETTINGS = (("A", "B"), ("A", "B'"), ("A'", "B"), ("A'", "B'"))
SETTING_SIGNS = (1.0, 1.0, 1.0, -1.0)


@dataclass(frozen=True)
class DichotomicObservable:
    """Signed sum of rank-1 projectors with outcomes +1 and -1.

    Construction does not enforce ``matrix @ matrix == I``; call
    :meth:`check` (or build through :meth:`from_projectors`) to do so. This
    lets a corrupted matrix flow through the verification pipeline and be
    caught there.
    """

    qubit_count: int
    matrix: np.ndarray = field(repr=False)
    plus_projectors: tuple[np.ndarray, ...] = field(default=(), repr=False)
    minus_projectors: tuple[np.ndarray, ...] = field(default=(), repr=False)
    name: str = ""

    def __post_init__(self):
        m = linalg.frozen(self.matrix)
        dim = 1 << self.qubit_count
        if m.shape != (dim, dim):
            raise DimensionMismatch(f"observable shape {m.shape} for {self.qubit_count} qubits")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "plus_projectors", tuple(linalg.frozen(p) for p in self.plus_projectors))
        object.__setattr__(self, "minus_projectors", tuple(linalg.frozen(p) for p in self.minus_projectors))

    @classmethod
    def from_kets(cls, plus: Sequence[StateVector | np.ndarray], minus: Sequence[StateVector | np.ndarray], name: str = "") -> "DichotomicObservable":
        def proj(k):
            a = k.amplitudes if isinstance(k, StateVector) else np.asarray(k, dtype=np.complex128)
            return np.outer(a, np.conj(a))

        return cls.from_projectors([proj(k) for k in plus], [proj(k) for k in minus], name)

    @classmethod
    def from_projectors(cls, plus, minus, name: str = "") -> "DichotomicObservable":
        plus = [linalg.as_matrix(p) for p in plus]
        minus = [linalg.as_matrix(p) for p in minus]
        dim = (plus or minus)[0].shape[0]
        m = sum(plus, np.zeros((dim, dim), complex)) - sum(minus, np.zeros((dim, dim), complex))
        obs = cls(_qubits_for_dim(dim), m, tuple(plus), tuple(minus), name)
        obs.check()
        return obs

    @classmethod
    def from_matrix(cls, matrix, name: str = "", check: bool = True) -> "DichotomicObservable":
        """Recover the sign-grouped eigenprojectors of a Hermitian matrix.

        With ``check=False`` a non-Hermitian or non-dichotomic matrix is kept
        as-is (with no projectors) so that verification can report it.
        """
        m = linalg.as_matrix(matrix)
        n = _qubits_for_dim(m.shape[0])
        if not linalg.is_hermitian(m):
            if check:
                raise DichotomyViolated(f"{name or 'observable'} is not Hermitian")
            return cls(n, m, (), (), name)
        vals, vecs = linalg.hermitian_eigs(m)
        plus = [np.outer(vecs[:, i], np.conj(vecs[:, i])) for i in range(len(vals)) if vals[i] > 0]
        minus = [np.outer(vecs[:, i], np.conj(vecs[:, i])) for i in range(len(vals)) if vals[i] <= 0]
        obs = cls(n, m, tuple(plus), tuple(minus), name)
        if check:
            obs.check()
        return obs

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dichotomy_residual(self) -> float:
        """``max|M^2 - I|`` entrywise."""
        return float(np.max(np.abs(self.matrix @ self.matrix - np.eye(self.dim))))

    def projector_residual(self) -> float:
        """How far the stored projectors are from a complete orthogonal set summing to ``matrix``."""
        ps = list(self.plus_projectors) + list(self.minus_projectors)
        if not ps:
            return float("inf")
        worst = float(np.max(np.abs(sum(ps) - np.eye(self.dim))))
        signed = sum(self.plus_projectors, np.zeros_like(self.matrix)) - sum(
            self.minus_projectors, np.zeros_like(self.matrix)
        )
        worst = max(worst, float(np.max(np.abs(signed - self.matrix))))
        for i, j in itertools.combinations(range(len(ps)), 2):
            worst = max(worst, float(np.max(np.abs(ps[i] @ ps[j]))))
        return worst

    def check(self, tol: float = DICHOTOMY_TOL) -> "DichotomicObservable":
        label = self.name or "observable"
        if not linalg.is_hermitian(self.matrix):
            raise DichotomyViolated(f"{label} is not Hermitian")
        r = self.dichotomy_residual()
        if r > tol:
            raise DichotomyViolated(f"{label}: max|M^2 - I| = {r:.3e} exceeds {tol:.0e}")
        r = self.projector_residual()
        if r > tol:
            raise DichotomyViolated(f"{label}: eigenprojectors inconsistent ({r:.3e})")
        return self

    def signed_projectors(self) -> list[tuple[int, np.ndarray]]:
        return [(1, p) for p in self.plus_projectors] + [(-1, p) for p in self.minus_projectors]


# -- the pair observables ---------------------------------------------------------

def _build_pair_observable(name: str) -> DichotomicObservable:
    P = projector_of
    if name == "a":
        plus, minus = [P("psi_plus"), P("phi_plus")], [P("psi_minus"), P("phi_minus")]
    elif name == "a_prime":
        uu, ud, du, dd = (np.diag(np.eye(4)[i]).astype(complex) for i in range(4))
        plus, minus = [uu, ud], [du, dd]
    elif name in ("b", "b_prime"):
        bp, bm = ("b_plus", "b_minus") if name == "b" else ("bprime_plus", "bprime_minus")
        overlap = abs(np.vdot(named_state(bp).amplitudes, named_state(bm).amplitudes))
        if overlap > 1e-12:
            raise DichotomyViolated(f"<{bp}|{bm}> = {overlap:.3e}, expected 0")
        uu = np.diag([1, 0, 0, 0]).astype(complex)
        dd = np.diag([0, 0, 0, 1]).astype(complex)
        if name == "b":
            plus, minus = [uu, P(bp)], [P(bm), dd]
        else:
            plus, minus = [dd, P(bp)], [P(bm), uu]
    else:
        raise UnknownName(f"unknown observable {name!r}; known: a, a_prime, b, b_prime")
    return DichotomicObservable.from_projectors(plus, minus, name)


OBSERVABLE_NAMES = ("a", "a_prime", "b", "b_prime")


def pair_observable(name: str) -> DichotomicObservable:
    return _build_pair_observable(name)


def pair_observables() -> tuple[DichotomicObservable, DichotomicObservable, DichotomicObservable, DichotomicObservable]:
    return tuple(pair_observable(n) for n in OBSERVABLE_NAMES)  # type: ignore[return-value]


def four_qubit_state() -> DensityOperator:
    return density_from_ket(named_state("four_particle_Psi"))


# -- experiments -----------------------------------------------------------------------

@dataclass(frozen=True)
class BellExperiment:
    state: DensityOperator
    obs_I: tuple[DichotomicObservable, DichotomicObservable]
    obs_II: tuple[DichotomicObservable, DichotomicObservable]

    def __post_init__(self):
        (a, ap), (b, bp) = self.obs_I, self.obs_II
        if a.qubit_count != ap.qubit_count or b.qubit_count != bp.qubit_count:
            raise DimensionMismatch("both observables of a party must act on the same qubits")
        if a.qubit_count + b.qubit_count != self.state.qubit_count:
            raise DimensionMismatch(
                f"parties hold {a.qubit_count}+{b.qubit_count} qubits, state has {self.state.qubit_count}"
            )

    @classmethod
    def standard(cls, state: DensityOperator | None = None) -> "BellExperiment":
        a, ap, b, bp = pair_observables()
        return cls(state if state is not None else four_qubit_state(), (a, ap), (b, bp))

    @property
    def party_I(self) -> tuple[int, ...]:
        return tuple(range(1, self.obs_I[0].qubit_count + 1))

    @property
    def party_II(self) -> tuple[int, ...]:
        k = self.obs_I[0].qubit_count
        return tuple(range(k + 1, k + self.obs_II[0].qubit_count + 1))

    def setting_pairs(self) -> list[tuple[DichotomicObservable, DichotomicObservable]]:
        (a, ap), (b, bp) = self.obs_I, self.obs_II
        return [(a, b), (a, bp), (ap, b), (ap, bp)]


def chsh_operator(a, ap, b, bp) -> np.ndarray:
    m = lambda o: o.matrix if isinstance(o, DichotomicObservable) else linalg.as_matrix(o)
    return (
        np.kron(m(a), m(b)) + np.kron(m(a), m(bp)) + np.kron(m(ap), m(b)) - np.kron(m(ap), m(bp))
    )


def bell_operator(exp: BellExperiment) -> np.ndarray:
    (a, ap), (b, bp) = exp.obs_I, exp.obs_II
    return chsh_operator(a, ap, b, bp)


@dataclass(frozen=True)
class BellReport:
    terms: tuple[float, float, float, float]
    S: float
    classical_bound: float
    tsirelson_bound: float
    violated: bool

    def recomputed_S(self) -> float:
        return float(sum(s * e for s, e in zip(SETTING_SIGNS, self.terms)))

    def to_dict(self) -> dict:
        return {
            "terms": {f"E({x},{y})": e for (x, y), e in zip(SETTINGS, self.terms)},
            "S": self.S,
            "abs_S": abs(self.S),
            "classical_bound": self.classical_bound,
            "tsirelson_bound": self.tsirelson_bound,
            "violated": self.violated,
        }


def correlation_expectation(state: DensityOperator, x, y) -> float:
    """``Tr[W (X (x) Y)]`` for party observables ``x`` and ``y``."""
    mx = x.matrix if isinstance(x, DichotomicObservable) else linalg.as_matrix(x)
    my = y.matrix if isinstance(y, DichotomicObservable) else linalg.as_matrix(y)
    return float(np.real(np.trace(state.matrix @ np.kron(mx, my))))


def bell_value(exp: BellExperiment) -> BellReport:
    terms = tuple(correlation_expectation(exp.state, x, y) for x, y in exp.setting_pairs())
    s = float(sum(sign * e for sign, e in zip(SETTING_SIGNS, terms)))
    return BellReport(
        terms=terms,  # type: ignore[arg-type]
        S=s,
        classical_bound=lhv_bound(),
        tsirelson_bound=TSIRELSON_BOUND,
        violated=abs(s) > CLASSICAL_BOUND + VIOLATION_TOL,
    )


# -- correlations as joint distributions ---------------------------------------------------

# outcome labels (a, b) attached to a party's four rank-1 projectors; the
# product ab equals the projector's sign
_PLUS_LABELS = ((1, 1), (-1, -1))
_MINUS_LABELS = ((1, -1), (-1, 1))


def _sign_index(v: int) -> int:
    return 0 if v == 1 else 1


def correlation_term(jointdist) -> float:
    """``sum abcd P(ab, cd)`` over a table indexed by ``(a, b, c, d)``.

    ``jointdist`` is an array of shape ``(2, 2, 2, 2)`` or ``(16,)`` where
    index 0 means outcome +1 and index 1 means -1, or a mapping from
    ``(a, b, c, d)`` sign tuples to probabilities.
    """
    if isinstance(jointdist, dict):
        table = np.zeros((2, 2, 2, 2))
        for key, p in jointdist.items():
            if len(key) != 4 or any(v not in (1, -1) for v in key):
                raise NotADistribution(f"bad outcome label {key!r}")
            table[tuple(_sign_index(v) for v in key)] += p
    else:
        table = np.asarray(jointdist, dtype=float)
        if table.size != 16:
            raise NotADistribution(f"expected 16 probabilities, got {table.size}")
        table = table.reshape(2, 2, 2, 2)
    if np.any(table < 0) or not np.all(np.isfinite(table)):
        raise NotADistribution("negative or non-finite probability")
    total = table.sum()
    if abs(total - 1.0) > 1e-9:
        raise NotADistribution(f"probabilities sum to {total!r}")
    signs = np.array([1.0, -1.0])
    abcd = np.einsum("a,b,c,d->abcd", signs, signs, signs, signs)
    return float(np.sum(abcd * table))


def _party_labels(obs: DichotomicObservable) -> list[tuple[tuple[int, int], np.ndarray]]:
    if len(obs.plus_projectors) != 2 or len(obs.minus_projectors) != 2:
        raise DimensionMismatch(
            f"{obs.name or 'observable'} needs two + and two - rank-1 projectors for (a, b) labels"
        )
    return list(zip(_PLUS_LABELS, obs.plus_projectors)) + list(zip(_MINUS_LABELS, obs.minus_projectors))


def born_joint_distribution(state: DensityOperator, x: DichotomicObservable, y: DichotomicObservable) -> np.ndarray:
    """Born-rule table ``P(ab, cd)`` of shape ``(2, 2, 2, 2)``."""
    table = np.zeros((2, 2, 2, 2))
    for (a, b), pi in _party_labels(x):
        for (c, d), pj in _party_labels(y):
            p = float(np.real(np.trace(state.matrix @ np.kron(pi, pj))))
            table[_sign_index(a), _sign_index(b), _sign_index(c), _sign_index(d)] = max(p, 0.0)
    return table


# -- classical bound -------------------------------------------------------------------------

@dataclass(frozen=True)
class LhvEnumeration:
    """Signed CHSH value of every vertex ``(e, f)`` of the local correlation box."""

    assignments: tuple[tuple[tuple[int, int], tuple[int, int], int], ...]

    @property
    def maximum(self) -> int:
        return max(abs(v) for _, _, v in self.assignments)

    @property
    def maximizers(self) -> tuple[tuple[tuple[int, int], tuple[int, int]], ...]:
        """Vertices where the signed value reaches ``+maximum``."""
        return tuple((e, f) for e, f, v in self.assignments if v == self.maximum)


def lhv_enumeration() -> LhvEnumeration:
    """All 16 deterministic party correlations ``e, f in {-1, 1}^2``.

    Per hidden-variable value each party's correlation lies in [-1, 1] and the
    CHSH expression is multilinear in them, so its extremes over the box sit
    at these vertices.
    """
    rows = []
    for e in itertools.product((1, -1), repeat=2):
        for f in itertools.product((1, -1), repeat=2):
            rows.append((e, f, e[0] * f[0] + e[0] * f[1] + e[1] * f[0] - e[1] * f[1]))
    return LhvEnumeration(tuple(rows))


def lhv_bound() -> float:
    return float(lhv_enumeration().maximum)


# -- Tsirelson -----------------------------------------------------------------------------------

@dataclass(frozen=True)
class TsirelsonResult:
    norm: float
    passed: bool

    def __iter__(self):
        yield self.norm
        yield self.passed


def tsirelson_check(a, ap, b, bp) -> TsirelsonResult:
    for o in (a, ap, b, bp):
        r = o.dichotomy_residual()
        if r > DICHOTOMY_TOL:
            raise DichotomyViolated(f"{o.name or 'observable'}: max|M^2 - I| = {r:.3e}")
    norm = linalg.operator_norm(chsh_operator(a, ap, b, bp))
    return TsirelsonResult(norm, bool(norm <= TSIRELSON_BOUND + TSIRELSON_TOL))


def random_dichotomic(qubit_count: int, rng: np.random.Generator, name: str = "") -> DichotomicObservable:
    """Conjugate ``diag(+1, .., -1, ..)`` (equal split) by a Haar-random unitary."""
    dim = 1 << qubit_count
    u = linalg.random_unitary(dim, rng)
    half = dim // 2
    cols = [u[:, i] for i in range(dim)]
    return DichotomicObservable.from_kets(cols[:half], cols[half:], name)


# -- single-qubit CHSH -----------------------------------------------------------------------------

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def single_qubit_observables() -> tuple[DichotomicObservable, ...]:
    return (
        DichotomicObservable.from_matrix(-SIGMA_X, "a"),
        DichotomicObservable.from_matrix(SIGMA_Z, "a_prime"),
        DichotomicObservable.from_matrix((-SIGMA_Z + SIGMA_X) / SQRT2, "b"),
        DichotomicObservable.from_matrix((SIGMA_Z + SIGMA_X) / SQRT2, "b_prime"),
    )


def single_qubit_chsh(state: DensityOperator | None = None) -> BellReport:
    """Ordinary two-qubit CHSH with the single-particle settings that mirror the pair observables.

    Defaults to ``(|uu> - |dd>)/sqrt 2``.
    """
    if state is None:
        state = density_from_ket(named_state("phi_minus"))
    a, ap, b, bp = single_qubit_observables()
    return bell_value(BellExperiment(state, (a, ap), (b, bp)))
