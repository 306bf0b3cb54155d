"""State reconstruction from subsystem correlations in the Pauli-word basis.

Any n-qubit density operator is ``W = 2**-n * sum_mu c_mu sigma_mu`` with
``c_mu = Tr[W sigma_mu]``. The Pauli words are trace-orthogonal, so the
reconstruction is a weighted sum with no linear solve.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import linalg
from .errors import DimensionMismatch, NotADistribution, NotPositive
from .states import DensityOperator

LETTERS = "IXYZ"
PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
POSITIVITY_FLOOR = -1e-8
COEFF_TOL = 1e-9


def _normalize_word(word) -> str:
    w = "".join(word).upper() if not isinstance(word, str) else word.upper()
    if not w or any(ch not in LETTERS for ch in w):
        raise ValueError(f"Pauli word must be a nonempty string over I, X, Y, Z: {word!r}")
    return w


def pauli_word(word) -> np.ndarray:
    """Kronecker product of single-qubit Paulis, e.g. ``pauli_word("xy")``."""
    return linalg.kron_all([PAULI[ch] for ch in _normalize_word(word)])


def pauli_words(n: int) -> list[str]:
    return ["".join(p) for p in itertools.product(LETTERS, repeat=n)]


def _pauli_stack(n: int) -> np.ndarray:
    """All 4**n Pauli words as an array of shape (4**n, 2**n, 2**n)."""
    stack = np.stack([PAULI[ch] for ch in LETTERS])
    out = stack
    for _ in range(n - 1):
        out = np.einsum("aij,bkl->abikjl", out, stack).reshape(
            out.shape[0] * 4, out.shape[1] * 2, out.shape[2] * 2
        )
    return out


@dataclass(frozen=True)
class CorrelationVector:
    """Pauli-word expectation values ``c_mu`` in lexicographic ``IXYZ`` order."""

    qubit_count: int
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=float).reshape(-1)
        if c.size != 4 ** self.qubit_count:
            raise DimensionMismatch(f"{c.size} coefficients for {self.qubit_count} qubits")
        if abs(c[0] - 1.0) > COEFF_TOL:
            raise NotADistribution(f"identity coefficient is {c[0]!r}, must be 1")
        worst = float(np.max(np.abs(c)))
        if worst > 1.0 + COEFF_TOL:
            raise NotADistribution(f"coefficient magnitude {worst!r} exceeds 1")
        c.flags.writeable = False
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def from_mapping(cls, values: dict[str, float], qubit_count: int | None = None) -> "CorrelationVector":
        """Build from ``{word: value}``; missing words are zero."""
        words = {_normalize_word(w): float(v) for w, v in values.items()}
        lengths = {len(w) for w in words}
        if qubit_count is None:
            if len(lengths) != 1:
                raise DimensionMismatch(f"words of mixed lengths {sorted(lengths)}")
            qubit_count = lengths.pop()
        elif lengths - {qubit_count}:
            raise DimensionMismatch(f"words must have length {qubit_count}")
        c = np.zeros(4 ** qubit_count)
        for w, v in words.items():
            c[word_index(w)] = v
        return cls(qubit_count, c)

    def __getitem__(self, word) -> float:
        w = _normalize_word(word)
        if len(w) != self.qubit_count:
            raise DimensionMismatch(f"word {w} has wrong length")
        return float(self.coefficients[word_index(w)])

    def items(self):
        return zip(pauli_words(self.qubit_count), self.coefficients.tolist())

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["word", "coefficient"])
        for w, v in self.items():
            writer.writerow([w, repr(float(v))])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_csv(cls, source) -> "CorrelationVector":
        """Parse ``word,coefficient`` CSV from a path or a file-like object."""
        if hasattr(source, "read"):
            text = source.read()
        else:
            text = Path(source).read_text()
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [h.strip().lower() for h in rows[0]] != ["word", "coefficient"]:
            raise ValueError("CSV header must be 'word,coefficient'")
        values: dict[str, float] = {}
        for lineno, row in enumerate(rows[1:], start=2):
            if not row or all(not f.strip() for f in row):
                continue
            if len(row) != 2:
                raise ValueError(f"line {lineno}: expected 2 fields, got {len(row)}")
            w = _normalize_word(row[0].strip())
            if w in values:
                raise ValueError(f"line {lineno}: duplicate word {w}")
            try:
                values[w] = float(row[1])
            except ValueError:
                raise ValueError(f"line {lineno}: bad coefficient {row[1]!r}") from None
        if not values:
            raise ValueError("CSV has no coefficient rows")
        return cls.from_mapping(values)


def word_index(word: str) -> int:
    idx = 0
    for ch in _normalize_word(word):
        idx = 4 * idx + LETTERS.index(ch)
    return idx


def correlations_of(w: DensityOperator) -> CorrelationVector:
    n = w.qubit_count
    stack = _pauli_stack(n)
    # Tr[W P] = sum_ij W_ij P_ji
    c = np.real(np.einsum("ij,kji->k", w.matrix, stack))
    return CorrelationVector(n, c)


def reconstruct(c: CorrelationVector) -> DensityOperator:
    n = c.qubit_count
    stack = _pauli_stack(n)
    m = np.einsum("k,kij->ij", c.coefficients.astype(complex), stack) / (1 << n)
    m = 0.5 * (m + linalg.dagger(m))
    lo = linalg.min_eigenvalue(m)
    if lo < POSITIVITY_FLOOR:
        raise NotPositive(
            f"correlations reconstruct to a matrix with eigenvalue {lo:.3e}; data is inconsistent"
        )
    return DensityOperator(n, m)


@dataclass(frozen=True)
class CountingReport:
    d: int
    subsystem_params: int
    composite_params: int
    sufficient: bool

    @property
    def product_params(self) -> int:
        return self.subsystem_params ** 2

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "subsystem_params": self.subsystem_params,
            "composite_params": self.composite_params,
            "subsystem_params_squared": self.product_params,
            "sufficient": self.sufficient,
        }


def real_hilbert_counting(d: int) -> CountingReport:
    """Parameter count of real symmetric density matrices: one subsystem vs a d x d composite."""
    if int(d) != d or d < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {d!r}")
    d = int(d)
    n = d * (d + 1) // 2
    composite = d * d * (d * d + 1) // 2
    return CountingReport(d, n, composite, composite <= n * n)


def complex_parameter_count(qubit_count: int) -> tuple[int, int]:
    """(number of Pauli product words, real parameters of a Hermitian matrix)."""
    dim = 1 << qubit_count
    return 4 ** qubit_count, dim * dim
