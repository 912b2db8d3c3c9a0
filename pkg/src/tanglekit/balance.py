"""Support matrices and exact balancedness classification.

The support of a state is written as a q x L binary matrix (one column per
computational-basis component); the alternating matrix replaces every 0 by
-1.  A support is *balanced* when some strictly positive integer
multiplicities make every row of the alternating matrix sum to zero, and
*irreducibly balanced* when no proper subset of columns is balanced, which
is equivalent to the alternating matrix having rank L-1.

All feasibility questions are decided in exact rational arithmetic; no
floating-point LP is involved anywhere.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _exact_lp as lp
from .errors import EmptySupport, LengthMismatch, LengthOutOfRange
from .states import PureState


@dataclass(frozen=True, eq=False)
class BinaryMatrix:
    """q x L matrix over {0,1}; columns are support bitstrings, no duplicates."""

    entries: np.ndarray

    def __post_init__(self):
        ent = np.array(self.entries, dtype=np.int8)
        if ent.ndim != 2:
            raise ValueError("binary matrix must be two-dimensional")
        if not np.isin(ent, (0, 1)).all():
            raise ValueError("binary matrix entries must be 0 or 1")
        cols = {tuple(ent[:, j]) for j in range(ent.shape[1])}
        if len(cols) != ent.shape[1]:
            raise ValueError("binary matrix has duplicate columns")
        ent.setflags(write=False)
        object.__setattr__(self, "entries", ent)

    @property
    def num_qubits(self) -> int:
        return self.entries.shape[0]

    @property
    def length(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True, eq=False)
class AlternatingMatrix:
    """q x L matrix over {-1,+1}; elementwise 2B - 1 of a binary matrix."""

    entries: np.ndarray

    def __post_init__(self):
        ent = np.array(self.entries, dtype=np.int8)
        if ent.ndim != 2 or not np.isin(ent, (-1, 1)).all():
            raise ValueError("alternating matrix entries must be -1 or +1")
        ent.setflags(write=False)
        object.__setattr__(self, "entries", ent)

    @classmethod
    def from_binary(cls, binary: BinaryMatrix) -> "AlternatingMatrix":
        return cls(2 * binary.entries.astype(np.int8) - 1)

    @property
    def num_qubits(self) -> int:
        return self.entries.shape[0]

    @property
    def length(self) -> int:
        return self.entries.shape[1]


class Classification(enum.Enum):
    BALANCED_IRREDUCIBLE = "balanced-irreducible"
    BALANCED_REDUCIBLE = "balanced-reducible"
    PARTLY_BALANCED = "partly-balanced"
    NO_BALANCED_PART = "no-balanced-part"


@dataclass(frozen=True)
class BalanceReport:
    """Outcome of the exact balance classification.

    witness: integer multiplicities n with A n = 0; strictly positive for
    the balanced classes, nonnegative with some zeros when partly balanced,
    None otherwise.  balanced_columns are 0-based column indices that can
    carry positive weight in some balanced part.
    """

    classification: Classification
    witness: tuple | None
    kernel_dim: int
    rank: int
    balanced_columns: tuple

    @property
    def is_balanced(self) -> bool:
        return self.classification in (
            Classification.BALANCED_IRREDUCIBLE,
            Classification.BALANCED_REDUCIBLE,
        )


@dataclass(frozen=True)
class SupportMatrices:
    binary: BinaryMatrix
    alternating: AlternatingMatrix
    weights: np.ndarray  # |amplitude|^2 per column, support order


def support_matrices(state: PureState, eps: float = 1e-9) -> SupportMatrices:
    """Binary/alternating support matrices plus squared-modulus weights.

    Columns are the bitstrings of amplitudes with modulus above ``eps``
    relative to the largest modulus, in ascending basis order.
    """
    support = state.support(eps)
    if not support:
        raise EmptySupport("state has no amplitude above the support threshold")
    q = state.num_qubits
    cols = np.zeros((q, len(support)), dtype=np.int8)
    weights = np.zeros(len(support))
    for j, idx in enumerate(support):
        for i in range(q):
            cols[i, j] = (idx >> (q - 1 - i)) & 1
        weights[j] = abs(state.amplitudes[idx]) ** 2
    binary = BinaryMatrix(cols)
    weights.setflags(write=False)
    return SupportMatrices(binary, AlternatingMatrix.from_binary(binary), weights)


def merge_duplicate_columns(columns: np.ndarray, weights: np.ndarray):
    """Fold repeated columns into their weights; columns keep first-seen order."""
    seen: dict[tuple, int] = {}
    out_cols = []
    out_weights = []
    for j in range(columns.shape[1]):
        key = tuple(int(v) for v in columns[:, j])
        if key in seen:
            out_weights[seen[key]] += weights[j]
        else:
            seen[key] = len(out_cols)
            out_cols.append(columns[:, j])
            out_weights.append(weights[j])
    return np.array(out_cols).T, np.array(out_weights)


def analyze(alternating: AlternatingMatrix) -> BalanceReport:
    """Classify a support as balanced / partly balanced / unbalanced.

    Decisions, all in exact rationals:

    * balanced: a strictly positive kernel vector exists ({A x = 0, x >= 1}
      is feasible);
    * irreducible: balanced and rank(A) = L - 1, in which case the witness
      is the coprime positive generator of the one-dimensional kernel;
    * partly balanced: not balanced, but max sum(x) over
      {A x = 0, 0 <= x <= 1} is positive; balanced_columns collects every
      column that can carry positive weight.
    """
    a_int = [[int(v) for v in row] for row in alternating.entries]
    num_cols = alternating.length
    rank, kernel = lp.rank_and_kernel(a_int, num_cols)
    kernel_dim = num_cols - rank

    positive = lp.positive_kernel_witness(a_int)
    if positive is not None:
        if rank == num_cols - 1:
            gen = kernel[0]
            if all(v <= 0 for v in gen):
                gen = [-v for v in gen]
            witness = tuple(lp.coprime_integers(gen))
            classification = Classification.BALANCED_IRREDUCIBLE
        else:
            lexmin = lp.lexmin_positive_kernel_witness(a_int)
            witness = tuple(lp.coprime_integers(lexmin))
            classification = Classification.BALANCED_REDUCIBLE
        return BalanceReport(
            classification, witness, kernel_dim, rank, tuple(range(num_cols))
        )

    _, best = lp.box_kernel_max(a_int, [1] * num_cols)
    if best > 0:
        combined = [Fraction(0)] * num_cols
        columns = []
        for j in range(num_cols):
            unit = [0] * num_cols
            unit[j] = 1
            xj, top = lp.box_kernel_max(a_int, unit)
            if top > 0:
                columns.append(j)
                combined = [c + v for c, v in zip(combined, xj)]
        witness = tuple(lp.coprime_integers(combined))
        return BalanceReport(
            Classification.PARTLY_BALANCED, witness, kernel_dim, rank, tuple(columns)
        )

    return BalanceReport(Classification.NO_BALANCED_PART, None, kernel_dim, rank, ())


def weighted_balance(alternating: AlternatingMatrix, weights) -> bool:
    """True iff A.p vanishes (within 1e-10) for the nonnegative weights p.

    This is the single-site maximal-mixedness condition expressed on the
    diagonal weights of the state.
    """
    p = np.asarray(weights, dtype=float)
    if p.shape != (alternating.length,):
        raise LengthMismatch(
            f"weight vector has length {p.size}, matrix has {alternating.length} columns"
        )
    if (p < 0).any():
        raise ValueError("weights must be nonnegative")
    residual = alternating.entries.astype(float) @ p
    return bool(np.abs(residual).max() <= 1e-10)


def sl_scalable_to_zero(alternating: AlternatingMatrix):
    """Scaling exponents that shrink every support column, if any exist.

    Returns a rational vector p with sum_i p_i A_ij <= -1 for every column
    j, or None.  Balanced supports never admit one: pairing such a p with a
    positive kernel vector x gives 0 = p.A.x <= -sum(x) < 0.
    """
    a_int = [[int(v) for v in row] for row in alternating.entries]
    return lp.negative_column_scores(a_int)


def canonical_irreducible(num_qubits: int, length: int) -> BinaryMatrix:
    """Canonical irreducibly balanced support of a given length.

    Length 2 is the GHZ pattern (all-zeros column next to the all-ones
    column).  For length >= 4 the first L-1 columns carry single ones along
    an anti-diagonal, the last column is all ones, and rows beyond L-1
    duplicate the first row (telescoped bits).  No irreducibly balanced
    support of length 3 exists: with three +-1 columns, any two distinct
    row patterns force a zero multiplicity.
    """
    if not 2 <= length <= num_qubits + 1:
        raise LengthOutOfRange(
            f"irreducible supports need 2 <= L <= q+1; got L={length}, q={num_qubits}"
        )
    if length == 3:
        raise LengthOutOfRange("no irreducibly balanced support of length 3 exists")
    mat = np.zeros((num_qubits, length), dtype=np.int8)
    if length == 2:
        mat[:, 1] = 1
    else:
        for j in range(length - 1):
            mat[length - 2 - j, j] = 1
        mat[:, length - 1] = 1
        for i in range(length - 1, num_qubits):
            mat[i] = mat[0]
    binary = BinaryMatrix(mat)
    report = analyze(AlternatingMatrix.from_binary(binary))
    if report.classification is not Classification.BALANCED_IRREDUCIBLE:
        raise LengthOutOfRange(
            f"canonical pattern for q={num_qubits}, L={length} failed verification"
        )
    return binary


def report_to_json(report: BalanceReport) -> dict:
    return {
        "classification": report.classification.value,
        "witness": list(report.witness) if report.witness is not None else None,
        "kernel_dim": report.kernel_dim,
        "rank": report.rank,
        "balanced_columns": list(report.balanced_columns),
    }
