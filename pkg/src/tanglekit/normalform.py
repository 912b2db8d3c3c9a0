"""Stochasticity checks and the diagonal filtering normal form.

A pure state is *stochastic* when its rank-2 reduced density matrices
(including every single-site one) are maximally mixed on their range.
Every irreducibly balanced state can be carried onto a stochastic one by
diagonal determinant-1 operations diag(e^z, e^-z); the construction solves
a linear system in the exponents, one equation per support column beyond
the first.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .balance import Classification, analyze, support_matrices
from .errors import (
    NotIrreduciblyBalanced,
    TooManyQubitsForLevel,
    ZeroAmplitudeOnSupport,
)
from .states import LocalOperator, PureState, reduced_density

_RANK_EPS = 1e-9
_ALL_SUBSETS_MAX_QUBITS = 6
_COMPLEMENT_MAX_QUBITS = 10


class StochasticityLevel(enum.Enum):
    SINGLE_SITE = "single-site"
    SINGLE_AND_COMPLEMENT = "single-and-complement"
    ALL_SUBSETS = "all-subsets"

    @classmethod
    def from_cli(cls, token: str) -> "StochasticityLevel":
        mapping = {
            "1": cls.SINGLE_SITE,
            "2": cls.SINGLE_AND_COMPLEMENT,
            "all": cls.ALL_SUBSETS,
        }
        return mapping[token]


@dataclass(frozen=True)
class StochasticityReport:
    level: StochasticityLevel
    passed: bool
    worst_deviation: float
    tolerance: float


@dataclass(frozen=True)
class LfoSolution:
    """Diagonal determinant-1 operations carrying the input to a stochastic state.

    ops[i] = diag(e^{z_i}, e^{-z_i}) acts on qubit i+1 *after* the reported
    gauge bit-flips (X relabelings) have been applied; output_state is the
    normalized result in the gauged frame.
    """

    ops: tuple
    output_state: PureState
    exponents: tuple
    gauge_flips: tuple


def _range_deviation(eigs: np.ndarray) -> float:
    """Distance from 'maximally mixed on a rank-2 range', operator norm.

    eigs are the eigenvalues of a reduced density matrix; the two largest
    are compared with 1/2 and everything else with 0.
    """
    s = np.sort(eigs)[::-1]
    dev = max(abs(s[0] - 0.5), abs(s[1] - 0.5)) if s.size >= 2 else abs(s[0] - 0.5)
    if s.size > 2:
        dev = max(dev, float(np.abs(s[2:]).max()))
    return float(dev)


def stochasticity_check(
    state: PureState,
    level: StochasticityLevel = StochasticityLevel.SINGLE_SITE,
    tol: float = 1e-8,
) -> StochasticityReport:
    """Check maximal mixedness of reduced density matrices.

    SINGLE_SITE compares every one-qubit reduction with I/2.
    SINGLE_AND_COMPLEMENT additionally eigendecomposes every (q-1)-site
    reduction and requires exactly two eigenvalues above 1e-9, both near
    1/2.  ALL_SUBSETS applies the rank-2 range check to every proper
    subset whose reduction has rank 2 (capped at q <= 6).
    """
    state.require_normalized()
    q = state.num_qubits
    if level is StochasticityLevel.ALL_SUBSETS and q > _ALL_SUBSETS_MAX_QUBITS:
        raise TooManyQubitsForLevel(
            f"all-subsets check is capped at q <= {_ALL_SUBSETS_MAX_QUBITS}"
        )
    if level is StochasticityLevel.SINGLE_AND_COMPLEMENT and q > _COMPLEMENT_MAX_QUBITS:
        raise TooManyQubitsForLevel(
            f"complement check is capped at q <= {_COMPLEMENT_MAX_QUBITS}"
        )

    worst = 0.0
    for site in range(1, q + 1):
        rho = reduced_density(state, {site}).entries
        dev = float(np.abs(np.linalg.eigvalsh(rho - 0.5 * np.eye(2))).max())
        worst = max(worst, dev)

    if level in (
        StochasticityLevel.SINGLE_AND_COMPLEMENT,
        StochasticityLevel.ALL_SUBSETS,
    ) and q >= 2:
        for site in range(1, q + 1):
            keep = [k for k in range(1, q + 1) if k != site]
            eigs = np.linalg.eigvalsh(reduced_density(state, keep).entries)
            # rank != 2 shows up as a large deviation (a missing 1/2 or a
            # third eigenvalue above the rank threshold)
            worst = max(worst, _range_deviation(eigs))

    if level is StochasticityLevel.ALL_SUBSETS:
        for size in range(2, q - 1):
            for keep in itertools.combinations(range(1, q + 1), size):
                eigs = np.linalg.eigvalsh(reduced_density(state, keep).entries)
                if int((eigs > _RANK_EPS).sum()) == 2:
                    worst = max(worst, _range_deviation(eigs))

    return StochasticityReport(level, worst <= tol, worst, tol)


def lfo_to_stochastic(state: PureState, eps: float = 1e-9) -> LfoSolution:
    """Diagonal local filtering taking an irreducibly balanced state stochastic.

    The support is relabeled by bit flips so its first column is all zeros,
    then the exponent system  sum_i 2 z_i B_ij = ln|a_j/a_1| - ln sqrt(n_j/n_1)
    (one equation per remaining column, minimum-norm solution when
    underdetermined) equalizes the weight-per-multiplicity of every column.
    Moduli end up proportional to sqrt(n_j); phases are untouched.

    Single-site reductions of the output are exactly I/2 whenever the
    support columns are pairwise at Hamming distance >= 2 (true for the
    whole canonical/telescoped family).  A distance-1 column pair leaves a
    residual off-diagonal that no diagonal operation can remove (the
    six-column five-qubit exceptional support is such a case); the returned
    state still satisfies the diagonal weight condition exactly.
    """
    sup = support_matrices(state, eps)
    report = analyze(sup.alternating)
    if report.classification is not Classification.BALANCED_IRREDUCIBLE:
        raise NotIrreduciblyBalanced(
            f"normal form needs an irreducibly balanced support, "
            f"got {report.classification.value}"
        )
    q = state.num_qubits
    support = state.support(eps)
    amps = np.array([state.amplitudes[i] for i in support])
    if np.any(np.abs(amps) == 0.0):
        raise ZeroAmplitudeOnSupport("support column with zero amplitude")
    witness = np.array(report.witness, dtype=float)

    # gauge: flip every qubit where the first support column has a 1
    mask = support[0]
    flips = tuple(i + 1 for i in range(q) if (mask >> (q - 1 - i)) & 1)
    idx = np.arange(1 << q)
    gauged = np.zeros_like(state.amplitudes)
    gauged[idx ^ mask] = state.amplitudes
    gauged_cols = [c ^ mask for c in support]

    length = len(support)
    bmat = np.zeros((length - 1, q))
    for j in range(1, length):
        for i in range(q):
            bmat[j - 1, i] = 2.0 * ((gauged_cols[j] >> (q - 1 - i)) & 1)
    target = np.array(
        [
            math.log(abs(amps[j]) / abs(amps[0]))
            - 0.5 * math.log(witness[j] / witness[0])
            for j in range(1, length)
        ]
    )
    exponents, *_ = np.linalg.lstsq(bmat, target, rcond=None)

    ops = tuple(
        LocalOperator(2, np.diag([math.exp(z), math.exp(-z)]), site=i + 1)
        for i, z in enumerate(exponents)
    )
    diag = np.ones(1 << q)
    for i, z in enumerate(exponents):
        bit = (idx >> (q - 1 - i)) & 1
        diag = diag * np.where(bit, math.exp(-z), math.exp(z))
    transformed = gauged * diag
    transformed /= np.linalg.norm(transformed)
    output = PureState(q, transformed)
    return LfoSolution(ops, output, tuple(float(z) for z in exponents), flips)


def lfo_solution_to_json(solution: LfoSolution) -> dict:
    from .states import state_to_json

    return {
        "exponents": list(solution.exponents),
        "gauge_flips": list(solution.gauge_flips),
        "output_state": state_to_json(solution.output_state),
    }
