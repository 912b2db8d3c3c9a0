"""Combs and the rotation-restricted concurrence for general half-integer spin.

The local operations here are complexified rotations (the spin-S image of
SL(2,C)), not the full SL(2S+1,C).  For half-integer spin the invariant
comb has linear part i*antidiag{(-1)^m, m=1..2S+1}; for integer spin the
antidiagonal construction self-cancels on the middle level and the
hairy-ball obstruction rules out any regular first-order comb.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    IntegerSpinNoInvariantComb,
    NotPSD,
    ParamCountMismatch,
    ShapeMismatch,
    UnnormalizedState,
    UnsupportedSpin,
)
from .states import DensityMatrix

_CLAMP = 1e-12
_COMB_TOL = 1e-10


def spin_matrices(two_s: int):
    """Spin operators (S_x, S_y, S_z) for spin two_s/2, m descending."""
    if two_s < 1:
        raise UnsupportedSpin("two_s must be a positive integer")
    d = two_s + 1
    s = two_s / 2.0
    m = s - np.arange(d)
    raising = np.zeros((d, d), dtype=np.complex128)
    for k in range(d - 1):
        raising[k, k + 1] = math.sqrt(s * (s + 1) - m[k + 1] * (m[k + 1] + 1))
    lowering = raising.conj().T
    sx = (raising + lowering) / 2.0
    sy = (raising - lowering) / 2.0j
    sz = np.diag(m).astype(np.complex128)
    return sx, sy, sz


@dataclass(frozen=True, eq=False)
class CombOperator:
    """Antilinear local operator: linear part followed by complex conjugation.

    The comb property <phi| L |phi*> = 0 for all phi holds exactly when the
    linear part is antisymmetric.
    """

    dim: int
    linear_part: np.ndarray

    def __post_init__(self):
        mat = np.array(self.linear_part, dtype=np.complex128)
        if mat.shape != (self.dim, self.dim):
            raise ShapeMismatch(
                f"expected {self.dim}x{self.dim} linear part, got {mat.shape}"
            )
        mat.setflags(write=False)
        object.__setattr__(self, "linear_part", mat)

    def expectation(self, phi: np.ndarray) -> complex:
        """Antilinear expectation value <phi| L |phi*>."""
        vec = np.asarray(phi, dtype=np.complex128)
        if vec.shape != (self.dim,):
            raise ShapeMismatch(f"state must have dimension {self.dim}")
        return complex(np.conj(vec) @ self.linear_part @ np.conj(vec))


@dataclass(frozen=True)
class CombCheck:
    is_comb: bool
    max_violation: float


@dataclass(frozen=True)
class SpinConcurrenceResult:
    value: float
    eigenvalues: tuple


def comb_operator(two_s: int) -> CombOperator:
    """The rotation-invariant comb for half-integer spin two_s/2.

    Linear part i*antidiag{(-1)^m, m=1..d} with d = two_s+1; for two_s = 1
    this is sigma_y.  Even two_s (integer spin) raises
    IntegerSpinNoInvariantComb.
    """
    if two_s < 1:
        raise UnsupportedSpin("two_s must be a positive integer")
    if two_s % 2 == 0:
        raise IntegerSpinNoInvariantComb(
            f"two_s = {two_s} is an integer spin; no first-order invariant comb exists"
        )
    d = two_s + 1
    mat = np.zeros((d, d), dtype=np.complex128)
    for k in range(d):  # (row k, column d-1-k) holds i*(-1)^(k+1)
        mat[k, d - 1 - k] = 1j * ((-1) ** (k + 1))
    return CombOperator(d, mat)


def comb_family(two_s: int, params) -> CombOperator:
    """Parameterized first-order comb families for spin 1 and spin 3/2.

    Spin 1 (two_s = 2), parameters (a, b, c):
        L = a S_y + b S_x S_y + conj(b) S_y S_x + c S_y S_z + conj(c) S_z S_y
    Spin 3/2 (two_s = 3), parameters (a, ..., f):
        L = S_y M + (S_y M)^dagger,
        M = a 1 + b S_x + c S_z + d S_x S_z + e S_x^2 + f S_z^2

    Real parameters give antisymmetric linear parts, hence genuine combs;
    imaginary parts spoil antisymmetry (verify_comb will report it).
    """
    params = [complex(p) for p in params]
    if two_s == 2:
        if len(params) != 3:
            raise ParamCountMismatch(f"spin 1 takes 3 parameters, got {len(params)}")
        a, b, c = params
        sx, sy, sz = spin_matrices(2)
        lin = a * sy
        lin = lin + b * (sx @ sy) + np.conj(b) * (sy @ sx)
        lin = lin + c * (sy @ sz) + np.conj(c) * (sz @ sy)
        return CombOperator(3, lin)
    if two_s == 3:
        if len(params) != 6:
            raise ParamCountMismatch(f"spin 3/2 takes 6 parameters, got {len(params)}")
        a, b, c, d, e, f = params
        sx, sy, sz = spin_matrices(3)
        m = a * np.eye(4) + b * sx + c * sz + d * (sx @ sz) + e * (sx @ sx) + f * (sz @ sz)
        lin = sy @ m
        lin = lin + lin.conj().T
        return CombOperator(4, lin)
    raise UnsupportedSpin(f"comb families are shipped for two_s in (2, 3), got {two_s}")


def verify_comb(op: CombOperator, trials: int, seed: int) -> CombCheck:
    """Sample random normalized states and report the largest |<phi|L|phi*>|."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        phi = rng.normal(size=op.dim) + 1j * rng.normal(size=op.dim)
        phi /= np.linalg.norm(phi)
        worst = max(worst, abs(op.expectation(phi)))
    return CombCheck(is_comb=worst <= _COMB_TOL, max_violation=worst)


def _local_dim(total_dim: int, local_dim: int | None) -> int:
    d = int(math.isqrt(total_dim)) if local_dim is None else int(local_dim)
    if d * d != total_dim:
        raise ShapeMismatch(
            f"two-spin state of local dimension {d} needs {d * d} amplitudes, "
            f"got {total_dim}"
        )
    if d % 2 == 1:
        raise IntegerSpinNoInvariantComb(
            f"local dimension {d} is an integer spin; no invariant comb exists"
        )
    return d


def pure_concurrence(psi, local_dim: int | None = None) -> float:
    """|<Psi| L x L |Psi*>| for a two-spin pure state of even local dimension."""
    vec = np.asarray(psi, dtype=np.complex128).reshape(-1)
    d = _local_dim(vec.size, local_dim)
    lin = comb_operator(d - 1).linear_part
    kk = np.kron(lin, lin)
    return float(abs(np.conj(vec) @ kk @ np.conj(vec)))


def mixed_concurrence(rho, local_dim: int | None = None) -> SpinConcurrenceResult:
    """Analytic convex-roof concurrence of a two-spin density matrix.

    Computes R = sqrt(sqrt(rho) LxL rho* LxL sqrt(rho)) through Hermitian
    eigendecompositions (eigenvalues clamped at zero below 1e-12) and
    returns max{0, 2 lambda_1 - sum lambda_i} over the descending
    eigenvalues of R.
    """
    if isinstance(rho, DensityMatrix):
        mat = np.array(rho.entries, dtype=np.complex128)
    else:
        mat = np.array(rho, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ShapeMismatch(f"density matrix must be square, got {mat.shape}")
    d = _local_dim(mat.shape[0], local_dim)

    herm_dev = float(np.abs(mat - mat.conj().T).max())
    if herm_dev > 1e-8:
        raise NotPSD(f"matrix is not Hermitian (deviation {herm_dev:.3g})")
    mat = (mat + mat.conj().T) / 2.0
    eigs, vecs = np.linalg.eigh(mat)
    if float(eigs.min()) < -1e-8:
        raise NotPSD(f"negative eigenvalue {float(eigs.min()):.3g}")
    tr = float(np.trace(mat).real)
    if abs(tr - 1.0) > 1e-8:
        raise UnnormalizedState(f"trace is {tr:.12g}, expected 1")

    clamped = np.where(eigs < _CLAMP, 0.0, eigs)
    sqrt_rho = (vecs * np.sqrt(clamped)) @ vecs.conj().T
    lin = comb_operator(d - 1).linear_part
    kk = np.kron(lin, lin)
    core = sqrt_rho @ kk @ mat.conj() @ kk @ sqrt_rho
    core = (core + core.conj().T) / 2.0
    squares = np.linalg.eigvalsh(core)
    squares = np.where(squares < _CLAMP, 0.0, squares)
    lams = np.sort(np.sqrt(squares))[::-1]
    value = max(0.0, float(2.0 * lams[0] - lams.sum()))
    return SpinConcurrenceResult(value=value, eigenvalues=tuple(float(v) for v in lams))
