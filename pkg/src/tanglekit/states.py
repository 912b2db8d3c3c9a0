"""Dense multiqubit pure states, density matrices and local operators.

Bit convention used throughout the package: qubit 1 is the most significant
bit of a computational-basis index, so for two qubits the basis order is
``|00>, |01>, |10>, |11>`` and the label ``"10"`` sits at index 2.

States may be subnormalized.  Nothing renormalizes behind the caller's back;
operations that need a unit-norm input check it on demand (tolerance 1e-9).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import (
    BadBitstring,
    DuplicateBasisTerm,
    EmptyKeepSet,
    IncompatibleQubitCount,
    IndexOutOfRange,
    NotPSD,
    ShapeMismatch,
    TooManyQubits,
    UnnormalizedState,
)

MAX_QUBITS = 16
NORM_TOL = 1e-9

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)

# support of the six-column five-qubit exceptional irreducible state
_CHI5_COLUMNS = ("11111", "11000", "10110", "01000", "00101", "00011")


@dataclass(frozen=True)
class StateTerm:
    """One computational-basis component of a state under construction."""

    basis: str
    amplitude: complex


@dataclass(frozen=True, eq=False)
class PureState:
    """A dense q-qubit state vector indexed by basis bitstrings.

    The amplitude array is copied and frozen at construction; instances are
    immutable and safe to share between threads.
    """

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.num_qubits < 1:
            raise IncompatibleQubitCount("a state needs at least one qubit")
        if self.num_qubits > MAX_QUBITS:
            raise TooManyQubits(
                f"dense representation is capped at {MAX_QUBITS} qubits, "
                f"got q={self.num_qubits}"
            )
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.num_qubits,):
            raise ShapeMismatch(
                f"expected {1 << self.num_qubits} amplitudes for "
                f"q={self.num_qubits}, got shape {amps.shape}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def require_normalized(self, tol: float = NORM_TOL) -> None:
        if not self.is_normalized(tol):
            raise UnnormalizedState(f"state norm is {self.norm():.12g}, expected 1")

    def normalized(self) -> "PureState":
        """Return the unit-norm rescaling of this state."""
        n = self.norm()
        if n == 0.0:
            raise UnnormalizedState("cannot normalize the zero vector")
        return PureState(self.num_qubits, self.amplitudes / n)

    def bitstring(self, index: int) -> str:
        return format(index, f"0{self.num_qubits}b")

    def amplitude(self, basis: str) -> complex:
        _check_bitstring(basis, self.num_qubits)
        return complex(self.amplitudes[int(basis, 2)])

    def support(self, eps: float = 1e-9) -> list[int]:
        """Basis indices with |amplitude| above eps relative to the largest."""
        mags = np.abs(self.amplitudes)
        top = mags.max()
        if top == 0.0:
            return []
        return [int(i) for i in np.flatnonzero(mags > eps * top)]


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian positive-semidefinite matrix, optionally trace-one."""

    dim: int
    entries: np.ndarray

    def __post_init__(self):
        ent = np.array(self.entries, dtype=np.complex128)
        if ent.shape != (self.dim, self.dim):
            raise ShapeMismatch(
                f"expected a {self.dim}x{self.dim} matrix, got shape {ent.shape}"
            )
        ent.setflags(write=False)
        object.__setattr__(self, "entries", ent)

    def validate(self, physical: bool = True, tol: float = 1e-8) -> None:
        """Check Hermiticity, positivity and (if physical) unit trace."""
        dev = np.abs(self.entries - self.entries.conj().T).max()
        if dev > tol:
            raise NotPSD(f"matrix is not Hermitian (deviation {dev:.3g})")
        lo = float(np.linalg.eigvalsh(self.entries).min())
        if lo < -tol:
            raise NotPSD(f"negative eigenvalue {lo:.3g}")
        if physical:
            tr = complex(np.trace(self.entries))
            if abs(tr - 1.0) > tol:
                raise UnnormalizedState(f"trace is {tr:.12g}, expected 1")


@dataclass(frozen=True, eq=False)
class LocalOperator:
    """A dim x dim operator acting on one site; site index is optional."""

    dim: int
    entries: np.ndarray
    site: int | None = None

    def __post_init__(self):
        ent = np.array(self.entries, dtype=np.complex128)
        if ent.shape != (self.dim, self.dim):
            raise ShapeMismatch(
                f"expected a {self.dim}x{self.dim} operator, got shape {ent.shape}"
            )
        ent.setflags(write=False)
        object.__setattr__(self, "entries", ent)

    def determinant(self) -> complex:
        return complex(np.linalg.det(self.entries))


TermLike = Union[StateTerm, tuple]


def _check_bitstring(basis: str, num_qubits: int) -> None:
    if not isinstance(basis, str) or len(basis) != num_qubits:
        raise BadBitstring(f"basis {basis!r} is not a length-{num_qubits} bitstring")
    if any(ch not in "01" for ch in basis):
        raise BadBitstring(f"basis {basis!r} contains characters other than 0/1")


def make_state(num_qubits: int, terms: Iterable[TermLike]) -> PureState:
    """Build a dense state from (bitstring, amplitude) components.

    Listed amplitudes are taken verbatim (no normalization); every other
    basis amplitude is zero.  Duplicate bitstrings are an error.
    """
    if num_qubits < 1:
        raise IncompatibleQubitCount("a state needs at least one qubit")
    if num_qubits > MAX_QUBITS:
        raise TooManyQubits(f"dense representation is capped at {MAX_QUBITS} qubits")
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    seen: set[int] = set()
    for term in terms:
        if isinstance(term, StateTerm):
            basis, amp = term.basis, term.amplitude
        else:
            basis, amp = term
        _check_bitstring(basis, num_qubits)
        idx = int(basis, 2)
        if idx in seen:
            raise DuplicateBasisTerm(f"basis {basis!r} appears more than once")
        seen.add(idx)
        amps[idx] = amp
    return PureState(num_qubits, amps)


def generate(kind: str, num_qubits: int) -> PureState:
    """Return one of the named normalized reference states.

    kind is one of ``ghz``, ``w``, ``x``, ``chi5``, ``bell``:

    * ``ghz``  -- (|0...0> + |1...1>)/sqrt(2), q >= 2;
    * ``w``    -- equal superposition of the single-excitation strings, q >= 2;
    * ``x``    -- sqrt(q-2)|1...1> plus all single-excitation strings,
      normalized by sqrt(2q-2), q >= 3;
    * ``chi5`` -- equal-weight (1/sqrt(6)) superposition of the six support
      columns of the exceptional five-qubit irreducible state, q = 5;
    * ``bell`` -- (|00> + |11>)/sqrt(2), q = 2.
    """
    kind = kind.lower()
    if kind == "bell":
        if num_qubits != 2:
            raise IncompatibleQubitCount("bell requires q = 2")
        s = 1.0 / math.sqrt(2.0)
        return make_state(2, [("00", s), ("11", s)])
    if kind == "ghz":
        if num_qubits < 2:
            raise IncompatibleQubitCount("ghz requires q >= 2")
        s = 1.0 / math.sqrt(2.0)
        return make_state(num_qubits, [("0" * num_qubits, s), ("1" * num_qubits, s)])
    if kind == "w":
        if num_qubits < 2:
            raise IncompatibleQubitCount("w requires q >= 2")
        s = 1.0 / math.sqrt(num_qubits)
        return make_state(num_qubits, [(_one_at(i, num_qubits), s) for i in range(num_qubits)])
    if kind == "x":
        if num_qubits < 3:
            raise IncompatibleQubitCount("x requires q >= 3")
        norm = math.sqrt(2.0 * num_qubits - 2.0)
        terms = [("1" * num_qubits, math.sqrt(num_qubits - 2.0) / norm)]
        terms += [(_one_at(i, num_qubits), 1.0 / norm) for i in range(num_qubits)]
        return make_state(num_qubits, terms)
    if kind == "chi5":
        if num_qubits != 5:
            raise IncompatibleQubitCount("chi5 requires q = 5")
        s = 1.0 / math.sqrt(6.0)
        return make_state(5, [(col, s) for col in _CHI5_COLUMNS])
    raise ValueError(f"unknown state kind {kind!r}; choose from ghz/w/x/chi5/bell")


def _one_at(pos: int, num_qubits: int) -> str:
    bits = ["0"] * num_qubits
    bits[pos] = "1"
    return "".join(bits)


def _as_2x2(op) -> np.ndarray:
    mat = op.entries if isinstance(op, LocalOperator) else np.asarray(op, dtype=np.complex128)
    if mat.shape != (2, 2):
        raise ShapeMismatch(f"local operator must be 2x2, got shape {mat.shape}")
    return mat


def apply_local(state: PureState, ops: Sequence) -> PureState:
    """Apply the tensor product of per-qubit 2x2 operators.

    ops is one operator per qubit, in qubit order; entries may be
    LocalOperator values or raw 2x2 arrays.  The norm is not restored.
    """
    q = state.num_qubits
    if len(ops) != q:
        raise ShapeMismatch(f"need {q} local operators, got {len(ops)}")
    tensor = state.amplitudes.reshape((2,) * q)
    for pos, op in enumerate(ops):
        mat = _as_2x2(op)
        tensor = np.tensordot(mat, tensor, axes=([1], [pos]))
        tensor = np.moveaxis(tensor, 0, pos)
    return PureState(q, tensor.reshape(-1))


def reduced_density(state: PureState, keep: Iterable[int]) -> DensityMatrix:
    """Partial trace onto the 1-based qubit indices in ``keep``.

    Rows/columns of the result are indexed by the bits of the kept qubits in
    ascending qubit order.  Requires a normalized state.
    """
    kept = sorted(set(int(k) for k in keep))
    if not kept:
        raise EmptyKeepSet("keep set must contain at least one qubit")
    q = state.num_qubits
    for k in kept:
        if not 1 <= k <= q:
            raise IndexOutOfRange(f"qubit {k} outside 1..{q}")
    state.require_normalized()
    keep_axes = [k - 1 for k in kept]
    traced = [ax for ax in range(q) if ax not in keep_axes]
    tensor = state.amplitudes.reshape((2,) * q)
    rho = np.tensordot(tensor, np.conj(tensor), axes=(traced, traced))
    d = 1 << len(kept)
    return DensityMatrix(d, rho.reshape(d, d))


def telescope(state: PureState, qubit: int) -> PureState:
    """Duplicate one qubit's bit value into a new last qubit.

    Every support column of the (q+1)-qubit result carries the chosen
    qubit's bit twice; amplitudes are unchanged.
    """
    q = state.num_qubits
    if not 1 <= qubit <= q:
        raise IndexOutOfRange(f"qubit {qubit} outside 1..{q}")
    if q + 1 > MAX_QUBITS:
        raise TooManyQubits(f"telescoping would exceed the {MAX_QUBITS}-qubit cap")
    idx = np.arange(1 << q)
    bit = (idx >> (q - qubit)) & 1
    new_idx = (idx << 1) | bit
    out = np.zeros(1 << (q + 1), dtype=np.complex128)
    out[new_idx] = state.amplitudes
    return PureState(q + 1, out)


def random_sl2(seed: int, cond_bound: float = 10.0) -> LocalOperator:
    """Deterministic random 2x2 complex matrix with determinant exactly one.

    Gaussian entries are rescaled by a square root of their determinant;
    draws are rejected until the condition number is within cond_bound.
    """
    if cond_bound <= 1.0:
        raise ValueError("cond_bound must exceed 1")
    rng = np.random.default_rng(seed)
    while True:
        mat = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        det = mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]
        if abs(det) < 1e-6:
            continue
        mat = mat / np.sqrt(det)
        if np.linalg.cond(mat) <= cond_bound:
            return LocalOperator(2, mat)


# --- JSON interchange ---------------------------------------------------------
#
# State files:    {"qubits": q, "terms": [{"basis": "0101", "amp": [re, im]}, ...]}
# Density files:  {"dim": d, "rows": [[[re, im], ...], ...]}
#
# Omitted basis strings mean amplitude zero; duplicates are a load error.


def state_to_json(state: PureState) -> dict:
    terms = []
    for idx in np.flatnonzero(state.amplitudes):
        a = complex(state.amplitudes[idx])
        terms.append({"basis": state.bitstring(int(idx)), "amp": [a.real, a.imag]})
    return {"qubits": state.num_qubits, "terms": terms}


def state_from_json(obj: dict) -> PureState:
    try:
        q = int(obj["qubits"])
        raw = obj["terms"]
    except (KeyError, TypeError, ValueError) as exc:
        raise BadBitstring(f"malformed state object: {exc}") from exc
    pairs = []
    for entry in raw:
        amp = entry["amp"]
        pairs.append((entry["basis"], complex(float(amp[0]), float(amp[1]))))
    return make_state(q, pairs)


def save_state(state: PureState, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_json(state), fh, sort_keys=True)
        fh.write("\n")


def load_state(path) -> PureState:
    with open(path, "r", encoding="utf-8") as fh:
        return state_from_json(json.load(fh))


def density_to_json(dm: DensityMatrix) -> dict:
    rows = [[[v.real, v.imag] for v in row] for row in dm.entries]
    return {"dim": dm.dim, "rows": rows}


def density_from_json(obj: dict) -> DensityMatrix:
    try:
        d = int(obj["dim"])
        rows = obj["rows"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ShapeMismatch(f"malformed density object: {exc}") from exc
    mat = np.array(
        [[complex(float(v[0]), float(v[1])) for v in row] for row in rows],
        dtype=np.complex128,
    )
    return DensityMatrix(d, mat)


def save_density(dm: DensityMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(density_to_json(dm), fh, sort_keys=True)
        fh.write("\n")


def load_density(path) -> DensityMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        return density_from_json(json.load(fh))
