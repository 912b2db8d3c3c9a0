"""Exception types shared across the package.

Every domain error raised by tanglekit derives from :class:`TanglekitError`,
so callers (and the CLI) can distinguish domain failures from genuine bugs.
"""


class TanglekitError(Exception):
    """Base class for all domain errors raised by this package."""


# --- state construction / manipulation -------------------------------------


class BadBitstring(TanglekitError):
    """A basis label is not a string of '0'/'1' of the right length."""


class DuplicateBasisTerm(TanglekitError):
    """The same basis bitstring was supplied twice."""


class IncompatibleQubitCount(TanglekitError):
    """The requested qubit count does not fit the requested construction."""


class TooManyQubits(TanglekitError):
    """Dense state vectors are capped at 16 qubits."""


class ShapeMismatch(TanglekitError):
    """An operator or index tuple does not match the state's shape."""


class EmptyKeepSet(TanglekitError):
    """reduced_density needs at least one qubit to keep."""


class UnnormalizedState(TanglekitError):
    """An operation that requires a unit-norm input got something else."""


class IndexOutOfRange(TanglekitError):
    """A qubit index is outside 1..num_qubits."""


# --- filter specifications ---------------------------------------------------


class InvalidFilterSpec(TanglekitError):
    """Structural problem in a filter specification."""


class UnpairedIndex(InvalidFilterSpec):
    """A contraction label does not occur exactly twice."""


class MixedVariance(InvalidFilterSpec):
    """A contraction label occurs twice with the same variance."""


class RaggedCopies(InvalidFilterSpec):
    """Copy rows of unequal length, or length != num_qubits."""


class DegreeMismatchAcrossTerms(InvalidFilterSpec):
    """Terms of one filter must all have the same number of copies."""


class QubitCountMismatch(TanglekitError):
    """Filter and state disagree on the number of qubits."""


class UnknownFilter(TanglekitError):
    """Requested builtin filter name does not exist."""


class ParseError(TanglekitError):
    """Syntax error in the filter DSL; carries line/column."""

    def __init__(self, message, line, column):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


# --- balance analysis --------------------------------------------------------


class EmptySupport(TanglekitError):
    """State has no amplitude above the support threshold."""


class LengthMismatch(TanglekitError):
    """Weight vector length does not match the number of columns."""


class LengthOutOfRange(TanglekitError):
    """No canonical irreducibly balanced support of the requested length."""


# --- normal form -------------------------------------------------------------


class NotIrreduciblyBalanced(TanglekitError):
    """The filtering normal form needs an irreducibly balanced input."""


class ZeroAmplitudeOnSupport(TanglekitError):
    """A support column carries an exactly zero amplitude."""


class TooManyQubitsForLevel(TanglekitError):
    """Requested stochasticity level is too expensive at this qubit count."""


# --- spin-S combs and concurrence ---------------------------------------------


class IntegerSpinNoInvariantComb(TanglekitError):
    """No first-order rotation-invariant comb exists for integer spin."""


class UnsupportedSpin(TanglekitError):
    """Parameterized comb families are shipped for spin 1 and 3/2 only."""


class ParamCountMismatch(TanglekitError):
    """Wrong number of comb-family parameters."""


class NotPSD(TanglekitError):
    """Density matrix is not Hermitian positive semidefinite."""
