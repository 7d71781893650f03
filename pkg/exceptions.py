"""
Error types shared by every hyperroot module.

Each error carries the process exit code the CLI uses for it:
2 for bad input, 3 for compute failures, 4 for requests outside the domain.
"""

from typing import Optional, Tuple


class HyperrootError(Exception):
    """Base class for all hyperroot errors."""

    exit_code = 1


class NotGCM(HyperrootError):
    """Matrix is not a generalized Cartan matrix."""

    exit_code = 2


class ParseError(HyperrootError):
    """Matrix, root or preset text could not be parsed."""

    exit_code = 2


class NotSymmetrizable(HyperrootError):
    """Operation needs the invariant form but the matrix has no symmetrization."""

    exit_code = 3


class DegenerateDivisor(HyperrootError):
    """Peterson recursion hit (β|β-2ρ) = 0 where the multiplicity is not otherwise known."""

    exit_code = 3

    def __init__(self, beta: Tuple[int, ...], rhs: Optional[object] = None):
        self.beta = beta
        self.rhs = rhs
        detail = f" (right side {rhs})" if rhs is not None else ""
        super().__init__(f"Zero divisor (β|β-2ρ) at β={beta}{detail}")


class IntegrityError(HyperrootError):
    """An exact computation produced a value that must be an integer but is not."""

    exit_code = 3


class WrongType(HyperrootError):
    """Diagram construction called on a matrix of the wrong type."""

    exit_code = 4


class WrongAlgebra(HyperrootError):
    """Bound only defined for a specific algebra."""

    exit_code = 4


class OddNorm(HyperrootError):
    """Partition-function argument 1 - (α|α)/2 is not a nonnegative integer."""

    exit_code = 4


class BoundPreconditionError(HyperrootError):
    """Bound requested outside its preconditions (dimension, symmetry, sign of norm)."""

    exit_code = 4


class NotInPositiveCone(HyperrootError):
    """Root vector is not in Q+ (nonnegative, nonzero)."""

    exit_code = 4


class DecomposableMatrix(HyperrootError):
    """Operation requires an indecomposable matrix."""

    exit_code = 4
