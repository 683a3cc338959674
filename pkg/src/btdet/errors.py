"""Exception hierarchy.

Two families: :class:`ComputationError` (the math broke down on a valid
input, CLI exit code 1) and :class:`UsageError` (bad arguments or input
files, CLI exit code 2).
"""


class BTDError(Exception):
    """Base class for every error raised by btdet."""


class ComputationError(BTDError):
    pass


class UsageError(BTDError, ValueError):
    pass


class SingularOffDiagonal(ComputationError):
    """An off-diagonal block that must be inverted failed the pivot guard."""

    def __init__(self, index, label="B"):
        self.index = index
        self.label = label
        super().__init__(f"off-diagonal block {label}_{index} is singular")


class SingularLeadingBlock(ComputationError):
    """Breakdown of the Schur-complement recursion at step ``k``."""

    def __init__(self, k):
        self.k = k
        super().__init__(f"recursion block Lambda_{k} is singular")


class SingularPartialBlock(ComputationError):
    def __init__(self, k):
        self.k = k
        super().__init__(f"upper-left block of partial transfer T({k}) is singular")


class ZeroBoundaryParameter(UsageError):
    def __init__(self):
        super().__init__("boundary parameter z must be nonzero for cornered matrices")


class NoConvergence(ComputationError):
    """Root iteration hit its cap; the best iterate is attached."""

    def __init__(self, roots, residuals, iterations):
        self.roots = roots
        self.residuals = residuals
        self.iterations = iterations
        super().__init__(
            f"root iteration did not converge in {iterations} steps "
            f"(max residual {max(residuals, default=0.0):.3e})"
        )


class InterpolationDegenerate(UsageError):
    pass


class NotAnEigenpair(ComputationError):
    pass


class DegenerateEigenvector(ComputationError):
    pass


class ParseError(UsageError):
    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class InvariantViolation(UsageError):
    pass
