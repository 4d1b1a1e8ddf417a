"""Exception hierarchy for randtls.

Every error raised on purpose by the package derives from :class:`RandTLSError`
and carries a short machine-readable ``code`` used by the command-line harness.
"""


class RandTLSError(Exception):
    code = "error"


class InvalidInputError(RandTLSError, ValueError):
    code = "invalid_input"


class NumericalFailure(RandTLSError, ArithmeticError):
    """An iterative kernel did not converge within its iteration cap."""

    code = "numerical_failure"

    def __init__(self, message, iterations):
        super().__init__(f"{message} (after {iterations} iterations)")
        self.iterations = iterations


class RankOverflowError(RandTLSError):
    """The adaptive range finder hit ``max_rank`` before the stopping rule fired.

    The spectrum does not drop below the requested tolerance within the cap.
    ``basis`` holds the partial orthonormal basis built so far.
    """

    code = "rank_overflow"

    def __init__(self, message, basis):
        super().__init__(message)
        self.basis = basis


class NearNongenericError(RandTLSError, ArithmeticError):
    """Smallest singular value of the augmented core is too close to a core
    singular value. Re-running with a slightly different rank usually helps."""

    code = "near_nongeneric"

    def __init__(self, message, gap):
        super().__init__(message)
        self.gap = gap


class NongenericProblemError(RandTLSError, ArithmeticError):
    code = "nongeneric"


class InvalidTruncationError(RandTLSError, ValueError):
    code = "invalid_truncation"
