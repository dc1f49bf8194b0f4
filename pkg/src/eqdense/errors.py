"""Exception types shared across the package.

The CLI maps these onto exit codes: usage errors (ValueError and argparse
failures) exit 2, capacity and convergence failures exit 3, verification
failures exit 1.
"""


class CapacityError(RuntimeError):
    """A requested computation exceeds a configured size cap (enumeration
    budget, polynomial degree limit, or dimension range of an integrator)."""


class ConvergenceError(RuntimeError):
    """An adaptive computation exhausted its refinement budget before
    reaching the requested tolerance."""

    def __init__(self, message, value=None, error_estimate=None):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


class DegenerateSystemError(RuntimeError):
    """A polynomial (or polynomial system) is degenerate: identically zero,
    or with an identically vanishing resultant.  For sampled games this is a
    probability-zero event; callers skip and tally such samples."""


class NumericalDegeneracyError(RuntimeError):
    """A quantity that is nonnegative in exact arithmetic came out negative
    beyond the accepted rounding tolerance, signalling numerical failure of
    the evaluation rather than a property of the input."""


class VerificationFailure(RuntimeError):
    """A claimed identity or structural property failed its numerical check."""
