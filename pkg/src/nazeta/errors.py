"""Exception hierarchy. The CLI maps each family to an exit code."""


class NazetaError(Exception):
    exit_code = 1


class InputError(NazetaError, ValueError):
    """Bad user input or precondition violation."""

    exit_code = 1


class ConsistencyError(NazetaError, ArithmeticError):
    """A mathematical invariant failed."""

    exit_code = 2


class ConvergenceError(NazetaError, RuntimeError):
    """Numeric iteration or quadrature did not converge."""

    exit_code = 3
