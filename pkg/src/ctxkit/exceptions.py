"""Exception types shared across the package.

The CLI maps these onto exit codes: argument and lookup errors (ValueError,
KeyError and their subclasses here) exit 2, ResourceLimitError exits 3,
NumericError exits 1.
"""


class UnknownLabelError(KeyError):
    """An observable label is not present in the target set or expression."""


class UnknownInequalityError(KeyError):
    """An inequality id is not in the catalog."""


class IncompatibleContextError(ValueError):
    """Observables that must be jointly measurable do not commute."""


class ResourceLimitError(RuntimeError):
    """A documented size cap (label count, qubit count) was exceeded."""


class NumericError(ArithmeticError):
    """A numeric invariant failed: non-convergence, non-real expectation,
    or a measurement branch with vanishing probability."""
