"""Exception types shared across the package.

The CLI maps these onto exit codes: input/shape/range problems exit 1,
variable-budget violations exit 2, anything unexpected exits 3.
"""


class AnnmfError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(AnnmfError, ValueError):
    """Operands have incompatible dimensions."""


class RangeError(AnnmfError, ValueError):
    """A value falls outside the representable encoding range."""


class InputError(AnnmfError, ValueError):
    """User-supplied data is malformed (bad CSV, negative entries, ...)."""


class SizeError(AnnmfError, ValueError):
    """A problem exceeds a hard size cap (e.g. exhaustive search width)."""


class BudgetError(AnnmfError):
    """The encoded problem needs more logical variables than the budget allows."""

    def __init__(self, required: int, available: int):
        self.required = required
        self.available = available
        super().__init__(
            f"problem needs {required} logical variables "
            f"but only {available} are available"
        )
