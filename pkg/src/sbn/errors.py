"""Exception hierarchy shared by all sbn modules.

The CLI maps these onto exit codes: usage/contract problems exit 2,
capacity overruns exit 3, internal invariant failures exit 4.
"""


class SbnError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(SbnError):
    """A graph (or tree) violates a structural requirement, e.g. a cycle."""


class BindingError(SbnError):
    """A strategy profile does not match the graph it is bound to."""


class ContractError(SbnError):
    """An argument violates a documented precondition."""


class FormatError(SbnError):
    """An interchange document (SBN file, matrix file) is malformed."""


class CapacityError(SbnError):
    """A computation would exceed a configured size bound."""

    def __init__(self, message: str, bound: int | None = None):
        super().__init__(message)
        self.bound = bound


class InternalError(SbnError):
    """An internal invariant failed; indicates a bug, not bad input."""
