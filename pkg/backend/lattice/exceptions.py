"""
Lattice Exceptions

Every error raised by the lattice engine derives from LatticeError and carries
the process exit code the command-line front end reports for it.
"""


class LatticeError(Exception):
    """Base exception for lattice engine operations."""
    exit_code = 3


class StructuralError(LatticeError):
    """Raised when ranks or dimensions of the operands do not match."""
    pass


class DomainError(LatticeError):
    """Raised when an argument lies outside the domain of an operation."""
    pass


class PreconditionError(DomainError):
    """Raised when a documented precondition (e.g. xi interior to the dual) fails."""
    pass


class EmptyChamberError(DomainError):
    """Raised by chamber-dependent operations on a system whose open chamber is empty."""
    pass


class InvalidRootSystemError(LatticeError):
    """Raised when an operation requires a valid root system and gets an invalid one."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class UnknownNameError(LatticeError):
    """Raised for unknown builtin, cone or action names."""
    pass


class InstanceParseError(LatticeError):
    """Raised when an instance file cannot be parsed."""
    exit_code = 2


class LimitExceededError(LatticeError):
    """Raised when an enumeration outgrows the configured memory bound."""
    exit_code = 4
