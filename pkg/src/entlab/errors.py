"""Exception types. Each maps to one CLI exit code (see ``entlab.cli``)."""


class EntlabError(Exception):
    """Base class for all package errors."""


class DomainError(EntlabError, ValueError):
    """A parameter is outside its allowed range (bad input)."""


class DimensionError(EntlabError, ValueError):
    """Shapes or subsystem dimensions do not match."""


class ContractError(EntlabError, ValueError):
    """An object violates a structural invariant (Hermiticity, trace, ...)."""


class NotPSDError(ContractError):
    """A matrix that must be positive semidefinite has a negative eigenvalue."""


class SpecFormatError(EntlabError, ValueError):
    """A JSON state or channel description is malformed."""


class BracketError(EntlabError, RuntimeError):
    """A root search found no sign change inside its bracket."""


class NoDecayError(EntlabError, ValueError):
    """The initial state carries no entanglement to track."""
