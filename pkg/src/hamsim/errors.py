"""Exception hierarchy shared by all hamsim modules."""


class HamsimError(Exception):
    """Base class for every error raised by hamsim."""


class DimensionError(HamsimError, ValueError):
    """Operands live on different numbers of sites or Hilbert-space sizes."""


class CapacityError(HamsimError):
    """A dense realization or enumeration would exceed the configured cap."""


class DomainError(HamsimError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class ContractError(HamsimError):
    """A documented precondition of the operation does not hold."""


class CommutingPairError(ContractError):
    """Raised where a non-commuting pair is required but the pair commutes.

    Commuting pairs share a full eigenbasis; use
    :func:`hamsim.shared.simultaneous_eigenbasis` instead.
    """


class IntegrityError(HamsimError):
    """An internal consistency check failed (e.g. a non-Hermitian matrix)."""
