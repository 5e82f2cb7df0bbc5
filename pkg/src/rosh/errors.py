"""Error taxonomy shared by all modules."""


class RoshError(Exception):
    """Base class for all toolkit errors."""


class InputError(RoshError, ValueError):
    """Malformed document, unknown identifier, or broken model invariant."""


class PreconditionError(RoshError):
    """An operation was called on an instance outside its applicability gate."""


class SchemeError(RoshError):
    """Precedence scheme is unusable: cyclic, or references unknown operations."""


class ValidityError(RoshError):
    """A transformation would raise the instance lower bound."""


class OracleCapError(RoshError):
    """Instance exceeds the exhaustive-search job cap."""


class InternalError(RoshError):
    """A property the algorithms guarantee was observed to fail."""
