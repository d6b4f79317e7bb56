"""Exception hierarchy shared by all modules."""


class DecographError(Exception):
    """Base class for every error raised by decograph."""


class DomainError(DecographError, ValueError):
    """An argument lies outside the domain of the operation."""


class SizeError(DecographError, ValueError):
    """An exhaustive computation would exceed its enumeration guard."""


class ShapeError(DecographError, ValueError):
    """Array shapes or block counts are incompatible."""


class MassMismatchError(DecographError, ValueError):
    """Two measures do not carry the same total mass."""


class ValidationError(DecographError, ValueError):
    """An object violates one of its invariants (symmetry, range, ...)."""


class ParseError(DecographError, ValueError):
    """A file or literal could not be parsed."""
