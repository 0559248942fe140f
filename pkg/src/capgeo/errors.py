"""Exception hierarchy.

Two families matter to callers (and to the CLI exit codes): ``InputError``
for malformed or out-of-bounds input (exit 2) and ``DomainError`` for
well-formed input on which an operation is mathematically undefined
(exit 3).
"""


class CapgeoError(Exception):
    pass


class InputError(CapgeoError, ValueError):
    pass


class DomainError(CapgeoError, ValueError):
    pass


class SizeError(InputError):
    """Requested size is outside the enumeration budget."""


class UnknownSymbolError(InputError):
    pass


class ArityError(InputError):
    pass


class NotLatinError(InputError):
    pass


class WordSyntaxError(InputError):
    pass


class DyckFormatError(InputError):
    pass


class DegenerateScheduleError(InputError):
    pass


class CompositionError(DomainError):
    """Endpoints of two morphisms do not match."""


class NonInvertibleError(DomainError):
    """Pinch or attach events block inversion."""


class GeometryError(DomainError):
    """Strands are not adjacent where an event needs them to be."""


class SkeletonError(DomainError):
    """Letters do not agree with the declared translations."""


class NotInPaBError(DomainError):
    pass
