"""Exception hierarchy shared by all modules."""


class TGError(Exception):
    """Base class for every error raised by tgfactor."""


class GraphError(TGError, ValueError):
    """Malformed graph input or an operation applied to an unsuitable graph."""


class GuardError(TGError):
    """A size guard (subset enumeration, tree count, dimension) was exceeded."""


class VerificationError(TGError):
    """An identity that must hold exactly did not.

    Raised only where a failure can only mean an implementation bug, e.g. a
    multiplicity that depends on the chosen base point.
    """
