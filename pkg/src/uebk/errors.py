"""Exception hierarchy shared by every module."""


class UebkError(Exception):
    """Base class for all errors raised by the package."""


class InvalidInput(UebkError, ValueError):
    pass


class GenerationFailed(UebkError, RuntimeError):
    pass


class InvalidCut(UebkError, ValueError):
    pass


class InvalidArity(UebkError, ValueError):
    pass


class ZeroEntryIsometry(UebkError, ValueError):
    pass


class RankDefect(UebkError, ValueError):
    pass


class NotInCatalog(UebkError, KeyError):
    pass


class DecompositionInvalid(UebkError, ValueError):
    pass


class InvalidTiling(UebkError, ValueError):
    pass


class InvalidK(UebkError, ValueError):
    pass


class InvalidParameters(UebkError, ValueError):
    pass


class InvalidDimension(UebkError, ValueError):
    pass


class LiftBlocked(UebkError, RuntimeError):
    def __init__(self, index, reason=""):
        self.index = index
        self.reason = reason
        msg = f"member {index} has no usable Schmidt form"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)


class ParseError(UebkError, ValueError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at {position})"
        super().__init__(message)


class InvalidBasisFile(UebkError, ValueError):
    pass


class NonOrthogonalLift(UserWarning):
    """The cyclic lift of an orthonormal set came out non-orthonormal."""
