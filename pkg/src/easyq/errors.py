"""Exception types shared across the package."""


class EasyqError(Exception):
    """Base class for all library errors."""


class SizeLimitExceeded(EasyqError):
    pass


class ParseError(EasyqError):
    def __init__(self, message, pos=None):
        self.pos = pos
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)


class KindMismatch(EasyqError):
    pass


class ShapeMismatch(EasyqError):
    pass


class NothingToRotate(EasyqError):
    pass


class UnsupportedImpl(EasyqError):
    pass


class PrecondFailed(EasyqError):
    pass


class InvalidPartition(EasyqError, ValueError):
    pass
