class WangError(Exception):
    """Base class for every error raised by wangweave."""


class SizeMismatch(WangError):
    pass


class NotEquivalent(WangError):
    pass


class DuplicateTile(WangError):
    pass


class ShapeMismatch(WangError):
    pass


class InvalidSubset(WangError):
    pass


class NotAMarkerSet(WangError):
    pass


class InvalidPatch(WangError):
    pass


class IncompatibleShapes(WangError):
    pass


class AlphabetMismatch(WangError):
    pass


class SeedNotInDomain(WangError):
    pass


class NotProlongable(WangError):
    pass


class NotPrimitive(WangError):
    pass


class Inconsistent(WangError):
    pass


class UnknownName(WangError):
    pass


class MissingCertificate(WangError):
    pass


class SeedWithoutFaultLine(WangError):
    pass


class StepFailed(WangError):
    def __init__(self, step, detail):
        super().__init__(f"{step}: {detail}")
        self.step = step
        self.detail = detail


class Timeout(WangError):
    pass
