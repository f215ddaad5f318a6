"""Exception hierarchy shared by every mixtrace module."""


class MixtraceError(Exception):
    """Base class for all library errors."""


class EmptyPointSet(MixtraceError, ValueError):
    pass


class EmptyConfiguration(MixtraceError, ValueError):
    pass


class InvalidParams(MixtraceError, ValueError):
    pass


class InvalidSchedule(MixtraceError, ValueError):
    pass


class InvalidAlpha(MixtraceError, ValueError):
    pass


class OutOfWindow(MixtraceError, ValueError):
    pass


class TooLarge(MixtraceError, ValueError):
    pass


class IoError(MixtraceError, OSError):
    """Raised when a table or grid cannot be read or written."""
