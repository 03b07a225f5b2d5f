"""Exception hierarchy.

Every error raised on a precondition failure derives from ``PwpError``.
``exit_code`` is what the command-line front end returns for it.
"""


class PwpError(Exception):
    exit_code = 4


# wavelet
class InvalidTree(PwpError, ValueError):
    pass


class BadFrameLength(PwpError, ValueError):
    pass


class ShapeMismatch(PwpError, ValueError):
    pass


# teager / statistics
class TooShort(PwpError, ValueError):
    pass


class EmptyInput(PwpError, ValueError):
    pass


class BadBinCount(PwpError, ValueError):
    pass


class DegenerateData(PwpError, ValueError):
    pass


class AllBinsExcluded(PwpError, ValueError):
    pass


# threshold / presence / thresholding
class InsufficientFrames(PwpError, ValueError):
    pass


class UninitializedState(PwpError, RuntimeError):
    pass


class BadThresholds(PwpError, ValueError):
    pass


# pipeline
class EmptySignal(PwpError, ValueError):
    pass


class SignalTooShort(PwpError, ValueError):
    pass


class BadSampleRate(PwpError, ValueError):
    exit_code = 3


# metrics
class LengthMismatch(PwpError, ValueError):
    pass


class AllSilent(PwpError, ValueError):
    pass


class SilentInput(PwpError, ValueError):
    pass


# I/O
class AudioFormatError(PwpError, ValueError):
    exit_code = 3


class ConfigError(PwpError, ValueError):
    exit_code = 2
