"""Exception hierarchy.

Every error carries an ``exit_code`` so the command line front end can map
failures to process status without a lookup table.
"""


class WheelTrackError(Exception):
    exit_code = 1


class ParameterError(WheelTrackError, ValueError):
    """A numeric parameter or configuration value is out of range."""

    exit_code = 4


class InvalidModelError(WheelTrackError, TypeError):
    """Operation called on an image with the wrong pixel model."""

    exit_code = 4


class SizeError(WheelTrackError, ValueError):
    exit_code = 4


class BoundsError(WheelTrackError, IndexError):
    exit_code = 4


class PnmParseError(WheelTrackError):
    """Base class for PGM/PPM decoding failures.

    ``offset`` is the byte position in the file where decoding stopped.
    """

    exit_code = 3

    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class UnsupportedFormatError(PnmParseError):
    pass


class MalformedHeaderError(PnmParseError):
    pass


class UnsupportedMaxvalError(PnmParseError):
    pass


class TruncatedDataError(PnmParseError):
    pass


class NoMassError(WheelTrackError):
    """The probability map has zero mass inside the search window."""

    exit_code = 2


class DetectionError(WheelTrackError):
    """No circle survived detection; ``candidates`` counts accumulator peaks."""

    exit_code = 2

    def __init__(self, message, candidates=0):
        super().__init__(message)
        self.candidates = candidates


class FrameSourceError(WheelTrackError):
    """Frame directory missing, empty, or not a contiguous frame sequence."""

    exit_code = 3
