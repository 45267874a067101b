"""Exception types raised across the package."""


class OcclusiaError(Exception):
    """Base class for all package errors."""


class EmptyRegion(OcclusiaError):
    """A box clipped to the frame has zero area."""


class MissingPatch(OcclusiaError):
    """An agent referenced by the occlusion check has no stored appearance patch."""


class FrameOrderError(OcclusiaError):
    """Detections were delivered for the wrong frame."""


class PixelAccessError(OcclusiaError):
    """A detection box lies entirely outside the frame."""


class ParseError(OcclusiaError):
    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)


class NonMonotonicFrame(ParseError):
    """Frame indices decreased within a detection file."""


class FormatError(OcclusiaError):
    """A frame file is not an 8-bit binary PPM."""


class SpecError(OcclusiaError):
    """A synthetic scenario description is invalid."""


class EmptyGroundTruth(OcclusiaError):
    """Evaluation was requested against a ground truth with no tracks."""


class ConfigError(OcclusiaError):
    """Unknown key or malformed value in a configuration file."""
