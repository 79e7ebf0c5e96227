"""Exception hierarchy shared across the package."""


class IslError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(IslError):
    """Shapes or axes do not line up. Message names the offending axis/layer."""


class ParameterError(IslError):
    """An argument value is outside its allowed domain."""


class StateError(IslError):
    """An operation was called in the wrong order (e.g. backward before forward)."""


class ConfigError(IslError):
    """A configuration value or stage name is invalid."""


class IngestionError(IslError):
    """A dataset directory cannot be ingested."""


class SplitError(IslError):
    """A stratified split cannot be formed. Message names the class."""


class TrainingError(IslError):
    """Training aborted. Carries epoch/batch/layer context in the message."""


class ModelFormatError(IslError):
    """Base class for model file load failures."""


class ChecksumError(ModelFormatError):
    """A section checksum did not match."""


class VersionError(ModelFormatError):
    """The file was written by an unsupported format version."""


class TruncatedError(ModelFormatError):
    """The file ended before a section was complete."""
