"""Extractor-side exception hierarchy."""


class ExtractorError(Exception):
    """Base class for extractor errors."""


class ModelLoadFailure(ExtractorError):
    """A model checkpoint is missing or malformed."""


class AudioDecodeFailure(ExtractorError):
    """Input audio could not be decoded into usable samples."""


class SampleRateUnsupported(ExtractorError):
    """Input sample rate is outside the supported range."""


class GenerationFailure(ExtractorError):
    """Clip rendering failed."""


class IoFailure(ExtractorError):
    """Filesystem read/write failed."""
