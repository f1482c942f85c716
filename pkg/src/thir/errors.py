"""Exception types shared across the package."""


class ThirError(Exception):
    """Base class for all package-specific errors."""


class DecodeError(ThirError):
    """An image file exists but cannot be decoded as PNG or JPEG."""


class EmptyDatasetError(ThirError):
    """A dataset scan found no image files."""


class ManifestError(ThirError):
    """A dataset manifest CSV is malformed."""


class DimensionMismatchError(ThirError):
    """Two descriptors (or a query and an index) disagree on vector length."""


class EmptyIndexError(ThirError):
    """A search was issued against an index with no entries."""


class IndexFormatError(ThirError):
    """An index file has a bad magic, version, or is truncated."""


class IndexBuildError(ThirError):
    """One or more dataset files could not be processed in strict mode."""


class InsufficientDataError(ThirError):
    """Too few records per class to produce a stratified split."""


class EmptyNeighborListError(ThirError):
    """A label vote was requested over zero neighbors."""
