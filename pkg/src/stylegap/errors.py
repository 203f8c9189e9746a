"""Exception hierarchy for the toolkit.

Every malformed input maps to exactly one of these; library code never
lets a bare ValueError/KeyError escape to callers. The CLI maps each
family to a stable exit code (see cli.EXIT_*).
"""


class StylegapError(Exception):
    """Base class for all toolkit errors."""


# ---------------------------------------------------------------------------
# EMB1 container / embedding matrix
# ---------------------------------------------------------------------------


class Emb1Error(StylegapError):
    """Base class for EMB1 container errors."""


class BadMagic(Emb1Error):
    """File does not start with the EMB1 magic bytes."""


class VersionUnsupported(Emb1Error):
    """EMB1 header declares a version this reader does not support."""


class TruncatedPayload(Emb1Error):
    """File length does not match the header's declared payload size."""


class NonFiniteValue(Emb1Error):
    """A matrix entry is NaN or infinite."""


class ZeroNormRow(Emb1Error):
    """A matrix row (or derived clip vector) has zero Euclidean norm."""


class InvalidShape(Emb1Error):
    """Matrix dimensions violate the N >= 1, dim >= 1 contract."""


class IoFailure(StylegapError):
    """Underlying filesystem read/write failed."""


# ---------------------------------------------------------------------------
# Manifest validation
# ---------------------------------------------------------------------------


class ManifestError(StylegapError):
    """Base class for manifest validation errors."""


class SchemaError(ManifestError):
    """JSON structure or field types do not match the schema."""


class MatchedSeedViolation(ManifestError):
    """A seed is missing, duplicated, or stray within a condition grid."""


class ReferenceCountMismatch(ManifestError):
    """Artist does not have exactly the declared number of references."""


class DuplicateClipId(ManifestError):
    """Two clip records share the same clip_id."""


class MissingEmbeddingFile(ManifestError):
    """A referenced embedding file is absent or unreadable as EMB1."""


# ---------------------------------------------------------------------------
# Descriptor bundles
# ---------------------------------------------------------------------------


class BundleError(StylegapError):
    """Base class for descriptor bundle validation errors."""


class TokenTooLong(BundleError):
    """Style token has more than four words."""


class TokenTooShort(BundleError):
    """Style token has fewer than two words."""


class NonLowercaseAscii(BundleError):
    """Style token contains characters outside lowercase ASCII tokens."""


class DuplicateSet(BundleError):
    """Two style token sets are identical."""


class WrongSetCount(BundleError):
    """Bundle does not contain exactly five token sets."""


class WrongTokenCount(BundleError):
    """A token set does not contain exactly three tokens."""


# ---------------------------------------------------------------------------
# Numerical metrics
# ---------------------------------------------------------------------------


class MetricError(StylegapError):
    """Base class for numerical metric errors."""


class ZeroNormInput(MetricError):
    """Cosine distance received a zero-norm vector."""


class ZeroNormCentroid(MetricError):
    """Reference centroid has zero norm; similarity undefined."""


class EmptyReferenceSet(MetricError):
    """Nearest-reference distance requires at least one reference."""


class InsufficientSamples(MetricError):
    """Gaussian summary requires at least two samples."""


class DimensionMismatch(MetricError):
    """Operands live in different embedding dimensionalities."""


class SqrtmFailure(MetricError):
    """Matrix square root could not be computed, even after jitter."""


# ---------------------------------------------------------------------------
# Protocol / evaluation
# ---------------------------------------------------------------------------


class ProtocolError(StylegapError):
    """Base class for experiment protocol errors."""


class MissingCondition(ProtocolError):
    """Requested (artist, space, condition) cell is absent."""


class MissingCrossCondition(ProtocolError):
    """Cross-artist records required for the delta matrix are absent."""


# ---------------------------------------------------------------------------
# Synthetic populations
# ---------------------------------------------------------------------------


class InvalidSpec(StylegapError):
    """Synthetic population or scenario spec is malformed."""
