"""Error taxonomy shared across the toolkit.

Every operational failure raises one of these classes. The CLI and the
service report errors by class name, so names are part of the public
contract and must stay stable.
"""


class PerceptkitError(Exception):
    """Base class for all toolkit errors."""

    @property
    def name(self) -> str:
        return type(self).__name__


# --- engine: data construction and conversion ---

class LengthMismatch(PerceptkitError):
    pass


class ValueOutOfRange(PerceptkitError):
    pass


class BadChannels(PerceptkitError):
    pass


class FileNotFound(PerceptkitError):
    pass


class UnsupportedFormat(PerceptkitError):
    pass


class CorruptHeader(PerceptkitError):
    pass


# --- engine: actions and targets ---

class AxisCountInvalid(PerceptkitError):
    pass


class ComponentOutOfRange(PerceptkitError):
    pass


class NonFinite(PerceptkitError):
    pass


class UnknownTypeTag(PerceptkitError):
    pass


class SchemaViolation(PerceptkitError):
    pass


class IndexOutOfRange(PerceptkitError):
    pass


# --- learners ---

class NotTrained(PerceptkitError):
    pass


class BadHyperparam(PerceptkitError):
    pass


class DuplicateName(PerceptkitError):
    pass


class UnknownLearner(PerceptkitError):
    pass


class EmptyStats(PerceptkitError):
    pass


class NonFiniteMetric(PerceptkitError):
    pass


class EmptySeries(PerceptkitError):
    pass


class MissingClass(PerceptkitError):
    pass


class DimensionMismatch(PerceptkitError):
    pass


class FormatMismatch(PerceptkitError):
    pass


# --- datasets ---

class EmptyDataset(PerceptkitError):
    pass


class UnreadableImage(PerceptkitError):
    pass


class DanglingReference(PerceptkitError):
    pass


class BadFractions(PerceptkitError):
    pass


# --- model packages ---

class PathEscape(PerceptkitError):
    pass


class DestNotEmpty(PerceptkitError):
    pass


class ChecksumMismatch(PerceptkitError):
    pass


class MissingManifest(PerceptkitError):
    pass


class MissingPayload(PerceptkitError):
    pass


class UnsupportedScheme(PerceptkitError):
    pass


class TransferFailed(PerceptkitError):
    pass


class DigestMismatch(PerceptkitError):
    pass


class InvalidArchive(PerceptkitError):
    pass


# --- active perception environments ---

class NotReset(PerceptkitError):
    pass


class EpisodeDone(PerceptkitError):
    pass


# --- benchmarking ---

class InferFailed(PerceptkitError):
    """Raised when the measured callable fails; records the call index."""

    def __init__(self, iteration: int, cause: BaseException):
        super().__init__(f"inference call failed at iteration {iteration}: {cause!r}")
        self.iteration = iteration
        self.cause = cause


# --- CLI / service ---

class UsageError(PerceptkitError):
    """Request is well-formed but asks for an unsupported combination."""
