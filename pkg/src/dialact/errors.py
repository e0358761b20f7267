"""Exception hierarchy shared across the toolkit.

Every error a caller is expected to handle derives from DialactError so the
CLI and service layers can map them to a single diagnostic line / HTTP 400.
"""


class DialactError(Exception):
    """Base class for all toolkit errors."""


class DimensionError(DialactError):
    """Tensor shapes do not agree; message names the offending operand."""


class InputTooShortError(DialactError):
    """Sequence shorter than the convolution kernel width."""


class EmptyInputError(DialactError):
    """Operation received an empty sequence."""


class ConfigurationError(DialactError):
    """Invalid hyperparameter, option, or experiment setup."""


class LabelError(DialactError):
    """Unknown label tag or class index out of range."""


class StateError(DialactError):
    """Operation called in the wrong order (e.g. backward without forward)."""


class ParseError(DialactError):
    """Malformed input file; message carries the line number or row key."""


class StructureError(DialactError):
    """Corpus structure violated (non-consecutive turn indices, duplicates)."""


class InfeasibleSampleError(DialactError):
    """A stratified quota exceeds the turns available for that label."""


class MissingEmbeddingError(DialactError):
    """No stored sentence embedding for a turn that requires one."""


class VocabularyError(DialactError):
    """Token id outside the embedding matrix."""


class CheckpointError(DialactError):
    """Corrupt checkpoint, version mismatch, or architecture mismatch."""


class ConfigFileError(DialactError):
    """Config file failed validation; message joins all collected errors."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))
