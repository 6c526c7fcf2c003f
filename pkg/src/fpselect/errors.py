"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class FPSelectError(Exception):
    """Base class for every error raised by this package."""


# --- dataset ---------------------------------------------------------------

class DatasetError(FPSelectError):
    pass


class MalformedHeader(DatasetError):
    pass


class RowArityMismatch(DatasetError):
    def __init__(self, row: int, expected: int, got: int):
        super().__init__(f"data row {row}: expected {expected} fields, got {got}")
        self.row = row
        self.expected = expected
        self.got = got


class EmptyDataset(DatasetError):
    pass


class DuplicateAttributeName(DatasetError):
    pass


class UnknownSourceColumn(DatasetError):
    pass


class UnparseableTimestamp(DatasetError):
    def __init__(self, row: int, value: str):
        super().__init__(f"data row {row}: cannot parse timestamp {value!r}")
        self.row = row
        self.value = value


class InvalidMetadata(DatasetError):
    pass


# --- measures --------------------------------------------------------------

class MeasureError(FPSelectError):
    pass


class IndexOutOfRange(MeasureError):
    pass


class CandidateAlreadySelected(MeasureError):
    pass


class NegativeReduction(MeasureError):
    pass


class UnknownAttribute(MeasureError):
    def __init__(self, name: str, suggestions: list[str] | None = None):
        hint = f" (did you mean {', '.join(suggestions)}?)" if suggestions else ""
        super().__init__(f"unknown attribute {name!r}{hint}")
        self.name = name
        self.suggestions = suggestions or []


# --- explorer --------------------------------------------------------------

class ExplorerError(FPSelectError):
    pass


class ThresholdUnreachable(ExplorerError):
    """Even the full candidate set fails the sensitivity threshold."""

    def __init__(self, threshold: float, full_set_sensitivity: float):
        super().__init__(
            f"threshold {threshold} unreachable: full attribute set has "
            f"sensitivity {full_set_sensitivity:.6g}"
        )
        self.threshold = threshold
        self.full_set_sensitivity = full_set_sensitivity


class TooManyAttributes(ExplorerError):
    pass


class EmptyAttributePool(ExplorerError):
    pass


# --- trace -----------------------------------------------------------------

class TraceError(FPSelectError):
    pass


class MalformedLine(TraceError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class InvariantViolation(TraceError):
    def __init__(self, line: int, description: str):
        super().__init__(f"line {line}: {description}")
        self.line = line
        self.description = description


class UnsupportedVersion(TraceError):
    pass


class IncompleteTrace(TraceError):
    pass
