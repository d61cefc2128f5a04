"""Exception types raised across the package."""

from __future__ import annotations


class GuessSortError(ValueError):
    """Base class for every error raised by guesssort."""


class EmptyInput(GuessSortError):
    pass


class NonFiniteKey(GuessSortError):
    def __init__(self, index: int, value: float, line: int | None = None):
        where = f"line {line}" if line is not None else f"index {index}"
        super().__init__(f"non-finite key {value!r} at {where}")
        self.index = index
        self.value = value
        self.line = line


class OutOfRange(GuessSortError):
    def __init__(self, value: float, low: float, high: float):
        super().__init__(f"key {value!r} outside mapper range [{low!r}, {high!r}]")
        self.value = value


class DegenerateMapper(GuessSortError):
    """The mapper has no usable slope; callers route every record to box 1."""


class RangeOverflow(GuessSortError):
    """Key spread too wide (or too narrow) for the slope to be a finite float."""


class EmptyBox(GuessSortError):
    def __init__(self, box: int):
        super().__init__(f"box {box} is empty; it has no local tangent")
        self.box = box


class InvalidSpec(GuessSortError):
    def __init__(self, field: str, reason: str):
        super().__init__(f"invalid distribution spec: {field}: {reason}")
        self.field = field


class VerificationError(GuessSortError):
    pass


class RecordFileError(GuessSortError):
    def __init__(self, line: int, text: str):
        super().__init__(f"line {line}: cannot parse {text!r} as a number")
        self.line = line
