"""Shared exception types."""


class ParameterError(ValueError):
    """An operation received an argument outside its documented domain."""


class CapacityError(RuntimeError):
    """An exhaustive computation would exceed the enumeration guard."""


class DataFormatError(ValueError):
    """A serialized record or file is malformed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
