"""Exception types shared across the toolkit."""


class DataValidationError(ValueError):
    """Input data violates a format or consistency contract.

    Raised for malformed TSV rows, out-of-range offsets, misaligned
    annotations and similar problems in user-supplied files. The CLI maps
    this class to exit code 3.
    """
