"""Exception hierarchy shared by all mugiqa modules."""


class MugError(Exception):
    """Base class for every error raised by mugiqa."""


# core metric

class InvalidImage(MugError, ValueError):
    pass


class ImageTooSmall(InvalidImage):
    pass


class DegenerateSpectrum(MugError, ValueError):
    pass


# image I/O

class UnsupportedFormat(MugError, ValueError):
    pass


class CorruptStream(MugError, ValueError):
    pass


class QualityOutOfRange(MugError, ValueError):
    pass


class CropTooLarge(MugError, ValueError):
    pass


class InvalidGeometry(MugError, ValueError):
    pass


# evaluation

class ParseError(MugError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class DuplicatePath(ParseError):
    pass


class DegenerateInput(MugError, ValueError):
    pass


class FitDivergence(MugError, ArithmeticError):
    pass


class GroupTooSmall(MugError, ValueError):
    pass


class BatchScoringError(MugError):
    """One or more manifest images could not be scored."""

    def __init__(self, failures):
        self.failures = list(failures)
        listing = "\n".join(f"  {path}: {reason}" for path, reason in self.failures)
        super().__init__(f"{len(self.failures)} image(s) failed:\n{listing}")
