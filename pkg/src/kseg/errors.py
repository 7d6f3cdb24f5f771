"""Exception hierarchy.

Every error carries a short machine-readable ``code`` which the CLI prints
as ``error: CODE: message``.
"""


class KsegError(Exception):
    code = "Error"


class SignatureMismatchError(KsegError):
    code = "SignatureMismatch"


class DimensionMismatchError(KsegError):
    code = "DimensionMismatch"


class GradeOutOfRangeError(KsegError):
    code = "GradeOutOfRange"


class WrongIsomorphismClassError(KsegError):
    code = "WrongIsomorphismClass"


class MaskContainsGeneratorOneError(KsegError):
    code = "MaskContainsGeneratorOne"


class KindMismatchError(KsegError):
    code = "KindMismatch"


class TooLargeError(KsegError):
    code = "TooLarge"


class NotInvertibleError(KsegError):
    """Raised when an element has vanishing spectral components.

    ``components`` lists the spectral coordinates (bitmasks of B) whose
    magnitude fell below the singularity tolerance.
    """

    code = "NotInvertible"

    def __init__(self, message, components=()):
        super().__init__(message)
        self.components = tuple(components)


# Text and document format errors. The CLI maps these to exit status 2.

class FormatError(KsegError):
    code = "FormatError"


class ExpressionSyntaxError(FormatError):
    code = "SyntaxError"

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class IndexOutOfRangeError(FormatError):
    code = "IndexOutOfRange"


class NonCanonicalBladeError(FormatError):
    code = "NonCanonicalBlade"


class SchemaError(FormatError):
    code = "SchemaError"
