class TelescopingError(Exception):
    """
    Base class of every error raised by the telescoping pipeline.

    Attributes:
        exit_code (int): The process exit code the command line maps this error to.
    """

    exit_code = 2


class DivisionByZero(TelescopingError, ZeroDivisionError):
    pass


class InvalidInput(TelescopingError, ValueError):
    pass


class InputFileError(InvalidInput):
    """
    Raised when a term document cannot be read.

    Attributes:
        path (str): The document path as given.
    """

    def __init__(self, path: str, reason: str):
        self.path = path
        super().__init__(f"cannot read {path}: {reason}")


class ParseError(InvalidInput):
    """
    Raised when a term, expression or operator text cannot be parsed.

    Attributes:
        position (int): Offset of the offending character in the input text.
    """

    def __init__(self, message: str, position: int = 0, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class PoleAtPoint(TelescopingError, ArithmeticError):
    """
    Raised when a rational function or term is evaluated at one of its poles.

    Attributes:
        point (tuple): The evaluation point, e.g. (n0, k0).
    """

    def __init__(self, point: tuple, message: str = ""):
        self.point = point
        super().__init__(message or f"pole at {point}")


class InsufficientWindow(TelescopingError, ValueError):
    pass


class UnsupportedDenominator(TelescopingError):
    """
    Raised by the restricted factorization when a k-dependent factor is not affine in k.

    Attributes:
        factor: The residual factor that could not be handled.
    """

    def __init__(self, factor, message: str = ""):
        self.factor = factor
        super().__init__(message or f"unsupported denominator factor {factor}")


class UnsupportedPoleOrder(TelescopingError):
    pass


class UnsupportedDecomposition(TelescopingError):
    pass


class UnsupportedKernel(TelescopingError):
    pass


class AnsatzCapExceeded(TelescopingError):
    """
    Raised when an internal search loop runs past its cap.

    Attributes:
        cap (int): The cap that was exhausted.
    """

    exit_code = 3

    def __init__(self, cap: int, message: str = ""):
        self.cap = cap
        super().__init__(message or f"search cap {cap} exceeded")


class StageError(TelescopingError):
    """
    Wraps an error raised inside a pipeline stage with the stage label.

    Attributes:
        stage (str): Name of the failing stage.
        cause (TelescopingError): The original error.
    """

    def __init__(self, stage: str, cause: TelescopingError):
        self.stage = stage
        self.cause = cause
        self.exit_code = cause.exit_code
        super().__init__(f"[{stage}] {cause}")
