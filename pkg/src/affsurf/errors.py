"""Exception hierarchy.

Every error raised deliberately by the package derives from
:class:`AffsurfError`; the CLI maps the classification errors onto stable
exit codes (see :data:`EXIT_CODES`).
"""


class AffsurfError(Exception):
    exit_code = 1


# scalar kernel
class DivisionByZero(AffsurfError, ZeroDivisionError):
    pass


class RadicalObstruction(AffsurfError, ArithmeticError):
    """A second, incompatible square root would be needed."""
    exit_code = 6


# expressions
class ExprSyntaxError(AffsurfError, SyntaxError):
    exit_code = 2

    def __init__(self, message, pos=None, source=None):
        self.pos = pos
        self.source = source
        where = "" if pos is None else f" at column {pos + 1}"
        super().__init__(f"{message}{where}")


class UnknownIdentifier(ExprSyntaxError):
    pass


class UnsupportedFunction(AffsurfError):
    pass


class TranscendentalInExactBackend(AffsurfError):
    pass


class UnboundParameter(AffsurfError):
    pass


class DomainError(AffsurfError, ValueError):
    pass


# connection files
class ConnectionFileError(AffsurfError):
    exit_code = 2

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f"line {line}"
            if column is not None:
                loc += f", column {column}"
            loc += ": "
        super().__init__(loc + message)


# tensors and gauges
class BaseNotTorsionFree(AffsurfError):
    pass


class SingularMatrix(AffsurfError):
    pass


class ZeroTorsion(AffsurfError):
    pass


class NotTypeA(AffsurfError):
    pass


# classification
class TorsionFree(AffsurfError):
    exit_code = 3


class NotSymmetric(AffsurfError):
    exit_code = 4


class NotHomogeneousModel(AffsurfError):
    exit_code = 5


class NotSymmetricMatrix(AffsurfError, ValueError):
    pass


class ParameterDependentSign(AffsurfError):
    pass


class InconsistentCase(AffsurfError):
    """A case condition that the classification rules out was met."""


class ConstraintViolation(AffsurfError, ValueError):
    pass


EXIT_CODES = {
    "ok": 0,
    "internal": 1,
    "parse": 2,
    "TorsionFree": 3,
    "NotSymmetric": 4,
    "NotHomogeneousModel": 5,
    "RadicalObstruction": 6,
}
