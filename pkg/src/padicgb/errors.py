"""Exception hierarchy shared by every module of the package."""


class PadicGBError(Exception):
    """Base class for all errors raised by padicgb."""


class ContextMismatch(PadicGBError, ValueError):
    """Operands belong to different valuation fields."""


class DivisionByExactZero(PadicGBError, ZeroDivisionError):
    pass


class PrecisionError(PadicGBError):
    """The available precision cannot certify the requested answer.

    Subclasses are the "ambiguity" family (CLI exit code 3).
    """


class AmbiguousDivisor(PrecisionError):
    """Divisor is indistinguishable from zero at its current precision."""


class AmbiguousLeadingTerm(PrecisionError):
    """A coefficient above the candidate leading monomial cannot be shown nonzero or zero."""


class AmbiguousColumn(PrecisionError):
    """The echelon shape of a column cannot be certified."""

    def __init__(self, msg, column=None):
        super().__init__(msg)
        self.column = column


class PrecisionExhausted(PrecisionError):
    """A cancellation left a coefficient carrying no information at all."""


class UncertifiedBound(PrecisionError):
    """A precision bound could not be certified at the available precision."""


class ZeroPolynomial(PadicGBError, ValueError):
    pass


class StructureOrPrecisionFailure(PadicGBError):
    """Weak Matrix-F5 could not complete an echelon basis.

    The sequence is not regular, some ideal is not weakly-w, or the precision
    is too low; the algorithm cannot tell these causes apart.
    """

    def __init__(self, msg, degree=None, index=None, column=None):
        super().__init__(msg)
        self.degree = degree
        self.index = index
        self.column = column


class LiftVerificationFailure(PadicGBError):
    """A lifted basis element does not keep the leading monomial it had before lifting."""


class ParseError(PadicGBError, ValueError):
    def __init__(self, msg, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + msg)
        self.line = line
        self.column = column


class LMInstability(PadicGBError):
    """Two bases that should share their leading monomials do not."""
