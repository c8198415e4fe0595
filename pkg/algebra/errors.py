"""
Exception hierarchy for the superquant library
"""

from typing import Any, Optional


class SuperQuantError(Exception):
    """Base class for all library errors"""


class ScalarError(SuperQuantError):
    """Incompatible or malformed scalar values"""


class DivisionByZero(ScalarError, ZeroDivisionError):
    """Inversion of the zero rational function"""


class PoleAtOne(ScalarError):
    """Specialization q -> 1 hits a vanishing denominator"""


class InvalidDatum(SuperQuantError, ValueError):
    """Cartan datum or family parameters fail validation"""


class UnsupportedFamily(SuperQuantError):
    """No built-in table entry for the requested family"""


class UnsupportedShape(SuperQuantError):
    """Matrix model shape outside the supported range"""


class CapExceeded(SuperQuantError):
    """A computation needs a degree beyond the configured cap"""


class NonHomogeneous(SuperQuantError):
    """Element mixes several weights where one is required"""


class WeightMismatch(SuperQuantError):
    """Arguments live in different weight components"""


class AxiomFailure(SuperQuantError):
    """A constructed structure violates the Lie (super)bialgebra axioms"""

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.witness = witness


class NotQuasitriangular(SuperQuantError):
    """The supplied r-matrix does not make the input quasitriangular"""


class SingularPhi(SuperQuantError):
    """The truncated matrix of phi is not invertible"""


class ConfigError(SuperQuantError):
    """Malformed configuration; names the offending field"""

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field


class ParseError(ConfigError):
    """Malformed element expression"""

    def __init__(self, message: str, position: Optional[int] = None):
        super().__init__(message, field="element")
        self.position = position


class SingularMatrix(SuperQuantError):
    """Exact elimination met a singular square matrix"""
