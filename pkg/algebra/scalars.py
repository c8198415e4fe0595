"""
Exact scalars: rationals, sparse Laurent polynomials in v = q^(1/L) and
the field QQ(v) of rational functions used by every form computation
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Any, Dict, Mapping, Optional, Tuple, Union

from sympy import QQ
from sympy.polys.fields import field

from algebra.errors import DivisionByZero, PoleAtOne, ScalarError

logger = logging.getLogger(__name__)

BigRat = Fraction
Number = Union[int, Fraction]

# Rational function field in the formal variable v
FIELD, V = field("v", QQ)
RING = FIELD.ring


def to_fraction(value: Any) -> Fraction:
    """
    Coerce an exact rational input to Fraction

    Args:
        value: int, Fraction or a "p/q" string

    Returns:
        The value as a Fraction
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ScalarError(f"Not an exact rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            raise ScalarError(f"Not an exact rational: {value!r}") from None
    raise ScalarError(f"Not an exact rational: {value!r}")


def _qq(value: Fraction):
    return QQ(value.numerator, value.denominator)


def _fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def _field_constant(value: Fraction):
    return FIELD.ground_new(_qq(value))


def _format_power(exponent: int, unit_L: int) -> str:
    power = Fraction(exponent, unit_L)
    if power == 1:
        return "q"
    if power.denominator == 1:
        return f"q^{power.numerator}"
    return f"q^({power})"


def format_laurent(terms: Tuple[Tuple[int, Fraction], ...], unit_L: int) -> str:
    """Render terms as a polynomial in q, highest power first"""
    if not terms:
        return "0"
    pieces = []
    for exponent, coeff in sorted(terms, reverse=True):
        magnitude = abs(coeff)
        if exponent == 0:
            body = str(magnitude)
        elif magnitude == 1:
            body = _format_power(exponent, unit_L)
        else:
            body = f"{magnitude}*{_format_power(exponent, unit_L)}"
        if not pieces:
            pieces.append(f"-{body}" if coeff < 0 else body)
        else:
            pieces.append(f" - {body}" if coeff < 0 else f" + {body}")
    return "".join(pieces)


@dataclass(frozen=True)
class LaurentPoly:
    """Sparse Laurent polynomial in v = q^(1/L) with exact coefficients"""

    terms: Tuple[Tuple[int, Fraction], ...] = ()
    unit_L: int = 1

    @classmethod
    def from_dict(cls, coeffs: Mapping[int, Number], unit_L: int = 1) -> "LaurentPoly":
        cleaned = []
        for exponent, coeff in coeffs.items():
            coeff = to_fraction(coeff)
            if coeff:
                cleaned.append((int(exponent), coeff))
        return cls(tuple(sorted(cleaned)), unit_L)

    @classmethod
    def monomial(cls, exponent: int, coeff: Number = 1, unit_L: int = 1) -> "LaurentPoly":
        return cls.from_dict({exponent: coeff}, unit_L)

    @classmethod
    def constant(cls, value: Number, unit_L: int = 1) -> "LaurentPoly":
        return cls.from_dict({0: value}, unit_L)

    def as_dict(self) -> Dict[int, Fraction]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(exponent == 0 for exponent, _ in self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> Optional[int]:
        return self.terms[-1][0] if self.terms else None

    def _unit_with(self, other: "LaurentPoly") -> int:
        if self.unit_L == other.unit_L or other.is_constant:
            return self.unit_L
        if self.is_constant:
            return other.unit_L
        raise ScalarError(
            f"Laurent polynomials in q^(1/{self.unit_L}) and q^(1/{other.unit_L}) cannot be mixed"
        )

    @staticmethod
    def _coerce(other: Any) -> Optional["LaurentPoly"]:
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return LaurentPoly.constant(other)
        return None

    def __add__(self, other: Any) -> "LaurentPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        coeffs = self.as_dict()
        for exponent, coeff in other.terms:
            coeffs[exponent] = coeffs.get(exponent, Fraction(0)) + coeff
        return LaurentPoly.from_dict(coeffs, self._unit_with(other))

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(tuple((e, -c) for e, c in self.terms), self.unit_L)

    def __sub__(self, other: Any) -> "LaurentPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "LaurentPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: Any) -> "LaurentPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        coeffs: Dict[int, Fraction] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                coeffs[e1 + e2] = coeffs.get(e1 + e2, Fraction(0)) + c1 * c2
        return LaurentPoly.from_dict(coeffs, self._unit_with(other))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if len(self.terms) != 1:
                raise ScalarError("Only monomials have negative powers in the Laurent ring")
            exponent, coeff = self.terms[0]
            return LaurentPoly.monomial(exponent * k, coeff ** k, self.unit_L)
        result = LaurentPoly.constant(1, self.unit_L)
        for _ in range(k):
            result = result * self
        return result

    def evaluate_at_one(self) -> Fraction:
        return sum((coeff for _, coeff in self.terms), Fraction(0))

    def flip(self) -> "LaurentPoly":
        """Substitute v -> 1/v"""
        return LaurentPoly.from_dict({-e: c for e, c in self.terms}, self.unit_L)

    def to_ratfunc(self) -> "RatFuncQ":
        total = FIELD.zero
        for exponent, coeff in self.terms:
            total += _field_constant(coeff) * V ** exponent
        return RatFuncQ(total, self.unit_L)

    def __str__(self) -> str:
        return format_laurent(self.terms, self.unit_L)


@dataclass(frozen=True, eq=False)
class RatFuncQ:
    """Element of QQ(v), v = q^(1/L); sympy keeps numerator and denominator coprime"""

    value: Any
    unit_L: int = 1

    @classmethod
    def constant(cls, value: Number, unit_L: int = 1) -> "RatFuncQ":
        return cls(_field_constant(to_fraction(value)), unit_L)

    @classmethod
    def zero(cls, unit_L: int = 1) -> "RatFuncQ":
        return cls(FIELD.zero, unit_L)

    @classmethod
    def one(cls, unit_L: int = 1) -> "RatFuncQ":
        return cls(FIELD.one, unit_L)

    @property
    def is_zero(self) -> bool:
        return not self.value.numer

    @property
    def is_constant(self) -> bool:
        return self.value.numer.is_ground and self.value.denom.is_ground

    def __bool__(self) -> bool:
        return not self.is_zero

    def _unit_with(self, other: "RatFuncQ") -> int:
        if self.unit_L == other.unit_L or other.is_constant:
            return self.unit_L
        if self.is_constant:
            return other.unit_L
        raise ScalarError(
            f"Scalars in q^(1/{self.unit_L}) and q^(1/{other.unit_L}) cannot be mixed"
        )

    @staticmethod
    def _coerce(other: Any) -> Optional["RatFuncQ"]:
        if isinstance(other, RatFuncQ):
            return other
        if isinstance(other, LaurentPoly):
            return other.to_ratfunc()
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return RatFuncQ.constant(other)
        return None

    def __add__(self, other: Any) -> "RatFuncQ":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RatFuncQ(self.value + other.value, self._unit_with(other))

    __radd__ = __add__

    def __neg__(self) -> "RatFuncQ":
        return RatFuncQ(-self.value, self.unit_L)

    def __sub__(self, other: Any) -> "RatFuncQ":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RatFuncQ(self.value - other.value, self._unit_with(other))

    def __rsub__(self, other: Any) -> "RatFuncQ":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RatFuncQ(other.value - self.value, self._unit_with(other))

    def __mul__(self, other: Any) -> "RatFuncQ":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RatFuncQ(self.value * other.value, self._unit_with(other))

    __rmul__ = __mul__

    def inverse(self) -> "RatFuncQ":
        if self.is_zero:
            raise DivisionByZero("Inversion of the zero rational function")
        return RatFuncQ(self.value ** -1, self.unit_L)

    def __truediv__(self, other: Any) -> "RatFuncQ":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Any) -> "RatFuncQ":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int) -> "RatFuncQ":
        if k < 0 and self.is_zero:
            raise DivisionByZero("Negative power of zero")
        return RatFuncQ(self.value ** k, self.unit_L)

    def __eq__(self, other: Any) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        try:
            self._unit_with(other)
        except ScalarError:
            return False
        return not (self.value - other.value).numer

    def __hash__(self) -> int:
        return hash((self.num.terms, self.den.terms))

    @cached_property
    def _canonical(self) -> Tuple[LaurentPoly, LaurentPoly]:
        numer = {monom[0]: _fraction(c) for monom, c in self.value.numer.terms()}
        denom = {monom[0]: _fraction(c) for monom, c in self.value.denom.terms()}
        shift = min(denom)
        lead = denom[max(denom)]
        num = LaurentPoly.from_dict({e - shift: c / lead for e, c in numer.items()}, self.unit_L)
        den = LaurentPoly.from_dict({e - shift: c / lead for e, c in denom.items()}, self.unit_L)
        return num, den

    @property
    def num(self) -> LaurentPoly:
        """Canonical numerator: a Laurent polynomial"""
        return self._canonical[0]

    @property
    def den(self) -> LaurentPoly:
        """Canonical denominator: monic with minimal v-exponent zero"""
        return self._canonical[1]

    def to_laurent(self) -> LaurentPoly:
        if self.den.terms != ((0, Fraction(1)),):
            raise ScalarError(f"{self} is not a Laurent polynomial")
        return self.num

    def specialize_q1(self) -> Fraction:
        den_at_one = self.den.evaluate_at_one()
        if den_at_one == 0:
            raise PoleAtOne(f"{self} has a pole at q = 1")
        return self.num.evaluate_at_one() / den_at_one

    def __str__(self) -> str:
        num, den = self.num, self.den
        if den.terms == ((0, Fraction(1)),):
            return str(num)
        numerator = str(num) if len(num.terms) == 1 else f"({num})"
        return f"{numerator}/({den})"

    def __repr__(self) -> str:
        return f"RatFuncQ({self})"


@dataclass(frozen=True)
class ScalarContext:
    """Scalar factory for one root-of-q denominator L"""

    unit_L: int = 1

    @property
    def zero(self) -> RatFuncQ:
        return RatFuncQ.zero(self.unit_L)

    @property
    def one(self) -> RatFuncQ:
        return RatFuncQ.one(self.unit_L)

    def const(self, value: Number) -> RatFuncQ:
        return RatFuncQ.constant(value, self.unit_L)

    def exponent_in_v(self, exponent: Number) -> int:
        scaled = to_fraction(exponent) * self.unit_L
        if scaled.denominator != 1:
            raise ScalarError(f"q^{exponent} is not a power of q^(1/{self.unit_L})")
        return scaled.numerator

    @lru_cache(maxsize=None)
    def v_power(self, k: int) -> RatFuncQ:
        return RatFuncQ(V ** k, self.unit_L)

    def q(self, exponent: Number = 1) -> RatFuncQ:
        """q raised to a rational exponent"""
        return self.v_power(self.exponent_in_v(exponent))

    def q_laurent(self, exponent: Number = 1) -> LaurentPoly:
        return LaurentPoly.monomial(self.exponent_in_v(exponent), 1, self.unit_L)

    def laurent(self, poly: LaurentPoly) -> RatFuncQ:
        return RatFuncQ(poly.to_ratfunc().value, self.unit_L)


def rf_add(a: RatFuncQ, b: RatFuncQ) -> RatFuncQ:
    return a + b


def rf_mul(a: RatFuncQ, b: RatFuncQ) -> RatFuncQ:
    return a * b


def rf_inv(a: RatFuncQ) -> RatFuncQ:
    return a.inverse()


def rf_eq(a: RatFuncQ, b: RatFuncQ) -> bool:
    return a == b


def specialize_q1(a: Union[RatFuncQ, LaurentPoly]) -> Fraction:
    """
    Evaluate at q = 1

    Args:
        a: rational function or Laurent polynomial

    Returns:
        The exact value at v = 1

    Raises:
        PoleAtOne: if the reduced denominator vanishes at 1
    """
    if isinstance(a, LaurentPoly):
        return a.evaluate_at_one()
    return a.specialize_q1()
