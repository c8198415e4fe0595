"""
Free associative superalgebra on generators t1..ts, its twisted tensor
square and the algebra map r
"""

import itertools
import logging
import re
import threading
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from sympy.utilities.iterables import multiset_permutations

from algebra.cartan import CartanDatum
from algebra.errors import NonHomogeneous, ParseError, ScalarError
from algebra.scalars import LaurentPoly, RatFuncQ

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]
Weight = Tuple[int, ...]


def _scalar(value: Any) -> RatFuncQ:
    if isinstance(value, RatFuncQ):
        return value
    if isinstance(value, LaurentPoly):
        return value.to_ratfunc()
    return RatFuncQ.constant(value)


def _is_scalar(value: Any) -> bool:
    return isinstance(value, (RatFuncQ, LaurentPoly, int, Fraction)) and not isinstance(value, bool)


def format_word(word: Word) -> str:
    if not word:
        return "1"
    pieces = []
    for letter, run in itertools.groupby(word):
        count = len(list(run))
        pieces.append(f"t{letter + 1}" if count == 1 else f"t{letter + 1}^{count}")
    return "*".join(pieces)


class FreeElem:
    """Finite linear combination of words with RatFuncQ coefficients"""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[Word, Any]] = None):
        self.terms: Dict[Word, RatFuncQ] = {}
        for word, coeff in (terms or {}).items():
            coeff = _scalar(coeff)
            if coeff:
                self.terms[tuple(word)] = coeff

    @classmethod
    def word(cls, word: Sequence[int], coeff: Any = 1) -> "FreeElem":
        return cls({tuple(word): coeff})

    @classmethod
    def one(cls) -> "FreeElem":
        return cls({(): 1})

    @classmethod
    def generator(cls, i: int) -> "FreeElem":
        return cls({(i,): 1})

    @classmethod
    def scalar(cls, value: Any) -> "FreeElem":
        return cls({(): value})

    def _combine(self, other: "FreeElem", sign: int) -> "FreeElem":
        terms = dict(self.terms)
        for word, coeff in other.terms.items():
            current = terms.get(word)
            value = coeff if sign > 0 else -coeff
            terms[word] = value if current is None else current + value
        return FreeElem(terms)

    @staticmethod
    def _coerce(other: Any) -> Optional["FreeElem"]:
        if isinstance(other, FreeElem):
            return other
        if _is_scalar(other):
            return FreeElem.scalar(other)
        return None

    def __add__(self, other: Any) -> "FreeElem":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "FreeElem":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._combine(other, -1)

    def __rsub__(self, other: Any) -> "FreeElem":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other._combine(self, -1)

    def __neg__(self) -> "FreeElem":
        return FreeElem({word: -coeff for word, coeff in self.terms.items()})

    def __mul__(self, other: Any) -> "FreeElem":
        if isinstance(other, FreeElem):
            terms: Dict[Word, RatFuncQ] = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    word = w1 + w2
                    value = c1 * c2
                    current = terms.get(word)
                    terms[word] = value if current is None else current + value
            return FreeElem(terms)
        if _is_scalar(other):
            factor = _scalar(other)
            return FreeElem({word: coeff * factor for word, coeff in self.terms.items()})
        return NotImplemented

    def __rmul__(self, other: Any) -> "FreeElem":
        if _is_scalar(other):
            return self * other
        return NotImplemented

    def __pow__(self, k: int) -> "FreeElem":
        if k < 0:
            raise ValueError("Negative powers are not defined in the free algebra")
        result = FreeElem.one()
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other: Any) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(coeff == other.terms[word] for word, coeff in self.terms.items())

    __hash__ = None

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Word, RatFuncQ]]:
        return iter(self.terms.items())

    def items(self):
        return self.terms.items()

    def words(self) -> List[Word]:
        return list(self.terms)

    def coefficient(self, word: Sequence[int]) -> RatFuncQ:
        return self.terms.get(tuple(word), RatFuncQ.zero())

    def as_scalar(self) -> Optional[RatFuncQ]:
        if any(word for word in self.terms):
            return None
        return self.terms.get((), RatFuncQ.zero())

    def __repr__(self) -> str:
        return f"FreeElem({format_element(self)})"


def format_element(elem: FreeElem) -> str:
    if not elem.terms:
        return "0"
    pieces = []
    for word, coeff in elem.terms.items():
        body = format_word(word)
        if coeff == 1:
            piece = f"+ {body}"
        elif coeff == -1:
            piece = f"- {body}"
        elif not word:
            piece = f"+ ({coeff})"
        else:
            piece = f"+ ({coeff})*{body}"
        pieces.append(piece)
    text = " ".join(pieces)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


class TensorElem:
    """Linear combination of k-fold tensors of words"""

    __slots__ = ("terms", "legs")

    def __init__(self, terms: Optional[Mapping[Tuple[Word, ...], Any]] = None, legs: int = 2):
        self.legs = legs
        self.terms: Dict[Tuple[Word, ...], RatFuncQ] = {}
        for key, coeff in (terms or {}).items():
            if len(key) != legs:
                raise ValueError(f"Tensor key {key} does not have {legs} legs")
            coeff = _scalar(coeff)
            if coeff:
                self.terms[tuple(tuple(w) for w in key)] = coeff

    @classmethod
    def pure(cls, words: Sequence[Sequence[int]], coeff: Any = 1) -> "TensorElem":
        return cls({tuple(tuple(w) for w in words): coeff}, legs=len(words))

    @classmethod
    def unit(cls, legs: int = 2) -> "TensorElem":
        return cls({tuple(() for _ in range(legs)): 1}, legs=legs)

    def _combine(self, other: "TensorElem", sign: int) -> "TensorElem":
        if other.legs != self.legs:
            raise ValueError("Tensor elements with different numbers of legs")
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            value = coeff if sign > 0 else -coeff
            current = terms.get(key)
            terms[key] = value if current is None else current + value
        return TensorElem(terms, self.legs)

    def __add__(self, other: "TensorElem") -> "TensorElem":
        return self._combine(other, 1)

    def __sub__(self, other: "TensorElem") -> "TensorElem":
        return self._combine(other, -1)

    def __neg__(self) -> "TensorElem":
        return TensorElem({key: -coeff for key, coeff in self.terms.items()}, self.legs)

    def __mul__(self, other: Any) -> "TensorElem":
        if not _is_scalar(other):
            return NotImplemented
        factor = _scalar(other)
        return TensorElem({key: coeff * factor for key, coeff in self.terms.items()}, self.legs)

    __rmul__ = __mul__

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, TensorElem):
            return NotImplemented
        if self.legs != other.legs or self.terms.keys() != other.terms.keys():
            return False
        return all(coeff == other.terms[key] for key, coeff in self.terms.items())

    __hash__ = None

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def coefficient(self, *words: Sequence[int]) -> RatFuncQ:
        return self.terms.get(tuple(tuple(w) for w in words), RatFuncQ.zero())

    def __repr__(self) -> str:
        body = " + ".join(
            f"({coeff})*" + "(x)".join(format_word(w) for w in key) for key, coeff in self.terms.items()
        )
        return f"TensorElem({body or '0'})"


def weight_pairing(nu: Sequence[int], nu_prime: Sequence[int], datum: CartanDatum) -> Fraction:
    """
    The exponent <nu, nu'> = sum_ij d_i nu_i nu'_j a_ij

    Args:
        nu: first weight
        nu_prime: second weight
        datum: Cartan datum fixing a and d

    Returns:
        Rational exponent to put on q
    """
    total = Fraction(0)
    for i, count in enumerate(nu):
        if not count:
            continue
        for j, other in enumerate(nu_prime):
            if other:
                total += datum.symmetrized(i, j) * count * other
    return total


def words(weight: Sequence[int]) -> List[Word]:
    """All words of a weight in lexicographic (hence deglex) order"""
    letters = [i for i, count in enumerate(weight) for _ in range(count)]
    if not letters:
        return [()]
    return [tuple(p) for p in multiset_permutations(letters)]


def weights_up_to(s: int, cap: int, include_zero: bool = False) -> List[Weight]:
    """Weights of total degree 1..cap (0..cap with include_zero), by degree then lexicographically"""
    result: List[Weight] = [tuple([0] * s)] if include_zero else []
    for degree in range(1, cap + 1):
        found = []
        for combo in itertools.combinations_with_replacement(range(s), degree):
            counts = Counter(combo)
            found.append(tuple(counts.get(i, 0) for i in range(s)))
        result.extend(sorted(found, reverse=True))
    return result


class FreeSuperAlgebra:
    """Free superalgebra of a Cartan datum with the twisted tensor algebra and r"""

    def __init__(self, datum: CartanDatum):
        self.datum = datum
        self.context = datum.context
        self._r_memo: Dict[Word, TensorElem] = {}
        self._crossing_memo: Dict[Tuple[Word, Word], RatFuncQ] = {}
        self._lock = threading.Lock()

    def parity(self, word: Sequence[int]) -> int:
        return sum(1 for i in word if i in self.datum.tau) % 2

    def weight(self, word: Sequence[int]) -> Weight:
        counts = [0] * self.datum.s
        for i in word:
            counts[i] += 1
        return tuple(counts)

    def element_weight(self, elem: FreeElem) -> Optional[Weight]:
        """Common weight of all terms; None for zero; NonHomogeneous when mixed"""
        found = {self.weight(word) for word in elem.terms}
        if len(found) > 1:
            raise NonHomogeneous(f"Element mixes weights {sorted(found)}")
        return next(iter(found), None)

    def element_parity(self, elem: FreeElem) -> int:
        found = {self.parity(word) for word in elem.terms}
        if len(found) > 1:
            raise NonHomogeneous("Element mixes parities")
        return next(iter(found), 0)

    def crossing(self, left: Word, right: Word) -> RatFuncQ:
        """Factor (-1)^{p(left)p(right)} q^{<|left|,|right|>} picked up when right moves past left"""
        key = (left, right)
        cached = self._crossing_memo.get(key)
        if cached is not None:
            return cached
        exponent = weight_pairing(self.weight(left), self.weight(right), self.datum)
        value = self.context.q(exponent)
        if self.parity(left) and self.parity(right):
            value = -value
        self._crossing_memo[key] = value
        return value

    def twisted_mul(self, x: TensorElem, y: TensorElem) -> TensorElem:
        """
        Product on the k-fold tensor power: every leg a of x passes every
        earlier leg b of y, contributing the crossing factor of (x_a, y_b)
        """
        if x.legs != y.legs:
            raise ValueError("Twisted product of tensors with different numbers of legs")
        terms: Dict[Tuple[Word, ...], RatFuncQ] = {}
        for x_key, x_coeff in x.terms.items():
            for y_key, y_coeff in y.terms.items():
                coeff = x_coeff * y_coeff
                for a in range(1, x.legs):
                    if not x_key[a]:
                        continue
                    for b in range(a):
                        if y_key[b]:
                            coeff = coeff * self.crossing(x_key[a], y_key[b])
                key = tuple(xa + yb for xa, yb in zip(x_key, y_key))
                current = terms.get(key)
                terms[key] = coeff if current is None else current + coeff
        return TensorElem(terms, x.legs)

    def _generator_coproduct(self, i: int) -> TensorElem:
        return TensorElem({((i,), ()): 1, ((), (i,)): 1})

    def coproduct_word(self, word: Sequence[int]) -> TensorElem:
        """r on a single word, memoized on the word"""
        word = tuple(word)
        cached = self._r_memo.get(word)
        if cached is not None:
            return cached
        if not word:
            result = TensorElem.unit(2)
        else:
            result = self.twisted_mul(self.coproduct_word(word[:-1]), self._generator_coproduct(word[-1]))
        with self._lock:
            self._r_memo[word] = result
        return result

    def coproduct_r(self, x: FreeElem) -> TensorElem:
        result = TensorElem(legs=2)
        for word, coeff in x.terms.items():
            result = result + self.coproduct_word(word) * coeff
        return result

    def apply_r_to_leg(self, t: TensorElem, leg: int) -> TensorElem:
        """Replace leg `leg` of every term by its image under r, giving legs + 1 legs"""
        terms: Dict[Tuple[Word, ...], RatFuncQ] = {}
        for key, coeff in t.terms.items():
            for (left, right), value in self.coproduct_word(key[leg]).terms.items():
                new_key = key[:leg] + (left, right) + key[leg + 1:]
                product = coeff * value
                current = terms.get(new_key)
                terms[new_key] = product if current is None else current + product
        return TensorElem(terms, t.legs + 1)

    def super_bracket(self, x: FreeElem, y: FreeElem) -> FreeElem:
        """xy - (-1)^{p(x)p(y)} yx for homogeneous x, y"""
        sign = -1 if self.element_parity(x) and self.element_parity(y) else 1
        return x * y - (y * x) * sign


@lru_cache(maxsize=None)
def free_algebra(datum: CartanDatum) -> FreeSuperAlgebra:
    return FreeSuperAlgebra(datum)


def twisted_mul(x: TensorElem, y: TensorElem, datum: CartanDatum) -> TensorElem:
    return free_algebra(datum).twisted_mul(x, y)


def coproduct_r(x: FreeElem, datum: CartanDatum) -> TensorElem:
    return free_algebra(datum).coproduct_r(x)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<gen>t\d+)|(?P<q>q)|(?P<op>[-+*/^()]))")


class _ElementParser:
    """Recursive descent over the element grammar (t1..ts, q, integers, + - * / ^, parentheses)"""

    def __init__(self, text: str, datum: CartanDatum):
        self.text = text
        self.datum = datum
        self.tokens: List[Tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            match = _TOKEN.match(text, pos)
            if not match:
                start = len(text) - len(text[pos:].lstrip())
                raise ParseError(f"Unexpected character {text[start]!r}", position=start)
            kind = match.lastgroup
            self.tokens.append((kind, match.group(kind), match.start(kind)))
            pos = match.end()
        self.index = 0

    def _peek(self) -> Optional[Tuple[str, str, int]]:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def _peek_op(self, *ops: str) -> bool:
        token = self._peek()
        return token is not None and token[0] == "op" and token[1] in ops

    def _next(self) -> Tuple[str, str, int]:
        token = self._peek()
        if token is None:
            raise ParseError("Unexpected end of expression", position=len(self.text))
        self.index += 1
        return token

    def _expect(self, op: str) -> None:
        kind, value, pos = self._next()
        if kind != "op" or value != op:
            raise ParseError(f"Expected {op!r}, found {value!r}", position=pos)

    def parse(self) -> FreeElem:
        if not self.tokens:
            raise ParseError("Empty expression", position=0)
        value = self._expr()
        token = self._peek()
        if token is not None:
            raise ParseError(f"Unexpected token {token[1]!r}", position=token[2])
        return value

    def _expr(self) -> FreeElem:
        negate = False
        if self._peek_op("+", "-"):
            negate = self._next()[1] == "-"
        value = self._term()
        if negate:
            value = -value
        while self._peek_op("+", "-"):
            op = self._next()[1]
            rhs = self._term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _term(self) -> FreeElem:
        value = self._power()
        while self._peek_op("*", "/"):
            _, op, pos = self._next()
            rhs = self._power()
            if op == "*":
                value = value * rhs
                continue
            divisor = rhs.as_scalar()
            if divisor is None or not divisor:
                raise ParseError("Division only by nonzero scalars", position=pos)
            value = value * divisor.inverse()
        return value

    def _exponent(self) -> Fraction:
        if self._peek_op("("):
            self._next()
            exponent = self._signed_integer()
            if self._peek_op("/"):
                _, _, pos = self._next()
                denominator = self._signed_integer()
                if denominator == 0:
                    raise ParseError("Zero denominator in exponent", position=pos)
                exponent = exponent / denominator
            self._expect(")")
            return exponent
        return self._signed_integer()

    def _signed_integer(self) -> Fraction:
        sign = 1
        if self._peek_op("-"):
            self._next()
            sign = -1
        kind, value, pos = self._next()
        if kind != "num":
            raise ParseError(f"Expected an integer, found {value!r}", position=pos)
        return Fraction(sign * int(value))

    def _power(self) -> FreeElem:
        token = self._peek()
        if token is not None and token[0] == "q":
            self._next()
            exponent = Fraction(1)
            if self._peek_op("^"):
                self._next()
                exponent = self._exponent()
            try:
                return FreeElem.scalar(self.datum.context.q(exponent))
            except ScalarError as exc:
                raise ParseError(str(exc), position=token[2]) from None
        value = self._atom()
        if self._peek_op("^"):
            _, _, pos = self._next()
            exponent = self._exponent()
            if exponent.denominator != 1:
                raise ParseError("Only q takes fractional exponents", position=pos)
            if exponent < 0:
                scalar = value.as_scalar()
                if scalar is None or not scalar:
                    raise ParseError("Negative powers only of nonzero scalars", position=pos)
                return FreeElem.scalar(scalar ** int(exponent))
            value = value ** int(exponent)
        return value

    def _atom(self) -> FreeElem:
        kind, value, pos = self._next()
        if kind == "num":
            return FreeElem.scalar(int(value))
        if kind == "gen":
            index = int(value[1:])
            if not 1 <= index <= self.datum.s:
                raise ParseError(f"Generator {value} outside t1..t{self.datum.s}", position=pos)
            return FreeElem.generator(index - 1)
        if kind == "op" and value == "(":
            inner = self._expr()
            self._expect(")")
            return inner
        raise ParseError(f"Unexpected token {value!r}", position=pos)


def parse_element(text: str, datum: CartanDatum) -> FreeElem:
    """
    Parse an element such as "t1*t2*t1 - (q+q^-1)*t2*t1^2"

    Args:
        text: expression in the generators t1..ts and q
        datum: datum fixing the rank and the root of q

    Returns:
        The parsed FreeElem
    """
    return _ElementParser(text, datum).parse()
