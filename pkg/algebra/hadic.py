"""
Bounded-degree PBW algebras, the Verma modules M+ and M-, the isomorphism
phi: U(g) -> M+ (x) M-, and order-h checks of the twist J, the twisted
coproduct and the R-matrix of a double
"""

import itertools
import logging
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from algebra.errors import CapExceeded, SingularMatrix, SingularPhi
from algebra.liebialg import DoubleData, koszul, structural_cobracket
from algebra.reports import VerificationReport, stopwatch
from config import PBW_DEGREE_CAP
from utils.linalg import invert_rational

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]
Elem = Dict[Word, Fraction]
Pair = Tuple[Word, Word]
Tensor = Dict[Pair, Fraction]


def _accumulate(target: Dict[Any, Fraction], key: Any, value: Fraction) -> None:
    total = target.get(key, Fraction(0)) + value
    if total:
        target[key] = total
    else:
        target.pop(key, None)


def _combine(*parts: Tuple[Dict[Any, Fraction], Any]) -> Dict[Any, Fraction]:
    """Linear combination sum(scale * element)"""
    result: Dict[Any, Fraction] = {}
    for element, scale in parts:
        for key, value in element.items():
            _accumulate(result, key, value * scale)
    return result


class PBWAlgebra:
    """U(g) truncated at a total degree, with normal forms in a fixed basis order"""

    def __init__(self, dd: DoubleData, order: Optional[Sequence[int]] = None, cap: int = PBW_DEGREE_CAP):
        self.dd = dd
        self.g = dd.g
        self.cap = cap
        self.order = list(order) if order is not None else list(range(self.g.dim))
        self.rank = {letter: position for position, letter in enumerate(self.order)}
        self._memo: Dict[Word, Elem] = {}
        self._lock = threading.Lock()

    def parity(self, word: Sequence[int]) -> int:
        return sum(self.g.parity[i] for i in word) % 2

    def _bracket_terms(self, a: int, b: int) -> List[Tuple[int, Fraction]]:
        return [(int(k), self.g.bracket[a, b, k]) for k in np.nonzero(self.g.bracket[a, b] != 0)[0]]

    def is_normal(self, word: Sequence[int]) -> bool:
        for a, b in zip(word, word[1:]):
            if self.rank[a] > self.rank[b] or (a == b and self.g.parity[a]):
                return False
        return True

    def normal_form(self, word: Sequence[int]) -> Elem:
        """
        Rewrite a word into sorted PBW monomials

        Args:
            word: basis letters of the double

        Returns:
            Map from normal monomials to coefficients

        Raises:
            CapExceeded: the word is longer than the cap
        """
        word = tuple(word)
        if len(word) > self.cap:
            raise CapExceeded(f"Word of degree {len(word)} exceeds the PBW cap {self.cap}")
        cached = self._memo.get(word)
        if cached is not None:
            return cached
        result: Elem = {}
        for k, (a, b) in enumerate(zip(word, word[1:])):
            if a == b and self.g.parity[a]:
                # x x = [x, x] / 2 for odd x
                for c, coeff in self._bracket_terms(a, a):
                    for key, value in self.normal_form(word[:k] + (c,) + word[k + 2:]).items():
                        _accumulate(result, key, value * coeff / 2)
                break
            if self.rank[a] > self.rank[b]:
                sign = koszul(self.g.parity[a], self.g.parity[b])
                for key, value in self.normal_form(word[:k] + (b, a) + word[k + 2:]).items():
                    _accumulate(result, key, value * sign)
                for c, coeff in self._bracket_terms(a, b):
                    for key, value in self.normal_form(word[:k] + (c,) + word[k + 2:]).items():
                        _accumulate(result, key, value * coeff)
                break
        else:
            result = {word: Fraction(1)}
        with self._lock:
            self._memo[word] = result
        return result

    def multiply(self, x: Elem, y: Elem) -> Elem:
        result: Elem = {}
        for w1, c1 in x.items():
            for w2, c2 in y.items():
                for key, value in self.normal_form(w1 + w2).items():
                    _accumulate(result, key, value * c1 * c2)
        return result

    def basis(self, degree: int, letters: Optional[Sequence[int]] = None) -> List[Word]:
        """Normal monomials of degree <= `degree` in the given letters, odd letters at most once"""
        letters = sorted(letters if letters is not None else self.order, key=self.rank.__getitem__)
        words: List[Word] = []
        for length in range(degree + 1):
            for combo in itertools.combinations_with_replacement(letters, length):
                if all(not (a == b and self.g.parity[a]) for a, b in zip(combo, combo[1:])):
                    words.append(combo)
        return words

    # Tensor square U(g) (x) U(g)

    def tensor_multiply(self, s: Tensor, t: Tensor) -> Tensor:
        """(a (x) b)(c (x) d) = (-1)^{p(b)p(c)} ac (x) bd"""
        result: Tensor = {}
        for (a, b), c1 in s.items():
            for (c, d), c2 in t.items():
                sign = koszul(self.parity(b), self.parity(c))
                left = self.normal_form(a + c)
                right = self.normal_form(b + d)
                for (u, cu), (w, cw) in itertools.product(left.items(), right.items()):
                    _accumulate(result, (u, w), sign * c1 * c2 * cu * cw)
        return result

    def flip(self, t: Tensor) -> Tensor:
        result: Tensor = {}
        for (a, b), coeff in t.items():
            _accumulate(result, (b, a), koszul(self.parity(a), self.parity(b)) * coeff)
        return result


def tensor_from_array(array: np.ndarray) -> Tensor:
    """Two-tensor on g as degree-one words"""
    return {((int(a),), (int(b),)): Fraction(array[a, b]) for a, b in zip(*np.nonzero(array != 0))}


def primitive(x: int) -> Tensor:
    """Delta_0(x) = x (x) 1 + 1 (x) x"""
    return {((x,), ()): Fraction(1), ((), (x,)): Fraction(1)}


UNIT: Tensor = {((), ()): Fraction(1)}


@dataclass
class TruncH:
    """c0 + h c1 modulo h^2"""

    c0: Dict[Any, Fraction] = field(default_factory=dict)
    c1: Dict[Any, Fraction] = field(default_factory=dict)

    @classmethod
    def constant(cls, value: Dict[Any, Fraction]) -> "TruncH":
        return cls(dict(value), {})

    def __add__(self, other: "TruncH") -> "TruncH":
        return TruncH(_combine((self.c0, 1), (other.c0, 1)), _combine((self.c1, 1), (other.c1, 1)))

    def __sub__(self, other: "TruncH") -> "TruncH":
        return TruncH(_combine((self.c0, 1), (other.c0, -1)), _combine((self.c1, 1), (other.c1, -1)))

    def mul(self, other: "TruncH", product: Callable[[Dict, Dict], Dict]) -> "TruncH":
        return TruncH(
            product(self.c0, other.c0),
            _combine((product(self.c0, other.c1), 1), (product(self.c1, other.c0), 1)),
        )

    def map(self, fn: Callable[[Dict], Dict]) -> "TruncH":
        return TruncH(fn(self.c0), fn(self.c1))

    def inverse_of_unit(self) -> "TruncH":
        """(1 + h a)^-1 = 1 - h a for c0 = 1"""
        return TruncH(dict(self.c0), _combine((self.c1, -1)))


@dataclass
class VermaVec:
    """Vector of M+ (side '+', words in g- letters) or M- (side '-', words in g+ letters)"""

    side: str
    terms: Elem = field(default_factory=dict)


class VermaPair:
    """M+ = U(g-) 1+ and M- = U(g+) 1- with g+ resp. g- acting on the generators by zero"""

    def __init__(self, dd: DoubleData, cap: int = PBW_DEGREE_CAP):
        self.dd = dd
        self.cap = cap
        plus, minus = list(dd.plus_basis), list(dd.minus_basis)
        self.algebra = PBWAlgebra(dd, plus + minus, cap)
        self.opposite = PBWAlgebra(dd, minus + plus, cap)
        self._phi_inverse_cache: Dict[int, Tuple[List[Word], Dict[Pair, int], List[List[Fraction]]]] = {}
        self._lock = threading.Lock()

    def _act(self, side: str, word: Sequence[int], v: Elem) -> Elem:
        algebra = self.opposite if side == "+" else self.algebra
        killed = self.dd.plus_basis if side == "+" else self.dd.minus_basis
        result: Elem = {}
        for u, coeff in v.items():
            for key, value in algebra.normal_form(tuple(word) + u).items():
                if not any(letter in killed for letter in key):
                    _accumulate(result, key, value * coeff)
        return result

    def verma_action(self, a: Elem, v: VermaVec) -> VermaVec:
        """
        Action of an element of U(g) on a Verma vector

        Args:
            a: element of U(g) as words in basis letters
            v: vector of M+ or M-

        Returns:
            The image, renormalized with killed letters removed
        """
        result: Elem = {}
        for word, coeff in a.items():
            for key, value in self._act(v.side, word, v.terms).items():
                _accumulate(result, key, value * coeff)
        return VermaVec(v.side, result)

    def _act_on_pair(self, letter: int, t: Tensor) -> Tensor:
        """y (u (x) w) = yu (x) w + (-1)^{p(y)p(u)} u (x) yw"""
        parity = self.dd.g.parity[letter]
        result: Tensor = {}
        for (u, w), coeff in t.items():
            for u2, value in self._act("+", (letter,), {u: Fraction(1)}).items():
                _accumulate(result, (u2, w), coeff * value)
            sign = koszul(parity, self.algebra.parity(u))
            for w2, value in self._act("-", (letter,), {w: Fraction(1)}).items():
                _accumulate(result, (u, w2), sign * coeff * value)
        return result

    def phi(self, word: Sequence[int]) -> Tensor:
        """x -> x (1+ (x) 1-) on a word of U(g)"""
        state: Tensor = {((), ()): Fraction(1)}
        for letter in reversed(tuple(word)):
            state = self._act_on_pair(letter, state)
        return state

    def _phi_matrix(self, degree: int) -> Tuple[List[Word], Dict[Pair, int], List[List[Fraction]]]:
        cached = self._phi_inverse_cache.get(degree)
        if cached is not None:
            return cached
        domain = self.algebra.basis(degree)
        minus_words = self.opposite.basis(degree, list(self.dd.minus_basis))
        plus_words = self.algebra.basis(degree, list(self.dd.plus_basis))
        rows = [(u, w) for u in minus_words for w in plus_words if len(u) + len(w) <= degree]
        row_index = {pair: k for k, pair in enumerate(rows)}
        matrix = [[Fraction(0)] * len(domain) for _ in rows]
        for col, word in enumerate(domain):
            for pair, value in self.phi(word).items():
                matrix[row_index[pair]][col] = value
        if len(rows) != len(domain):
            raise SingularPhi(f"phi is not square up to degree {degree}")
        try:
            inverse = invert_rational(matrix)
        except SingularMatrix as exc:
            raise SingularPhi(f"phi is singular up to degree {degree}: {exc}") from None
        entry = (domain, row_index, inverse)
        with self._lock:
            self._phi_inverse_cache[degree] = entry
        return entry

    def phi_inverse(self, target: Tensor) -> Elem:
        """
        Preimage under phi of an element of M+ (x) M-

        Raises:
            CapExceeded: the element has degree above the cap
            SingularPhi: the truncated matrix of phi is not invertible
        """
        if not target:
            return {}
        degree = max(len(u) + len(w) for u, w in target)
        if degree > self.cap:
            raise CapExceeded(f"M+ (x) M- element of degree {degree} exceeds the PBW cap {self.cap}")
        domain, row_index, inverse = self._phi_matrix(degree)
        result: Elem = {}
        for pair, coeff in target.items():
            k = row_index[pair]
            for col, word in enumerate(domain):
                if inverse[col][k]:
                    _accumulate(result, word, inverse[col][k] * coeff)
        return result


FourLeg = Tuple[Word, Word, Word, Word]


def _apply_omega_23(pair: VermaPair, state: Dict[FourLeg, Fraction]) -> Dict[FourLeg, Fraction]:
    """Omega acting on legs 2 (M+) and 3 (M-), passing leg 1 and leg 2 with Koszul signs"""
    dd = pair.dd
    parity = pair.algebra.parity
    result: Dict[FourLeg, Fraction] = {}
    for (a, b) in zip(*np.nonzero(dd.omega != 0)):
        a, b = int(a), int(b)
        weight = Fraction(dd.omega[a, b])
        p_a, p_b = dd.g.parity[a], dd.g.parity[b]
        for (v1, v2, v3, v4), coeff in state.items():
            sign = koszul(p_a, parity(v1)) * koszul(p_b, parity(v1) + parity(v2))
            left = pair._act("+", (a,), {v2: Fraction(1)})
            if not left:
                continue
            right = pair._act("-", (b,), {v3: Fraction(1)})
            for (u, cu), (w, cw) in itertools.product(left.items(), right.items()):
                _accumulate(result, (v1, u, w, v4), sign * weight * coeff * cu * cw)
    return result


def _swap_23(pair: VermaPair, state: Dict[FourLeg, Fraction]) -> Dict[FourLeg, Fraction]:
    parity = pair.algebra.parity
    result: Dict[FourLeg, Fraction] = {}
    for (v1, v2, v3, v4), coeff in state.items():
        _accumulate(result, (v1, v3, v2, v4), koszul(parity(v2), parity(v3)) * coeff)
    return result


def _phi_inverse_twice(pair: VermaPair, state: Dict[FourLeg, Fraction]) -> Tensor:
    result: Tensor = {}
    for (v1, v2, v3, v4), coeff in state.items():
        left = pair.phi_inverse({(v1, v2): Fraction(1)})
        right = pair.phi_inverse({(v3, v4): Fraction(1)})
        for (x, cx), (y, cy) in itertools.product(left.items(), right.items()):
            _accumulate(result, (x, y), coeff * cx * cy)
    return result


def compute_J(dd: DoubleData, cap: int = PBW_DEGREE_CAP, pair: Optional[VermaPair] = None) -> TruncH:
    """
    The twist J = (phi^-1 (x) phi^-1)(tau_23 exp(h Omega_23 / 2)(1+ (x) 1+ (x) 1- (x) 1-)) mod h^2

    Args:
        dd: a double
        cap: PBW degree cap

    Returns:
        TruncH over U(g) (x) U(g)
    """
    pair = pair or VermaPair(dd, cap)
    start: Dict[FourLeg, Fraction] = {((), (), (), ()): Fraction(1)}
    order_one = {key: value / 2 for key, value in _apply_omega_23(pair, start).items()}
    c0 = _phi_inverse_twice(pair, _swap_23(pair, start))
    c1 = _phi_inverse_twice(pair, _swap_23(pair, order_one))
    return TruncH(c0, c1)


def _counit_leg(t: Tensor, leg: int) -> Elem:
    result: Elem = {}
    for key, coeff in t.items():
        if not key[leg]:
            _accumulate(result, key[1 - leg], coeff)
    return result


def twisted_coproduct(x: int, dd: DoubleData, J: TruncH,
                      pair: Optional[VermaPair] = None) -> Tuple[TruncH, VerificationReport]:
    """
    Delta(x) = J^-1 Delta_0(x) J mod h^2 and the order-h checks on it

    Returns:
        (Delta(x), report with cobracket_matches, partial_r_matches and counit)
    """
    pair = pair or VermaPair(dd)
    algebra = pair.algebra
    product = algebra.tensor_multiply
    delta = J.inverse_of_unit().mul(TruncH.constant(primitive(x)), product).mul(J, product)
    delta_op = delta.map(algebra.flip)
    difference = delta - delta_op

    r = tensor_from_array(dd.r)
    commutator = _combine((product(primitive(x), r), 1), (product(r, primitive(x)), -1))
    # delta on g+ and the dual bracket on g-, independent of r
    reference = dd.g.cobracket if dd.source is None else structural_cobracket(dd.source)
    cobracket = tensor_from_array(reference[x])
    name = dd.g.names[x]
    report = VerificationReport(f"twisted coproduct of {name}")
    ok = not difference.c0 and difference.c1 == cobracket
    report.add("cobracket_matches", ok, None if ok else f"(Delta - Delta^op)({name}) / h != delta({name})")
    ok = difference.c1 == commutator
    report.add("partial_r_matches", ok, None if ok else f"(Delta - Delta^op)({name}) / h != [Delta_0({name}), r]")
    ok = _counit_leg(delta.c0, 0) == {(x,): Fraction(1)} and not _counit_leg(delta.c1, 0)
    report.add("counit", ok, None if ok else f"(eps (x) 1) Delta({name}) != {name}")
    return delta, report


def r_matrix(dd: DoubleData, J: TruncH, pair: Optional[VermaPair] = None) -> Tuple[TruncH, VerificationReport]:
    """
    R = (J^op)^-1 (1 + h Omega / 2) J mod h^2

    Returns:
        (R, report with R_matches, intertwiner_matches per basis element and gauge)
    """
    pair = pair or VermaPair(dd)
    algebra = pair.algebra
    product = algebra.tensor_multiply
    half_omega = {key: value / 2 for key, value in tensor_from_array(dd.omega).items()}
    exp_omega = TruncH(dict(UNIT), half_omega)
    j_op_inverse = J.map(algebra.flip).inverse_of_unit()
    R = j_op_inverse.mul(exp_omega, product).mul(J, product)

    report = VerificationReport("R-matrix")
    expected = tensor_from_array(dd.r)
    ok = R.c0 == UNIT and R.c1 == expected
    report.add("R_matches", ok, None if ok else "R != 1 + h r mod h^2")
    for x in range(dd.g.dim):
        delta, _ = twisted_coproduct(x, dd, J, pair)
        lhs = R.mul(delta, product)
        rhs = delta.map(algebra.flip).mul(R, product)
        ok = lhs.c0 == rhs.c0 and lhs.c1 == rhs.c1
        report.add(f"intertwiner_matches:{dd.g.names[x]}", ok,
                   None if ok else f"R Delta({dd.g.names[x]}) != Delta^op({dd.g.names[x]}) R")
    ok = all(
        _counit_leg(J.c0, leg) == {(): Fraction(1)} and not _counit_leg(J.c1, leg) for leg in (0, 1)
    )
    report.add("gauge", ok, None if ok else "(eps (x) 1) J != 1 or (1 (x) eps) J != 1")
    return R, report


def format_tensor(t: Tensor, names: Sequence[str]) -> List[List[str]]:
    def render(word: Word) -> str:
        return "*".join(names[i] for i in word) or "1"

    return [[render(a), render(b), str(coeff)] for (a, b), coeff in sorted(t.items())]


def verify_quantization(dd: DoubleData, cap: int = PBW_DEGREE_CAP) -> VerificationReport:
    """
    One report bundling the twist, the twisted coproduct, the cobracket, the counit,
    the R-matrix, the intertwining relation and the gauge conditions at order h
    """
    pair = VermaPair(dd, cap)
    report = VerificationReport(f"order-h quantization of a double of dimension {dd.g.dim}")
    with stopwatch() as timing:
        J = compute_J(dd, cap, pair)
    expected = {key: value / 2 for key, value in tensor_from_array(dd.r).items()}
    ok = J.c0 == UNIT and J.c1 == expected
    report.add("J_matches_lemma", ok, None if ok else "J != 1 + h r / 2 mod h^2", elapsed_ms=timing["elapsed_ms"])

    for x in range(dd.g.dim):
        _, sub = twisted_coproduct(x, dd, J, pair)
        report.extend(sub, prefix=f"{dd.g.names[x]}:")
    R, sub = r_matrix(dd, J, pair)
    report.extend(sub)

    report.info.update({
        "J_matches_lemma": report.get("J_matches_lemma").passed,
        "R_matches": report.get("R_matches").passed,
        "cobracket_matches": all(r.passed for r in report.results if r.label.endswith(":cobracket_matches")),
        "intertwiner_matches": all(r.passed for r in report.results if r.label.startswith("intertwiner_matches")),
        "J1": format_tensor(J.c1, dd.g.names),
        "R1": format_tensor(R.c1, dd.g.names),
        "cap": cap,
    })
    logger.info(f"Order-h quantization checks {'passed' if report.passed else 'failed'}")
    return report
