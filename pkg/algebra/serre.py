"""
Classical and quantum Serre-type relations, and their verification
against the kernel of the form C
"""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from sympy import Rational, exp, expand, series, symbols

from algebra.cartan import CartanDatum, TypeTag, q_binomial, q_integer
from algebra.errors import CapExceeded, InvalidDatum
from algebra.freesuper import FreeElem, Weight, format_word, free_algebra, weights_up_to, words
from algebra.lusztig_form import lusztig_form
from algebra.reports import VerificationReport, stopwatch
from algebra.scalars import FIELD, specialize_q1
from config import FORM_DEGREE_CAP, MAX_WORKERS
from utils.linalg import RowSpace

logger = logging.getLogger(__name__)


@dataclass
class RelationSet:
    """Labelled homogeneous relations on the E side or the F side"""

    datum: CartanDatum
    relations: List[Tuple[str, FreeElem]] = field(default_factory=list)
    side: str = "E"

    def __iter__(self) -> Iterator[Tuple[str, FreeElem]]:
        return iter(self.relations)

    def __len__(self) -> int:
        return len(self.relations)

    @property
    def labels(self) -> List[str]:
        return [label for label, _ in self.relations]

    def get(self, label: str) -> FreeElem:
        for name, rel in self.relations:
            if name == label:
                return rel
        raise KeyError(label)

    def mirrored(self) -> "RelationSet":
        return RelationSet(self.datum, list(self.relations), "F" if self.side == "E" else "E")


def _theta(i: int) -> FreeElem:
    return FreeElem.generator(i)


def _serre_exponent(datum: CartanDatum, i: int, j: int) -> int:
    value = abs(datum.a[i][j])
    if value.denominator != 1:
        raise InvalidDatum(f"a_{i + 1}{j + 1} = {datum.a[i][j]} is not integral")
    return 1 + int(value)


def quantum_serre(datum: CartanDatum, side: str = "E") -> RelationSet:
    """
    Quantum Serre-type relations of a datum

    Args:
        datum: validated Cartan datum
        side: "E" or "F"; the F side carries the same words and coefficients

    Returns:
        RelationSet labelled A(i), A2(i,j), B(i,j), C, D
    """
    context = datum.context
    s = datum.s
    relations: List[Tuple[str, FreeElem]] = []

    for i in sorted(datum.tau):
        if datum.a[i][i] == 0:
            relations.append((f"A({i + 1})", _theta(i) * _theta(i)))

    for i in range(s):
        for j in range(i + 1, s):
            if datum.a[i][j] == 0:
                sign = -1 if datum.parity(i) and datum.parity(j) else 1
                relations.append((f"A2({i + 1},{j + 1})", _theta(i) * _theta(j) - _theta(j) * _theta(i) * sign))

    for i in range(s):
        if i in datum.tau:
            continue
        t = context.q_laurent(datum.d[i])
        for j in range(s):
            if j == i:
                continue
            n = _serre_exponent(datum, i, j)
            rel = FreeElem()
            for v in range(n + 1):
                coeff = q_binomial(n, v, t) * (-1) ** v
                rel = rel + (_theta(i) ** (n - v) * _theta(j) * _theta(i) ** v) * coeff
            relations.append((f"B({i + 1},{j + 1})", rel))

    m = datum.odd_index
    q = context.q(1)
    if m is not None and m - 1 >= 0 and m + 1 < s and datum.a[m][m] == 0:
        lo, hi = m - 1, m + 1
        relations.append(("C", FreeElem({
            (m, lo, m, hi): 1,
            (m, hi, m, lo): 1,
            (lo, m, hi, m): 1,
            (hi, m, lo, m): 1,
            (m, lo, hi, m): -(q + q.inverse()),
        })))

    if datum.type_tag == TypeTag.B_LAST_ODD and m == s - 1 and s >= 2:
        prev = m - 1
        middle = -(q + q.inverse() - 1)
        relations.append(("D", FreeElem({
            (prev, m, m, m): 1,
            (m, prev, m, m): middle,
            (m, m, prev, m): middle,
            (m, m, m, prev): 1,
        })))

    logger.debug(f"{datum.label}: {len(relations)} quantum relations on the {side} side")
    return RelationSet(datum, relations, side)


def classical_serre(datum: CartanDatum) -> RelationSet:
    """Associative-word expansions of the classical Serre-type bracket relations"""
    algebra = free_algebra(datum)
    bracket = algebra.super_bracket
    s = datum.s
    relations: List[Tuple[str, FreeElem]] = []

    for i in sorted(datum.tau):
        if datum.a[i][i] == 0:
            relations.append((f"classical-A({i + 1})", bracket(_theta(i), _theta(i))))

    for i in range(s):
        if i in datum.tau:
            continue
        for j in range(s):
            if j == i:
                continue
            element = _theta(j)
            for _ in range(_serre_exponent(datum, i, j)):
                element = bracket(_theta(i), element)
            relations.append((f"classical-B({i + 1},{j + 1})", element))

    m = datum.odd_index
    if m is not None and m - 1 >= 0 and m + 1 < s and datum.a[m][m] == 0:
        inner = bracket(_theta(m), _theta(m + 1))
        relations.append(("classical-C", bracket(_theta(m), bracket(_theta(m - 1), inner))))

    if datum.type_tag == TypeTag.B_LAST_ODD and m == s - 1 and s >= 2:
        element = bracket(_theta(m - 1), _theta(m))
        element = bracket(bracket(element, _theta(m)), _theta(m))
        relations.append(("classical-D", element))

    return RelationSet(datum, relations, "E")


def specialize_relation(rel: FreeElem) -> Dict[Tuple[int, ...], Fraction]:
    specialized = {word: specialize_q1(coeff) for word, coeff in rel.items()}
    return {word: value for word, value in specialized.items() if value}


def specialization_check(datum: CartanDatum) -> VerificationReport:
    """Compare q -> 1 of every quantum B(i,j) relation on an even root with the classical expansion"""
    report = VerificationReport(f"q->1 specialization {datum.label}")
    quantum = quantum_serre(datum)
    classical = classical_serre(datum)
    for label, rel in quantum:
        if not label.startswith("B("):
            continue
        expected = {word: specialize_q1(c) for word, c in classical.get(f"classical-{label}").items()}
        expected = {word: value for word, value in expected.items() if value}
        actual = specialize_relation(rel)
        mismatch = next((format_word(w) for w in sorted(set(actual) | set(expected))
                         if actual.get(w, 0) != expected.get(w, 0)), None)
        report.add(f"q1:{label}", mismatch is None, None if mismatch is None else f"coefficient of {mismatch}")
    return report


def drinfeld_jimbo_check(datum: CartanDatum, top_weight: int = 3) -> VerificationReport:
    """
    [e_i, f_i] = (K_i - K_i^-1) / (q_i - q_i^-1) against the classical [e_i, f_i] = h_i

    With q = e^{h/2}, q_i = q^{d_i} and K_i = q_i^{h_i} the right side is
    h_i + h^2 d_i^2 (h_i^3 - h_i) / 24 + O(h^3). On a weight vector with h_i = k it is
    the q-integer [k]_{q_i}, which must give k at q = 1.

    Args:
        datum: validated Cartan datum
        top_weight: largest h_i eigenvalue tried at q = 1

    Returns:
        Report with dj:h(i) and dj:q1(i) per simple root; dj:h(i) carries the h^2 term
    """
    report = VerificationReport(f"Drinfeld-Jimbo limit {datum.label}")
    h, x = symbols("h x")
    for i in range(datum.s):
        d = Rational(datum.d[i].numerator, datum.d[i].denominator)
        ratio = (exp(h * d * x / 2) - exp(-h * d * x / 2)) / (exp(h * d / 2) - exp(-h * d / 2))
        expansion = expand(series(ratio, h, 0, 3).removeO())
        terms = [expand(expansion.coeff(h, k)) for k in range(3)]
        ok = expand(terms[0] - x) == 0 and terms[1] == 0
        report.add(f"dj:h({i + 1})", ok, None if ok else f"h^0 term {terms[0]}, h^1 term {terms[1]}",
                   h2=str(terms[2]))

        t = datum.context.q_laurent(datum.d[i])
        bad = next((k for k in range(1, top_weight + 1) if specialize_q1(q_integer(k, t)) != k), None)
        report.add(f"dj:q1({i + 1})", bad is None,
                   None if bad is None else f"[{bad}] in q_{i + 1} is not {bad} at q = 1")
    logger.debug(f"{datum.label}: Drinfeld-Jimbo relation {'reduces' if report.passed else 'fails'} at order h")
    return report


def _sub_weights(weight: Sequence[int]) -> Iterator[Weight]:
    return itertools.product(*(range(x + 1) for x in weight))


def ideal_slice_dimension(datum: CartanDatum, relations: RelationSet, weight: Sequence[int]) -> int:
    """Dimension of the span of u*rel*v at one weight, by exact row reduction"""
    algebra = free_algebra(datum)
    weight = tuple(weight)
    basis = words(weight)
    index = {w: k for k, w in enumerate(basis)}
    space = RowSpace(len(basis))
    for _, rel in relations:
        rel_weight = algebra.element_weight(rel)
        if rel_weight is None:
            continue
        rest = tuple(a - b for a, b in zip(weight, rel_weight))
        if any(x < 0 for x in rest):
            continue
        for left in _sub_weights(rest):
            right = tuple(a - b for a, b in zip(rest, left))
            for u in words(left):
                for v in words(right):
                    row = [FIELD.zero] * len(basis)
                    for w, coeff in rel.items():
                        k = index[u + w + v]
                        row[k] = row[k] + coeff.value
                    space.add(row)
                    if space.rank == len(basis):
                        return space.rank
    return space.rank


def verify_kernel(datum: CartanDatum, cap: int, relations: Optional[RelationSet] = None,
                  slices: bool = True) -> VerificationReport:
    """
    Check relations against Ker(C) and compare ideal slices with Gram coranks

    Args:
        datum: Cartan datum
        cap: largest total degree examined
        relations: defaults to the quantum Serre-type relations
        slices: also compare ideal-slice dimensions with Gram coranks at every weight up to cap

    Returns:
        Report with kernel:<label> and slice:<weight> entries
    """
    relations = relations if relations is not None else quantum_serre(datum)
    algebra = free_algebra(datum)
    form = lusztig_form(datum, max(cap, FORM_DEGREE_CAP))
    weights_of = {}
    for label, rel in relations:
        weight = algebra.element_weight(rel)
        if weight is not None and sum(weight) > cap:
            raise CapExceeded(f"Relation {label} has degree {sum(weight)} > cap {cap}")
        weights_of[label] = weight

    report = VerificationReport(f"check-serre {datum.label} cap {cap}")
    report.info.update({"datum": datum.label, "cap": cap, "relations": relations.labels})
    for label, rel in relations:
        with stopwatch() as timing:
            witness = form.kernel_witness(rel)
        report.add(
            f"kernel:{label}", witness is None,
            None if witness is None else f"C({format_word(witness)}, {label}) != 0",
            elapsed_ms=timing["elapsed_ms"], relation=label, in_kernel=witness is None,
            weight=list(weights_of[label] or ()),
        )
        if witness is not None:
            logger.error(f"{datum.label}: relation {label} is not in Ker(C)")

    if not slices:
        return report

    weights = weights_up_to(datum.s, cap)

    def slice_check(weight: Weight) -> Dict[str, int]:
        with stopwatch() as timing:
            ideal_dim = ideal_slice_dimension(datum, relations, weight)
            block = form.gram(weight)
        return {"ideal_dim": ideal_dim, "corank": block.corank, "rank": block.rank,
                "size": len(block.basis), "elapsed_ms": timing["elapsed_ms"]}

    with ThreadPoolExecutor(max_workers=min(MAX_WORKERS, len(weights))) as executor:
        future_to_weight = {executor.submit(slice_check, weight): weight for weight in weights}
        outcomes = {future_to_weight[future]: future.result() for future in future_to_weight}

    for weight in weights:
        outcome = outcomes[weight]
        elapsed = outcome.pop("elapsed_ms")
        passed = outcome["ideal_dim"] == outcome["corank"]
        report.add(
            f"slice:{','.join(map(str, weight))}", passed,
            None if passed else f"weight {weight}: ideal {outcome['ideal_dim']} vs corank {outcome['corank']}",
            elapsed_ms=elapsed, weight=list(weight), **outcome,
        )
    logger.info(f"{datum.label}: kernel check up to degree {cap} {'passed' if report.passed else 'failed'}")
    return report
