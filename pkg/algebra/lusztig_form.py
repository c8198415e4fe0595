"""
The bilinear form C on the free superalgebra, Gram blocks per weight,
kernel membership and quotient bases of f = f'/Ker(C)
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

from algebra.cartan import CartanDatum
from algebra.errors import CapExceeded, WeightMismatch
from algebra.freesuper import (
    FreeElem, TensorElem, Weight, Word, format_word, free_algebra, words,
)
from algebra.scalars import RatFuncQ
from config import FORM_DEGREE_CAP, MAX_WORKERS
from utils.linalg import RowSpace, rank_ratfunc

logger = logging.getLogger(__name__)


@dataclass
class GramBlock:
    """Matrix of C on the monomial basis of one weight component"""

    weight: Weight
    basis: List[Word]
    matrix: List[List[RatFuncQ]]
    rank: int

    @property
    def corank(self) -> int:
        return len(self.basis) - self.rank

    def is_symmetric(self) -> bool:
        size = len(self.basis)
        return all(self.matrix[i][j] == self.matrix[j][i] for i in range(size) for j in range(i + 1, size))

    def to_dict(self, entries: bool = False) -> Dict[str, Any]:
        block: Dict[str, Any] = {
            "weight": list(self.weight),
            "basis": [format_word(w) for w in self.basis],
            "rank": self.rank,
            "corank": self.corank,
        }
        if entries:
            block["entries"] = [[str(x) for x in row] for row in self.matrix]
        return block


class LusztigForm:
    """C computed by recursion on the leading letter of the right argument"""

    def __init__(self, datum: CartanDatum, degree_cap: int = FORM_DEGREE_CAP):
        self.datum = datum
        self.degree_cap = degree_cap
        self.algebra = free_algebra(datum)
        self.context = datum.context
        self._memo: Dict[Tuple[Word, Word], RatFuncQ] = {}

    @lru_cache(maxsize=None)
    def generator_value(self, i: int) -> RatFuncQ:
        """C(t_i, t_i): 1 on the odd generator, (q_i - q_i^-1)^-1 otherwise"""
        if i in self.datum.tau:
            return self.context.one
        q_i = self.datum.q_i(i)
        return (q_i - q_i.inverse()).inverse()

    def pair_words(self, x: Word, y: Word) -> RatFuncQ:
        x, y = tuple(x), tuple(y)
        if len(x) != len(y) or self.algebra.weight(x) != self.algebra.weight(y):
            return self.context.zero
        if not y:
            return self.context.one
        key = (x, y)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        j, rest = y[0], y[1:]
        j_odd = j in self.datum.tau
        total = self.context.zero
        for (left, right), coeff in self.algebra.coproduct_word(x).items():
            if left != (j,):
                continue
            term = coeff * self.pair_words(right, rest)
            if j_odd and self.algebra.parity(right):
                term = -term
            total = total + term
        value = total * self.generator_value(j)
        self._memo[key] = value
        return value

    def form_C(self, x: FreeElem, y: FreeElem) -> RatFuncQ:
        total = self.context.zero
        for w1, c1 in x.items():
            for w2, c2 in y.items():
                value = self.pair_words(w1, w2)
                if value:
                    total = total + c1 * c2 * value
        return total

    def form_tensor(self, x: TensorElem, y: TensorElem) -> RatFuncQ:
        """C(x1 (x) x2, y1 (x) y2) = (-1)^{p(x2)p(y1)} C(x1, y1) C(x2, y2)"""
        total = self.context.zero
        for (x1, x2), c1 in x.items():
            for (y1, y2), c2 in y.items():
                first = self.pair_words(x1, y1)
                if not first:
                    continue
                term = c1 * c2 * first * self.pair_words(x2, y2)
                if self.algebra.parity(x2) and self.algebra.parity(y1):
                    term = -term
                total = total + term
        return total

    def basis(self, weight: Sequence[int]) -> List[Word]:
        if sum(weight) > self.degree_cap:
            raise CapExceeded(f"Weight {tuple(weight)} has degree {sum(weight)} > cap {self.degree_cap}")
        return words(weight)

    def gram(self, weight: Sequence[int]) -> GramBlock:
        """
        Gram block of a weight component

        Args:
            weight: multiplicity of each generator

        Returns:
            GramBlock with exact rank
        """
        weight = tuple(weight)
        basis = self.basis(weight)
        matrix = [[self.pair_words(b, c) for c in basis] for b in basis]
        rank = rank_ratfunc(matrix)
        logger.debug(f"{self.datum.label} gram {weight}: size {len(basis)}, rank {rank}")
        return GramBlock(weight, basis, matrix, rank)

    def gram_blocks(self, weights: Sequence[Sequence[int]]) -> List[GramBlock]:
        """Blocks for several weights, computed concurrently, returned in input order"""
        weights = [tuple(w) for w in weights]
        if not weights:
            return []
        with ThreadPoolExecutor(max_workers=min(MAX_WORKERS, len(weights))) as executor:
            future_to_weight = {executor.submit(self.gram, w): w for w in weights}
            blocks = {future_to_weight[future]: future.result() for future in future_to_weight}
        return [blocks[w] for w in weights]

    def kernel_witness(self, x: FreeElem) -> Optional[Word]:
        """First basis monomial b with C(b, x) != 0, or None when x is in the kernel"""
        weight = self.algebra.element_weight(x)
        if weight is None:
            return None
        for b in words(weight):
            if self.form_C(FreeElem.word(b), x):
                return b
        return None

    def kernel_member(self, x: FreeElem) -> bool:
        return self.kernel_witness(x) is None

    def pairing_table(self, x: Sequence[int], rel: FreeElem) -> List[RatFuncQ]:
        """C(x, w) for each word w of rel, in the order the words were listed"""
        x = tuple(x)
        rel_weight = self.algebra.element_weight(rel)
        if rel_weight is not None and self.algebra.weight(x) != rel_weight:
            raise WeightMismatch(f"{format_word(x)} has weight {self.algebra.weight(x)}, relation has {rel_weight}")
        return [self.pair_words(x, w) for w in rel.words()]

    def quotient_basis(self, weight: Sequence[int]) -> List[Word]:
        """Greedy deglex choice of monomials with independent Gram rows"""
        basis = self.basis(weight)
        space = RowSpace(len(basis))
        chosen = []
        for b in basis:
            if space.add([self.pair_words(b, c).value for c in basis]):
                chosen.append(b)
        return chosen

    def symmetry_report(self, weight: Sequence[int]) -> Dict[str, Any]:
        block = self.gram(weight)
        size = len(block.basis)
        asymmetric = [
            (format_word(block.basis[i]), format_word(block.basis[j]))
            for i in range(size) for j in range(i + 1, size)
            if block.matrix[i][j] != block.matrix[j][i]
        ]
        return {"weight": list(block.weight), "symmetric": not asymmetric, "asymmetric_pairs": asymmetric}


@lru_cache(maxsize=None)
def lusztig_form(datum: CartanDatum, degree_cap: int = FORM_DEGREE_CAP) -> LusztigForm:
    return LusztigForm(datum, degree_cap)


def form_C(x: FreeElem, y: FreeElem, datum: CartanDatum) -> RatFuncQ:
    return lusztig_form(datum).form_C(x, y)


def gram(weight: Sequence[int], datum: CartanDatum, cap: int = FORM_DEGREE_CAP) -> GramBlock:
    return lusztig_form(datum, cap).gram(weight)


def kernel_member(x: FreeElem, datum: CartanDatum) -> bool:
    return lusztig_form(datum).kernel_member(x)


def pairing_table(x: Sequence[int], rel: FreeElem, datum: CartanDatum) -> List[RatFuncQ]:
    return lusztig_form(datum).pairing_table(x, rel)


def quotient_basis(weight: Sequence[int], datum: CartanDatum, cap: int = FORM_DEGREE_CAP) -> List[Word]:
    return lusztig_form(datum, cap).quotient_basis(weight)
