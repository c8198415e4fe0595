"""
sl(m|n) supermatrix models: Chevalley generators, the supertrace form,
defining relations, the Cartan-data oracle and the Manin triple check
"""

import itertools
import logging
from collections import defaultdict, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from algebra.cartan import CartanDatum, TypeTag
from algebra.errors import InvalidDatum, NonHomogeneous, UnsupportedShape
from algebra.freesuper import FreeElem
from algebra.reports import ValidationReport, VerificationReport, stopwatch
from algebra.scalars import specialize_q1
from algebra.serre import classical_serre
from utils.linalg import rank_rational

logger = logging.getLogger(__name__)


class SuperMatrix:
    """(m+n) x (m+n) matrix of exact rationals with the m|n block split"""

    __slots__ = ("entries", "m", "n")

    def __init__(self, entries: Any, m: int, n: int):
        self.entries = np.array(entries, dtype=object)
        self.m = m
        self.n = n

    @classmethod
    def zeros(cls, m: int, n: int) -> "SuperMatrix":
        return cls(np.full((m + n, m + n), Fraction(0), dtype=object), m, n)

    @classmethod
    def identity(cls, m: int, n: int) -> "SuperMatrix":
        result = cls.zeros(m, n)
        for k in range(m + n):
            result.entries[k, k] = Fraction(1)
        return result

    @classmethod
    def unit(cls, m: int, n: int, row: int, col: int) -> "SuperMatrix":
        """Elementary matrix E_{row,col} (0-based)"""
        result = cls.zeros(m, n)
        result.entries[row, col] = Fraction(1)
        return result

    @property
    def size(self) -> int:
        return self.m + self.n

    def block_parity(self, row: int, col: int) -> int:
        return int((row >= self.m) != (col >= self.m))

    @property
    def parity(self) -> int:
        found = {self.block_parity(r, c) for r, c in zip(*np.nonzero(self.entries != 0))}
        if len(found) > 1:
            raise NonHomogeneous("Supermatrix has both even and odd blocks")
        return found.pop() if found else 0

    def is_zero(self) -> bool:
        return not np.any(self.entries != 0)

    def diagonal(self) -> "SuperMatrix":
        result = SuperMatrix.zeros(self.m, self.n)
        for k in range(self.size):
            result.entries[k, k] = self.entries[k, k]
        return result

    def supertrace(self) -> Fraction:
        upper = sum((self.entries[k, k] for k in range(self.m)), Fraction(0))
        lower = sum((self.entries[k, k] for k in range(self.m, self.size)), Fraction(0))
        return upper - lower

    def __add__(self, other: "SuperMatrix") -> "SuperMatrix":
        return SuperMatrix(self.entries + other.entries, self.m, self.n)

    def __sub__(self, other: "SuperMatrix") -> "SuperMatrix":
        return SuperMatrix(self.entries - other.entries, self.m, self.n)

    def __neg__(self) -> "SuperMatrix":
        return SuperMatrix(-self.entries, self.m, self.n)

    def __mul__(self, scalar: Any) -> "SuperMatrix":
        return SuperMatrix(self.entries * Fraction(scalar), self.m, self.n)

    __rmul__ = __mul__

    def __matmul__(self, other: "SuperMatrix") -> "SuperMatrix":
        return SuperMatrix(self.entries.dot(other.entries), self.m, self.n)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        return (self.m, self.n) == (other.m, other.n) and bool(np.all(self.entries == other.entries))

    __hash__ = None

    def __repr__(self) -> str:
        rows = "; ".join(" ".join(str(x) for x in row) for row in self.entries)
        return f"SuperMatrix({self.m}|{self.n}: {rows})"


def super_bracket(x: SuperMatrix, y: SuperMatrix) -> SuperMatrix:
    """xy - (-1)^{p(x)p(y)} yx"""
    if x.parity and y.parity:
        return x @ y + y @ x
    return x @ y - y @ x


def supertrace_form(x: SuperMatrix, y: SuperMatrix) -> Fraction:
    if (x.m, x.n) != (y.m, y.n):
        raise UnsupportedShape(f"Block shapes {x.m}|{x.n} and {y.m}|{y.n} differ")
    return (x @ y).supertrace()


@dataclass
class ChevalleyGenerators:
    m: int
    n: int
    e: List[SuperMatrix]
    f: List[SuperMatrix]
    h: List[SuperMatrix]

    @property
    def rank(self) -> int:
        return len(self.e)


def _require_shape(m: int, n: int) -> None:
    if m < 1 or n < 1:
        raise UnsupportedShape(f"sl({m}|{n}) model needs m, n >= 1")


def chevalley(m: int, n: int) -> ChevalleyGenerators:
    """
    Chevalley generators of sl(m|n)

    Args:
        m: size of the even block
        n: size of the odd block

    Returns:
        e_i = E_{i,i+1}, f_i = E_{i+1,i} and h_i = [e_i, f_i]
    """
    _require_shape(m, n)
    s = m + n - 1
    e = [SuperMatrix.unit(m, n, i, i + 1) for i in range(s)]
    f = [SuperMatrix.unit(m, n, i + 1, i) for i in range(s)]
    h = [super_bracket(e_i, f_i) for e_i, f_i in zip(e, f)]
    return ChevalleyGenerators(m, n, e, f, h)


def _solve_symmetrizers(a: Sequence[Sequence[Fraction]]) -> List[Fraction]:
    """d_1 = 1 and d_j = d_i a_ij / a_ji along the nonzero off-diagonal entries"""
    s = len(a)
    d: List[Any] = [None] * s
    d[0] = Fraction(1)
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in range(s):
            if j == i or a[i][j] == 0:
                continue
            if a[j][i] == 0:
                raise InvalidDatum(f"not symmetrizable at ({i + 1},{j + 1})")
            value = d[i] * a[i][j] / a[j][i]
            if d[j] is None:
                d[j] = value
                queue.append(j)
            elif d[j] != value:
                raise InvalidDatum(f"not symmetrizable at ({i + 1},{j + 1})")
    return [Fraction(1) if x is None else x for x in d]


def cartan_from_model(m: int, n: int) -> CartanDatum:
    """Read a_ij off [h_i, e_j] = a_ij e_j and solve d_i a_ij = d_j a_ji with d_1 = 1"""
    gens = chevalley(m, n)
    s = gens.rank
    a = [[super_bracket(gens.h[i], gens.e[j]).entries[j, j + 1] for j in range(s)] for i in range(s)]
    d = _solve_symmetrizers(a)
    odd = [i for i, e_i in enumerate(gens.e) if e_i.parity]
    datum = CartanDatum.create(a, odd, d, TypeTag.A, label=f"sl({m}|{n})", provenance="matrix model")
    logger.debug(f"Matrix-model datum sl({m}|{n}): a={datum.a}, d={datum.d}")
    return datum


def simple_root_gram(m: int, n: int) -> List[List[Fraction]]:
    """Supertrace form on the coroots, (h_i, h_j)"""
    gens = chevalley(m, n)
    return [[supertrace_form(x, y) for y in gens.h] for x in gens.h]


def symmetrized_matches_gram(m: int, n: int) -> bool:
    """(h_i, h_j) = a_ji / d_i, the coroot h_i being d_i^-1 times the image of alpha_i"""
    datum = cartan_from_model(m, n)
    gram = simple_root_gram(m, n)
    return all(
        gram[i][j] == datum.a[j][i] / datum.d[i] for i in range(datum.s) for j in range(datum.s)
    )


def cartan_form_nondegenerate(m: int, n: int) -> bool:
    if m == n:
        raise UnsupportedShape(f"The supertrace form is degenerate on the Cartan of sl({m}|{m})")
    return rank_rational(simple_root_gram(m, n)) == m + n - 1


def evaluate_word_relation(rel: FreeElem, generators: Sequence[SuperMatrix]) -> SuperMatrix:
    """Substitute matrices for t1..ts in a relation with constant coefficients"""
    first = generators[0]
    result = SuperMatrix.zeros(first.m, first.n)
    identity = SuperMatrix.identity(first.m, first.n)
    for word, coeff in rel.items():
        product = identity
        for letter in word:
            product = product @ generators[letter]
        result = result + product * specialize_q1(coeff)
    return result


def check_defining_relations(m: int, n: int) -> VerificationReport:
    """
    Evaluate the Chevalley relations and the classical Serre-type relations in sl(m|n)

    Returns:
        Report with one entry per relation; every relation must give the zero matrix
    """
    report = VerificationReport(f"defining relations sl({m}|{n})")
    with stopwatch() as timing:
        gens = chevalley(m, n)
        datum = cartan_from_model(m, n)
    report.info["setup_ms"] = timing["elapsed_ms"]
    s = gens.rank
    for i, j in itertools.product(range(s), repeat=2):
        ok = super_bracket(gens.h[i], gens.h[j]).is_zero()
        report.add(f"[h{i + 1},h{j + 1}]=0", ok, None if ok else f"h{i + 1}, h{j + 1} do not commute")
        a_ij = datum.a[i][j]
        ok = super_bracket(gens.h[i], gens.e[j]) == gens.e[j] * a_ij
        report.add(f"[h{i + 1},e{j + 1}]=a*e", ok, None if ok else f"[h{i + 1},e{j + 1}] != {a_ij} e{j + 1}")
        ok = super_bracket(gens.h[i], gens.f[j]) == gens.f[j] * (-a_ij)
        report.add(f"[h{i + 1},f{j + 1}]=-a*f", ok, None if ok else f"[h{i + 1},f{j + 1}] != {-a_ij} f{j + 1}")
        expected = gens.h[i] if i == j else SuperMatrix.zeros(m, n)
        ok = super_bracket(gens.e[i], gens.f[j]) == expected
        report.add(f"[e{i + 1},f{j + 1}]", ok, None if ok else f"[e{i + 1},f{j + 1}] has the wrong value")

    for label, rel in classical_serre(datum):
        for side, generators in (("E", gens.e), ("F", gens.f)):
            ok = evaluate_word_relation(rel, generators).is_zero()
            report.add(f"serre-{side}:{label}", ok, None if ok else f"{label} is nonzero on the {side} side")
    logger.info(f"sl({m}|{n}) defining relations {'hold' if report.passed else 'fail'}")
    return report


def positive_roots(m: int, n: int) -> List[Tuple[Tuple[int, ...], int]]:
    """
    Positive roots of sl(m|n) from the root vectors E_ab, a < b

    Returns:
        (weight in simple roots, parity) pairs
    """
    _require_shape(m, n)
    s = m + n - 1
    roots = []
    for a, b in itertools.combinations(range(m + n), 2):
        weight = tuple(1 if a <= k < b else 0 for k in range(s))
        roots.append((weight, int(a < m <= b)))
    return roots


def pbw_weight_counts(m: int, n: int, cap: int) -> Dict[Tuple[int, ...], int]:
    """Number of PBW monomials of U(n+) per weight of total degree <= cap; odd roots appear at most once"""
    s = m + n - 1
    counts: Dict[Tuple[int, ...], int] = {tuple([0] * s): 1}
    for weight, parity in positive_roots(m, n):
        size = sum(weight)
        updated: Dict[Tuple[int, ...], int] = defaultdict(int)
        for base, count in counts.items():
            top = 1 if parity else cap
            power = 0
            while power <= top and sum(base) + power * size <= cap:
                key = tuple(b + power * w for b, w in zip(base, weight))
                updated[key] += count
                power += 1
        counts = dict(updated)
    return counts


def _b_plus(gens: ChevalleyGenerators) -> List[SuperMatrix]:
    roots = [SuperMatrix.unit(gens.m, gens.n, a, b) for a, b in itertools.combinations(range(gens.m + gens.n), 2)]
    return list(gens.h) + roots


def _b_minus(gens: ChevalleyGenerators) -> List[SuperMatrix]:
    roots = [SuperMatrix.unit(gens.m, gens.n, b, a) for a, b in itertools.combinations(range(gens.m + gens.n), 2)]
    return list(gens.h) + roots


DoubleElement = Tuple[SuperMatrix, SuperMatrix]


def _eta(x: SuperMatrix, sign: int) -> DoubleElement:
    return x, x.diagonal() * sign


def _pair(x: DoubleElement, y: DoubleElement) -> Fraction:
    return supertrace_form(x[0], y[0]) - supertrace_form(x[1], y[1])


def _bracket(x: DoubleElement, y: DoubleElement) -> DoubleElement:
    return super_bracket(x[0], y[0]), super_bracket(x[1], y[1])


def manin_check(m: int, n: int) -> ValidationReport:
    """
    Check that g + h with the form (,) - (,)_h and the images of b+ and b-
    under eta(x) = x + (+-)diag(x) is a super Manin triple

    Raises:
        UnsupportedShape: for m = n, where the Cartan form degenerates
    """
    _require_shape(m, n)
    if m == n:
        raise UnsupportedShape(f"sl({m}|{m}) has a degenerate form on its Cartan subalgebra")
    gens = chevalley(m, n)
    plus = [_eta(x, 1) for x in _b_plus(gens)]
    minus = [_eta(x, -1) for x in _b_minus(gens)]
    report = ValidationReport(f"Manin triple sl({m}|{n})")

    for name, images in (("isotropic_plus", plus), ("isotropic_minus", minus)):
        witness = next(
            ((i, j) for i, j in itertools.product(range(len(images)), repeat=2) if _pair(images[i], images[j])),
            None,
        )
        report.add(name, witness is None, None if witness is None else f"basis pair {witness}")

    spanning = plus + minus
    invariance_witness = None
    symmetry_witness = None
    for i, j in itertools.product(range(len(spanning)), repeat=2):
        x, y = spanning[i], spanning[j]
        sign = -1 if x[0].parity and y[0].parity else 1
        if symmetry_witness is None and _pair(x, y) != sign * _pair(y, x):
            symmetry_witness = (i, j)
        if invariance_witness is None:
            for k, z in enumerate(spanning):
                if _pair(_bracket(x, y), z) != _pair(x, _bracket(y, z)):
                    invariance_witness = (i, j, k)
                    break
    report.add("invariant", invariance_witness is None,
               None if invariance_witness is None else f"basis triple {invariance_witness}")
    report.add("supersymmetric", symmetry_witness is None,
               None if symmetry_witness is None else f"basis pair {symmetry_witness}")

    pairing = [[_pair(x, y) for y in minus] for x in plus]
    rank = rank_rational(pairing)
    report.add("nondegenerate_pairing", rank == len(plus) == len(minus),
               None if rank == len(plus) else f"pairing rank {rank} < {len(plus)}", rank=rank)
    dimension = (m + n) ** 2 - 1 + (m + n - 1)
    report.add("dimensions", len(plus) + len(minus) == dimension,
               None if len(plus) + len(minus) == dimension else f"{len(plus)} + {len(minus)} != {dimension}")
    e1_f1 = _pair(_eta(gens.e[0], 1), _eta(gens.f[0], -1))
    report.info["pairing_e1_f1"] = str(e1_f1)
    return report
