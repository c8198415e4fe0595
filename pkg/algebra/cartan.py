"""
Cartan data for distinguished root systems, validation and super q-binomials
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from algebra.errors import InvalidDatum, UnsupportedFamily
from algebra.reports import ValidationReport
from algebra.scalars import LaurentPoly, RatFuncQ, ScalarContext, to_fraction

logger = logging.getLogger(__name__)


class TypeTag(str, Enum):
    A = "A"
    B_LAST_ODD = "B_last_odd"
    B = "B"
    C = "C"
    D = "D"
    F4 = "F4"
    G3 = "G3"
    CUSTOM = "custom"


@dataclass(frozen=True)
class CartanDatum:
    """
    Cartan matrix (a_ij), parity set tau and symmetrizers d_i

    Indices are 0-based internally; labels and config files use 1-based indices.
    """

    s: int
    a: Tuple[Tuple[Fraction, ...], ...]
    tau: FrozenSet[int]
    d: Tuple[Fraction, ...]
    type_tag: TypeTag = TypeTag.CUSTOM
    alpha_param: Optional[Fraction] = None
    label: str = "custom"
    provenance: str = field(default="config", compare=False)

    @classmethod
    def create(cls, a: Sequence[Sequence[Any]], tau: Sequence[int], d: Sequence[Any],
               type_tag: TypeTag = TypeTag.CUSTOM, alpha_param: Any = None,
               label: str = "custom", provenance: str = "config") -> "CartanDatum":
        matrix = tuple(tuple(to_fraction(x) for x in row) for row in a)
        return cls(
            s=len(matrix),
            a=matrix,
            tau=frozenset(int(i) for i in tau),
            d=tuple(to_fraction(x) for x in d),
            type_tag=TypeTag(type_tag),
            alpha_param=None if alpha_param is None else to_fraction(alpha_param),
            label=label,
            provenance=provenance,
        )

    @classmethod
    def from_config(cls, mapping: Mapping[str, Any], provenance: str = "config") -> "CartanDatum":
        """
        Build a datum from a parsed config mapping

        Args:
            mapping: keys rank, matrix, tau (1-based), d, optional alpha and label

        Returns:
            A validated CartanDatum
        """
        datum = cls.create(
            a=mapping["matrix"],
            tau=[int(i) - 1 for i in mapping.get("tau", [])],
            d=mapping["d"],
            alpha_param=mapping.get("alpha"),
            label=str(mapping.get("label", "custom")),
            provenance=provenance,
        )
        report = validate(datum)
        if not report.passed:
            raise InvalidDatum("; ".join(r.witness or r.label for r in report.failures()))
        return datum

    def parity(self, i: int) -> int:
        return 1 if i in self.tau else 0

    @property
    def odd_index(self) -> Optional[int]:
        return next(iter(self.tau)) if self.tau else None

    @cached_property
    def unit_L(self) -> int:
        return math.lcm(*(x.denominator for x in self.d)) if self.d else 1

    @cached_property
    def context(self) -> ScalarContext:
        return ScalarContext(self.unit_L)

    def symmetrized(self, i: int, j: int) -> Fraction:
        return self.d[i] * self.a[i][j]

    def q_i(self, i: int) -> RatFuncQ:
        return self.context.q(self.d[i])

    def letter(self, i: int) -> str:
        return f"t{i + 1}"

    def to_config(self) -> Dict[str, Any]:
        config: Dict[str, Any] = {
            "label": self.label,
            "rank": self.s,
            "matrix": [[str(x) for x in row] for row in self.a],
            "tau": sorted(i + 1 for i in self.tau),
            "d": [str(x) for x in self.d],
        }
        if self.alpha_param is not None:
            config["alpha"] = str(self.alpha_param)
        return config


def validate(datum: CartanDatum) -> ValidationReport:
    """
    Check the invariants of a Cartan datum

    Args:
        datum: the datum to check

    Returns:
        Report with one entry per invariant and the violating indices as witness
    """
    report = ValidationReport(f"validate {datum.label}")
    s = datum.s
    shape_ok = s >= 1 and all(len(row) == s for row in datum.a) and len(datum.d) == s
    report.add("shape", shape_ok, None if shape_ok else f"matrix must be {s}x{s} with {s} symmetrizers")
    if not shape_ok:
        return report

    bad_tau = [i + 1 for i in datum.tau if not 0 <= i < s]
    tau_ok = len(datum.tau) <= 1 and not bad_tau
    report.add("tau", tau_ok, None if tau_ok else f"tau must be empty or one index in 1..{s}")

    zero_d = [i + 1 for i, x in enumerate(datum.d) if x == 0]
    report.add("d_nonzero", not zero_d, f"d_{zero_d[0]} is zero" if zero_d else None)
    report.add("d1_normalized", datum.d[0] == 1, None if datum.d[0] == 1 else "d1 must be 1")

    asymmetric = next(
        ((i, j) for i in range(s) for j in range(s)
         if datum.symmetrized(i, j) != datum.symmetrized(j, i)),
        None,
    )
    report.add(
        "symmetrizable",
        asymmetric is None,
        None if asymmetric is None else f"not symmetrizable at ({asymmetric[0] + 1},{asymmetric[1] + 1})",
    )

    bad_diagonal = [i + 1 for i in range(s) if datum.a[i][i] not in (0, 2)]
    report.add(
        "diagonal",
        not bad_diagonal,
        f"a_{bad_diagonal[0]}{bad_diagonal[0]} is not 0 or 2" if bad_diagonal else None,
    )

    even_isotropic = [i + 1 for i in range(s) if datum.a[i][i] == 0 and i not in datum.tau]
    report.add(
        "isotropic_roots_odd",
        not even_isotropic,
        f"a_{even_isotropic[0]}{even_isotropic[0]} = 0 on an even root" if even_isotropic else None,
    )

    if datum.alpha_param is not None:
        alpha_ok = datum.alpha_param not in (0, -1)
        report.add("alpha", alpha_ok, None if alpha_ok else f"alpha = {datum.alpha_param} is degenerate")
    return report


def q_binomial(m_plus_n: int, n: int, t: LaurentPoly) -> LaurentPoly:
    """
    Super q-binomial coefficient as a product of (t^k - t^-k) factors

    Args:
        m_plus_n: top index
        n: bottom index, 0 <= n <= m_plus_n
        t: the variable, a unit monomial in v

    Returns:
        The coefficient as a Laurent polynomial
    """
    if n < 0 or n > m_plus_n:
        raise ValueError(f"q_binomial needs 0 <= n <= m+n, got ({m_plus_n}, {n})")
    context = ScalarContext(t.unit_L)
    base = context.laurent(t)
    numerator = context.one
    denominator = context.one
    for i in range(n):
        top = m_plus_n - i
        numerator = numerator * (base ** top - base ** (-top))
        denominator = denominator * (base ** (i + 1) - base ** (-(i + 1)))
    return (numerator / denominator).to_laurent()


def q_integer(n: int, t: LaurentPoly) -> LaurentPoly:
    return q_binomial(n, 1, t)


_NON_A_TAGS = frozenset({TypeTag.B, TypeTag.C, TypeTag.D, TypeTag.F4, TypeTag.G3})


def formula_block_matches(datum: CartanDatum) -> Optional[bool]:
    """
    Compare the 3x3 block around the odd root with the closed formula
    a_ij = (1 + (-1)^[i=m]) [i=j] - (-1)^[i=m] [i=j-1] - [i=j+1]

    Returns:
        None when m-1, m, m+1 are not all indices, a_mm != 0, or the datum is a built-in
        orthosymplectic or exceptional one whose odd neighbours need not form an A chain
    """
    m = datum.odd_index
    if datum.type_tag in _NON_A_TAGS:
        return None
    if m is None or m - 1 < 0 or m + 1 >= datum.s or datum.a[m][m] != 0:
        return None
    for i in (m - 1, m, m + 1):
        for j in (m - 1, m, m + 1):
            expected = Fraction(0)
            if i == j:
                expected += 0 if i == m else 2
            if j == i + 1:
                expected -= -1 if i == m else 1
            if i == j + 1:
                expected -= 1
            if datum.a[i][j] != expected:
                return False
    return True


def _sl_datum(m: int, n: int) -> CartanDatum:
    if m < 1 or n < 0 or m + n < 2:
        raise InvalidDatum(f"sl({m}|{n}) needs m >= 1, n >= 0 and m + n >= 2")
    s = m + n - 1
    odd = m - 1 if n >= 1 else None
    a = [[Fraction(0)] * s for _ in range(s)]
    for i in range(s):
        a[i][i] = Fraction(0 if i == odd else 2)
        if i + 1 < s:
            a[i][i + 1] = Fraction(1 if i == odd else -1)
            a[i + 1][i] = Fraction(-1)
    d = [Fraction(1) if i < m else Fraction(-1) for i in range(s)]
    return CartanDatum.create(
        a, [] if odd is None else [odd], d, TypeTag.A,
        label=f"sl({m}|{n})", provenance="builtin: sl(m|n) distinguished, matrix-model oracle",
    )


def _b0_datum(n: int) -> CartanDatum:
    if n < 1:
        raise InvalidDatum(f"B(0,{n}) needs n >= 1")
    a = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = Fraction(2)
        if i + 1 < n:
            a[i][i + 1] = Fraction(-1)
            a[i + 1][i] = Fraction(-2 if i + 1 == n - 1 else -1)
    d = [Fraction(1)] * (n - 1) + [Fraction(1, 2) if n > 1 else Fraction(1)]
    return CartanDatum.create(
        a, [n - 1], d, TypeTag.B_LAST_ODD,
        label=f"B(0,{n})",
        provenance="builtin: symmetrized B_n form (a1,a1)=2, (an,an)=1, odd last root",
    )


def _d21_datum(alpha: Fraction) -> CartanDatum:
    alpha = to_fraction(alpha)
    a = [[0, 1, alpha], [-1, 2, 0], [-1, 0, 2]]
    return CartanDatum.create(
        a, [0], [1, -1, -alpha], TypeTag.CUSTOM, alpha_param=alpha,
        label=f"D(2,1;{alpha})", provenance="builtin: D(2,1;alpha) with odd middle node first",
    )


def _from_simple_roots(roots: Sequence[Sequence[Any]], gram: Sequence[Sequence[Any]], odd: int,
                       type_tag: TypeTag, label: str, provenance: str) -> CartanDatum:
    """
    a_ij = (alpha_i, alpha_j) / d_i with d_i = (alpha_i, alpha_i) / 2, and d_i = 1 on the isotropic odd root

    Args:
        roots: simple roots as coordinates in an ambient basis
        gram: the form on that basis, scaled so that d_1 = 1
        odd: index of the odd simple root
    """
    vectors = np.array([[to_fraction(x) for x in row] for row in roots], dtype=object)
    ambient = np.array([[to_fraction(x) for x in row] for row in gram], dtype=object)
    form = vectors.dot(ambient).dot(vectors.T)
    s = len(roots)
    d = [form[i, i] / 2 if form[i, i] else Fraction(1) for i in range(s)]
    a = [[form[i, j] / d[i] for j in range(s)] for i in range(s)]
    return CartanDatum.create(a, [odd], d, type_tag, label=label, provenance=provenance)


def _root(size: int, *terms: Tuple[int, int]) -> List[int]:
    vector = [0] * size
    for position, coeff in terms:
        vector[position] += coeff
    return vector


def _orthosymplectic_roots(m: int, n: int, tail: str) -> List[List[int]]:
    """delta_1 - delta_2, ..., delta_n - eps_1, eps_1 - eps_2, ..., then eps_m (B) or eps_{m-1} + eps_m (D)"""
    size = m + n
    roots = [_root(size, (i, 1), (i + 1, -1)) for i in range(size - 1)]
    if tail == "B":
        roots.append(_root(size, (size - 1, 1)))
    else:
        roots.append(_root(size, (size - 2, 1), (size - 1, 1)))
    return roots


def _osp_gram(m: int, n: int) -> List[List[int]]:
    return np.diag([1] * n + [-1] * m).tolist()


def _bmn_datum(m: int, n: int) -> CartanDatum:
    if m < 1 or n < 1:
        raise InvalidDatum(f"B({m},{n}) needs m, n >= 1; B(0,n) is the b0 family")
    return _from_simple_roots(
        _orthosymplectic_roots(m, n, "B"), _osp_gram(m, n), n - 1, TypeTag.B, f"B({m},{n})",
        "builtin: osp(2m+1|2n) distinguished roots, (delta,delta) = 1, (eps,eps) = -1",
    )


def _dmn_datum(m: int, n: int) -> CartanDatum:
    if m < 2 or n < 1:
        raise InvalidDatum(f"D({m},{n}) needs m >= 2 and n >= 1")
    return _from_simple_roots(
        _orthosymplectic_roots(m, n, "D"), _osp_gram(m, n), n - 1, TypeTag.D, f"D({m},{n})",
        "builtin: osp(2m|2n) distinguished roots, (delta,delta) = 1, (eps,eps) = -1",
    )


def _c_datum(n: int) -> CartanDatum:
    if n < 2:
        raise InvalidDatum(f"C({n}) needs n >= 2")
    # eps_1 at 0, delta_1 .. delta_{n-1} at 1 .. n-1
    roots = [_root(n, (0, 1), (1, -1))]
    roots.extend(_root(n, (i, 1), (i + 1, -1)) for i in range(1, n - 1))
    roots.append(_root(n, (n - 1, 2)))
    return _from_simple_roots(
        roots, np.diag([1] + [-1] * (n - 1)).tolist(), 0, TypeTag.C, f"C({n})",
        "builtin: osp(2|2n-2) distinguished roots, (eps,eps) = 1, (delta,delta) = -1",
    )


def _f4_datum() -> CartanDatum:
    # delta, eps_1, eps_2, eps_3 with (delta,delta) = 6 and (eps_i,eps_i) = -2
    roots = [
        [Fraction(1, 2), Fraction(-1, 2), Fraction(-1, 2), Fraction(-1, 2)],
        [0, 0, 0, 1],
        [0, 0, 1, -1],
        [0, 1, -1, 0],
    ]
    return _from_simple_roots(
        roots, np.diag([6, -2, -2, -2]).tolist(), 0, TypeTag.F4, "F(4)",
        "builtin: F(4) distinguished roots (delta - eps_1 - eps_2 - eps_3)/2, eps_3, eps_2 - eps_3, eps_1 - eps_2",
    )


def _g3_datum() -> CartanDatum:
    # delta, eps_1, eps_2 with eps_3 = -eps_1 - eps_2, (delta,delta) = 2, (eps_i,eps_j) = 1 - 3[i=j]
    roots = [[1, 1, 0], [0, 0, 1], [0, -1, -2]]
    gram = [[2, 0, 0], [0, -2, 1], [0, 1, -2]]
    return _from_simple_roots(
        roots, gram, 0, TypeTag.G3, "G(3)",
        "builtin: G(3) distinguished roots delta + eps_1, eps_2, eps_3 - eps_2",
    )


BUILTIN_FAMILIES = {
    "sl": lambda params: _sl_datum(int(params["m"]), int(params["n"])),
    "b0": lambda params: _b0_datum(int(params["n"])),
    "d21": lambda params: _d21_datum(params["alpha"]),
    "b": lambda params: _bmn_datum(int(params["m"]), int(params["n"])),
    "c": lambda params: _c_datum(int(params["n"])),
    "d": lambda params: _dmn_datum(int(params["m"]), int(params["n"])),
    "f4": lambda params: _f4_datum(),
    "g3": lambda params: _g3_datum(),
}


def builtin(type_tag: str, **params: Any) -> CartanDatum:
    """
    Built-in distinguished Cartan datum

    Args:
        type_tag: family name, one of sl, b0, d21, b, c, d, f4, g3
        params: m, n for sl, b and d; n for b0 and c; alpha for d21; none for f4 and g3

    Returns:
        A validated CartanDatum

    Raises:
        UnsupportedFamily: no table entry for the family
        InvalidDatum: parameters out of range
    """
    family = str(type_tag).lower()
    if family not in BUILTIN_FAMILIES:
        raise UnsupportedFamily(f"No built-in Cartan data for family {type_tag!r}")
    try:
        datum = BUILTIN_FAMILIES[family](params)
    except KeyError as exc:
        raise InvalidDatum(f"Family {family} needs parameter {exc.args[0]}") from None
    report = validate(datum)
    if not report.passed:
        raise InvalidDatum("; ".join(r.witness or r.label for r in report.failures()))
    logger.debug(f"Built-in datum {datum.label}: a={datum.a}, tau={sorted(datum.tau)}, d={datum.d}")
    return datum
