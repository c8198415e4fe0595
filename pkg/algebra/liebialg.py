"""
Finite-dimensional Lie superbialgebras by structure constants: axiom checks,
the double with its canonical r-matrix and Casimir, CYB and the map upsilon
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from algebra.errors import AxiomFailure, ConfigError, NotQuasitriangular, ScalarError
from algebra.reports import ValidationReport, VerificationReport
from algebra.scalars import to_fraction
from utils.linalg import invert_rational

logger = logging.getLogger(__name__)

Entry = Tuple[int, int, int, Any]


def _zeros(*shape: int) -> np.ndarray:
    return np.full(shape, Fraction(0), dtype=object)


def _is_zero(array: np.ndarray) -> bool:
    return not np.any(array != 0)


def koszul(p: int, q: int) -> int:
    return -1 if p and q else 1


def _nonzero(array: np.ndarray):
    return zip(*np.nonzero(array != 0))


@dataclass(eq=False)
class LieSBA:
    """
    Lie superbialgebra with bracket[i, j, k] = c_ij^k and cobracket[i, j, k] = delta_i^jk,
    so that [e_i, e_j] = sum_k c_ij^k e_k and delta(e_i) = sum_jk delta_i^jk e_j (x) e_k
    """

    parity: Tuple[int, ...]
    bracket: np.ndarray
    cobracket: np.ndarray
    names: Tuple[str, ...] = ()
    form: Optional[np.ndarray] = None

    def __post_init__(self):
        if not self.names:
            self.names = tuple(f"e{i + 1}" for i in range(self.dim))

    @property
    def dim(self) -> int:
        return len(self.parity)

    @classmethod
    def from_structure(cls, parity: Sequence[int], bracket: Sequence[Entry] = (),
                       cobracket: Sequence[Entry] = (), names: Sequence[str] = ()) -> "LieSBA":
        """
        Build from sparse structure constants

        Args:
            parity: 0/1 per basis element
            bracket: [i, j, k, c] entries of c_ij^k (0-based)
            cobracket: [i, j, k, c] entries of delta_i^jk (0-based)
            names: optional basis names

        Returns:
            LieSBA; every entry is stored as given, no antisymmetric partner is added
        """
        dim = len(parity)
        arrays = []
        for label, entries in (("bracket", bracket), ("cobracket", cobracket)):
            array = _zeros(dim, dim, dim)
            for entry in entries:
                if len(entry) != 4:
                    raise ConfigError(f"{label} entry {list(entry)} needs [i, j, k, coeff]", field=label)
                i, j, k, coeff = entry
                if not all(isinstance(x, int) and 0 <= x < dim for x in (i, j, k)):
                    raise ConfigError(f"{label} entry {list(entry)} has an index outside 0..{dim - 1}", field=label)
                try:
                    array[i, j, k] += to_fraction(coeff)
                except ScalarError as exc:
                    raise ConfigError(str(exc), field=label) from None
            arrays.append(array)
        return cls(tuple(int(p) for p in parity), arrays[0], arrays[1], tuple(names))

    @classmethod
    def from_config(cls, mapping: Mapping[str, Any]) -> "LieSBA":
        if "parity" not in mapping:
            raise ConfigError("Missing field 'parity'", field="parity")
        parity = list(mapping["parity"])
        if any(p not in (0, 1) for p in parity):
            raise ConfigError("parity entries must be 0 or 1", field="parity")
        if "dim" in mapping and int(mapping["dim"]) != len(parity):
            raise ConfigError(f"dim {mapping['dim']} does not match {len(parity)} parities", field="dim")
        names = list(mapping.get("names", []))
        if names and len(names) != len(parity):
            raise ConfigError("names must list one name per basis element", field="names")
        return cls.from_structure(parity, mapping.get("bracket", []), mapping.get("cobracket", []), names)

    def to_config(self) -> Dict[str, Any]:
        return {
            "dim": self.dim,
            "parity": list(self.parity),
            "names": list(self.names),
            "bracket": [[int(i), int(j), int(k), str(self.bracket[i, j, k])] for i, j, k in _nonzero(self.bracket)],
            "cobracket": [[int(i), int(j), int(k), str(self.cobracket[i, j, k])]
                          for i, j, k in _nonzero(self.cobracket)],
        }

    def unit(self, i: int) -> np.ndarray:
        vector = _zeros(self.dim)
        vector[i] = Fraction(1)
        return vector

    def bracket_vectors(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return np.tensordot(v, np.tensordot(u, self.bracket, axes=(0, 0)), axes=(0, 0))

    def ad_tensor(self, i: int, tensor: np.ndarray) -> np.ndarray:
        """[e_i (x) 1 + 1 (x) e_i, T] for a two-tensor T with Koszul signs"""
        first = np.tensordot(self.bracket[i], tensor, axes=([0], [0]))
        signs = np.array([koszul(self.parity[i], p) for p in self.parity], dtype=object)
        second = signs[:, None] * tensor.dot(self.bracket[i])
        return first + second

    def flip(self, tensor: np.ndarray) -> np.ndarray:
        """tau(a (x) b) = (-1)^{p(a)p(b)} b (x) a"""
        result = _zeros(self.dim, self.dim)
        for a, b in _nonzero(tensor):
            result[b, a] += koszul(self.parity[a], self.parity[b]) * tensor[a, b]
        return result


def _first_parity_violation(g: LieSBA, array: np.ndarray, cobracket: bool) -> Optional[Tuple[int, int, int]]:
    for i, j, k in _nonzero(array):
        p = g.parity
        if (p[j] + p[k] - p[i]) % 2 if cobracket else (p[i] + p[j] - p[k]) % 2:
            return int(i), int(j), int(k)
    return None


def check_lie(g: LieSBA) -> ValidationReport:
    """
    Parity, super-antisymmetry and super-Jacobi over all basis tuples

    Returns:
        Report; failures carry the first witness tuple by basis name
    """
    report = ValidationReport("Lie superalgebra axioms")
    names = g.names
    violation = _first_parity_violation(g, g.bracket, cobracket=False)
    report.add("bracket_parity", violation is None,
               None if violation is None else f"[{names[violation[0]]},{names[violation[1]]}] has a {names[violation[2]]} term of the wrong parity")

    witness = next(
        ((i, j) for i, j in itertools.product(range(g.dim), repeat=2)
         if not _is_zero(g.bracket[i, j] + koszul(g.parity[i], g.parity[j]) * g.bracket[j, i])),
        None,
    )
    report.add("antisymmetry", witness is None,
               None if witness is None else f"({names[witness[0]]},{names[witness[1]]})")

    witness = None
    for i, j, k in itertools.product(range(g.dim), repeat=3):
        x, y, z = g.unit(i), g.unit(j), g.unit(k)
        lhs = g.bracket_vectors(x, g.bracket[j, k])
        rhs = (g.bracket_vectors(g.bracket[i, j], z)
               + koszul(g.parity[i], g.parity[j]) * g.bracket_vectors(y, g.bracket[i, k]))
        if not _is_zero(lhs - rhs):
            witness = (i, j, k)
            break
    report.add("jacobi", witness is None,
               None if witness is None else f"({names[witness[0]]},{names[witness[1]]},{names[witness[2]]})")
    return report


def _cyclic(g: LieSBA, tensor: np.ndarray) -> np.ndarray:
    """xi(a (x) b (x) c) = (-1)^{p(a)(p(b)+p(c))} b (x) c (x) a"""
    result = _zeros(g.dim, g.dim, g.dim)
    p = g.parity
    for a, b, c in _nonzero(tensor):
        sign = -1 if p[a] and (p[b] + p[c]) % 2 else 1
        result[b, c, a] += sign * tensor[a, b, c]
    return result


def co_jacobi_defect(g: LieSBA, i: int) -> np.ndarray:
    """(1 + xi + xi^2)(delta (x) 1) delta(e_i)"""
    iterated = np.tensordot(g.cobracket[i], g.cobracket, axes=([0], [0])).transpose(1, 2, 0)
    once = _cyclic(g, iterated)
    return iterated + once + _cyclic(g, once)


def check_bialgebra(g: LieSBA) -> ValidationReport:
    """
    Staged check: Lie axioms first, then co-antisymmetry, co-Jacobi and the cocycle condition

    Returns:
        Report; when the Lie stage fails, only its results are listed
    """
    report = ValidationReport("Lie superbialgebra axioms")
    report.extend(check_lie(g), prefix="lie:")
    if not report.passed:
        logger.warning("Lie axioms fail; bialgebra stage skipped")
        return report
    names = g.names

    violation = _first_parity_violation(g, g.cobracket, cobracket=True)
    report.add("cobracket_parity", violation is None,
               None if violation is None else f"delta({names[violation[0]]}) has a term of the wrong parity")

    witness = next(
        (i for i in range(g.dim) if not _is_zero(g.cobracket[i] + g.flip(g.cobracket[i]))),
        None,
    )
    report.add("co_antisymmetry", witness is None, None if witness is None else names[witness])

    witness = next((i for i in range(g.dim) if not _is_zero(co_jacobi_defect(g, i))), None)
    report.add("co_jacobi", witness is None, None if witness is None else names[witness])

    witness = None
    for i, j in itertools.product(range(g.dim), repeat=2):
        lhs = np.tensordot(g.bracket[i, j], g.cobracket, axes=(0, 0))
        rhs = g.ad_tensor(i, g.cobracket[j]) - koszul(g.parity[i], g.parity[j]) * g.ad_tensor(j, g.cobracket[i])
        if not _is_zero(lhs - rhs):
            witness = (i, j)
            break
    report.add("cocycle", witness is None,
               None if witness is None else f"({names[witness[0]]},{names[witness[1]]})")
    return report


def partial_r(g: LieSBA, r: np.ndarray) -> np.ndarray:
    """The cobracket x -> [x (x) 1 + 1 (x) x, r] as an array [x, a, b]"""
    result = _zeros(g.dim, g.dim, g.dim)
    for i in range(g.dim):
        result[i] = g.ad_tensor(i, r)
    return result


def is_invariant(g: LieSBA, tensor: np.ndarray) -> Optional[int]:
    """
    Returns:
        None if [x (x) 1 + 1 (x) x, T] = 0 for every basis x, else the first failing index
    """
    return next((i for i in range(g.dim) if not _is_zero(g.ad_tensor(i, tensor))), None)


def cyb(r: np.ndarray, g: LieSBA) -> np.ndarray:
    """[r12, r13] + [r12, r23] + [r13, r23] for an even two-tensor r"""
    p = g.parity
    result = _zeros(g.dim, g.dim, g.dim)
    support = list(_nonzero(r))
    for (a, b), (c, d) in itertools.product(support, repeat=2):
        coeff = r[a, b] * r[c, d]
        # [r12, r13]: [a, c] (x) b (x) d
        result[:, b, d] += koszul(p[a], p[c]) * coeff * g.bracket[a, c]
        # [r12, r23]: a (x) [b, c] (x) d
        result[a, :, d] += coeff * g.bracket[b, c]
        # [r13, r23]: a (x) c (x) [b, d]
        result[a, c, :] += koszul(p[a], p[c]) * coeff * g.bracket[b, d]
    return result


def tensor_parity_ok(g: LieSBA, tensor: np.ndarray) -> bool:
    return all(g.parity[a] == g.parity[b] for a, b in _nonzero(tensor))


@dataclass(eq=False)
class DoubleData:
    """The double g+ (+) g+* with basis p_1..p_n, m_1..m_n, r = sum p_i (x) m_i and Omega = r + tau(r)"""

    g: LieSBA
    n_plus: int
    r: np.ndarray
    omega: np.ndarray
    source: Optional[LieSBA] = field(default=None, repr=False)

    @property
    def plus_basis(self) -> range:
        return range(self.n_plus)

    @property
    def minus_basis(self) -> range:
        return range(self.n_plus, 2 * self.n_plus)

    def to_dict(self) -> Dict[str, Any]:
        names = self.g.names
        return {
            "dim": self.g.dim,
            "basis": list(names),
            "parity": list(self.g.parity),
            "bracket": self.g.to_config()["bracket"],
            "cobracket": self.g.to_config()["cobracket"],
            "r": [[names[a], names[b], str(self.r[a, b])] for a, b in _nonzero(self.r)],
            "omega": [[names[a], names[b], str(self.omega[a, b])] for a, b in _nonzero(self.omega)],
        }


def _double_bracket(g_plus: LieSBA) -> np.ndarray:
    n = g_plus.dim
    p = g_plus.parity
    c, delta = g_plus.bracket, g_plus.cobracket
    bracket = _zeros(2 * n, 2 * n, 2 * n)
    bracket[:n, :n, :n] = c
    for j, k in itertools.product(range(n), repeat=2):
        sign = koszul(p[j], p[k])
        for i in range(n):
            if delta[i, j, k]:
                bracket[n + j, n + k, n + i] += sign * delta[i, j, k]
    for i, j in itertools.product(range(n), repeat=2):
        sign = koszul(p[i], p[j])
        for k in range(n):
            bracket[i, n + j, k] += sign * delta[i, j, k]
            bracket[i, n + j, n + k] -= sign * c[i, k, j]
        bracket[n + j, i] = -sign * bracket[i, n + j]
    return bracket


def double(g_plus: LieSBA) -> DoubleData:
    """
    Build the double of a Lie superbialgebra

    Args:
        g_plus: a Lie superbialgebra passing check_bialgebra

    Returns:
        DoubleData whose LieSBA carries the cobracket of r

    Raises:
        AxiomFailure: the input fails its axioms or the double fails super-Jacobi
    """
    staged = check_bialgebra(g_plus)
    if not staged.passed:
        first = staged.failures()[0]
        raise AxiomFailure(f"Input fails {first.label}", witness=first.witness)

    n = g_plus.dim
    parity = g_plus.parity + g_plus.parity
    names = g_plus.names + tuple(f"{name}*" for name in g_plus.names)
    r = _zeros(2 * n, 2 * n)
    omega = _zeros(2 * n, 2 * n)
    for i in range(n):
        r[i, n + i] = Fraction(1)
        omega[i, n + i] = Fraction(1)
        omega[n + i, i] = Fraction(-1 if g_plus.parity[i] else 1)

    g = LieSBA(parity, _double_bracket(g_plus), _zeros(2 * n, 2 * n, 2 * n), names)
    lie = check_lie(g)
    if not lie.passed:
        first = lie.failures()[0]
        raise AxiomFailure(f"The double fails {first.label}", witness=first.witness)
    g.cobracket = partial_r(g, r)
    logger.info(f"Double of a {n}-dimensional bialgebra built: dim {2 * n}")
    return DoubleData(g, n, r, omega, g_plus)


def cobracket_of(dd: DoubleData, i: int) -> np.ndarray:
    return dd.g.cobracket[i]


def structural_cobracket(g_plus: LieSBA) -> np.ndarray:
    """
    Cobracket of the double read off the input alone: delta on g+, and on g- minus the
    super dual of the bracket, delta(m_k) = -sum_ab (-1)^{p_a p_b} c_ab^k m_a (x) m_b
    """
    n = g_plus.dim
    p = g_plus.parity
    result = _zeros(2 * n, 2 * n, 2 * n)
    result[:n, :n, :n] = g_plus.cobracket
    for a, b, k in _nonzero(g_plus.bracket):
        result[n + k, n + a, n + b] -= koszul(p[a], p[b]) * g_plus.bracket[a, b, k]
    return result


def _first_block_mismatch(actual: np.ndarray, expected: np.ndarray, rows: range) -> Optional[Tuple[int, int, int]]:
    for i in rows:
        difference = actual[i] - expected[i]
        if not _is_zero(difference):
            a, b = next(_nonzero(difference))
            return i, int(a), int(b)
    return None


def casimir_checks(dd: DoubleData, omega: Optional[np.ndarray] = None) -> ValidationReport:
    """Omega even, tau(Omega) = Omega and [x (x) 1 + 1 (x) x, Omega] = 0 on every basis x"""
    omega = dd.omega if omega is None else omega
    g = dd.g
    report = ValidationReport("Casimir element")
    report.add("even", tensor_parity_ok(g, omega), None if tensor_parity_ok(g, omega) else "odd component")
    symmetric = _is_zero(g.flip(omega) - omega)
    report.add("supersymmetric", symmetric, None if symmetric else "tau(Omega) != Omega")
    witness = is_invariant(g, omega)
    report.add("invariant", witness is None, None if witness is None else g.names[witness])
    return report


def verify_double(dd: DoubleData) -> VerificationReport:
    """
    Double axioms: the brackets on g+ and g- against the input, the cobracket of r on both halves
    against the input, CYB(r) = 0, the bialgebra axioms and the Casimir
    """
    g, n = dd.g, dd.n_plus
    report = VerificationReport(f"double of dimension {g.dim}")
    report.info["basis"] = list(g.names)
    names = g.names
    source = dd.source
    if source is not None:
        p = source.parity
        ok = _is_zero(g.bracket[:n, :n, :n] - source.bracket) and _is_zero(g.bracket[:n, :n, n:])
        report.add("restriction_plus", ok, None if ok else "bracket on g+ differs from the input")
        witness = next(
            ((j, k) for j, k in itertools.product(range(n), repeat=2)
             if not _is_zero(g.bracket[n + j, n + k, n:] - koszul(p[j], p[k]) * source.cobracket[:, j, k])
             or not _is_zero(g.bracket[n + j, n + k, :n])),
            None,
        )
        report.add("restriction_minus", witness is None,
                   None if witness is None else f"[{names[n + witness[0]]},{names[n + witness[1]]}] differs from the dual of delta")

        expected = structural_cobracket(source)
        for label, rows in (("cobracket_plus", dd.plus_basis), ("cobracket_minus", dd.minus_basis)):
            mismatch = _first_block_mismatch(g.cobracket, expected, rows)
            report.add(label, mismatch is None,
                       None if mismatch is None else f"delta({names[mismatch[0]]}) at {names[mismatch[1]]} (x) {names[mismatch[2]]}")
    defect = cyb(dd.r, g)
    ok = _is_zero(defect)
    witness = None if ok else next(_nonzero(defect))
    report.add("cyb", ok, None if ok else "(" + ",".join(g.names[x] for x in witness) + ")")
    report.extend(check_bialgebra(g), prefix="bialgebra:")
    report.extend(casimir_checks(dd), prefix="casimir:")
    return report


def change_basis(g: LieSBA, P: Sequence[Sequence[Any]]) -> LieSBA:
    """
    Structure constants in the basis f_i = sum_j P[i][j] e_j

    Raises:
        ValueError: P mixes parities
    """
    P = np.array([[to_fraction(x) for x in row] for row in P], dtype=object)
    if any(g.parity[i] != g.parity[j] for i, j in _nonzero(P)):
        raise ValueError("Change of basis must preserve parity")
    Q = np.array(invert_rational(P.tolist()), dtype=object)
    bracket = _transform_bracket(g.bracket, P, Q)
    cobracket = _transform_cobracket(g.cobracket, P, Q)
    names = tuple(f"f{i + 1}" for i in range(g.dim))
    return LieSBA(g.parity, bracket, cobracket, names)


def _transform_bracket(c: np.ndarray, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    step = np.tensordot(P, c, axes=([1], [0]))            # [i, b, k]
    step = np.tensordot(P, step, axes=([1], [1]))         # [j, i, k]
    step = np.tensordot(step, Q, axes=([2], [0]))         # [j, i, l]
    return step.transpose(1, 0, 2)


def _transform_cobracket(delta: np.ndarray, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    step = np.tensordot(P, delta, axes=([1], [0]))        # [i, b, c]
    step = np.tensordot(step, Q, axes=([1], [0]))         # [i, c, l]
    step = np.tensordot(step, Q, axes=([1], [0]))         # [i, l, l']
    return step


def omega_in_original_basis(dd_new: DoubleData, P: Sequence[Sequence[Any]]) -> np.ndarray:
    """Express the Casimir of double(change_basis(g, P)) in the double basis of g"""
    n = dd_new.n_plus
    P = np.array([[to_fraction(x) for x in row] for row in P], dtype=object)
    Q = np.array(invert_rational(P.tolist()), dtype=object)
    T = _zeros(2 * n, 2 * n)
    T[:n, :n] = P
    T[n:, n:] = Q.T
    return T.T.dot(dd_new.omega).dot(T)


@dataclass(eq=False)
class UpsilonMap:
    """Linear map from the double onto g+ as a matrix [double index, g+ index]"""

    matrix: np.ndarray
    dd: DoubleData

    def __call__(self, vector: np.ndarray) -> np.ndarray:
        return vector.dot(self.matrix)

    def image(self, i: int) -> np.ndarray:
        return self.matrix[i]


def upsilon(g_plus: LieSBA, r_plus: np.ndarray) -> Tuple[UpsilonMap, VerificationReport]:
    """
    The map x + f -> -x - (contraction of f with the first leg of r_plus)

    Args:
        g_plus: Lie superbialgebra
        r_plus: two-tensor on g+ whose cobracket is the cobracket of g+

    Returns:
        (map, report) with homomorphism up to the recorded sign and (upsilon (x) upsilon)(r) = r_plus

    Raises:
        NotQuasitriangular: CYB(r_plus) != 0, r_plus + tau(r_plus) not invariant, or delta != [., r_plus]
    """
    r_plus = np.array(r_plus, dtype=object)
    if not tensor_parity_ok(g_plus, r_plus):
        raise NotQuasitriangular("r is not even")
    if not _is_zero(cyb(r_plus, g_plus)):
        raise NotQuasitriangular("CYB(r) != 0")
    if is_invariant(g_plus, r_plus + g_plus.flip(r_plus)) is not None:
        raise NotQuasitriangular("r + tau(r) is not invariant")
    if not _is_zero(partial_r(g_plus, r_plus) - g_plus.cobracket):
        raise NotQuasitriangular("The cobracket is not the cobracket of r")

    dd = double(g_plus)
    n = g_plus.dim
    matrix = _zeros(2 * n, n)
    for i in range(n):
        matrix[i, i] = Fraction(-1)
        matrix[n + i] = -r_plus[i]
    ups = UpsilonMap(matrix, dd)

    report = VerificationReport("upsilon")
    sign = restriction_sign(ups, g_plus)
    report.info["restriction_sign"] = sign
    report.add("restriction", sign is not None,
               None if sign is not None else "upsilon on g+ is not a multiple of the identity", sign=sign)
    names = dd.g.names
    witness = homomorphism_witness(ups, g_plus, sign or 1)
    report.add("homomorphism", witness is None,
               None if witness is None else f"({names[witness[0]]},{names[witness[1]]})", sign=sign)
    pushed = matrix.T.dot(dd.r).dot(matrix)
    ok = _is_zero(pushed - r_plus)
    report.add("r_preserved", ok, None if ok else "(upsilon (x) upsilon)(r) != r+")
    return ups, report


def restriction_sign(ups: UpsilonMap, g_plus: LieSBA) -> Optional[int]:
    """The s in {1, -1} with upsilon(x) = s x on g+, measured from the map; None if there is none"""
    for sign in (1, -1):
        if all(_is_zero(ups.image(i) - g_plus.unit(i) * sign) for i in range(g_plus.dim)):
            return sign
    return None


def homomorphism_witness(ups: UpsilonMap, g_plus: LieSBA, sign: int) -> Optional[Tuple[int, int]]:
    """First basis pair (a, b) of the double with upsilon([a, b]) != sign [upsilon(a), upsilon(b)]"""
    bracket = ups.dd.g.bracket
    for a, b in itertools.product(range(ups.dd.g.dim), repeat=2):
        lhs = ups(bracket[a, b])
        rhs = g_plus.bracket_vectors(ups.image(a), ups.image(b)) * sign
        if not _is_zero(lhs - rhs):
            return a, b
    return None


def r_from_entries(dim: int, entries: Sequence[Sequence[Any]]) -> np.ndarray:
    r = _zeros(dim, dim)
    for entry in entries:
        if len(entry) != 3:
            raise ConfigError(f"r entry {list(entry)} needs [i, j, coeff]", field="r")
        i, j, coeff = entry
        if not (0 <= int(i) < dim and 0 <= int(j) < dim):
            raise ConfigError(f"r entry {list(entry)} has an index outside 0..{dim - 1}", field="r")
        r[int(i), int(j)] += to_fraction(coeff)
    return r
