"""
Validation utilities for config files and command-line arguments
"""

from fractions import Fraction
from typing import Any, Dict, Mapping, Optional, Tuple

from algebra.errors import ConfigError, ScalarError
from algebra.scalars import to_fraction
from config import FAMILY_CHOICES, FAMILY_PARAMETERS


def _is_rational(value: Any) -> bool:
    try:
        to_fraction(value)
    except ScalarError:
        return False
    return True


def _is_index(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


class ConfigValidator:
    """Handles validation of Cartan data, bialgebra inputs and run options"""

    @staticmethod
    def check_cartan_config(mapping: Mapping[str, Any]) -> Tuple[bool, str, Optional[str]]:
        """
        Validate a Cartan config mapping before construction

        Args:
            mapping: parsed TOML or JSON table

        Returns:
            Tuple of (is_valid, error_message, offending_field)
        """
        if not isinstance(mapping, Mapping):
            return False, "Cartan config must be a table", None
        if "matrix" not in mapping:
            return False, "Missing field 'matrix'", "matrix"
        matrix = mapping["matrix"]
        if not isinstance(matrix, (list, tuple)) or not matrix:
            return False, "matrix must be a non-empty list of rows", "matrix"
        size = len(matrix)
        for row in matrix:
            if not isinstance(row, (list, tuple)) or len(row) != size:
                return False, f"matrix must be square with {size} columns per row", "matrix"
            if not all(_is_rational(x) for x in row):
                return False, f"matrix row {list(row)} holds a non-rational entry", "matrix"

        if "rank" in mapping and (not _is_index(mapping["rank"]) or mapping["rank"] != size):
            return False, f"rank {mapping['rank']!r} does not match the {size}x{size} matrix", "rank"

        if "d" not in mapping:
            return False, "Missing field 'd'", "d"
        d = mapping["d"]
        if not isinstance(d, (list, tuple)) or len(d) != size:
            return False, f"d must list {size} symmetrizers", "d"
        if not all(_is_rational(x) and to_fraction(x) != 0 for x in d):
            return False, "d entries must be non-zero rationals", "d"

        tau = mapping.get("tau", [])
        if not isinstance(tau, (list, tuple)):
            return False, "tau must be a list of 1-based indices", "tau"
        if len(tau) > 1:
            return False, "tau may name at most one odd simple root", "tau"
        if not all(_is_index(i) and 1 <= i <= size for i in tau):
            return False, f"tau indices must lie in 1..{size}", "tau"

        if "alpha" in mapping and not _is_rational(mapping["alpha"]):
            return False, f"alpha {mapping['alpha']!r} is not an exact rational", "alpha"
        return True, "", None

    @staticmethod
    def check_bialgebra_config(mapping: Mapping[str, Any]) -> Tuple[bool, str, Optional[str]]:
        """
        Validate a Lie superbialgebra config mapping

        Returns:
            Tuple of (is_valid, error_message, offending_field)
        """
        if not isinstance(mapping, Mapping):
            return False, "Bialgebra config must be a table", None
        parity = mapping.get("parity")
        if not isinstance(parity, (list, tuple)):
            return False, "Missing field 'parity'", "parity"
        if any(p not in (0, 1) for p in parity):
            return False, "parity entries must be 0 or 1", "parity"
        dim = len(parity)
        if "dim" in mapping and mapping["dim"] != dim:
            return False, f"dim {mapping['dim']!r} does not match {dim} parities", "dim"

        for key in ("bracket", "cobracket"):
            for entry in mapping.get(key, []):
                if not isinstance(entry, (list, tuple)) or len(entry) != 4:
                    return False, f"{key} entry {entry!r} needs [i, j, k, coeff]", key
                if not all(_is_index(x) and 0 <= x < dim for x in entry[:3]):
                    return False, f"{key} entry {list(entry)} has an index outside 0..{dim - 1}", key
                if not _is_rational(entry[3]):
                    return False, f"{key} entry {list(entry)} has a non-rational coefficient", key

        for entry in mapping.get("r", []):
            if not isinstance(entry, (list, tuple)) or len(entry) != 3:
                return False, f"r entry {entry!r} needs [i, j, coeff]", "r"
            if not all(_is_index(x) and 0 <= x < dim for x in entry[:2]) or not _is_rational(entry[2]):
                return False, f"r entry {list(entry)} is out of range or not rational", "r"

        names = mapping.get("names", [])
        if names and len(names) != dim:
            return False, "names must list one name per basis element", "names"
        return True, "", None

    @staticmethod
    def require(result: Tuple[bool, str, Optional[str]]) -> None:
        """Raise ConfigError for a failed check"""
        ok, message, field = result
        if not ok:
            raise ConfigError(message, field=field)

    @staticmethod
    def validate_cap(cap: int, name: str = "cap") -> Tuple[bool, str]:
        if not _is_index(cap) or cap < 1:
            return False, f"{name} must be an integer >= 1, got {cap!r}"
        return True, ""

    @staticmethod
    def validate_family(family: str, params: Mapping[str, Any]) -> Tuple[bool, str]:
        """
        Validate a built-in family name and its parameters

        Args:
            family: family name
            params: parsed --m / --n / --alpha values, None when absent

        Returns:
            Tuple of (is_valid, error_message)
        """
        if family not in FAMILY_CHOICES:
            return False, f"Unknown family {family!r}; choose one of {', '.join(FAMILY_CHOICES)}"
        missing = [name for name in FAMILY_PARAMETERS[family] if params.get(name) is None]
        if missing:
            return False, f"Family {family} needs --{' --'.join(missing)}"
        return True, ""

    @staticmethod
    def family_params(family: str, values: Mapping[str, Any]) -> Dict[str, Any]:
        """Keep only the parameters the family uses"""
        params: Dict[str, Any] = {}
        for name in FAMILY_PARAMETERS.get(family, ()):
            value = values.get(name)
            params[name] = parse_rational_option(value, name) if name == "alpha" else value
        return params


def parse_weight(text: str, s: Optional[int] = None) -> Tuple[int, ...]:
    """
    Parse a weight such as "1,2,1"

    Args:
        text: comma-separated non-negative integers
        s: expected rank

    Returns:
        The weight tuple

    Raises:
        ConfigError: malformed entries or wrong length
    """
    parts = [part.strip() for part in str(text).split(",") if part.strip()]
    try:
        weight = tuple(int(part) for part in parts)
    except ValueError:
        raise ConfigError(f"Weight {text!r} must be comma-separated integers", field="weight") from None
    if not weight or any(x < 0 for x in weight):
        raise ConfigError(f"Weight {text!r} must be non-empty and non-negative", field="weight")
    if s is not None and len(weight) != s:
        raise ConfigError(f"Weight {text!r} has {len(weight)} entries, the datum has rank {s}", field="weight")
    return weight


def parse_rational_option(value: Any, name: str) -> Fraction:
    try:
        return to_fraction(value)
    except ScalarError:
        raise ConfigError(f"{name} {value!r} is not an exact rational", field=name) from None
