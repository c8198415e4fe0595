"""
Loader module for Cartan data and Lie superbialgebra inputs
"""

import json
import logging
from functools import lru_cache
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from algebra.cartan import CartanDatum, builtin
from algebra.errors import ConfigError
from algebra.liebialg import LieSBA, r_from_entries
from config import QUASITRIANGULAR_SEEDS, SEED_BIALGEBRAS
from utils.validators import ConfigValidator

logger = logging.getLogger(__name__)


@lru_cache(maxsize=32)
def _cached_builtin(family: str, params: Tuple[Tuple[str, Any], ...]) -> CartanDatum:
    return builtin(family, **dict(params))


class DatumLoader:
    """Handles reading config tables and resolving Cartan data and bialgebras"""

    def __init__(self):
        self.error_log: List[str] = []

    def read_table(self, path: str) -> Dict[str, Any]:
        """
        Read a structured key-value file, trying TOML and JSON in order of the suffix

        Args:
            path: config file path

        Returns:
            Parsed mapping

        Raises:
            ConfigError: the file is missing or no reader accepts it
        """
        file = Path(path)
        if not file.is_file():
            raise ConfigError(f"Config file not found: {path}", field="config")

        self.error_log.clear()
        readers: List[Tuple[str, Callable[[str], Dict[str, Any]]]] = [
            ("toml", tomllib.loads),
            ("json", json.loads),
        ]
        if file.suffix.lower() == ".json":
            readers.reverse()

        text = file.read_text(encoding="utf-8")
        for source_type, reader in readers:
            try:
                table = reader(text)
                if isinstance(table, dict):
                    logger.info(f"Read {path} as {source_type}")
                    return table
                self.error_log.append(f"{source_type.upper()} reader: top level is not a table")
            except (tomllib.TOMLDecodeError, json.JSONDecodeError) as e:
                error_msg = f"{source_type.upper()} reader: {e}"
                self.error_log.append(error_msg)
                logger.warning(error_msg)

        logger.error(f"No reader accepted {path}: {'; '.join(self.error_log)}")
        raise ConfigError(f"Cannot parse {path}: {'; '.join(self.error_log)}", field="config")

    def datum_from_mapping(self, mapping: Mapping[str, Any], provenance: str = "config") -> CartanDatum:
        """Validate then build a Cartan datum; a nested [cartan] table is accepted"""
        table = mapping.get("cartan", mapping) if isinstance(mapping, Mapping) else mapping
        ConfigValidator.require(ConfigValidator.check_cartan_config(table))
        return CartanDatum.from_config(table, provenance=provenance)

    def load_datum(self, family: Optional[str] = None, params: Optional[Mapping[str, Any]] = None,
                   config_path: Optional[str] = None) -> CartanDatum:
        """
        Resolve a Cartan datum from a config file or a built-in family

        Args:
            family: built-in family name
            params: family parameters
            config_path: TOML/JSON file with a Cartan table

        Returns:
            Validated CartanDatum
        """
        if config_path:
            datum = self.datum_from_mapping(self.read_table(config_path), provenance=f"config: {config_path}")
        elif family:
            ok, message = ConfigValidator.validate_family(family, params or {})
            if not ok:
                raise ConfigError(message, field="family")
            resolved = ConfigValidator.family_params(family, params or {})
            datum = _cached_builtin(family, tuple(sorted(resolved.items())))
        else:
            raise ConfigError("Give --family or --config", field="family")
        logger.info(f"Datum resolved: {datum.label} ({datum.provenance})")
        return datum

    def bialgebra_from_mapping(self, mapping: Mapping[str, Any]) -> Tuple[LieSBA, Optional[np.ndarray]]:
        """Build a LieSBA and its optional r-matrix from a validated mapping"""
        table = mapping.get("bialgebra", mapping) if isinstance(mapping, Mapping) else mapping
        ConfigValidator.require(ConfigValidator.check_bialgebra_config(table))
        g = LieSBA.from_config(table)
        r = r_from_entries(g.dim, table["r"]) if "r" in table else None
        return g, r

    def load_bialgebra(self, input_path: Optional[str] = None,
                       seed: Optional[str] = None) -> Tuple[str, LieSBA, Optional[np.ndarray]]:
        """
        Resolve a Lie superbialgebra input

        Args:
            input_path: TOML/JSON file with a bialgebra table
            seed: name of a built-in seed bialgebra

        Returns:
            Tuple of (name, bialgebra, r-matrix or None)
        """
        if input_path:
            g, r = self.bialgebra_from_mapping(self.read_table(input_path))
            return Path(input_path).stem, g, r
        if seed:
            table = QUASITRIANGULAR_SEEDS.get(seed) or SEED_BIALGEBRAS.get(seed)
            if table is None:
                known = sorted(set(SEED_BIALGEBRAS) | set(QUASITRIANGULAR_SEEDS))
                raise ConfigError(f"Unknown seed {seed!r}; known seeds: {', '.join(known)}", field="seed")
            g, r = self.bialgebra_from_mapping(table)
            return seed, g, r
        raise ConfigError("Give --input or --seed", field="input")
