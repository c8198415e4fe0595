"""
Configuration settings for superquant
"""

from typing import Any, Dict, List, Tuple

# App Configuration
APP_CONFIG = {
    "prog": "superquant",
    "description": "Exact verification of quantized Lie superbialgebra structures",
    "version": "0.1.0",
}

# Logging Configuration
LOG_LEVEL = "INFO"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# Computation Configuration
FORM_DEGREE_CAP = 6  # Largest total degree for Gram blocks
DEFAULT_SERRE_CAP = 4  # Default cap for kernel checks
PBW_DEGREE_CAP = 4  # PBW truncation for the h-adic checks
MAX_WORKERS = 4  # Maximum number of concurrent check tasks

# Exit Codes
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT_ERROR = 2

# Built-in Families
FAMILY_CHOICES = ["sl", "b0", "d21", "b", "c", "d", "f4", "g3"]
FAMILY_PARAMETERS = {
    "sl": ("m", "n"),
    "b0": ("n",),
    "d21": ("alpha",),
    "b": ("m", "n"),
    "c": ("n",),
    "d": ("m", "n"),
    "f4": (),
    "g3": (),
}

# Chart Configuration
CHART_HEIGHT = 500
CHART_COLORS = ['#1f77b4', '#ff7f0e', '#2ca02c', '#d62728']

# Seed Lie superbialgebras (0-based basis positions, entries [i, j, k, coeff])
SEED_BIALGEBRAS: Dict[str, Dict[str, Any]] = {
    "abelian_even": {
        "dim": 1, "parity": [0], "names": ["p"],
        "bracket": [], "cobracket": [],
    },
    "abelian_odd": {
        "dim": 1, "parity": [1], "names": ["x"],
        "bracket": [], "cobracket": [],
    },
    "sl2_borel": {
        "dim": 2, "parity": [0, 0], "names": ["h", "e"],
        "bracket": [[0, 1, 1, 2], [1, 0, 1, -2]],
        "cobracket": [[1, 0, 1, "1/2"], [1, 1, 0, "-1/2"]],
    },
    "mixed_1_1": {
        "dim": 2, "parity": [0, 1], "names": ["h", "x"],
        "bracket": [[0, 1, 1, 1], [1, 0, 1, -1]],
        "cobracket": [[0, 1, 1, 2]],
    },
}

# Quasitriangular inputs (r given as [i, j, coeff])
QUASITRIANGULAR_SEEDS: Dict[str, Dict[str, Any]] = {
    "abelian_even": dict(SEED_BIALGEBRAS["abelian_even"], r=[]),
    "sl2_borel_jordanian": {
        "dim": 2, "parity": [0, 0], "names": ["h", "e"],
        "bracket": [[0, 1, 1, 2], [1, 0, 1, -2]],
        "cobracket": [[0, 0, 1, 2], [0, 1, 0, -2]],
        "r": [[0, 1, 1], [1, 0, -1]],
    },
    "mixed_1_1": dict(SEED_BIALGEBRAS["mixed_1_1"], r=[[1, 1, 1]]),
}

# Suite Corpus
SUITE_KERNEL_MEMBERSHIP: List[Dict[str, Any]] = [
    {"family": "sl", "m": 2, "n": 1},
    {"family": "sl", "m": 2, "n": 2},
    {"family": "sl", "m": 3, "n": 2},
    {"family": "b0", "n": 2},
]
SUITE_KERNEL_GENERATION: List[Tuple[Dict[str, Any], int]] = [
    ({"family": "sl", "m": 2, "n": 1}, 5),
    ({"family": "sl", "m": 2, "n": 2}, 4),
]
SUITE_MATRIX_MODELS: List[Tuple[int, int]] = [(2, 1), (2, 2), (3, 1)]
SUITE_QUOTIENT_CAP = 4
SUITE_BINOMIAL_RANGE = 8
