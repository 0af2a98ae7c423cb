import logging
import os
from pathlib import Path
from typing import TypeAlias

from CPAkit.logging_context import LoggingContext
from CPAkit.utils.core_utils import read_config

FileName: TypeAlias = str | bytes | os.PathLike

DEFAULT_CONFIG_FILE = Path(__file__).parent / "config.toml"
defaults = read_config(DEFAULT_CONFIG_FILE)

# Truncation
DEFAULT_NORM_TOL = defaults["Cutoff"]["norm_tol"]
DEFAULT_TAIL_TOL = defaults["Cutoff"]["tail_tol"]
AUTO_CUTOFF_BOUNDS = (defaults["Cutoff"]["auto_min"], defaults["Cutoff"]["auto_max"])
MAX_TOLERANCE = 1e-3

# Numerical guards, sized on the double-precision eigensolver noise floor
HERMITICITY_TOL = 1e-10
PSD_SLACK = 1e-9
ZERO_NORM_THRESHOLD = 1e-24
SCHMIDT_CLIP = 1e-14
NEGATIVE_EIGENVALUE_CLIP = 1e-12
IMAGINARY_RESIDUE_TOL = 1e-10
ZERO_CLICK_THRESHOLD = 1e-18
MAX_MU_MAGNITUDE = 1e6

# Heralded addition
DEFAULT_GAIN = defaults["Herald"]["gain"]
DEFAULT_HERALD_EFFICIENCY = defaults["Herald"]["herald_efficiency"]
DEFAULT_PUMP_ANGLE = defaults["Herald"]["pump_angle"]
MAX_GAIN = defaults["Herald"]["max_gain"]
IDLER_CUTOFF = defaults["Herald"]["idler_cutoff"]

# Phase space
HOMODYNE_WINDOW = (defaults["Homodyne"]["x_min"], defaults["Homodyne"]["x_max"])
HOMODYNE_POINTS = defaults["Homodyne"]["points"]
WIGNER_GRID_DEFAULTS = defaults["Wigner"]

CSV_FLOAT_FORMAT = "%.17g"
FOCK_DUMP_THRESHOLD = 1e-14

global_logging_context = LoggingContext()
print_logger = logging.getLogger("printer")
