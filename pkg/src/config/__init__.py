"""Configuration package for ncsim.

Loads ``.env`` once and re-exports the settings constants.
"""
from dotenv import load_dotenv

load_dotenv()

from src.config.settings import (  # noqa: E402
    AUTO_LINK_MAX_DISTANCE_M,
    BIANCHI_PROFILES,
    CAPACITY_RANGE,
    GRID_SPACING_M,
    LOG_FILE,
    LOG_FORMAT,
    LOG_LEVEL,
    NCSIM_BIANCHI_PROFILE,
    NCSIM_ENV,
    NCSIM_EVENT_CAP,
    NCSIM_MCS_TABLE,
    NCSIM_RESULTS_DIR,
    NCSIM_SEED,
    NCSIM_WORKERS,
    RF_DEFAULTS,
    TOOL_VERSION,
)
from src.config.paths import DATA_DIR, MCS_DIR, PROJECT_ROOT, SCENARIOS_DIR, TEMPLATES_DIR  # noqa: E402

__all__ = [
    "AUTO_LINK_MAX_DISTANCE_M",
    "BIANCHI_PROFILES",
    "CAPACITY_RANGE",
    "DATA_DIR",
    "GRID_SPACING_M",
    "LOG_FILE",
    "LOG_FORMAT",
    "LOG_LEVEL",
    "MCS_DIR",
    "NCSIM_BIANCHI_PROFILE",
    "NCSIM_ENV",
    "NCSIM_EVENT_CAP",
    "NCSIM_MCS_TABLE",
    "NCSIM_RESULTS_DIR",
    "NCSIM_SEED",
    "NCSIM_WORKERS",
    "PROJECT_ROOT",
    "RF_DEFAULTS",
    "SCENARIOS_DIR",
    "TEMPLATES_DIR",
    "TOOL_VERSION",
]
