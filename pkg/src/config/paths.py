"""Path configuration for the simulator."""
import os
from pathlib import Path

# Get the absolute path to the project root directory
PROJECT_ROOT = Path(__file__).parent.parent.parent.absolute()

# Shipped data (MCS tables, scenarios)
DATA_DIR = Path(os.environ.get('NCSIM_DATA_DIR', str(PROJECT_ROOT / 'data')))
MCS_DIR = DATA_DIR / 'mcs'
SCENARIOS_DIR = Path(os.environ.get('NCSIM_SCENARIOS_DIR', str(PROJECT_ROOT / 'scenarios')))

# Report templates
TEMPLATES_DIR = Path(__file__).parent.parent / 'reporting' / 'templates'
