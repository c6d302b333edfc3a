"""Simulator settings and configuration."""
import os
import logging

logger = logging.getLogger(__name__)

# Logging Settings
LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO').upper()
LOG_FORMAT = os.getenv('LOG_FORMAT', 'text')
LOG_FILE = os.getenv('LOG_FILE', '') or None
NCSIM_ENV = os.getenv('NCSIM_ENV', 'development')

# Run Settings
NCSIM_SEED = int(os.getenv('NCSIM_SEED', '42'))
NCSIM_EVENT_CAP = int(os.getenv('NCSIM_EVENT_CAP', '10000000'))
NCSIM_WORKERS = int(os.getenv('NCSIM_WORKERS', '1'))
NCSIM_RESULTS_DIR = os.getenv('NCSIM_RESULTS_DIR', 'results')
NCSIM_BIANCHI_PROFILE = os.getenv('NCSIM_BIANCHI_PROFILE', 'ofdm-default')
NCSIM_MCS_TABLE = os.getenv('NCSIM_MCS_TABLE', '11ax-20mhz')

TOOL_VERSION = "0.3.0"

# RF defaults (802.11ax, 5 GHz, 20 MHz, single stream)
RF_DEFAULTS = {
    'tx_power_dbm': float(os.getenv('NCSIM_TX_POWER_DBM', '20.0')),
    'frequency_hz': float(os.getenv('NCSIM_FREQUENCY_HZ', '5.0e9')),
    'path_loss_exponent': float(os.getenv('NCSIM_PATH_LOSS_EXPONENT', '3.0')),
    'reference_distance_m': 1.0,
    'noise_floor_dbm': float(os.getenv('NCSIM_NOISE_FLOOR_DBM', '-95.0')),
    'cca_threshold_dbm': float(os.getenv('NCSIM_CCA_THRESHOLD_DBM', '-82.0')),
    'capture_margin_db': 5.0,
    'channel_width_mhz': 20,
    'standard': '11ax',
}

# Bianchi timing profiles. Durations in microseconds, sizes in bits.
BIANCHI_PROFILES = {
    # Original DCF analysis, FHSS PHY at 1 Mbps, basic access.
    'bianchi-fhss-1997': {
        'w_min': 32,
        'max_backoff_stage': 3,
        'slot_us': 50.0,
        'sifs_us': 28.0,
        'difs_us': 128.0,
        'prop_delay_us': 1.0,
        'payload_bits': 8184,
        'mac_header_bits': 272,
        'phy_header_bits': 128,
        'ack_bits': 112,
        'channel_bitrate_bps': 1.0e6,
    },
    # 802.11 OFDM timing used for the simulator's contention factor.
    'ofdm-default': {
        'w_min': 16,
        'max_backoff_stage': 6,
        'slot_us': 9.0,
        'sifs_us': 16.0,
        'difs_us': 34.0,
        'prop_delay_us': 1.0,
        'payload_bits': 12000,
        'mac_header_bits': 288,
        'phy_header_bits': 0,
        'ack_bits': 112,
        'channel_bitrate_bps': 35.2e6,
        'phy_preamble_us': 40.0,
        'ack_bitrate_bps': 6.0e6,
        'eifs_collision': True,
    },
}

# Generated topology defaults
GRID_SPACING_M = 40.0
CAPACITY_RANGE = (80.0, 300.0)
AUTO_LINK_MAX_DISTANCE_M = 80.0
