"""Physical-layer math: path loss, received power, SNR and carrier-sense range.

All powers are in dBm, distances in meters. The log-distance model is
deterministic; there is no fading or shadowing term.
"""
import math
from dataclasses import dataclass, fields
from typing import Any, Dict, Optional

from src.config import RF_DEFAULTS
from src.error_handling import NonPositiveDistance, SchemaError
from src.rf.mcs import McsEntry, McsTable, select_rate

SPEED_OF_LIGHT = 299_792_458.0

STANDARDS = ("11n", "11ac", "11ax")


@dataclass(frozen=True)
class RfConfig:
    """Radio parameters shared by every node in a scenario."""
    tx_power_dbm: float = RF_DEFAULTS["tx_power_dbm"]
    frequency_hz: float = RF_DEFAULTS["frequency_hz"]
    path_loss_exponent: float = RF_DEFAULTS["path_loss_exponent"]
    reference_distance_m: float = RF_DEFAULTS["reference_distance_m"]
    noise_floor_dbm: float = RF_DEFAULTS["noise_floor_dbm"]
    cca_threshold_dbm: float = RF_DEFAULTS["cca_threshold_dbm"]
    capture_margin_db: float = RF_DEFAULTS["capture_margin_db"]
    channel_width_mhz: int = RF_DEFAULTS["channel_width_mhz"]
    standard: str = RF_DEFAULTS["standard"]

    def __post_init__(self):
        if self.path_loss_exponent < 2:
            raise SchemaError("must be >= 2", key="rf.path_loss_exponent")
        if not self.reference_distance_m > 0:
            raise SchemaError("must be > 0", key="rf.reference_distance_m")
        if self.capture_margin_db < 0:
            raise SchemaError("must be >= 0", key="rf.capture_margin_db")
        if not self.frequency_hz > 0:
            raise SchemaError("must be > 0", key="rf.frequency_hz")
        if self.standard not in STANDARDS:
            raise SchemaError(f"must be one of {STANDARDS}", key="rf.standard")

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> "RfConfig":
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in values.items() if k in known and v is not None})

    @property
    def reference_loss_db(self) -> float:
        return reference_loss(self.frequency_hz, self.reference_distance_m)


def dbm_to_mw(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0)


def mw_to_dbm(mw: float) -> float:
    return 10.0 * math.log10(mw)


def reference_loss(frequency_hz: float, d0: float = 1.0) -> float:
    """Friis free-space loss in dB at the reference distance."""
    return 20.0 * math.log10(4.0 * math.pi * d0 * frequency_hz / SPEED_OF_LIGHT)


def path_loss_db(cfg: RfConfig, d: float) -> float:
    if not d > 0:
        raise NonPositiveDistance(f"distance must be > 0, got {d}", {"distance": d})
    d0 = cfg.reference_distance_m
    return cfg.reference_loss_db + 10.0 * cfg.path_loss_exponent * math.log10(d / d0)


def received_power_dbm(cfg: RfConfig, d: float) -> float:
    return cfg.tx_power_dbm - path_loss_db(cfg, d)


def snr_at_distance(cfg: RfConfig, d: float) -> float:
    """SNR in dB of a transmission received ``d`` meters away."""
    return received_power_dbm(cfg, d) - cfg.noise_floor_dbm


def carrier_sense_range(cfg: RfConfig) -> float:
    """Distance at which received power falls to the CCA threshold."""
    margin = cfg.tx_power_dbm - cfg.cca_threshold_dbm - cfg.reference_loss_db
    return cfg.reference_distance_m * 10.0 ** (margin / (10.0 * cfg.path_loss_exponent))


def select_link_mcs(cfg: RfConfig, table: McsTable, d: float) -> Optional[McsEntry]:
    return select_rate(table, snr_at_distance(cfg, d))


def link_rate(cfg: RfConfig, table: McsTable, d: float) -> float:
    """Interference-free PHY rate (MB/s) for a link of length ``d``; 0 when no MCS decodes."""
    entry = select_link_mcs(cfg, table, d)
    return entry.rate if entry is not None else 0.0


def propagation_delay(d: float) -> float:
    return d / SPEED_OF_LIGHT
