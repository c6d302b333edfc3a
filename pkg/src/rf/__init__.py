from src.rf.mcs import DEFAULT_MCS_TABLE, McsEntry, McsTable, load_mcs_table, rate_for_snr, read_mcs_table, select_rate
from src.rf.phy import (
    SPEED_OF_LIGHT,
    RfConfig,
    carrier_sense_range,
    dbm_to_mw,
    link_rate,
    mw_to_dbm,
    path_loss_db,
    propagation_delay,
    received_power_dbm,
    reference_loss,
    select_link_mcs,
    snr_at_distance,
)

__all__ = [
    "DEFAULT_MCS_TABLE",
    "SPEED_OF_LIGHT",
    "McsEntry",
    "McsTable",
    "RfConfig",
    "carrier_sense_range",
    "dbm_to_mw",
    "link_rate",
    "load_mcs_table",
    "mw_to_dbm",
    "path_loss_db",
    "propagation_delay",
    "rate_for_snr",
    "read_mcs_table",
    "received_power_dbm",
    "reference_loss",
    "select_link_mcs",
    "select_rate",
    "snr_at_distance",
]
