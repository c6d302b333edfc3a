"""Tests for path loss, SNR, carrier-sense range and MCS selection"""
import pytest

from src.error_handling import NonPositiveDistance, SchemaError
from src.rf.mcs import McsEntry, McsTable, load_mcs_table, rate_for_snr, read_mcs_table, select_rate
from src.rf.phy import (
    RfConfig,
    carrier_sense_range,
    link_rate,
    path_loss_db,
    reference_loss,
    snr_at_distance,
)

SNR_REFERENCE_DB = {1.0: 68.58, 12.0: 36.20, 30.0: 24.27, 50.0: 17.61, 75.0: 12.33, 105.0: 7.94, 140.0: 4.19}
RATE_REFERENCE = {1.0: 17.925, 12.0: 14.338, 30.0: 8.6, 50.0: 4.3, 75.0: 3.225, 105.0: 1.075, 140.0: 0.0}


def test_reference_loss_at_5ghz():
    """Test Friis loss at 1 m for 5 GHz"""
    assert reference_loss(5.0e9) == pytest.approx(46.42, abs=0.01)


@pytest.mark.parametrize("distance,expected", sorted(SNR_REFERENCE_DB.items()))
def test_snr_staircase(rf, distance, expected):
    assert snr_at_distance(rf, distance) == pytest.approx(expected, abs=0.05)


@pytest.mark.parametrize("distance,expected", sorted(RATE_REFERENCE.items()))
def test_link_rate_staircase(rf, mcs_table, distance, expected):
    assert link_rate(rf, mcs_table, distance) == expected


def test_path_loss_grows_with_distance(rf):
    losses = [path_loss_db(rf, d) for d in (1.0, 2.0, 10.0, 100.0)]
    assert losses == sorted(losses)
    # 30 dB per decade at exponent 3
    assert path_loss_db(rf, 100.0) - path_loss_db(rf, 10.0) == pytest.approx(30.0)


def test_path_loss_rejects_zero_distance(rf):
    with pytest.raises(NonPositiveDistance):
        path_loss_db(rf, 0.0)


def test_carrier_sense_range(rf):
    """Test the distance where received power meets the CCA threshold"""
    d_cs = carrier_sense_range(rf)
    assert d_cs == pytest.approx(71.2, abs=0.2)
    assert 70.0 < d_cs < 75.0


def test_rf_config_rejects_bad_values():
    with pytest.raises(SchemaError):
        RfConfig(path_loss_exponent=1.5)
    with pytest.raises(SchemaError):
        RfConfig(standard="11b")


def test_select_rate_thresholds(mcs_table):
    """Test the highest MCS whose threshold is met is chosen"""
    assert select_rate(mcs_table, 4.99) is None
    assert select_rate(mcs_table, 5.0).index == 0
    assert select_rate(mcs_table, 20.9).rate == 6.45
    assert select_rate(mcs_table, 100.0) == mcs_table.highest
    assert rate_for_snr(mcs_table, 0.0) == 0.0


def test_mcs_table_must_increase():
    with pytest.raises(SchemaError):
        McsTable("bad", (McsEntry(0, 10.0, 2.0), McsEntry(1, 8.0, 3.0)))
    with pytest.raises(SchemaError):
        McsTable("bad", (McsEntry(0, 5.0, 2.0), McsEntry(1, 8.0, 1.0)))


def test_shipped_tables_load():
    """Test the CSV tables under data/mcs parse and order correctly"""
    for name in ("11n-20mhz", "11ac-20mhz", "11ax-20mhz"):
        table = load_mcs_table(name)
        assert len(table) > 0
        rates = [e.rate for e in table.entries]
        assert rates == sorted(rates)
    with pytest.raises(SchemaError):
        load_mcs_table("11zz")


def test_read_mcs_table_matches_builtin(mcs_table, tmp_path):
    path = tmp_path / "custom.csv"
    path.write_text(
        "index,min_snr_db,rate_mb_s\n"
        + "\n".join(f"{e.index},{e.min_snr_db},{e.rate}" for e in mcs_table.entries)
        + "\n"
    )
    assert read_mcs_table(path).entries == mcs_table.entries
