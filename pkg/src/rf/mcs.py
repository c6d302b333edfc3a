"""MCS tables: SNR thresholds and PHY rates per modulation and coding scheme."""
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Optional, Tuple, Union

import pandas as pd

from src.config import MCS_DIR
from src.error_handling import SchemaError


@dataclass(frozen=True)
class McsEntry:
    index: int
    min_snr_db: float
    rate: float  # MB/s


@dataclass(frozen=True)
class McsTable:
    """Ordered MCS entries; thresholds and rates strictly increase with index."""
    name: str
    entries: Tuple[McsEntry, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(sorted(self.entries, key=lambda e: e.index)))
        if not self.entries:
            raise SchemaError("MCS table is empty", key=f"mcs.{self.name}")
        for lower, upper in zip(self.entries, self.entries[1:]):
            if not upper.min_snr_db > lower.min_snr_db:
                raise SchemaError("min_snr_db must strictly increase with index", key=f"mcs.{self.name}.{upper.index}")
            if not upper.rate > lower.rate:
                raise SchemaError("rate must strictly increase with index", key=f"mcs.{self.name}.{upper.index}")

    def __len__(self) -> int:
        return len(self.entries)

    def entry(self, index: int) -> McsEntry:
        for entry in self.entries:
            if entry.index == index:
                return entry
        raise KeyError(index)

    @property
    def lowest(self) -> McsEntry:
        return self.entries[0]

    @property
    def highest(self) -> McsEntry:
        return self.entries[-1]


def select_rate(table: McsTable, snr_db: float) -> Optional[McsEntry]:
    """Highest-rate MCS whose minimum SNR is met; None below the lowest threshold."""
    chosen = None
    for entry in table.entries:
        if snr_db >= entry.min_snr_db:
            chosen = entry
        else:
            break
    return chosen


def rate_for_snr(table: McsTable, snr_db: float) -> float:
    entry = select_rate(table, snr_db)
    return entry.rate if entry is not None else 0.0


# 802.11ax, 20 MHz, one spatial stream, 3.2 us guard interval
DEFAULT_MCS_TABLE = McsTable(
    "11ax-20mhz",
    tuple(
        McsEntry(index, snr, rate)
        for index, (snr, rate) in enumerate([
            (5.0, 1.075), (8.0, 2.15), (11.0, 3.225), (14.0, 4.3),
            (18.0, 6.45), (21.0, 8.6), (25.0, 9.675), (29.0, 10.75),
            (33.0, 12.9), (35.0, 14.338), (38.0, 16.125), (41.0, 17.925),
        ])
    ),
)


def read_mcs_table(path: Union[str, Path], name: Optional[str] = None) -> McsTable:
    """Read a CSV with columns index, min_snr_db, rate_mb_s."""
    path = Path(path)
    frame = pd.read_csv(path)
    missing = {"index", "min_snr_db", "rate_mb_s"} - set(frame.columns)
    if missing:
        raise SchemaError(f"missing columns {sorted(missing)}", key=str(path))
    entries = tuple(
        McsEntry(int(row["index"]), float(row["min_snr_db"]), float(row["rate_mb_s"]))
        for row in frame.to_dict("records")
    )
    return McsTable(name or path.stem, entries)


@lru_cache(maxsize=None)
def load_mcs_table(name: str) -> McsTable:
    """Load a named table from the shipped data directory."""
    if name == DEFAULT_MCS_TABLE.name:
        return DEFAULT_MCS_TABLE
    path = MCS_DIR / f"{name}.csv"
    if not path.exists():
        raise SchemaError(f"no MCS table named {name!r}", key="rf.mcs_table")
    return read_mcs_table(path, name)
