"""Microsecond clock arithmetic."""
from decimal import ROUND_HALF_UP, Decimal

MICROS_PER_SECOND = 1_000_000


def to_micros(t: float) -> int:
    """Seconds to integer microseconds, rounding half up."""
    if t < 0:
        raise ValueError(f"negative time {t!r}")
    return int((Decimal(repr(float(t))) * MICROS_PER_SECOND).quantize(Decimal(1), rounding=ROUND_HALF_UP))


def from_micros(us: int) -> float:
    return us / MICROS_PER_SECOND


def round_time(t: float) -> float:
    """Nearest multiple of 1e-6 s, half up."""
    return from_micros(to_micros(t))


def format_micros(us: int) -> str:
    """Fixed 6-decimal rendering, exact for any integer clock."""
    return f"{us // MICROS_PER_SECOND}.{us % MICROS_PER_SECOND:06d}"
