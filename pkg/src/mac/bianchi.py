"""Saturation analysis of 802.11 DCF (basic access).

The per-station transmission probability tau and the conditional collision
probability p are the fixed point of

    tau(p) = 2(1 - 2p) / ((1 - 2p)(W + 1) + pW(1 - (2p)^m))
    p      = 1 - (1 - tau)^(n - 1)

solved here by bisection on p, which always brackets the root on [0, 1].
"""
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Optional

from src.config import BIANCHI_PROFILES, NCSIM_BIANCHI_PROFILE
from src.error_handling import NoConvergence, SchemaError

BISECTION_TOLERANCE = 1e-12
MAX_BISECTION_STEPS = 40


@dataclass(frozen=True)
class BianchiParams:
    """Contention window, backoff stages and frame timing.

    Durations are microseconds, sizes bits, rates bits per second.
    """
    w_min: int
    max_backoff_stage: int
    slot_us: float
    sifs_us: float
    difs_us: float
    prop_delay_us: float
    payload_bits: float
    mac_header_bits: float
    phy_header_bits: float
    ack_bits: float
    channel_bitrate_bps: float
    phy_preamble_us: float = 0.0
    ack_bitrate_bps: Optional[float] = None
    eifs_collision: bool = False

    def __post_init__(self):
        if self.w_min < 2:
            raise SchemaError("must be >= 2", key="bianchi.w_min")
        if self.max_backoff_stage < 0:
            raise SchemaError("must be >= 0", key="bianchi.max_backoff_stage")
        for name in ("slot_us", "sifs_us", "difs_us", "prop_delay_us", "payload_bits", "channel_bitrate_bps"):
            if not getattr(self, name) > 0:
                raise SchemaError("must be > 0", key=f"bianchi.{name}")

    def with_window(self, w_min: int, max_backoff_stage: int) -> "BianchiParams":
        return replace(self, w_min=w_min, max_backoff_stage=max_backoff_stage)

    def _airtime_us(self, bits: float, bitrate: Optional[float] = None) -> float:
        return bits / (bitrate or self.channel_bitrate_bps) * 1e6

    @property
    def header_us(self) -> float:
        return self.phy_preamble_us + self._airtime_us(self.phy_header_bits + self.mac_header_bits)

    @property
    def payload_us(self) -> float:
        return self._airtime_us(self.payload_bits)

    @property
    def ack_us(self) -> float:
        return (
            self.phy_preamble_us
            + self._airtime_us(self.phy_header_bits)
            + self._airtime_us(self.ack_bits, self.ack_bitrate_bps)
        )

    @property
    def t_success_us(self) -> float:
        return (
            self.header_us + self.payload_us + self.sifs_us + self.prop_delay_us
            + self.ack_us + self.difs_us + self.prop_delay_us
        )

    @property
    def t_collision_us(self) -> float:
        # With EIFS accounting a collision holds the medium as long as a success.
        if self.eifs_collision:
            return self.t_success_us
        return self.header_us + self.payload_us + self.difs_us + self.prop_delay_us


@dataclass(frozen=True)
class BianchiSolution:
    n: int
    tau: float
    p: float
    p_tr: float
    p_success: float
    t_success_us: float
    t_collision_us: float
    expected_slot_us: float
    s: float
    eta: float
    iterations: int = 0

    def to_dict(self):
        return {
            "n": self.n,
            "tau": self.tau,
            "p": self.p,
            "p_tr": self.p_tr,
            "p_success": self.p_success,
            "t_success_us": self.t_success_us,
            "t_collision_us": self.t_collision_us,
            "expected_slot_us": self.expected_slot_us,
            "s": self.s,
            "eta": self.eta,
            "iterations": self.iterations,
        }


def load_profile(name: str = NCSIM_BIANCHI_PROFILE) -> BianchiParams:
    """Bianchi parameters for a named profile from configuration."""
    try:
        return BianchiParams(**BIANCHI_PROFILES[name])
    except KeyError:
        raise SchemaError(f"unknown Bianchi profile {name!r}", key="mac.profile") from None


def transmission_probability(p: float, w_min: int, m: int) -> float:
    """tau as a function of the collision probability, continuous at p = 1/2."""
    x = 1.0 - 2.0 * p
    if abs(x) < 1e-9:
        return 2.0 / (w_min + 1 + w_min * m / 2.0)
    return 2.0 * x / (x * (w_min + 1) + p * w_min * (1.0 - (2.0 * p) ** m))


def fixed_point_residual(p: float, n: int, w_min: int, m: int) -> float:
    tau = transmission_probability(p, w_min, m)
    return p - (1.0 - (1.0 - tau) ** (n - 1))


def _bisect(params: BianchiParams, n: int):
    w, m = params.w_min, params.max_backoff_stage
    lo, hi = 0.0, 1.0
    for step in range(1, MAX_BISECTION_STEPS + 1):
        mid = 0.5 * (lo + hi)
        g = fixed_point_residual(mid, n, w, m)
        if g != g:
            raise NoConvergence("bisection residual is NaN", {"n": n, "p": mid})
        if g > 0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= BISECTION_TOLERANCE:
            p = 0.5 * (lo + hi)
            return transmission_probability(p, w, m), p, step
    raise NoConvergence(
        f"bisection did not reach {BISECTION_TOLERANCE} in {MAX_BISECTION_STEPS} steps",
        {"n": n, "interval": [lo, hi]},
    )


def solve_bianchi(params: BianchiParams, n: int):
    """Return ``(tau, p)`` for ``n`` saturated stations."""
    tau, p, _ = _solve(params, n)
    return tau, p


def _solve(params: BianchiParams, n: int):
    if n < 1:
        raise ValueError(f"station count must be >= 1, got {n}")
    if n == 1:
        return 2.0 / (params.w_min + 1), 0.0, 0
    return _bisect(params, n)


@lru_cache(maxsize=4096)
def saturation_throughput(params: BianchiParams, n: int) -> BianchiSolution:
    """Normalized throughput S and MAC efficiency eta for ``n`` stations.

    eta is the fraction of channel time spent in successful exchanges,
    S the fraction spent carrying payload.
    """
    tau, p, iterations = _solve(params, n)
    p_tr = 1.0 - (1.0 - tau) ** n
    p_success = n * tau * (1.0 - tau) ** (n - 1) / p_tr
    t_s = params.t_success_us
    t_c = params.t_collision_us
    expected_slot = (1.0 - p_tr) * params.slot_us + p_tr * p_success * t_s + p_tr * (1.0 - p_success) * t_c
    s = p_success * p_tr * params.payload_us / expected_slot
    eta = p_success * p_tr * t_s / expected_slot
    return BianchiSolution(
        n=n,
        tau=tau,
        p=p,
        p_tr=p_tr,
        p_success=p_success,
        t_success_us=t_s,
        t_collision_us=t_c,
        expected_slot_us=expected_slot,
        s=s,
        eta=min(max(eta, 0.0), 1.0),
        iterations=iterations,
    )


def mac_efficiency(params: BianchiParams, n: int) -> float:
    return saturation_throughput(params, n).eta


def contention_factor(n_contenders: int, params: Optional[BianchiParams] = None, solo_mac_overhead: bool = False) -> float:
    """Per-station share of the channel when ``n_contenders`` stations contend.

    1.0 for a lone station unless the solo MAC overhead is requested.
    """
    if n_contenders < 1:
        raise ValueError(f"contender count must be >= 1, got {n_contenders}")
    params = params or load_profile()
    if n_contenders == 1:
        return mac_efficiency(params, 1) if solo_mac_overhead else 1.0
    return mac_efficiency(params, n_contenders) / n_contenders
