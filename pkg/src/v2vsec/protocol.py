"""Link-mode decision engine and the CSI wire codec.

A host ingests a CSI report, computes the speed-dependent secrecy
capacity of the direct link, compares it against a per-speed-band
threshold, and picks one of four modes: direct, relay-assisted,
power-boosted direct, or fallback to infrastructure.

Wire format (one message per line, UTF-8):

    CSI1|sender_id|seq|timestamp_ms|tx_power_dbm|rx_power_dbm|noise_floor_dbm|snr_db|speed_mps

Fields are '|'-separated; numeric fields are decimal with a '.' radix
point and at most 4 fractional digits. ``CSI1`` is the version tag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import PowerBudget, db_to_linear
from .secrecy import RelayConfig, relay_secrecy, velocity_secrecy

__all__ = [
    "CsiMessage",
    "CsiParseError",
    "CsiVersionError",
    "CsiMissingFieldError",
    "CsiMalformedFieldError",
    "CsiConsistencyError",
    "CsiSeqRegressionError",
    "StaleCsiError",
    "NoRelayError",
    "ThresholdSchedule",
    "RelayCandidate",
    "LinkScenario",
    "ProtocolConfig",
    "LinkDecision",
    "RelaySelection",
    "ProtocolSession",
    "DEFAULT_THRESHOLDS",
    "encode_csi",
    "parse_csi",
    "derive_threshold",
    "optimize_relay_power",
    "select_relay",
    "decide",
]

WIRE_VERSION = "CSI1"
_WIRE_FIELDS = 9
# Carried SNR may differ from rx - noise by at most this much (dB).
SNR_TOLERANCE_DB = 0.01

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
COARSE_GRID_POINTS = 32


class CsiParseError(ValueError):
    """Base class for wire-format rejections."""


class CsiVersionError(CsiParseError):
    """Unknown version tag."""


class CsiMissingFieldError(CsiParseError):
    """Too few fields on the line."""


class CsiMalformedFieldError(CsiParseError):
    """A field failed to parse or violates a message invariant."""


class CsiConsistencyError(CsiParseError):
    """Carried SNR disagrees with rx - noise beyond tolerance."""


class CsiSeqRegressionError(CsiParseError):
    """Sequence number did not increase."""


class StaleCsiError(ValueError):
    """Message timestamp is older than the configured freshness window."""


class NoRelayError(ValueError):
    """Relay selection was invoked with no candidates."""


@dataclass(frozen=True)
class CsiMessage:
    """One channel-state report; snr_db is always exactly rx - noise."""

    sender_id: str
    seq: int
    timestamp_ms: int
    tx_power_dbm: float
    rx_power_dbm: float
    noise_floor_dbm: float
    snr_db: float
    speed_mps: float

    def __post_init__(self) -> None:
        if not self.sender_id:
            raise ValueError("sender_id must be nonempty")
        if self.seq < 0:
            raise ValueError(f"seq must be >= 0, got {self.seq!r}")
        if self.snr_db != self.rx_power_dbm - self.noise_floor_dbm:
            raise ValueError(
                f"snr_db={self.snr_db!r} must equal rx - noise = "
                f"{self.rx_power_dbm - self.noise_floor_dbm!r}"
            )
        if not (math.isfinite(self.speed_mps) and self.speed_mps >= 0):
            raise ValueError(f"speed_mps must be >= 0, got {self.speed_mps!r}")

    @classmethod
    def build(
        cls,
        sender_id: str,
        seq: int,
        timestamp_ms: int,
        tx_power_dbm: float,
        rx_power_dbm: float,
        noise_floor_dbm: float,
        speed_mps: float,
    ) -> "CsiMessage":
        """Construct with the SNR derived from the power fields."""
        return cls(
            sender_id=sender_id,
            seq=seq,
            timestamp_ms=timestamp_ms,
            tx_power_dbm=tx_power_dbm,
            rx_power_dbm=rx_power_dbm,
            noise_floor_dbm=noise_floor_dbm,
            snr_db=rx_power_dbm - noise_floor_dbm,
            speed_mps=speed_mps,
        )


def _fmt4(x: float) -> str:
    """Decimal with at most 4 fractional digits, trailing zeros trimmed."""
    s = f"{x:.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def encode_csi(msg: CsiMessage) -> str:
    """One wire line for the message (no trailing newline)."""
    if "|" in msg.sender_id:
        raise ValueError("sender_id must not contain '|'")
    return "|".join(
        (
            WIRE_VERSION,
            msg.sender_id,
            str(msg.seq),
            str(msg.timestamp_ms),
            _fmt4(msg.tx_power_dbm),
            _fmt4(msg.rx_power_dbm),
            _fmt4(msg.noise_floor_dbm),
            _fmt4(msg.snr_db),
            _fmt4(msg.speed_mps),
        )
    )


def parse_csi(line: str, last_seq: int | None = None) -> CsiMessage:
    """Parse one wire line, re-deriving the SNR from the power fields.

    The carried snr_db must agree with rx - noise to within 0.01 dB; the
    stored value is the recomputed one so the message invariant is exact.
    With ``last_seq`` given, a non-increasing sequence number raises
    :class:`CsiSeqRegressionError`.
    """
    parts = line.rstrip("\r\n").split("|")
    if len(parts) < _WIRE_FIELDS:
        raise CsiMissingFieldError(f"expected {_WIRE_FIELDS} fields, got {len(parts)}")
    if len(parts) > _WIRE_FIELDS:
        raise CsiMalformedFieldError(f"expected {_WIRE_FIELDS} fields, got {len(parts)}")
    if parts[0] != WIRE_VERSION:
        raise CsiVersionError(f"unknown version tag {parts[0]!r}")
    sender_id = parts[1]
    try:
        seq = int(parts[2])
        timestamp_ms = int(parts[3])
    except ValueError as exc:
        raise CsiMalformedFieldError(f"bad integer field: {exc}") from None
    try:
        tx, rx, noise, snr, speed = (float(p) for p in parts[4:9])
    except ValueError as exc:
        raise CsiMalformedFieldError(f"bad numeric field: {exc}") from None
    if abs(snr - (rx - noise)) > SNR_TOLERANCE_DB:
        raise CsiConsistencyError(
            f"carried snr_db={snr!r} disagrees with rx - noise = {rx - noise!r}"
        )
    if last_seq is not None and seq <= last_seq:
        raise CsiSeqRegressionError(f"seq {seq} does not increase past {last_seq}")
    try:
        return CsiMessage(
            sender_id=sender_id,
            seq=seq,
            timestamp_ms=timestamp_ms,
            tx_power_dbm=tx,
            rx_power_dbm=rx,
            noise_floor_dbm=noise,
            snr_db=rx - noise,
            speed_mps=speed,
        )
    except ValueError as exc:
        raise CsiMalformedFieldError(str(exc)) from None


@dataclass(frozen=True)
class ThresholdSchedule:
    """Speed bands [low, high) mapped to secrecy-capacity thresholds.

    Bands must partition [0, inf) with no gap or overlap.
    """

    bands: tuple[tuple[float, float, float], ...]

    def __post_init__(self) -> None:
        if not self.bands:
            raise ValueError("schedule needs at least one band")
        expected_low = 0.0
        for i, (low, high, threshold) in enumerate(self.bands):
            if low != expected_low:
                raise ValueError(f"band {i} starts at {low!r}, expected {expected_low!r}")
            if not high > low:
                raise ValueError(f"band {i} is empty: [{low!r}, {high!r})")
            if not (math.isfinite(threshold) and threshold >= 0):
                raise ValueError(f"band {i} threshold must be >= 0, got {threshold!r}")
            expected_low = high
        if self.bands[-1][1] != math.inf:
            raise ValueError("last band must extend to infinity")


DEFAULT_THRESHOLDS = ThresholdSchedule(bands=((0.0, 25.0, 2.0), (25.0, math.inf, 1.0)))


def derive_threshold(speed: float, schedule: ThresholdSchedule) -> float:
    """Threshold of the unique band containing the speed."""
    if not (math.isfinite(speed) and speed >= 0):
        raise ValueError(f"speed must be >= 0, got {speed!r}")
    for low, high, threshold in schedule.bands:
        if low <= speed < high:
            return threshold
    raise AssertionError("schedule bands do not cover the speed axis")


@dataclass(frozen=True)
class RelayCandidate:
    """A relay node's power-domain gains toward target and eavesdropper."""

    relay_id: str
    h_rb: float
    h_re: float
    p_max: float

    def __post_init__(self) -> None:
        if not self.relay_id:
            raise ValueError("relay_id must be nonempty")
        for name in ("h_rb", "h_re"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be >= 0, got {v!r}")
        if not (math.isfinite(self.p_max) and self.p_max >= 0):
            raise ValueError(f"p_max must be >= 0, got {self.p_max!r}")


@dataclass(frozen=True)
class LinkScenario:
    """Static link parameters the decision engine needs besides the CSI."""

    r: float
    alpha: float
    tau: float
    budget: PowerBudget

    def __post_init__(self) -> None:
        for name in ("r", "alpha", "tau"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be > 0, got {v!r}")


@dataclass(frozen=True)
class ProtocolConfig:
    """Thresholds, boost policy, relay candidates and strategy ordering."""

    thresholds: ThresholdSchedule = DEFAULT_THRESHOLDS
    boost_step_db: float = 2.0
    boost_cap_db: float = 10.0
    max_boost_iterations: int = 5
    relay_candidates: tuple[RelayCandidate, ...] = ()
    strategy_order: tuple[str, ...] = ("relay", "power_boost", "v2i_fallback")
    freshness_ms: float = 500.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.boost_step_db) and self.boost_step_db > 0):
            raise ValueError(f"boost_step_db must be > 0, got {self.boost_step_db!r}")
        if not (math.isfinite(self.boost_cap_db) and self.boost_cap_db >= 0):
            raise ValueError(f"boost_cap_db must be >= 0, got {self.boost_cap_db!r}")
        if self.max_boost_iterations < 1:
            raise ValueError(
                f"max_boost_iterations must be >= 1, got {self.max_boost_iterations!r}"
            )
        valid = {"relay", "power_boost", "v2i_fallback"}
        if not self.strategy_order:
            raise ValueError("strategy_order must be nonempty")
        if len(set(self.strategy_order)) != len(self.strategy_order):
            raise ValueError("strategy_order must not repeat strategies")
        for s in self.strategy_order:
            if s not in valid:
                raise ValueError(f"unknown strategy {s!r}")
        if not (math.isfinite(self.freshness_ms) and self.freshness_ms > 0):
            raise ValueError(f"freshness_ms must be > 0, got {self.freshness_ms!r}")


@dataclass(frozen=True)
class LinkDecision:
    """Outcome of one protocol pass over a CSI message.

    ``mode`` is one of direct, relay, power_boost, v2i_fallback.
    ``cs_achieved`` is the clamped capacity that justified the mode (for
    v2i_fallback: the direct-link capacity that failed). ``boost_iterations``
    counts the 2-dB-style steps applied, nonzero only for power_boost.
    """

    mode: str
    cs_achieved: float
    threshold_used: float
    boost_iterations: int = 0
    relay_id: str | None = None
    relay_power: float | None = None
    new_power: float | None = None


@dataclass(frozen=True)
class RelaySelection:
    relay_id: str
    relay_power: float
    capacity: float


def _relay_capacity(
    scenario: LinkScenario, candidate: RelayCandidate, speed_mps: float, p_r: float
) -> float:
    d = speed_mps * scenario.tau
    exp = 2.0 * scenario.alpha
    cfg = RelayConfig(
        p_a=scenario.budget.p_linear,
        p_r=p_r,
        h_ab=d**-exp,
        h_rb=candidate.h_rb,
        h_ae=scenario.r**-exp,
        h_re=candidate.h_re,
        sigma_b2=scenario.budget.n0_linear,
        sigma_e2=scenario.budget.n0_linear,
        w=1.0,
    )
    return relay_secrecy(cfg).clamped


def optimize_relay_power(
    scenario: LinkScenario, candidate: RelayCandidate, speed_mps: float
) -> tuple[float, float]:
    """Best relay power on [0, p_max] and the capacity it achieves.

    Seeds a 32-point coarse grid, golden-section-refines around every grid
    local maximum (unimodality is not guaranteed), and returns the best
    point ever evaluated, so the result dominates all probes by
    construction. Capacity ties prefer the lower relay power.
    """
    if not (math.isfinite(speed_mps) and speed_mps > 0):
        raise ValueError(f"speed_mps must be > 0, got {speed_mps!r}")
    if candidate.p_max == 0.0:
        return 0.0, _relay_capacity(scenario, candidate, speed_mps, 0.0)

    grid = np.linspace(0.0, candidate.p_max, COARSE_GRID_POINTS)
    values = [_relay_capacity(scenario, candidate, speed_mps, p) for p in grid]
    best_p, best_c = 0.0, values[0]
    for p, c in zip(grid[1:], values[1:]):
        if c > best_c:
            best_p, best_c = float(p), c

    for i in range(COARSE_GRID_POINTS):
        left = values[i - 1] if i > 0 else -math.inf
        right = values[i + 1] if i < COARSE_GRID_POINTS - 1 else -math.inf
        if values[i] < left or values[i] < right:
            continue
        lo = float(grid[max(i - 1, 0)])
        hi = float(grid[min(i + 1, COARSE_GRID_POINTS - 1)])
        x1 = hi - _GOLDEN * (hi - lo)
        x2 = lo + _GOLDEN * (hi - lo)
        f1 = _relay_capacity(scenario, candidate, speed_mps, x1)
        f2 = _relay_capacity(scenario, candidate, speed_mps, x2)
        while hi - lo > 1e-10 * candidate.p_max:
            if f1 < f2:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + _GOLDEN * (hi - lo)
                f2 = _relay_capacity(scenario, candidate, speed_mps, x2)
            else:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - _GOLDEN * (hi - lo)
                f1 = _relay_capacity(scenario, candidate, speed_mps, x1)
            for p, c in ((x1, f1), (x2, f2)):
                if c > best_c or (c == best_c and p < best_p):
                    best_p, best_c = p, c
    return best_p, best_c


def select_relay(
    candidates: tuple[RelayCandidate, ...] | list[RelayCandidate],
    scenario: LinkScenario,
    speed_mps: float,
) -> RelaySelection:
    """Argmax candidate over per-candidate optimized relay power.

    Ties break toward lower relay power, then lexicographic relay_id.
    """
    if not candidates:
        raise NoRelayError("no relay candidates configured")
    best: RelaySelection | None = None
    for cand in candidates:
        p_r, cap = optimize_relay_power(scenario, cand, speed_mps)
        if (
            best is None
            or cap > best.capacity
            or (cap == best.capacity and p_r < best.relay_power)
            or (cap == best.capacity and p_r == best.relay_power and cand.relay_id < best.relay_id)
        ):
            best = RelaySelection(relay_id=cand.relay_id, relay_power=p_r, capacity=cap)
    return best


def decide(csi: CsiMessage, scenario: LinkScenario, config: ProtocolConfig) -> LinkDecision:
    """Run the decision ladder for one CSI message.

    Direct when the clamped capacity clears the speed band's threshold at
    the original power; otherwise the configured strategies are tried in
    order; v2i_fallback is the terminal outcome when everything fails.
    """
    threshold = derive_threshold(csi.speed_mps, config.thresholds)
    p = scenario.budget.p_linear
    n0 = scenario.budget.n0_linear
    base = velocity_secrecy(p, n0, csi.speed_mps, scenario.tau, scenario.r, scenario.alpha)
    if base.clamped >= threshold:
        return LinkDecision(mode="direct", cs_achieved=base.clamped, threshold_used=threshold)

    for strategy in config.strategy_order:
        if strategy == "relay":
            if not config.relay_candidates:
                continue
            sel = select_relay(config.relay_candidates, scenario, csi.speed_mps)
            if sel.capacity >= threshold:
                return LinkDecision(
                    mode="relay",
                    cs_achieved=sel.capacity,
                    threshold_used=threshold,
                    relay_id=sel.relay_id,
                    relay_power=sel.relay_power,
                )
        elif strategy == "power_boost":
            k = 0
            while k < config.max_boost_iterations:
                k += 1
                total_db = k * config.boost_step_db
                if total_db > config.boost_cap_db + 1e-12:
                    break
                boosted = p * db_to_linear(total_db)
                cs = velocity_secrecy(
                    boosted, n0, csi.speed_mps, scenario.tau, scenario.r, scenario.alpha
                ).clamped
                if cs >= threshold:
                    return LinkDecision(
                        mode="power_boost",
                        cs_achieved=cs,
                        threshold_used=threshold,
                        boost_iterations=k,
                        new_power=boosted,
                    )
        else:  # v2i_fallback is terminal
            break

    return LinkDecision(
        mode="v2i_fallback", cs_achieved=base.clamped, threshold_used=threshold
    )


@dataclass
class ProtocolSession:
    """Per-link session enforcing CSI ordering and freshness around decide().

    Sequence numbers must strictly increase; a message whose timestamp lags
    the newest one seen by more than the freshness window is rejected.
    """

    scenario: LinkScenario
    config: ProtocolConfig
    last_seq: int | None = field(default=None, init=False)
    newest_ts: int | None = field(default=None, init=False)

    def process(self, csi: CsiMessage) -> LinkDecision:
        if self.last_seq is not None and csi.seq <= self.last_seq:
            raise CsiSeqRegressionError(
                f"seq {csi.seq} does not increase past {self.last_seq}"
            )
        if (
            self.newest_ts is not None
            and csi.timestamp_ms < self.newest_ts - self.config.freshness_ms
        ):
            raise StaleCsiError(
                f"timestamp {csi.timestamp_ms} ms is older than the freshness window "
                f"({self.config.freshness_ms} ms behind {self.newest_ts} ms)"
            )
        decision = decide(csi, self.scenario, self.config)
        self.last_seq = csi.seq
        self.newest_ts = csi.timestamp_ms if self.newest_ts is None else max(
            self.newest_ts, csi.timestamp_ms
        )
        return decision
