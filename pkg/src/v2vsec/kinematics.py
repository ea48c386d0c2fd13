"""Vehicle dynamics to inter-vehicle separation.

Internal units are SI throughout (m, s, m/s); km/h exists only at the
CLI boundary via the conversion helpers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "BrakingProfile",
    "VehicleState",
    "DEFAULT_TAU_S",
    "braking_distance",
    "safety_distance_full",
    "safety_distance_cruise",
    "kmh_to_ms",
    "ms_to_kmh",
]

# Cruise-control constant used when a scenario does not set one.
DEFAULT_TAU_S = 0.2


@dataclass(frozen=True)
class BrakingProfile:
    """Braking-process timing and maximum deceleration.

    t_a: response period, s; t_b: braking clearance period, s;
    t_c: braking force applying period, s; a_max: maximum deceleration, m/s^2.
    """

    t_a: float
    t_b: float
    t_c: float
    a_max: float

    def __post_init__(self) -> None:
        for name in ("t_a", "t_b", "t_c"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be >= 0, got {v!r}")
        if not (math.isfinite(self.a_max) and self.a_max > 0):
            raise ValueError(f"a_max must be > 0, got {self.a_max!r}")


@dataclass(frozen=True)
class VehicleState:
    """Speed and usable braking deceleration of one vehicle."""

    speed: float
    accel: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.speed) and self.speed >= 0):
            raise ValueError(f"speed must be >= 0, got {self.speed!r}")
        if not (math.isfinite(self.accel) and self.accel > 0):
            raise ValueError(f"accel must be > 0, got {self.accel!r}")


def braking_distance(v0: float, profile: BrakingProfile) -> float:
    """Distance in m from initial braking point to a complete stop."""
    if not (math.isfinite(v0) and v0 >= 0):
        raise ValueError(f"v0 must be >= 0, got {v0!r}")
    return v0 * (profile.t_a + profile.t_b + profile.t_c / 2.0) + v0 * v0 / (2.0 * profile.a_max)


def safety_distance_full(host: VehicleState, target: VehicleState, tau: float) -> float:
    """Separation in m that prevents a rear-end collision between host and target.

    May be negative when the target out-brakes the host; the raw value is
    returned and callers decide how to clamp.
    """
    if not (math.isfinite(tau) and tau > 0):
        raise ValueError(f"tau must be > 0, got {tau!r}")
    return (
        host.speed * tau
        + host.speed * host.speed / (2.0 * host.accel)
        - target.speed * target.speed / (2.0 * target.accel)
    )


def safety_distance_cruise(v: float, tau: float) -> float:
    """Cruise-mode separation v*tau, the equal-speed reduction of the full formula."""
    if not (math.isfinite(v) and v >= 0):
        raise ValueError(f"v must be >= 0, got {v!r}")
    if not (math.isfinite(tau) and tau > 0):
        raise ValueError(f"tau must be > 0, got {tau!r}")
    return v * tau


def kmh_to_ms(v: float) -> float:
    """km/h to m/s."""
    if not (math.isfinite(v) and v >= 0):
        raise ValueError(f"v must be >= 0, got {v!r}")
    return v / 3.6


def ms_to_kmh(v: float) -> float:
    """m/s to km/h."""
    if not (math.isfinite(v) and v >= 0):
        raise ValueError(f"v must be >= 0, got {v!r}")
    return v * 3.6
