"""Scenario configuration, derived constants and random network snapshots.

Geometry is a single macrocell disk of radius ``R`` centred on the base
station. D2D transmitters form a homogeneous PPP, each receiver sits at a
fixed distance in a uniformly random direction, and one uplink user is
dropped uniformly in the cell. All small-scale fading is Rayleigh, i.e.
power gains are unit-mean exponential.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class ConfigError(ValueError):
    """Raised when a NetworkConfig violates a physical invariant."""


def sinc(x: float) -> float:
    """Normalized sinc, sin(pi x) / (pi x)."""
    if x == 0.0:
        return 1.0
    return math.sin(math.pi * x) / (math.pi * x)


def mean_disk_distance(radius: float) -> float:
    """Mean distance between two independent uniform points in a disk."""
    return 128.0 * radius / (45.0 * math.pi)


@dataclass(frozen=True)
class NetworkConfig:
    cell_radius_m: float = 500.0
    d2d_density_per_m2: float = 2e-5
    d2d_link_distance_m: float = 50.0
    cellular_power: float = 10.0  # mW
    d2d_power: float = 0.1  # mW
    pathloss_exponent: float = 4.0
    # >1 samples transmitters on an enlarged disk; only in-cell links are scored
    guard_ring_factor: float = 1.0

    def __post_init__(self):
        checks = [
            ("cell_radius_m", self.cell_radius_m > 0, "> 0"),
            ("d2d_density_per_m2", self.d2d_density_per_m2 > 0, "> 0"),
            ("d2d_link_distance_m", self.d2d_link_distance_m > 0, "> 0"),
            ("cellular_power", self.cellular_power > 0, "> 0"),
            ("d2d_power", self.d2d_power > 0, "> 0"),
            ("pathloss_exponent", self.pathloss_exponent > 2, "> 2"),
            ("guard_ring_factor", self.guard_ring_factor >= 1, ">= 1"),
        ]
        for name, ok, rule in checks:
            value = getattr(self, name)
            if not (ok and math.isfinite(value)):
                raise ConfigError(f"{name} must be {rule} (got {value!r})")

    @property
    def power_ratio(self) -> float:
        """Cellular over D2D transmit power."""
        return self.cellular_power / self.d2d_power

    @property
    def cell_area(self) -> float:
        return math.pi * self.cell_radius_m**2

    def with_density(self, density: float) -> "NetworkConfig":
        return NetworkConfig(
            cell_radius_m=self.cell_radius_m,
            d2d_density_per_m2=density,
            d2d_link_distance_m=self.d2d_link_distance_m,
            cellular_power=self.cellular_power,
            d2d_power=self.d2d_power,
            pathloss_exponent=self.pathloss_exponent,
            guard_ring_factor=self.guard_ring_factor,
        )


@dataclass(frozen=True)
class DerivedConstants:
    k_alpha: float
    c_alpha: float  # m^2
    beta_activation: float  # linear SIR

    @property
    def beta_activation_db(self) -> float:
        return 10.0 * math.log10(self.beta_activation)


def k_alpha(cfg: NetworkConfig) -> float:
    """Cellular-interference constant of the coverage approximation."""
    a = cfg.pathloss_exponent
    return cfg.power_ratio ** (2.0 / a) * cfg.d2d_link_distance_m**2 / mean_disk_distance(cfg.cell_radius_m) ** 2


def c_alpha(cfg: NetworkConfig) -> float:
    """D2D-interference area constant, pi d^2 / sinc(2 / alpha)."""
    return math.pi * cfg.d2d_link_distance_m**2 / sinc(2.0 / cfg.pathloss_exponent)


def derive_constants(cfg: NetworkConfig) -> DerivedConstants:
    c = c_alpha(cfg)
    beta_act = (cfg.d2d_density_per_m2 * c) ** (-cfg.pathloss_exponent / 2.0)
    return DerivedConstants(k_alpha=k_alpha(cfg), c_alpha=c, beta_activation=beta_act)


@dataclass(frozen=True, eq=False)
class Snapshot:
    """One network realization.

    ``fading_to_rx[k, 0]`` is the uplink-user gain at receiver ``k`` and
    ``fading_to_rx[k, 1 + l]`` the gain from D2D transmitter ``l``.
    ``in_cell`` marks pairs whose transmitter lies inside the cell; only
    those are scored (all of them unless a guard ring is used).
    """

    uplink_position: np.ndarray
    d2d_tx_positions: np.ndarray
    d2d_rx_positions: np.ndarray
    fading_to_rx: np.ndarray
    in_cell: np.ndarray = field(default=None)

    def __post_init__(self):
        n = len(self.d2d_tx_positions)
        if self.in_cell is None:
            object.__setattr__(self, "in_cell", np.ones(n, dtype=bool))
        if len(self.d2d_rx_positions) != n or self.fading_to_rx.shape != (n, n + 1):
            raise ValueError("inconsistent snapshot dimensions")
        if len(self.in_cell) != n:
            raise ValueError("in_cell length does not match pair count")

    @property
    def n_pairs(self) -> int:
        return len(self.d2d_tx_positions)


def _uniform_disk(rng: np.random.Generator, radius: float, n: int) -> np.ndarray:
    r = radius * np.sqrt(rng.random(n))
    theta = 2.0 * np.pi * rng.random(n)
    return np.column_stack((r * np.cos(theta), r * np.sin(theta)))


def sample_snapshot(cfg: NetworkConfig, rng: np.random.Generator) -> Snapshot:
    """Draw one realization; ``rng`` must not be shared with other draws."""
    radius = cfg.cell_radius_m * cfg.guard_ring_factor
    n = int(rng.poisson(cfg.d2d_density_per_m2 * math.pi * radius**2))
    uplink = _uniform_disk(rng, cfg.cell_radius_m, 1)[0]
    tx = _uniform_disk(rng, radius, n)
    phi = 2.0 * np.pi * rng.random(n)
    d = cfg.d2d_link_distance_m
    rx = tx + d * np.column_stack((np.cos(phi), np.sin(phi)))
    fading = rng.exponential(1.0, size=(n, n + 1))
    in_cell = np.hypot(tx[:, 0], tx[:, 1]) <= cfg.cell_radius_m
    return Snapshot(uplink, tx, rx, fading, in_cell)
