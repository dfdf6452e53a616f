"""Per-link SIR evaluation for a snapshot and an activation pattern.

Noise is not modelled: every D2D receiver always sees the uplink user, so
interference power is strictly positive and SIRs are finite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .model import NetworkConfig, Snapshot


class InvalidSnapshotError(ValueError):
    """Two distinct nodes coincide, so a pathloss term is unbounded."""


@dataclass(frozen=True, eq=False)
class ActiveSet:
    active_flags: np.ndarray

    def __len__(self) -> int:
        return len(self.active_flags)

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.active_flags))


@dataclass(frozen=True, eq=False)
class LinkSirs:
    values: np.ndarray
    kind: Literal["estimated", "realized"]


@dataclass(frozen=True, eq=False)
class ReceivedPowers:
    """Received powers at every D2D receiver, normalized by the D2D power.

    ``cross[k, l]`` is the power from transmitter ``l`` at receiver ``k``
    with the diagonal zeroed; the desired signal lives in ``signal``.
    """

    signal: np.ndarray
    cellular: np.ndarray
    cross: np.ndarray

    def sirs(self, active: np.ndarray | None = None) -> np.ndarray:
        # same reduction path for every mask so all-active equals the estimate bit for bit
        if active is None:
            active = np.ones(len(self.signal))
        interference = self.cross @ np.asarray(active, dtype=float)
        return self.signal / (self.cellular + interference)

    def sirs_many(self, masks: np.ndarray) -> np.ndarray:
        """Realized SIRs for a stack of activation masks of shape (N, M)."""
        interference = self.cross @ masks.astype(float)
        return self.signal[:, None] / (self.cellular[:, None] + interference)


def received_powers(snap: Snapshot, cfg: NetworkConfig) -> ReceivedPowers:
    alpha = cfg.pathloss_exponent
    rx = snap.d2d_rx_positions
    tx = snap.d2d_tx_positions
    n = snap.n_pairs
    if n == 0:
        empty = np.zeros(0)
        return ReceivedPowers(empty, empty, np.zeros((0, 0)))

    d_cell = np.hypot(rx[:, 0] - snap.uplink_position[0], rx[:, 1] - snap.uplink_position[1])
    diff = rx[:, None, :] - tx[None, :, :]
    d_cross = np.hypot(diff[..., 0], diff[..., 1])
    np.fill_diagonal(d_cross, np.inf)
    if np.any(d_cell == 0.0) or np.any(d_cross == 0.0):
        raise InvalidSnapshotError("coincident transmitter and receiver positions")

    h = snap.fading_to_rx
    direct = np.diagonal(h[:, 1:]) * cfg.d2d_link_distance_m ** (-alpha)
    cellular = cfg.power_ratio * h[:, 0] * d_cell ** (-alpha)
    cross = h[:, 1:] * d_cross ** (-alpha)
    return ReceivedPowers(direct, cellular, cross)


def estimated_sirs(snap: Snapshot, cfg: NetworkConfig) -> LinkSirs:
    """SIR at each receiver assuming every potential transmitter is on."""
    return LinkSirs(received_powers(snap, cfg).sirs(), "estimated")


def realized_sirs(snap: Snapshot, cfg: NetworkConfig, active: ActiveSet) -> LinkSirs:
    """SIR at each receiver when only ``active`` transmitters interfere.

    Entries for inactive links are still computed; callers ignore them.
    """
    if len(active) != snap.n_pairs:
        raise ValueError("active set length does not match snapshot")
    return LinkSirs(received_powers(snap, cfg).sirs(active.active_flags), "realized")


def snapshot_metrics(
    snap: Snapshot, cfg: NetworkConfig, active: ActiveSet, beta: float
) -> tuple[int, int, float]:
    """(covered active links, active links, sum of log2(1 + SIR) over active links).

    Only pairs inside the cell are counted. Coverage uses the strict test SIR > beta.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    flags = np.asarray(active.active_flags, dtype=bool)
    scored = flags & snap.in_cell
    if not scored.any():
        return 0, 0, 0.0
    sir = realized_sirs(snap, cfg, active).values[scored]
    covered = int(np.count_nonzero(sir > beta))
    rate = math.fsum(np.log2(1.0 + sir))
    return covered, int(scored.sum()), rate
