"""Access-control schemes mapping a snapshot to the set of active D2D links."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .model import NetworkConfig, Snapshot
from .sir import ActiveSet, received_powers

SchemeKind = Literal["no_ac", "channel_aware", "sir_threshold", "exhaustive"]


@dataclass(frozen=True)
class AccessScheme:
    kind: SchemeKind
    sir_threshold_linear: float | None = None
    channel_gain_threshold: float | None = None
    search_grid: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind == "sir_threshold":
            if self.sir_threshold_linear is None or not self.sir_threshold_linear >= 0:
                raise ValueError("sir_threshold needs a nonnegative sir_threshold_linear")
        elif self.kind == "channel_aware":
            if self.channel_gain_threshold is None or not self.channel_gain_threshold >= 0:
                raise ValueError("channel_aware needs a nonnegative channel_gain_threshold")
        elif self.kind == "exhaustive":
            grid = self.search_grid
            if not grid:
                raise ValueError("exhaustive needs a nonempty search_grid")
            if any(g < 0 for g in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
                raise ValueError("search_grid must be nonnegative and strictly increasing")
        elif self.kind != "no_ac":
            raise ValueError(f"unknown scheme kind {self.kind!r}")


def activation_mask(scheme: AccessScheme, estimated: np.ndarray, direct_gain: np.ndarray) -> np.ndarray:
    """Activation decisions from all-active estimated SIRs and direct-link fading."""
    if scheme.kind == "no_ac":
        return np.ones(len(estimated), dtype=bool)
    if scheme.kind == "sir_threshold":
        return estimated > scheme.sir_threshold_linear
    if scheme.kind == "channel_aware":
        if scheme.channel_gain_threshold == 0:
            return np.ones(len(direct_gain), dtype=bool)
        return direct_gain > scheme.channel_gain_threshold
    raise ValueError("exhaustive search is not a per-snapshot rule; use search_threshold")


def apply(scheme: AccessScheme, snap: Snapshot, cfg: NetworkConfig) -> ActiveSet:
    powers = received_powers(snap, cfg)
    direct_gain = np.diagonal(snap.fading_to_rx[:, 1:])
    return ActiveSet(activation_mask(scheme, powers.sirs(), direct_gain))


def channel_threshold_for_ps(ps: float) -> float:
    """Exp(1) upper quantile: P(|h|^2 > threshold) = ps."""
    if not 0 < ps <= 1:
        raise ValueError("ps must lie in (0, 1]")
    return -math.log(ps) if ps < 1 else 0.0


def default_search_grid(beta: float, n: int = 40) -> tuple[float, ...]:
    """G = 0 followed by ``n`` geometric points over [beta / 100, 10 beta]."""
    return (0.0,) + tuple(float(g) for g in np.geomspace(beta * 1e-2, beta * 10.0, n))


def search_threshold(
    grid: Sequence[float],
    cfg: NetworkConfig,
    density: float,
    beta: float,
    n_realizations: int,
    seed: int,
) -> tuple[float, float]:
    """Empirical ASE-maximizing SIR threshold over ``grid``.

    All candidates see the same snapshots. Ties go to the smaller threshold.
    """
    from .harness import evaluate_exhaustive

    scheme = AccessScheme("exhaustive", search_grid=tuple(float(g) for g in grid))
    g_best, ase_best, _ = evaluate_exhaustive(cfg, scheme.search_grid, density, beta, n_realizations, seed)
    return g_best, ase_best
