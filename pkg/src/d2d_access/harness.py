"""Seeded Monte Carlo runner.

Every realization draws from its own stream, derived from the point seed
and the realization index, so results do not depend on how work is split
across processes. Schemes evaluated at the same (density, beta) point share
snapshots (common random numbers), and totals are reduced with ``math.fsum``
so the floating-point result is independent of reduction order.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from . import analytic
from .access import AccessScheme, activation_mask, channel_threshold_for_ps, default_search_grid
from .analytic import db_to_linear, linear_to_db
from .model import NetworkConfig, sample_snapshot
from .sir import received_powers

log = logging.getLogger(__name__)

DEFAULT_REALIZATIONS = 20000

ThresholdSource = Literal["fixed", "unconditional", "conditional", "exhaustive"]


class DegeneratePointError(RuntimeError):
    """No link was ever active at a sweep point, so coverage is undefined."""

    def __init__(self, scheme_id: str, density: float, beta_db: float, empirical_ps: float):
        super().__init__(
            f"{scheme_id} at lambda={density:g}, beta={beta_db:g} dB activated no link "
            f"(empirical ps = {empirical_ps:g})"
        )
        self.scheme_id = scheme_id
        self.density = density
        self.beta_db = beta_db
        self.empirical_ps = empirical_ps


@dataclass(frozen=True)
class SchemeSpec:
    """A scheme whose threshold is resolved per (density, beta) point."""

    label: str
    kind: Literal["no_ac", "channel_aware", "sir_threshold", "exhaustive"]
    source: ThresholdSource | None = None
    value: float | None = None  # linear SIR for source="fixed"
    grid: tuple[float, ...] | None = None  # exhaustive only; default grid otherwise

    def __post_init__(self):
        if self.kind == "sir_threshold" and self.source not in ("fixed", "unconditional", "conditional"):
            raise ValueError(f"{self.label}: sir_threshold needs source fixed|unconditional|conditional")
        if self.source == "fixed" and (self.value is None or self.value < 0):
            raise ValueError(f"{self.label}: fixed threshold needs a nonnegative value")


STANDARD_SCHEMES = (
    SchemeSpec("no_ac", "no_ac"),
    SchemeSpec("channel_aware", "channel_aware", source="unconditional"),
    SchemeSpec("sir_unconditional", "sir_threshold", source="unconditional"),
    SchemeSpec("sir_conditional", "sir_threshold", source="conditional"),
    SchemeSpec("exhaustive", "exhaustive", source="exhaustive"),
)


def scheme_by_label(label: str) -> SchemeSpec:
    for spec in STANDARD_SCHEMES:
        if spec.label == label:
            return spec
    if label.startswith("sir_fixed_db="):
        db = float(label.split("=", 1)[1])
        return SchemeSpec(label, "sir_threshold", source="fixed", value=db_to_linear(db))
    known = ", ".join(s.label for s in STANDARD_SCHEMES)
    raise ValueError(f"unknown scheme {label!r}; expected one of {known} or sir_fixed_db=<dB>")


@dataclass(frozen=True)
class ExperimentPlan:
    cfg: NetworkConfig = field(default_factory=NetworkConfig)
    schemes: tuple[SchemeSpec, ...] = STANDARD_SCHEMES
    density_sweep: tuple[float, ...] = (2e-5,)
    beta_sweep_db: tuple[float, ...] = (5.0,)
    n_realizations: int = DEFAULT_REALIZATIONS
    master_seed: int = 0

    def __post_init__(self):
        if self.n_realizations < 1:
            raise ValueError("n_realizations must be >= 1")
        if not self.schemes or not self.density_sweep or not self.beta_sweep_db:
            raise ValueError("schemes and sweeps must be nonempty")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")

    def points(self) -> list[tuple[float, float]]:
        return [(lam, b) for lam in self.density_sweep for b in self.beta_sweep_db]


@dataclass(frozen=True)
class MetricsReport:
    scheme_id: str
    density: float
    beta_db: float
    g_used_linear: float
    ps_analytic: float
    empirical_ps: float
    coverage_prob: float
    ase: float
    avg_sum_rate: float
    coverage_stderr: float
    ase_stderr: float
    rate_stderr: float
    ps_stderr: float
    mean_active: float
    n_realizations: int
    seed: int

    @property
    def g_used_db(self) -> float | None:
        return linear_to_db(self.g_used_linear) if self.g_used_linear > 0 else None


@dataclass(frozen=True)
class Tallies:
    """Per-realization counts; columns of the 2-D arrays index schemes."""

    pairs: np.ndarray
    active: np.ndarray
    covered: np.ndarray
    rate: np.ndarray


def realization_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def derive_seed(master_seed: int, point_index: int) -> int:
    state = np.random.SeedSequence(master_seed, spawn_key=(point_index,)).generate_state(1, np.uint64)
    return int(state[0])


def simulate(
    cfg: NetworkConfig,
    schemes: Sequence[AccessScheme],
    density: float,
    beta: float,
    n_realizations: int,
    seed: int,
) -> Tallies:
    """Run all ``schemes`` on the same ``n_realizations`` snapshots."""
    cfg = cfg.with_density(density)
    m = len(schemes)
    pairs = np.zeros(n_realizations, dtype=np.int64)
    active = np.zeros((n_realizations, m), dtype=np.int64)
    covered = np.zeros((n_realizations, m), dtype=np.int64)
    rate = np.zeros((n_realizations, m))
    for i in range(n_realizations):
        snap = sample_snapshot(cfg, realization_rng(seed, i))
        scored = snap.in_cell
        pairs[i] = np.count_nonzero(scored)
        if snap.n_pairs == 0:
            continue
        powers = received_powers(snap, cfg)
        estimated = powers.sirs()
        direct = np.diagonal(snap.fading_to_rx[:, 1:])
        masks = np.column_stack([activation_mask(s, estimated, direct) for s in schemes])
        realized = powers.sirs_many(masks)
        on = masks & scored[:, None]
        active[i] = on.sum(axis=0)
        covered[i] = (on & (realized > beta)).sum(axis=0)
        rate[i] = np.where(on, np.log2(1.0 + realized), 0.0).sum(axis=0)
    return Tallies(pairs, active, covered, rate)


def _mean_and_stderr(x: np.ndarray) -> tuple[float, float]:
    n = len(x)
    mean = math.fsum(x) / n
    if n < 2:
        return mean, 0.0
    var = math.fsum((x - mean) ** 2) / (n - 1)
    return mean, math.sqrt(var / n)


def _ratio_and_stderr(num: np.ndarray, den: np.ndarray) -> tuple[float, float]:
    n = len(num)
    total_den = math.fsum(den)
    r = math.fsum(num) / total_den
    if n < 2:
        return r, 0.0
    resid = num - r * den
    var = math.fsum(resid**2) / (n - 1)
    return r, math.sqrt(var / n) / (total_den / n)


def build_report(
    tallies: Tallies,
    column: int,
    cfg: NetworkConfig,
    scheme_id: str,
    density: float,
    beta: float,
    g_used: float,
    ps_analytic: float,
    seed: int,
    beta_db: float | None = None,
) -> MetricsReport:
    n = len(tallies.pairs)
    act = tallies.active[:, column].astype(float)
    cov = tallies.covered[:, column].astype(float)
    pairs = tallies.pairs.astype(float)
    if beta_db is None:
        beta_db = linear_to_db(beta)
    total_pairs = math.fsum(pairs)
    empirical_ps, ps_se = _ratio_and_stderr(act, pairs) if total_pairs > 0 else (0.0, 0.0)
    if math.fsum(act) == 0:
        raise DegeneratePointError(scheme_id, density, beta_db, empirical_ps)
    coverage, cov_se = _ratio_and_stderr(cov, act)
    ase, ase_se = _mean_and_stderr(cov * (math.log2(1.0 + beta) / cfg.cell_area))
    rate, rate_se = _mean_and_stderr(tallies.rate[:, column])
    return MetricsReport(
        scheme_id=scheme_id,
        density=density,
        beta_db=beta_db,
        g_used_linear=g_used,
        ps_analytic=ps_analytic,
        empirical_ps=empirical_ps,
        coverage_prob=coverage,
        ase=ase,
        avg_sum_rate=rate,
        coverage_stderr=cov_se,
        ase_stderr=ase_se,
        rate_stderr=rate_se,
        ps_stderr=ps_se,
        mean_active=math.fsum(act) / n,
        n_realizations=n,
        seed=seed,
    )


def resolve(spec: SchemeSpec, cfg: NetworkConfig, density: float, beta: float) -> tuple[AccessScheme, float, float]:
    """Concrete scheme, analytic access probability and SIR threshold used."""
    if spec.kind == "no_ac":
        return AccessScheme("no_ac"), 1.0, 0.0
    if spec.kind == "exhaustive":
        grid = spec.grid if spec.grid is not None else default_search_grid(beta)
        return AccessScheme("exhaustive", search_grid=tuple(grid)), math.nan, math.nan
    if spec.source == "fixed":
        g = spec.value
        ps = analytic.access_probability(g, cfg, density)
    else:
        solve = analytic.optimal_unconditional if spec.source == "unconditional" else analytic.optimal_conditional
        sol = solve(beta, cfg, density)
        g, ps = sol.g_star, sol.ps_star
    if spec.kind == "channel_aware":
        return AccessScheme("channel_aware", channel_gain_threshold=channel_threshold_for_ps(ps)), ps, 0.0
    return AccessScheme("sir_threshold", sir_threshold_linear=g), ps, g


def _pick_best(tallies: Tallies, offset: int, grid: Sequence[float], beta: float) -> int:
    log_rate = math.log2(1.0 + beta)
    ases = [math.fsum(tallies.covered[:, offset + j]) * log_rate for j in range(len(grid))]
    # first maximum in increasing-G order breaks ties toward the smaller threshold
    return int(np.argmax(ases))


def evaluate_exhaustive(
    cfg: NetworkConfig, grid: Sequence[float], density: float, beta: float, n_realizations: int, seed: int
) -> tuple[float, float, Tallies]:
    schemes = [AccessScheme("sir_threshold", sir_threshold_linear=g) for g in grid]
    tallies = simulate(cfg, schemes, density, beta, n_realizations, seed)
    j = _pick_best(tallies, 0, grid, beta)
    ase = math.fsum(tallies.covered[:, j]) / n_realizations * math.log2(1.0 + beta) / cfg.cell_area
    return float(grid[j]), ase, tallies


def run_schemes(
    cfg: NetworkConfig,
    specs: Sequence[SchemeSpec],
    density: float,
    beta: float,
    n_realizations: int,
    seed: int,
    beta_db: float | None = None,
) -> list[MetricsReport | DegeneratePointError]:
    """Evaluate several schemes at one point on common snapshots."""
    cfg = cfg.with_density(density)
    concrete: list[AccessScheme] = []
    layout = []
    for spec in specs:
        scheme, ps, g = resolve(spec, cfg, density, beta)
        if scheme.kind == "exhaustive":
            grid = scheme.search_grid
            layout.append((spec, len(concrete), grid, None, None))
            concrete.extend(AccessScheme("sir_threshold", sir_threshold_linear=x) for x in grid)
        else:
            layout.append((spec, len(concrete), None, ps, g))
            concrete.append(scheme)

    tallies = simulate(cfg, concrete, density, beta, n_realizations, seed)
    out: list[MetricsReport | DegeneratePointError] = []
    for spec, offset, grid, ps, g in layout:
        column = offset
        if grid is not None:
            column = offset + _pick_best(tallies, offset, grid, beta)
            g = grid[column - offset]
            ps = analytic.access_probability(g, cfg, density)
        try:
            out.append(build_report(tallies, column, cfg, spec.label, density, beta, g, ps, seed, beta_db))
        except DegeneratePointError as err:
            out.append(err)
    return out


def run_point(
    cfg: NetworkConfig,
    scheme: SchemeSpec | AccessScheme,
    density: float,
    beta: float,
    n_realizations: int,
    seed: int,
) -> MetricsReport:
    if isinstance(scheme, AccessScheme):
        if scheme.kind == "sir_threshold":
            spec = SchemeSpec("sir_threshold", "sir_threshold", "fixed", scheme.sir_threshold_linear)
        elif scheme.kind == "exhaustive":
            spec = SchemeSpec("exhaustive", "exhaustive", "exhaustive", grid=scheme.search_grid)
        elif scheme.kind == "channel_aware":
            tallies = simulate(cfg, [scheme], density, beta, n_realizations, seed)
            ps = math.exp(-scheme.channel_gain_threshold)
            return build_report(tallies, 0, cfg.with_density(density), "channel_aware", density, beta, 0.0, ps, seed)
        else:
            spec = SchemeSpec(scheme.kind, scheme.kind)
    else:
        spec = scheme
    (result,) = run_schemes(cfg, [spec], density, beta, n_realizations, seed)
    if isinstance(result, DegeneratePointError):
        raise result
    return result


class SweepError(RuntimeError):
    """Some sweep points failed; completed reports are kept on ``reports``."""

    def __init__(self, reports: list[MetricsReport], errors: list[Exception]):
        super().__init__(f"{len(errors)} sweep point(s) failed: " + "; ".join(map(str, errors)))
        self.reports = reports
        self.errors = errors


def _run_point_task(args):
    cfg, specs, density, beta_db, n, seed = args
    return run_schemes(cfg, specs, density, db_to_linear(beta_db), n, seed, beta_db)


def run_sweep(plan: ExperimentPlan, workers: int = 1) -> list[MetricsReport]:
    """All (density, beta) points in plan order; schemes share snapshots at each point."""
    tasks = [
        (plan.cfg, plan.schemes, lam, beta_db, plan.n_realizations, derive_seed(plan.master_seed, idx))
        for idx, (lam, beta_db) in enumerate(plan.points())
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_point_task, tasks))
    else:
        results = [_run_point_task(t) for t in tasks]

    reports: list[MetricsReport] = []
    errors: list[Exception] = []
    for point in results:
        for item in point:
            if isinstance(item, Exception):
                log.warning("%s", item)
                errors.append(item)
            else:
                reports.append(item)
    if errors:
        raise SweepError(reports, errors)
    return reports
