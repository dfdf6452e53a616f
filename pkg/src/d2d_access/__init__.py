"""SIR-aware opportunistic access control for D2D links underlaid on a cellular uplink."""

__version__ = "0.1.0"

from .model import ConfigError, DerivedConstants, NetworkConfig, Snapshot, derive_constants, sample_snapshot
from .sir import ActiveSet, LinkSirs, estimated_sirs, realized_sirs, snapshot_metrics
from .lambertw import lambert_w0, lambert_w0_exp
from .analytic import (
    ThresholdSolution,
    access_probability,
    ase_unconditional,
    coverage_prob_approx,
    coverage_prob_exact,
    db_to_linear,
    linear_to_db,
    optimal_conditional,
    optimal_unconditional,
    sum_rate_analytic,
)
from .access import AccessScheme, apply, channel_threshold_for_ps, default_search_grid, search_threshold
from .harness import ExperimentPlan, MetricsReport, SchemeSpec, STANDARD_SCHEMES, run_point, run_sweep
