"""Closed-form coverage, throughput and optimal-threshold expressions.

All SIR arguments are linear. ``density`` is passed explicitly so that the
same configuration can be evaluated across a density sweep; it overrides
``cfg.d2d_density_per_m2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from scipy import integrate

from .lambertw import lambert_w0, lambert_w0_exp
from .model import NetworkConfig, c_alpha, k_alpha, sinc


class QuadratureError(RuntimeError):
    def __init__(self, message: str, value: float, abserr: float):
        super().__init__(f"{message} (estimate {value!r}, achieved abs error {abserr:.3g})")
        self.value = value
        self.abserr = abserr


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class ThresholdSolution:
    method: Literal["unconditional", "conditional"]
    ps_star: float
    g_star: float  # linear SIR, 0 when no selection is imposed
    active: bool

    @property
    def g_star_db(self) -> float | None:
        return linear_to_db(self.g_star) if self.g_star > 0 else None


def disk_distance_pdf(r: float, radius: float) -> float:
    """Density of the distance between two uniform points in a disk."""
    if r < 0 or r > 2 * radius:
        return 0.0
    u = r / (2 * radius)
    return (2 * r / radius**2) * (
        2 / math.pi * math.acos(u) - r / (math.pi * radius) * math.sqrt(max(0.0, 1 - u * u))
    )


def _quad(func, a, b, epsabs, what):
    value, abserr, info, *rest = integrate.quad(func, a, b, epsabs=epsabs, epsrel=0.0, limit=200, full_output=1)
    if rest or abserr > epsabs:
        raise QuadratureError(f"{what} did not converge", value, abserr)
    return value


def _d2d_exponent(beta: float, cfg: NetworkConfig, density: float) -> float:
    return density * c_alpha(cfg) * beta ** (2.0 / cfg.pathloss_exponent)


def cellular_coverage_factor(beta: float, cfg: NetworkConfig) -> float:
    """E over the uplink-user distance of the cellular-interference survival term."""
    a = cfg.pathloss_exponent
    kappa = beta * cfg.power_ratio * cfg.d2d_link_distance_m**a
    radius = cfg.cell_radius_m

    def integrand(r):
        ra = r**a
        return ra / (ra + kappa) * disk_distance_pdf(r, radius)

    return _quad(integrand, 0.0, 2 * radius, 1e-8, "coverage integral")


def coverage_prob_exact(beta: float, cfg: NetworkConfig, density: float) -> float:
    """Coverage with the uplink-user distance averaged by quadrature."""
    if beta <= 0 or density < 0:
        raise ValueError("need beta > 0 and density >= 0")
    return math.exp(-_d2d_exponent(beta, cfg, density)) * cellular_coverage_factor(beta, cfg)


def coverage_prob_approx(beta: float, cfg: NetworkConfig, density: float) -> float:
    """Coverage with the uplink-user distance replaced by its mean."""
    if beta < 0 or density < 0:
        raise ValueError("need beta >= 0 and density >= 0")
    b = beta ** (2.0 / cfg.pathloss_exponent)
    return math.exp(-density * c_alpha(cfg) * b) / (1.0 + k_alpha(cfg) * b)


def access_probability(g: float, cfg: NetworkConfig, density: float) -> float:
    """Probability that a link's all-active estimated SIR exceeds ``g``."""
    if g < 0:
        raise ValueError("threshold must be nonnegative")
    if g == 0:
        return 1.0
    return coverage_prob_approx(g, cfg, density)


def ase_unconditional(ps: float, beta: float, cfg: NetworkConfig, density: float) -> float:
    """ASE of a thinned network with success probability taken unconditionally."""
    if not 0 < ps <= 1:
        raise ValueError("ps must lie in (0, 1]")
    b = beta ** (2.0 / cfg.pathloss_exponent)
    return (
        density * ps * math.exp(-density * ps * c_alpha(cfg) * b)
        / (1.0 + k_alpha(cfg) * b) * math.log2(1.0 + beta)
    )


def ase_conditional_regimes(ps: float, beta: float, cfg: NetworkConfig, density: float) -> tuple[float, float]:
    """Small-ps and near-one-ps throughput branches as functions of ps."""
    b = beta ** (2.0 / cfg.pathloss_exponent)
    rate = math.log2(1.0 + beta)
    low = density * ps * rate
    high = density * rate / (1.0 + k_alpha(cfg) * b) * math.exp(-density * ps * c_alpha(cfg) * b)
    return low, high


def threshold_for_access_probability(ps: float, cfg: NetworkConfig, density: float) -> float:
    """Invert ``access_probability`` in closed form through Lambert W."""
    if not 0 < ps <= 1:
        raise ValueError("ps must lie in (0, 1]")
    if ps == 1.0:
        return 0.0
    lc = density * c_alpha(cfg)
    k = k_alpha(cfg)
    w = lambert_w0_exp(math.log(lc / (k * ps)) + lc / k)
    x = max(w / lc - 1.0 / k, 0.0)
    return x ** (cfg.pathloss_exponent / 2.0)


def optimal_unconditional(beta: float, cfg: NetworkConfig, density: float) -> ThresholdSolution:
    if beta <= 0:
        raise ValueError("beta must be positive")
    a = _d2d_exponent(beta, cfg, density)
    if a <= 1.0:
        return ThresholdSolution("unconditional", 1.0, 0.0, False)
    ps = 1.0 / a
    return ThresholdSolution("unconditional", ps, threshold_for_access_probability(ps, cfg, density), True)


def optimal_conditional(beta: float, cfg: NetworkConfig, density: float) -> ThresholdSolution:
    if beta <= 0:
        raise ValueError("beta must be positive")
    if density <= 0:
        raise ValueError("density must be positive")
    b = beta ** (2.0 / cfg.pathloss_exponent)
    a = density * c_alpha(cfg) * b
    ps = min(lambert_w0(a / (1.0 + k_alpha(cfg) * b)) / a, 1.0)
    if ps >= 1.0:
        return ThresholdSolution("conditional", 1.0, 0.0, False)
    return ThresholdSolution("conditional", ps, threshold_for_access_probability(ps, cfg, density), True)


def g_unconditional_asymptotic(beta: float, cfg: NetworkConfig, density: float) -> float:
    """Large-beta form of the unconditional threshold, using W(x) ~ ln x."""
    lc = density * c_alpha(cfg)
    k = k_alpha(cfg)
    b = beta ** (2.0 / cfg.pathloss_exponent)
    x = (math.log(lc**2 * b / k) + lc / k) / lc - 1.0 / k
    return max(x, 0.0) ** (cfg.pathloss_exponent / 2.0)


def sum_rate_integral(cfg: NetworkConfig, density: float) -> float:
    """Integral of P(SIR > x) / (1 + x) over x >= 0, i.e. ln 2 times E[log2(1 + SIR)]."""
    if density < 0:
        raise ValueError("density must be nonnegative")

    def head(x):
        return coverage_prob_approx(x, cfg, density) / (1.0 + x)

    def tail(t):
        # x = t / (1 - t) maps [1, inf) onto [1/2, 1)
        if t >= 1.0:
            return 0.0
        x = t / (1.0 - t)
        return coverage_prob_approx(x, cfg, density) / (1.0 - t)

    return _quad(head, 0.0, 1.0, 5e-7, "sum-rate integral") + _quad(tail, 0.5, 1.0, 5e-7, "sum-rate integral")


def sum_rate_analytic(cfg: NetworkConfig, density: float) -> float:
    """Average sum rate over all potential links when every link is active."""
    return density * cfg.cell_area / math.log(2.0) * sum_rate_integral(cfg, density)


def ase_no_ac(beta: float, cfg: NetworkConfig, density: float) -> float:
    return density * coverage_prob_approx(beta, cfg, density) * math.log2(1.0 + beta)


__all__ = [
    "QuadratureError",
    "ThresholdSolution",
    "access_probability",
    "ase_conditional_regimes",
    "ase_no_ac",
    "ase_unconditional",
    "coverage_prob_approx",
    "coverage_prob_exact",
    "db_to_linear",
    "disk_distance_pdf",
    "g_unconditional_asymptotic",
    "linear_to_db",
    "optimal_conditional",
    "optimal_unconditional",
    "sinc",
    "sum_rate_analytic",
    "sum_rate_integral",
    "threshold_for_access_probability",
]
