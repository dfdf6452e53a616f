"""Plain-text experiment configuration.

One ``section.key = value`` assignment per line, ``#`` starts a comment,
lists are comma separated. Unspecified keys fall back to the reference
scenario (500 m cell, 50 m links, 10 mW / 0.1 mW, pathloss exponent 4).
Precedence: overrides > file > defaults.
"""
from __future__ import annotations

from dataclasses import fields
from pathlib import Path
from typing import Any, Callable, Mapping

from .harness import DEFAULT_REALIZATIONS, STANDARD_SCHEMES, ExperimentPlan, scheme_by_label
from .model import ConfigError, NetworkConfig


def _float_list(text: str) -> tuple[float, ...]:
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items:
        raise ValueError("empty list")
    return tuple(float(t) for t in items)


def _label_list(text: str) -> tuple[str, ...]:
    items = tuple(t.strip() for t in text.split(",") if t.strip())
    if not items:
        raise ValueError("empty list")
    return items


# key -> (parser, unit description used in error messages)
KEYS: dict[str, tuple[Callable[[str], Any], str]] = {
    "network.cell_radius_m": (float, "metres"),
    "network.d2d_link_distance_m": (float, "metres"),
    "network.cellular_power_mw": (float, "mW"),
    "network.d2d_power_mw": (float, "mW"),
    "network.pathloss_exponent": (float, "dimensionless, > 2"),
    "network.guard_ring_factor": (float, "dimensionless, >= 1"),
    "sweep.lambda": (_float_list, "comma-separated densities per m^2"),
    "sweep.beta_db": (_float_list, "comma-separated target SIRs in dB"),
    "sweep.schemes": (_label_list, "comma-separated scheme labels"),
    "run.realizations": (int, "integer count"),
    "run.seed": (int, "64-bit unsigned integer"),
}

_NETWORK_FIELDS = {
    "network.cell_radius_m": "cell_radius_m",
    "network.d2d_link_distance_m": "d2d_link_distance_m",
    "network.cellular_power_mw": "cellular_power",
    "network.d2d_power_mw": "d2d_power",
    "network.pathloss_exponent": "pathloss_exponent",
    "network.guard_ring_factor": "guard_ring_factor",
}


def read_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'section.key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        raw[key] = value
    return raw


def _parse_value(key: str, value: Any) -> Any:
    if key not in KEYS:
        raise ConfigError(f"unknown config field {key!r}; known fields: {', '.join(KEYS)}")
    parser, unit = KEYS[key]
    if not isinstance(value, str):
        return value
    try:
        return parser(value)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {value!r}, expected {unit}") from None


def parse_config(path: str | Path | None = None, overrides: Mapping[str, Any] | None = None) -> ExperimentPlan:
    """Build an ExperimentPlan from an optional file plus dotted-key overrides."""
    merged: dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        merged.update(read_config_text(path.read_text(), str(path)))
    merged.update(overrides or {})
    values = {key: _parse_value(key, value) for key, value in merged.items()}

    base = {f.name: f.default for f in fields(NetworkConfig)}
    for key, name in _NETWORK_FIELDS.items():
        if key in values:
            base[name] = float(values[key])
    try:
        cfg = NetworkConfig(**base)
    except ConfigError as err:
        raise ConfigError(f"invalid network configuration: {err}") from None

    densities = values.get("sweep.lambda", (cfg.d2d_density_per_m2,))
    if any(d <= 0 for d in densities):
        raise ConfigError("sweep.lambda: densities must be > 0 per m^2")
    schemes = STANDARD_SCHEMES
    if "sweep.schemes" in values:
        try:
            schemes = tuple(scheme_by_label(label) for label in values["sweep.schemes"])
        except ValueError as err:
            raise ConfigError(f"sweep.schemes: {err}") from None
    try:
        return ExperimentPlan(
            cfg=cfg.with_density(densities[0]),
            schemes=schemes,
            density_sweep=tuple(densities),
            beta_sweep_db=tuple(values.get("sweep.beta_db", (5.0,))),
            n_realizations=int(values.get("run.realizations", DEFAULT_REALIZATIONS)),
            master_seed=int(values.get("run.seed", 0)),
        )
    except ValueError as err:
        raise ConfigError(str(err)) from None
