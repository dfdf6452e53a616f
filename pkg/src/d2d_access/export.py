"""CSV / JSON export of sweep reports and run manifests."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, fields
from datetime import datetime, timezone
from pathlib import Path
from typing import Literal, Sequence

from . import __version__
from .harness import ExperimentPlan, MetricsReport, SchemeSpec
from .model import NetworkConfig

CSV_COLUMNS = (
    "scheme_id",
    "lambda",
    "beta_db",
    "g_used_db",
    "ps_analytic",
    "ps_empirical",
    "coverage_prob",
    "ase",
    "avg_sum_rate",
    "coverage_stderr",
    "ase_stderr",
    "rate_stderr",
    "n_realizations",
    "seed",
)


class ExportError(OSError):
    pass


def format_number(x: float) -> str:
    return format(x, ".17g")


@dataclass(frozen=True)
class RunManifest:
    plan: ExperimentPlan
    tool_version: str
    timestamp: str  # ISO 8601, UTC
    output_paths: tuple[str, ...] = ()

    @classmethod
    def create(cls, plan: ExperimentPlan, output_paths: Sequence[str] = ()) -> "RunManifest":
        now = datetime.now(timezone.utc).isoformat(timespec="seconds")
        return cls(plan, __version__, now, tuple(output_paths))


def plan_to_dict(plan: ExperimentPlan) -> dict:
    return {
        "cfg": asdict(plan.cfg),
        "schemes": [asdict(s) for s in plan.schemes],
        "density_sweep": list(plan.density_sweep),
        "beta_sweep_db": list(plan.beta_sweep_db),
        "n_realizations": plan.n_realizations,
        "master_seed": plan.master_seed,
    }


def plan_from_dict(d: dict) -> ExperimentPlan:
    schemes = []
    for s in d["schemes"]:
        s = dict(s)
        if s.get("grid") is not None:
            s["grid"] = tuple(s["grid"])
        schemes.append(SchemeSpec(**s))
    return ExperimentPlan(
        cfg=NetworkConfig(**d["cfg"]),
        schemes=tuple(schemes),
        density_sweep=tuple(d["density_sweep"]),
        beta_sweep_db=tuple(d["beta_sweep_db"]),
        n_realizations=d["n_realizations"],
        master_seed=d["master_seed"],
    )


def manifest_to_dict(m: RunManifest) -> dict:
    return {
        "plan": plan_to_dict(m.plan),
        "tool_version": m.tool_version,
        "timestamp": m.timestamp,
        "output_paths": list(m.output_paths),
    }


def manifest_from_dict(d: dict) -> RunManifest:
    return RunManifest(plan_from_dict(d["plan"]), d["tool_version"], d["timestamp"], tuple(d["output_paths"]))


def _csv_row(r: MetricsReport) -> list[str]:
    g_db = r.g_used_db
    return [
        r.scheme_id,
        format_number(r.density),
        format_number(r.beta_db),
        "" if g_db is None else format_number(g_db),
        format_number(r.ps_analytic),
        format_number(r.empirical_ps),
        format_number(r.coverage_prob),
        format_number(r.ase),
        format_number(r.avg_sum_rate),
        format_number(r.coverage_stderr),
        format_number(r.ase_stderr),
        format_number(r.rate_stderr),
        str(r.n_realizations),
        str(r.seed),
    ]


def reports_to_csv(reports: Sequence[MetricsReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    writer.writerows(_csv_row(r) for r in reports)
    return buf.getvalue()


def reports_to_json(reports: Sequence[MetricsReport], manifest: RunManifest | None = None) -> str:
    rows = []
    for r in reports:
        row = asdict(r)
        row["g_used_db"] = r.g_used_db
        rows.append(row)
    doc = {"manifest": manifest_to_dict(manifest) if manifest else None, "reports": rows}
    return json.dumps(doc, indent=2) + "\n"


def reports_from_json(text: str) -> tuple[list[MetricsReport], RunManifest | None]:
    doc = json.loads(text)
    names = {f.name for f in fields(MetricsReport)}
    reports = [MetricsReport(**{k: v for k, v in row.items() if k in names}) for row in doc["reports"]]
    manifest = manifest_from_dict(doc["manifest"]) if doc.get("manifest") else None
    return reports, manifest


def export_reports(
    reports: Sequence[MetricsReport],
    fmt: Literal["csv", "json"],
    path: str | Path,
    manifest: RunManifest | None = None,
) -> Path:
    if not reports:
        raise ValueError("no reports to export")
    path = Path(path)
    if fmt == "csv":
        text = reports_to_csv(reports)
    elif fmt == "json":
        text = reports_to_json(reports, manifest)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    try:
        path.write_text(text)
    except OSError as err:
        raise ExportError(f"cannot write {path}: {err.strerror or err}") from err
    return path
