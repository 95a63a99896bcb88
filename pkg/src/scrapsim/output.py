"""Deterministic CSV and manifest writers.

Data files contain no timestamps and serialize floats as their shortest
round-trip decimal, so identical inputs produce byte-identical files.
All files use UTF-8, comma separators, a header row, and LF line endings.
"""

from __future__ import annotations

import json
import os
from datetime import datetime, timezone

from . import __version__
from .dynamics import Trajectory
from .sweep import MapResult, SweepResult, RegimeThresholds, regime_classify

__all__ = [
    "format_float",
    "trajectory_header",
    "write_trajectory_csv",
    "write_summary_csv",
    "write_sweep_csv",
    "write_map_csv",
    "write_manifest",
    "SWEEP_HEADER",
    "MAP_HEADER",
]

SWEEP_HEADER = ["gamma", "Gamma_per_s", "P_final_numeric", "P_final_analytic", "regime"]
MAP_HEADER = ["gamma", "t_s", "P_target"]


def format_float(x: float) -> str:
    """Shortest decimal that round-trips to the same 64-bit float."""
    return repr(float(x))


def _write_rows(path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def trajectory_header(labels: tuple[str, ...], with_adiabatic: bool) -> list[str]:
    header = ["t_s"]
    for lab in labels:
        header += [f"re_c{lab}", f"im_c{lab}"]
    header += [f"p{lab}" for lab in labels]
    header.append("norm")
    if with_adiabatic:
        header += ["theta_rad", "eta"]
    return header


def write_trajectory_csv(path, traj: Trajectory, labels: tuple[str, ...]) -> None:
    """One row per recorded sample: time, amplitudes, populations, norm,
    and (for two-level runs) the mixing angle and adiabaticity parameter."""
    if len(labels) != traj.dim:
        raise ValueError(f"got {len(labels)} labels for dimension {traj.dim}")
    with_adiabatic = traj.theta is not None
    header = trajectory_header(labels, with_adiabatic)

    def rows():
        for k in range(len(traj.times)):
            row = [format_float(traj.times[k])]
            for i in range(traj.dim):
                amp = traj.amplitudes[k, i]
                row += [format_float(amp.real), format_float(amp.imag)]
            row += [format_float(p) for p in traj.populations[k]]
            row.append(format_float(traj.norm[k]))
            if with_adiabatic:
                row += [format_float(traj.theta[k]), format_float(traj.eta[k])]
            yield row

    _write_rows(path, header, rows())


def write_summary_csv(path, fields: dict[str, object]) -> None:
    """Single-row summary; values may be floats, strings, or None (empty)."""

    def render(v):
        if v is None:
            return ""
        if isinstance(v, str):
            return v
        return format_float(v)

    _write_rows(path, list(fields), [[render(v) for v in fields.values()]])


def write_sweep_csv(path, sweep: SweepResult, thresholds: RegimeThresholds) -> None:
    def rows():
        for g, num, ana in zip(sweep.gamma_values, sweep.final_numeric, sweep.final_analytic):
            yield [
                format_float(g),
                format_float(g / sweep.t_ref),
                format_float(num),
                format_float(ana),
                regime_classify(g, thresholds).value,
            ]

    _write_rows(path, SWEEP_HEADER, rows())


def write_map_csv(path, result: MapResult) -> None:
    """Long format: one row per (gamma, t) grid point."""

    def rows():
        for g, row in zip(result.gamma_values, result.grid):
            g_txt = format_float(g)
            for t, p in zip(result.times, row):
                yield [g_txt, format_float(t), format_float(p)]

    _write_rows(path, MAP_HEADER, rows())


def write_manifest(path, config_hash: str, command: str, files: list[str]) -> None:
    """Run manifest: config hash, tool version, UTC timestamp, and the
    complete list of emitted files (the manifest itself excluded)."""
    payload = {
        "config_hash": config_hash,
        "tool_version": __version__,
        "command": command,
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "files": sorted(os.path.basename(f) for f in files),
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
