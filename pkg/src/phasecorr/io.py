"""Canonical on-disk formats: series, spectrum and bispectrum-grid CSVs,
and the plain-text hotspot report."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .errors import FileUnreadable
from .spectral import BispectrumGrid, HotspotReport, TimeSeries, bicoherence

__all__ = [
    "write_series_csv",
    "read_series_csv",
    "write_spectrum_csv",
    "write_grid_csv",
    "write_heatmap_csv",
    "format_hotspot_report",
]


def write_series_csv(path: str | Path, series: TimeSeries) -> None:
    with open(path, "w") as fh:
        fh.write("t,value\n")
        for t, v in enumerate(series.values):
            fh.write(f"{t},{float(v)!r}\n")


def read_series_csv(path: str | Path, dt: float = 1.0) -> TimeSeries:
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise FileUnreadable(f"cannot read {path}: {exc}") from exc
    if not lines or lines[0].strip().lower() != "t,value":
        raise FileUnreadable(f"{path} is not a t,value series CSV")
    values = []
    for line in lines[1:]:
        if not line.strip():
            continue
        try:
            values.append(float(line.split(",")[1]))
        except (IndexError, ValueError) as exc:
            raise FileUnreadable(f"{path}: bad row {line!r}") from exc
    return TimeSeries(values=np.array(values), dt=dt, label=path.stem)


def write_spectrum_csv(path: str | Path, power: np.ndarray, n: int) -> None:
    """One row per bin 0..N/2 with the radians-per-sample frequency."""
    with open(path, "w") as fh:
        fh.write("bin,frequency_rad_per_sample,power\n")
        for k, p in enumerate(power):
            fh.write(f"{k},{2.0 * math.pi * k / n!r},{float(p)!r}\n")


def write_grid_csv(path: str | Path, grid: BispectrumGrid) -> None:
    """Principal-domain rows in row-major (k1, then k2) order."""
    b2 = bicoherence(grid)
    with open(path, "w") as fh:
        fh.write("k1,k2,re,im,magnitude,bicoherence\n")
        for i in range(len(grid.values)):
            v = complex(grid.values[i])
            fh.write(
                f"{grid.k1[i]},{grid.k2[i]},{v.real!r},{v.imag!r},{abs(v)!r},{float(b2[i])!r}\n"
            )


def write_heatmap_csv(path: str | Path, grid: BispectrumGrid) -> None:
    """Dense bicoherence matrix (rows k1, cols k2), symmetric fold applied."""
    b2 = bicoherence(grid)
    dense = np.zeros((grid.half + 1, grid.half + 1))
    dense[grid.k1, grid.k2] = b2
    dense[grid.k2, grid.k1] = b2
    with open(path, "w") as fh:
        header = ",".join(["k1\\k2"] + [str(k) for k in range(grid.half + 1)])
        fh.write(header + "\n")
        for k1 in range(grid.half + 1):
            fh.write(str(k1) + "," + ",".join(f"{x:.6g}" for x in dense[k1]) + "\n")


def format_hotspot_report(report: HotspotReport) -> str:
    lines = [
        "hotspot report",
        f"threshold: {report.threshold_used:.6g}",
        f"segments_averaged: {report.segments_averaged}",
        f"verdict: {report.verdict.value}",
        f"n_hotspots: {len(report.hotspots)}",
    ]
    if report.hotspots:
        lines.append("k1,k2,bicoherence,bispectrum_magnitude")
        for k1, k2, b2, mag in report.hotspots:
            lines.append(f"{k1},{k2},{b2:.6g},{mag:.6g}")
    return "\n".join(lines) + "\n"
