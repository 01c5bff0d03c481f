"""Command-line entry point: generate, simulate, analyze, report.

Every command writes its outputs plus a ``manifest.json`` capturing the
resolved configuration, seed, and file lists, so any run can be
reproduced bit-exactly.  Exit codes: 0 success, 2 usage or input error,
3 numerical failure.
"""

from __future__ import annotations

import json
import shutil
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .errors import BlowUp, CflViolation, PhasecorrError
from .io import (
    format_hotspot_report,
    read_series_csv,
    write_grid_csv,
    write_heatmap_csv,
    write_series_csv,
    write_spectrum_csv,
)
from .market import build_series, load_ohlc_csv
from .simulator import SolverConfig, run as run_simulation
from .spectral import (
    TimeSeries,
    detect_hotspots,
    dft_forward,
    power_spectrum,
    segmented_bispectrum,
)
from .synthetic import (
    NoiseSpec,
    TriadSpec,
    gen_gaussian_box_muller,
    gen_triad,
    gen_white_uniform,
)


def _apply_config_file(ctx: click.Context, config_path: str | None) -> None:
    """key=value lines override option defaults; explicit flags still win."""
    if not config_path:
        return
    try:
        lines = Path(config_path).read_text().splitlines()
    except OSError as exc:
        raise click.UsageError(f"cannot read config file: {exc}")
    overrides = {}
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise click.UsageError(f"bad config line (expected key=value): {line!r}")
        key, _, value = line.partition("=")
        overrides[key.strip().replace("-", "_")] = value.strip()
    for key, value in overrides.items():
        if key not in ctx.params:
            raise click.UsageError(f"unknown config key {key!r}")
        src = ctx.get_parameter_source(key)
        if src is not None and src.name != "DEFAULT":
            continue
        current = ctx.params[key]
        if isinstance(current, bool):
            ctx.params[key] = value.lower() in ("1", "true", "yes", "on")
        elif isinstance(current, int):
            ctx.params[key] = int(value)
        elif isinstance(current, float):
            ctx.params[key] = float(value)
        else:
            ctx.params[key] = value


def _write_manifest(out: Path, command: str, config: dict, seed: int | None,
                    inputs: list[str], outputs: list[str]) -> None:
    manifest = {
        "command": command,
        "config": config,
        "seed": seed,
        "version": __version__,
        "inputs": sorted(inputs),
        "outputs": sorted(outputs),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _prepare_out(out: str) -> Path:
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


@click.group()
@click.version_option(__version__)
def main() -> None:
    """Spectral phase-correlation toolkit."""


@main.group()
def generate() -> None:
    """Generate synthetic benchmark series."""


@generate.command("triad")
@click.option("--coupled/--uncoupled", "coupled", default=True, show_default=True,
              help="Tie the third phase to the sum of the first two.")
@click.option("--omega-a", type=float, required=True, help="First frequency, rad/sample.")
@click.option("--omega-b", type=float, required=True, help="Second frequency, rad/sample.")
@click.option("--frequency-rule", type=click.Choice(["sum", "reciprocal"]), default="sum",
              show_default=True)
@click.option("--n", type=int, required=True, help="Number of samples.")
@click.option("--noise", type=float, default=0.05, show_default=True)
@click.option("--phase-block", type=int, default=0, show_default=True,
              help="Redraw phases every this many samples (0 = fixed phases).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=str, default=".", show_default=True)
@click.option("--config", "config_path", type=str, default=None, help="key=value overrides.")
@click.pass_context
def cmd_generate_triad(ctx, coupled, omega_a, omega_b, frequency_rule, n, noise,
                       phase_block, seed, out, config_path):
    """Write a three-cosine series with or without quadratic phase coupling."""
    _apply_config_file(ctx, config_path)
    p = ctx.params
    try:
        spec = TriadSpec(
            omega_alpha=p["omega_a"],
            omega_beta=p["omega_b"],
            coupling="phase_sum" if p["coupled"] else "independent",
            frequency_rule=p["frequency_rule"],
            n_samples=p["n"],
            noise_amplitude=p["noise"],
            seed=p["seed"],
            phase_block=p["phase_block"] or None,
        )
        series = gen_triad(spec)
    except (PhasecorrError, ValueError) as exc:
        raise click.UsageError(str(exc))
    out_dir = _prepare_out(p["out"])
    write_series_csv(out_dir / "series.csv", series)
    _write_manifest(out_dir, "generate triad",
                    {k: v for k, v in p.items() if k not in ("out", "config_path")},
                    p["seed"], [], ["series.csv"])
    click.echo(f"wrote {out_dir / 'series.csv'} ({len(series)} samples)")


@generate.command("noise")
@click.option("--kind", type=click.Choice(["uniform", "gaussian"]), default="uniform",
              show_default=True)
@click.option("--n", type=int, required=True, help="Number of samples.")
@click.option("--amplitude", type=float, default=1.0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=str, default=".", show_default=True)
@click.option("--config", "config_path", type=str, default=None, help="key=value overrides.")
@click.pass_context
def cmd_generate_noise(ctx, kind, n, amplitude, seed, out, config_path):
    """Write uniform white noise or Box-Muller Gaussian noise."""
    _apply_config_file(ctx, config_path)
    p = ctx.params
    try:
        spec = NoiseSpec(n_samples=p["n"], amplitude=p["amplitude"], seed=p["seed"])
        series = gen_white_uniform(spec) if p["kind"] == "uniform" else gen_gaussian_box_muller(spec)
    except (PhasecorrError, ValueError) as exc:
        raise click.UsageError(str(exc))
    out_dir = _prepare_out(p["out"])
    write_series_csv(out_dir / "series.csv", series)
    _write_manifest(out_dir, "generate noise",
                    {k: v for k, v in p.items() if k not in ("out", "config_path")},
                    p["seed"], [], ["series.csv"])
    click.echo(f"wrote {out_dir / 'series.csv'} ({len(series)} samples)")


@main.command("simulate")
@click.argument("equation", type=click.Choice(["burgers", "diffusion"]))
@click.option("--n", type=int, default=1024, show_default=True, help="Grid points (power of two).")
@click.option("--length", type=float, default=2.0 * np.pi, show_default=True)
@click.option("--dt", type=float, default=1e-4, show_default=True)
@click.option("--nu", type=float, default=3e-3, show_default=True)
@click.option("--forcing", type=float, default=6.0, show_default=True)
@click.option("--steps", type=int, default=100_000, show_default=True)
@click.option("--probe-index", type=int, default=0, show_default=True)
@click.option("--snapshot-stride", type=int, default=0, show_default=True,
              help="Steps between snapshots (0 = final only).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=str, default=".", show_default=True)
@click.option("--config", "config_path", type=str, default=None, help="key=value overrides.")
@click.pass_context
def cmd_simulate(ctx, equation, n, length, dt, nu, forcing, steps, probe_index,
                 snapshot_stride, seed, out, config_path):
    """Run the forced 1-D solver and write probe, snapshot and spectrum files."""
    _apply_config_file(ctx, config_path)
    p = ctx.params
    try:
        config = SolverConfig(
            n_grid=p["n"], length=p["length"], dt=p["dt"], nu=p["nu"],
            forcing_amplitude=p["forcing"], equation=p["equation"], seed=p["seed"],
            n_steps=p["steps"], probe_index=p["probe_index"],
            snapshot_stride=p["snapshot_stride"],
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))
    out_dir = _prepare_out(p["out"])
    try:
        result = run_simulation(config)
    except (BlowUp, CflViolation) as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(3)
    outputs = ["probe.csv", "spectrum.csv"]
    write_series_csv(out_dir / "probe.csv", result.probe_series)
    write_spectrum_csv(out_dir / "spectrum.csv", result.final_spatial_spectrum, config.n_grid)
    x = np.arange(config.n_grid) * (config.length / config.n_grid)
    for i, (_, u) in enumerate(result.snapshots):
        step_no = (i + 1) * config.snapshot_stride if config.snapshot_stride else config.n_steps
        step_no = min(step_no, config.n_steps)
        name = f"snap_{step_no:08d}.csv"
        with open(out_dir / name, "w") as fh:
            fh.write("x,u\n")
            for xi, ui in zip(x, u):
                fh.write(f"{float(xi)!r},{float(ui)!r}\n")
        outputs.append(name)
    _write_manifest(out_dir, f"simulate {p['equation']}",
                    {k: v for k, v in p.items() if k not in ("out", "config_path")},
                    p["seed"], [], outputs)
    click.echo(f"completed {config.n_steps} steps; outputs in {out_dir}")


@main.command("analyze")
@click.argument("input_path", type=str)
@click.option("--ohlc", is_flag=True, default=False, help="Input is an OHLCV CSV.")
@click.option("--field", "price_field", type=click.Choice(["close", "open", "mid"]),
              default="close", show_default=True)
@click.option("--transform", type=click.Choice(["raw", "demean", "log_return"]),
              default="raw", show_default=True)
@click.option("--segments", type=int, default=None,
              help="Target segment count (segment length = largest power of two that fits).")
@click.option("--segment-length", type=int, default=None, help="Explicit power-of-two length.")
@click.option("--overlap", type=float, default=0.0, show_default=True)
@click.option("--window", type=click.Choice(["rectangular", "hann"]), default="rectangular",
              show_default=True)
@click.option("--detrend", type=click.Choice(["none", "demean", "linear"]), default="demean",
              show_default=True)
@click.option("--threshold", type=str, default="auto", show_default=True)
@click.option("--min-segments", type=int, default=16, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True, help="Recorded in the manifest.")
@click.option("--out", type=str, default=".", show_default=True)
@click.option("--config", "config_path", type=str, default=None, help="key=value overrides.")
@click.pass_context
def cmd_analyze(ctx, input_path, ohlc, price_field, transform, segments, segment_length,
                overlap, window, detrend, threshold, min_segments, seed, out, config_path):
    """Run the full spectral analysis on a series and print the verdict."""
    _apply_config_file(ctx, config_path)
    p = ctx.params
    try:
        if p["ohlc"]:
            ticks, report = load_ohlc_csv(p["input_path"])
            series = build_series(ticks, price_field=p["price_field"], transform=p["transform"])
        else:
            series = read_series_csv(p["input_path"])
    except PhasecorrError as exc:
        click.echo(f"input error: {exc}", err=True)
        sys.exit(2)

    seg_len = p["segment_length"]
    if seg_len is None:
        target = p["segments"] or 64
        seg_len = 1 << max(3, (len(series) // target).bit_length() - 1)
    thr = p["threshold"]
    if thr != "auto":
        try:
            thr = float(thr)
        except ValueError:
            raise click.UsageError(f"--threshold must be 'auto' or a number, got {thr!r}")
    try:
        grid = segmented_bispectrum(series, seg_len, overlap_fraction=p["overlap"],
                                    window=p["window"], detrend=p["detrend"])
    except (PhasecorrError, ValueError) as exc:
        click.echo(f"input error: {exc}", err=True)
        sys.exit(2)
    hotspots = detect_hotspots(grid, threshold=thr, min_segments=p["min_segments"])

    out_dir = _prepare_out(p["out"])
    write_series_csv(out_dir / "raw_series.csv", series)
    write_spectrum_csv(out_dir / "spectrum.csv", power_spectrum(dft_forward(series)), len(series))
    write_grid_csv(out_dir / "bispectrum.csv", grid)
    write_heatmap_csv(out_dir / "heatmap.csv", grid)
    (out_dir / "hotspots.txt").write_text(format_hotspot_report(hotspots))
    _write_manifest(out_dir, "analyze",
                    {k: v for k, v in p.items() if k not in ("out", "config_path")},
                    p["seed"], [p["input_path"]],
                    ["raw_series.csv", "spectrum.csv", "bispectrum.csv", "heatmap.csv",
                     "hotspots.txt"])
    click.echo(hotspots.verdict.value)


REPORT_PANELS = {
    "raw": "raw_series.csv",
    "spectrum": "spectrum.csv",
    "bicoherence_heatmap": "heatmap.csv",
}


@main.command("report")
@click.argument("analysis_dir", type=str)
@click.option("--out", type=str, default=".", show_default=True)
@click.option("--render/--no-render", default=False, show_default=True,
              help="Also rasterize panels to PNG when matplotlib is available.")
@click.option("--seed", type=int, default=0, show_default=True, help="Recorded in the manifest.")
@click.pass_context
def cmd_report(ctx, analysis_dir, out, render, seed):
    """Assemble the three-panel data bundle from a completed analyze run."""
    src = Path(analysis_dir)
    for name in list(REPORT_PANELS.values()) + ["hotspots.txt"]:
        if not (src / name).exists():
            click.echo(f"missing input file: {src / name}", err=True)
            sys.exit(2)
    out_dir = _prepare_out(out)
    outputs = []
    for panel, name in REPORT_PANELS.items():
        shutil.copyfile(src / name, out_dir / name)
        outputs.append(name)
    shutil.copyfile(src / "hotspots.txt", out_dir / "hotspots.txt")
    outputs.append("hotspots.txt")
    index = {
        "panels": [
            {"name": "raw", "file": "raw_series.csv", "kind": "line"},
            {"name": "spectrum", "file": "spectrum.csv", "kind": "loglog"},
            {"name": "bicoherence_heatmap", "file": "heatmap.csv", "kind": "heatmap"},
        ],
        "verdict_file": "hotspots.txt",
    }
    (out_dir / "index.json").write_text(json.dumps(index, indent=2, sort_keys=True) + "\n")
    outputs.append("index.json")
    if render:
        rendered = _render_panels(src, out_dir)
        outputs.extend(rendered)
    _write_manifest(out_dir, "report", {"analysis_dir": analysis_dir, "render": render},
                    seed, [str(src / n) for n in REPORT_PANELS.values()], outputs)
    click.echo(f"report written to {out_dir}")


def _render_panels(src: Path, out_dir: Path) -> list[str]:
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        click.echo("matplotlib unavailable; skipping rendering", err=True)
        return []
    rendered = []
    raw = np.loadtxt(src / "raw_series.csv", delimiter=",", skiprows=1)
    fig, ax = plt.subplots()
    ax.plot(raw[:, 0], raw[:, 1], lw=0.5)
    ax.set_xlabel("t"); ax.set_ylabel("value")
    fig.savefig(out_dir / "raw.png", metadata={"Software": ""})
    plt.close(fig)
    rendered.append("raw.png")
    spec = np.loadtxt(src / "spectrum.csv", delimiter=",", skiprows=1)
    fig, ax = plt.subplots()
    nz = spec[:, 2] > 0
    ax.loglog(spec[nz, 0], spec[nz, 2], lw=0.5)
    ax.set_xlabel("bin"); ax.set_ylabel("power")
    fig.savefig(out_dir / "spectrum.png", metadata={"Software": ""})
    plt.close(fig)
    rendered.append("spectrum.png")
    heat = np.loadtxt(src / "heatmap.csv", delimiter=",", skiprows=1, usecols=None)
    fig, ax = plt.subplots()
    ax.imshow(heat[:, 1:], origin="lower", aspect="auto", cmap="viridis")
    ax.set_xlabel("k2"); ax.set_ylabel("k1")
    fig.savefig(out_dir / "heatmap.png", metadata={"Software": ""})
    plt.close(fig)
    rendered.append("heatmap.png")
    return rendered


if __name__ == "__main__":
    main()
