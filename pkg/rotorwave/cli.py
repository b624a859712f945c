# rotorwave/cli.py
from __future__ import annotations

from pathlib import Path
from typing import Any, Callable, Dict, Optional

import numpy as np
import pydantic
import typer
from typer import Context, Option

from rotorwave.cli_support import (
    init_common,
    load_config_file,
    prepare_out_dir,
    resolve_spectrum,
    resolve_wavepacket,
    logger,
)
from rotorwave.core import report
from rotorwave.core.errors import ConfigurationError, DomainError, RotorwaveError
from rotorwave.engine.carpet import carpet, carpet_export, write_carpet_metadata
from rotorwave.engine.evolution import TimeScales, propagate, timescales
from rotorwave.engine.observables import observables_series, write_observables_csv
from rotorwave.engine.revival import FractionalTime, analyze_revival
from rotorwave.models.config import RunConfig
from rotorwave.settings import settings

app = typer.Typer(
    help="rotorwave – rotor wave-packet revivals, observables and quantum carpets",
    add_completion=False,
)

EXIT_CONFIG = 2
EXIT_NUMERICAL = 1


# ──────────────────────────────────────────────────────────────────────────────
# SHARED OPTIONS ───────────────────────────────────────────────────────────────
# ──────────────────────────────────────────────────────────────────────────────
_N = Option(None, "--N", help="Coherent-state size N > 0")
_ETA = Option(None, "--eta", help="Coherent-state ellipticity in [-1, 1]")
_LMAX = Option(None, "--lmax", help="Truncation order (default: smallest meeting --tol)")
_TOL = Option(None, "--tol", help="Norm-defect tolerance (default 1e-10)")
_B = Option(None, "--B", help="Ideal-rotor constant B (natural units)")
_LEVELS = Option(None, "--levels", help="Level file with 'I E_keV' rows")
_AMPLITUDES = Option(None, "--amplitudes", help="Amplitude file ('I [M] re [im]' rows)")
_SURROGATE = Option(None, "--surrogate", help="Gaussian surrogate 'ibar,sigma,imax'")
_T0 = Option(None, "--t0", help="Window start in units of t_rev")
_T1 = Option(None, "--t1", help="Window end in units of t_rev")
_TSTEPS = Option(None, "--tsteps", help="Number of time samples")
_OUT = Option(None, "--out", "-o", help="Output directory")
_CONFIG = Option(None, "--config", "-c", help="JSON or YAML run configuration")
_ENV = Option(None, "--env-file", "-e", help="Optional .env")
_LOG = Option("INFO", "--log-level", "-l", help="Logging level")


# ──────────────────────────────────────────────────────────────────────────────
# SHARED RUNNER ────────────────────────────────────────────────────────────────
# ──────────────────────────────────────────────────────────────────────────────
def _execute(
    ctx: Context,
    command: str,
    *,
    config_file: Optional[Path],
    env_file: Optional[Path],
    log_level: str,
    flags: Dict[str, Any],
    runner: Callable[[RunConfig], str],
) -> None:
    """Bootstrap, validate the configuration, run, and map errors to exit codes."""
    try:
        init_common(ctx, env_file, log_level)
        config = RunConfig.from_sources(command, load_config_file(config_file), flags)
    except pydantic.ValidationError as exc:
        typer.echo(f"configuration error: {exc}", err=True)
        raise typer.Exit(EXIT_CONFIG)
    except ConfigurationError as exc:
        typer.echo(f"configuration error: {exc}", err=True)
        raise typer.Exit(EXIT_CONFIG)

    try:
        message = runner(config)
    except (ConfigurationError, DomainError) as exc:
        typer.echo(f"configuration error: {exc}", err=True)
        raise typer.Exit(EXIT_CONFIG)
    except RotorwaveError as exc:
        typer.echo(f"error: {exc}", err=True)
        raise typer.Exit(EXIT_NUMERICAL)
    typer.echo(message)


def _timescale_view(ts: Optional[TimeScales], physical: bool) -> Optional[dict]:
    if ts is None:
        return None
    view = ts.to_dict()
    if physical:
        view["t_cl_s"] = settings.seconds(ts.t_cl)
        view["t_rev_s"] = settings.seconds(ts.t_rev)
    return view


def _write_manifest(config: RunConfig, wp, spectrum, ts, scheme, artifacts) -> None:
    manifest = report.make_manifest(
        config.command,
        config.manifest_view(),
        timescales=_timescale_view(ts, scheme is not None),
        norm_defects={"initial": wp.norm_defect},
        artifacts=[*artifacts, "manifest.json"],
        extra={
            "wavepacket": wp.descriptor(),
            "spectrum": spectrum.descriptor() if spectrum is not None else None,
        },
    )
    report.write_report_obj(manifest, config.out / "manifest.json")


def _window(config: RunConfig, ts: TimeScales) -> tuple[float, float]:
    return config.t0 * ts.t_rev, config.t1 * ts.t_rev


# ──────────────────────────────────────────────────────────────────────────────
# TOP-LEVEL OPTIONS – only --version here -------------------------------------
# ──────────────────────────────────────────────────────────────────────────────
@app.callback(invoke_without_command=True)
def top_callback(
    ctx: Context,
    version: bool = Option(False, "--version", help="Show version and exit"),
):
    if version:
        from rotorwave import __version__

        typer.echo(f"rotorwave {__version__}")
        raise typer.Exit()
    if ctx.invoked_subcommand is None:
        typer.echo(ctx.get_help())
        raise typer.Exit(EXIT_CONFIG)


# ──────────────────────────────────────────────────────────────────────────────
# expand  ---------------------------------------------------------------------
# ──────────────────────────────────────────────────────────────────────────────
@app.command("expand", help="Expand the initial packet and write its coefficient table.")
def expand_cmd(
    ctx: Context,
    N: Optional[float] = _N,
    eta: Optional[float] = _ETA,
    lmax: Optional[int] = _LMAX,
    tol: Optional[float] = _TOL,
    B: Optional[float] = _B,
    levels: Optional[Path] = _LEVELS,
    amplitudes: Optional[Path] = _AMPLITUDES,
    surrogate: Optional[str] = _SURROGATE,
    out: Optional[Path] = _OUT,
    config_file: Optional[Path] = _CONFIG,
    env_file: Optional[Path] = _ENV,
    log_level: str = _LOG,
):
    def run(config: RunConfig) -> str:
        wp = resolve_wavepacket(config)
        spectrum, scheme = resolve_spectrum(config)
        ts = None
        if spectrum is not None and wp.mean_i() >= 1.0:
            ts = timescales(spectrum, wp.mean_i())
        prepare_out_dir(config.out)
        wp.save(config.out / "wavepacket.json")
        _write_manifest(config, wp, spectrum, ts, scheme, ["wavepacket.json"])
        return (
            f"✅ l_max={wp.l_max} norm defect={wp.norm_defect:.3e}; "
            f"coefficients written to {config.out / 'wavepacket.json'}"
        )

    flags = dict(N=N, eta=eta, lmax=lmax, tol=tol, B=B, levels=levels,
                 amplitudes=amplitudes, surrogate=surrogate, out=out)
    _execute(ctx, "expand", config_file=config_file, env_file=env_file,
             log_level=log_level, flags=flags, runner=run)


# ──────────────────────────────────────────────────────────────────────────────
# observables  ----------------------------------------------------------------
# ──────────────────────────────────────────────────────────────────────────────
@app.command("observables", help="Angular-momentum moments and autocorrelation over time.")
def observables_cmd(
    ctx: Context,
    N: Optional[float] = _N,
    eta: Optional[float] = _ETA,
    lmax: Optional[int] = _LMAX,
    tol: Optional[float] = _TOL,
    B: Optional[float] = _B,
    levels: Optional[Path] = _LEVELS,
    amplitudes: Optional[Path] = _AMPLITUDES,
    surrogate: Optional[str] = _SURROGATE,
    t0: Optional[float] = _T0,
    t1: Optional[float] = _T1,
    tsteps: Optional[int] = _TSTEPS,
    out: Optional[Path] = _OUT,
    config_file: Optional[Path] = _CONFIG,
    env_file: Optional[Path] = _ENV,
    log_level: str = _LOG,
):
    def run(config: RunConfig) -> str:
        wp = resolve_wavepacket(config).renormalized()
        spectrum, scheme = resolve_spectrum(config)
        ts = timescales(spectrum, wp.mean_i())
        start, end = _window(config, ts)
        rows = observables_series(wp, spectrum, np.linspace(start, end, config.tsteps))
        prepare_out_dir(config.out)
        write_observables_csv(rows, config.out / "observables.csv")
        _write_manifest(config, wp, spectrum, ts, scheme, ["observables.csv"])
        return f"✅ {len(rows)} samples written to {config.out / 'observables.csv'}"

    flags = dict(N=N, eta=eta, lmax=lmax, tol=tol, B=B, levels=levels,
                 amplitudes=amplitudes, surrogate=surrogate, t0=t0, t1=t1,
                 tsteps=tsteps, out=out)
    _execute(ctx, "observables", config_file=config_file, env_file=env_file,
             log_level=log_level, flags=flags, runner=run)


# ──────────────────────────────────────────────────────────────────────────────
# revivals  -------------------------------------------------------------------
# ──────────────────────────────────────────────────────────────────────────────
@app.command("revivals", help="Decompose the packet at t = (m/n) t_rev into clones and mutants.")
def revivals_cmd(
    ctx: Context,
    N: Optional[float] = _N,
    eta: Optional[float] = _ETA,
    lmax: Optional[int] = _LMAX,
    tol: Optional[float] = _TOL,
    B: Optional[float] = _B,
    levels: Optional[Path] = _LEVELS,
    amplitudes: Optional[Path] = _AMPLITUDES,
    surrogate: Optional[str] = _SURROGATE,
    m: Optional[int] = Option(None, "--m", help="Numerator of the fractional time"),
    n: Optional[int] = Option(None, "--n", help="Denominator of the fractional time"),
    out: Optional[Path] = _OUT,
    config_file: Optional[Path] = _CONFIG,
    env_file: Optional[Path] = _ENV,
    log_level: str = _LOG,
):
    def run(config: RunConfig) -> str:
        ft = FractionalTime(config.m, config.n)
        wp = resolve_wavepacket(config).renormalized()
        spectrum, scheme = resolve_spectrum(config)
        ts = timescales(spectrum, wp.mean_i())
        wp_t = propagate(wp, spectrum, ft.time(ts.t_rev))
        n_scan = config.n_scan or max(720, 8 * ft.n)
        result = analyze_revival(wp_t, wp, ft, config.clone_threshold, n_scan)
        prepare_out_dir(config.out)
        doc = report.make_revival_report(
            result.to_document().model_dump(), _timescale_view(ts, scheme is not None)
        )
        report.write_report_obj(doc, config.out / "revivals.json")
        _write_manifest(config, wp, spectrum, ts, scheme, ["revivals.json"])
        return (
            f"✅ t = {ft.m}/{ft.n} t_rev: {len(result.clones)} clone(s), "
            f"{len(result.mutants)} mutant(s) (q={result.decomposition.predicted_clones}); "
            f"report written to {config.out / 'revivals.json'}"
        )

    flags = dict(N=N, eta=eta, lmax=lmax, tol=tol, B=B, levels=levels,
                 amplitudes=amplitudes, surrogate=surrogate, m=m, n=n, out=out)
    _execute(ctx, "revivals", config_file=config_file, env_file=env_file,
             log_level=log_level, flags=flags, runner=run)


# ──────────────────────────────────────────────────────────────────────────────
# carpet  ---------------------------------------------------------------------
# ──────────────────────────────────────────────────────────────────────────────
@app.command("carpet", help="Emit the θ-density quantum carpet as CSV plus a JSON sidecar.")
def carpet_cmd(
    ctx: Context,
    N: Optional[float] = _N,
    eta: Optional[float] = _ETA,
    lmax: Optional[int] = _LMAX,
    tol: Optional[float] = _TOL,
    B: Optional[float] = _B,
    levels: Optional[Path] = _LEVELS,
    amplitudes: Optional[Path] = _AMPLITUDES,
    surrogate: Optional[str] = _SURROGATE,
    t0: Optional[float] = _T0,
    t1: Optional[float] = _T1,
    tsteps: Optional[int] = _TSTEPS,
    thetas: Optional[int] = Option(None, "--thetas", help="Number of θ nodes"),
    threads: Optional[int] = Option(None, "--threads", help="Worker threads for time columns"),
    out: Optional[Path] = _OUT,
    config_file: Optional[Path] = _CONFIG,
    env_file: Optional[Path] = _ENV,
    log_level: str = _LOG,
):
    def run(config: RunConfig) -> str:
        wp = resolve_wavepacket(config).renormalized()
        spectrum, scheme = resolve_spectrum(config)
        ts = timescales(spectrum, wp.mean_i())
        start, end = _window(config, ts)
        grid = carpet(
            wp, spectrum, config.thetas, start, end, config.tsteps, threads=config.threads
        )
        prepare_out_dir(config.out)
        carpet_export(grid, config.out / "carpet.csv")
        write_carpet_metadata(
            grid,
            config.out / "carpet.json",
            spectrum=spectrum.descriptor(),
            wavepacket=wp.descriptor(),
            t_rev=ts.t_rev,
            t_cl=ts.t_cl,
        )
        _write_manifest(config, wp, spectrum, ts, scheme, ["carpet.csv", "carpet.json"])
        norms = grid.normalization
        logger.info("carpet column norms within [%.9f, %.9f]", norms.min(), norms.max())
        return f"✅ {grid.shape[0]}x{grid.shape[1]} carpet written to {config.out / 'carpet.csv'}"

    flags = dict(N=N, eta=eta, lmax=lmax, tol=tol, B=B, levels=levels,
                 amplitudes=amplitudes, surrogate=surrogate, t0=t0, t1=t1,
                 tsteps=tsteps, thetas=thetas, threads=threads, out=out)
    _execute(ctx, "carpet", config_file=config_file, env_file=env_file,
             log_level=log_level, flags=flags, runner=run)


# ──────────────────────────────────────────────────────────────────────────────
def main() -> None:  # entry-point in pyproject.toml
    app()


if __name__ == "__main__":
    main()
