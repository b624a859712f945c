# rotorwave/cli_support.py
from __future__ import annotations

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from typer import Context

from rotorwave.core.errors import ArtifactIOError, ConfigurationError
from rotorwave.engine.coherent_state import CoherentStateParams, expand_cs, suggest_lmax
from rotorwave.engine.wavepacket import WavePacket
from rotorwave.ingest import LevelScheme, load_amplitudes, load_levels, surrogate_amplitudes
from rotorwave.models.config import RunConfig
from rotorwave.settings import settings
from rotorwave.spectra import IdealRotor, SpectrumModel, build_spectrum

_DEFAULT_FMT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
logging.basicConfig(level=logging.INFO, format=_DEFAULT_FMT)
logger = logging.getLogger("rotorwave.cli")


# ------------------------------------------------------------------ utils
def maybe_load_env(env_path: Path | None) -> None:
    """Load a .env file; an explicit file overrides the environment, ./.env does not."""
    if env_path is not None:
        target = env_path
        should_override = True
    else:
        target = Path(".env")
        should_override = False

    if not target.exists():
        if env_path is not None:
            raise ConfigurationError(f"env file {env_path} does not exist")
        return

    from dotenv import load_dotenv

    load_dotenv(dotenv_path=target, override=should_override)
    logger.info("Loaded settings from %s (python-dotenv)", target)
    # pick up ROTORWAVE_* knobs from the file
    settings.reload()


def load_config_file(path: Path | None) -> Dict[str, Any]:
    """JSON or YAML run configuration; YAML when the suffix says so."""
    if path is None:
        return {}
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ArtifactIOError(path, str(exc)) from exc
    try:
        data = yaml.safe_load(text) if path.suffix in {".yml", ".yaml"} else json.loads(text)
    except (yaml.YAMLError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot parse config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigurationError(f"config file {path} must hold a mapping")
    logger.info("Loaded run configuration from %s", path)
    return data


# ------------------------------------------------------------------ run inputs
def resolve_spectrum(config: RunConfig) -> tuple[Optional[SpectrumModel], Optional[LevelScheme]]:
    if config.spectrum is not None:
        return build_spectrum(config.spectrum), None
    if config.B is not None:
        return IdealRotor(config.B), None
    if config.levels is not None:
        scheme = load_levels(config.levels)
        return scheme.to_spectrum(), scheme
    return None, None


def resolve_wavepacket(config: RunConfig) -> WavePacket:
    if config.is_coherent_state:
        params = CoherentStateParams(config.N, config.eta)
        l_max = config.lmax if config.lmax is not None else suggest_lmax(params, config.tol)
        logger.info(
            "Expanding coherent state N=%g eta=%g at l_max=%d", config.N, config.eta, l_max
        )
        return expand_cs(params, l_max, config.tol)
    if config.amplitudes is not None:
        return load_amplitudes(config.amplitudes).to_wavepacket()
    s = config.surrogate
    return surrogate_amplitudes(s.i_bar, s.sigma, s.i_max, s.even_only).to_wavepacket()


def prepare_out_dir(out: Path) -> Path:
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ArtifactIOError(out, str(exc)) from exc
    return out


# ------------------------------------------------------------------ Typer callback
def init_common(ctx: Context, env_file: Path | None, log_level: str) -> None:
    """Shared bootstrap executed before *every* command."""
    log_level_obj = getattr(logging, log_level.upper(), logging.INFO)
    logging.getLogger().setLevel(log_level_obj)

    if log_level_obj <= logging.DEBUG:
        logger.debug("=== CLI Environment Debug ===")
        logger.debug("Log level: %s", log_level)
        logger.debug("Environment file: %s", env_file)
        for key, value in os.environ.items():
            if key.startswith("ROTORWAVE_"):
                logger.debug("  %s=%s", key, value)
        logger.debug("=== End Environment Debug ===")

    maybe_load_env(env_file)

    if ctx.obj is None:
        ctx.obj = {}
    ctx.obj["settings"] = settings.snapshot()
