import pytest

from rotorwave.settings import Settings, settings


def test_defaults(monkeypatch):
    for var in (
        "ROTORWAVE_HBAR_KEV_S",
        "ROTORWAVE_ENERGY_UNIT_KEV",
        "ROTORWAVE_CLONE_THRESHOLD",
        "ROTORWAVE_LMAX_CAP",
        "ROTORWAVE_CARPET_MAX_CELLS",
        "ROTORWAVE_QUADRATURE_OVERSAMPLE",
    ):
        monkeypatch.delenv(var, raising=False)
    fresh = Settings()
    assert fresh.snapshot() == {
        "hbar_kev_s": 6.582119569e-19,
        "energy_unit_kev": 1.0,
        "clone_threshold": 0.99,
        "lmax_cap": 400,
        "carpet_max_cells": 10_000_000,
        "quadrature_oversample": 2,
    }


def test_reload_reads_the_environment(monkeypatch):
    monkeypatch.setenv("ROTORWAVE_CLONE_THRESHOLD", "0.95")
    monkeypatch.setenv("ROTORWAVE_LMAX_CAP", "64")
    fresh = Settings()
    assert fresh.clone_threshold == 0.95
    assert fresh.lmax_cap == 64
    monkeypatch.setenv("ROTORWAVE_LMAX_CAP", "128")
    fresh.reload()
    assert fresh.lmax_cap == 128


def test_seconds_conversion(monkeypatch):
    monkeypatch.setenv("ROTORWAVE_ENERGY_UNIT_KEV", "1000")
    fresh = Settings()
    # 1/MeV in seconds
    assert fresh.seconds(1.0) == pytest.approx(6.582119569e-22)


def test_module_singleton_is_a_settings():
    assert isinstance(settings, Settings)
    assert set(settings.snapshot()) >= {"clone_threshold", "hbar_kev_s"}
