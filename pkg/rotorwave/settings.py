# rotorwave/settings.py
from __future__ import annotations

import logging
import os
import threading
from typing import Final

logger = logging.getLogger(__name__)

# ħ in keV·s (CODATA 2018)
_HBAR_KEV_S: Final[str] = "6.582119569e-19"


class Settings:
    """
    Thread-safe singleton holding the numerical knobs of a run. Values come
    from environment variables and can be refreshed with `reload()` after a
    `.env` file has been loaded:

      ROTORWAVE_HBAR_KEV_S             (float, default 6.582119569e-19)
      ROTORWAVE_ENERGY_UNIT_KEV        (float, default 1.0)
      ROTORWAVE_CLONE_THRESHOLD        (float, default 0.99)
      ROTORWAVE_LMAX_CAP               (int,   default 400)
      ROTORWAVE_CARPET_MAX_CELLS       (int,   default 10 000 000)
      ROTORWAVE_QUADRATURE_OVERSAMPLE  (int,   default 2)
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self.reload()

    def reload(self) -> None:
        """(Re)read every knob from os.environ."""
        with self._lock:
            self.hbar_kev_s = float(os.getenv("ROTORWAVE_HBAR_KEV_S", _HBAR_KEV_S))
            self.energy_unit_kev = float(os.getenv("ROTORWAVE_ENERGY_UNIT_KEV", "1.0"))
            self.clone_threshold = float(os.getenv("ROTORWAVE_CLONE_THRESHOLD", "0.99"))
            self.lmax_cap = int(os.getenv("ROTORWAVE_LMAX_CAP", "400"))
            self.carpet_max_cells = int(
                os.getenv("ROTORWAVE_CARPET_MAX_CELLS", "10000000")
            )
            self.quadrature_oversample = int(
                os.getenv("ROTORWAVE_QUADRATURE_OVERSAMPLE", "2")
            )

        logger.debug("Settings reloaded: %s", self.snapshot())

    def seconds(self, t_natural: float) -> float:
        """Natural time (ħ = 1, energies in the configured unit) → seconds."""
        return t_natural * self.hbar_kev_s / self.energy_unit_kev

    # diagnostic, also recorded in every run manifest
    def snapshot(self) -> dict:
        return {
            "hbar_kev_s": self.hbar_kev_s,
            "energy_unit_kev": self.energy_unit_kev,
            "clone_threshold": self.clone_threshold,
            "lmax_cap": self.lmax_cap,
            "carpet_max_cells": self.carpet_max_cells,
            "quadrature_oversample": self.quadrature_oversample,
        }


# ---- module-level singleton -------------------------------------------------
settings = Settings()
