"""Canned Monte-Carlo scenarios for the two reference experiments.

Both place equal-power sources on an even angular comb at 0 dB SNR; the
second adds banded mutual coupling.  Grids run at a 0.05-degree pitch, which
resolves the comb spacing comfortably while keeping a 20-trial sweep quick.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coupling import PAPER_V, CouplingModel
from .estimation import MusicConfig
from .signal import Scenario


@dataclass(frozen=True)
class ScenarioPreset:
    name: str
    scenario: Scenario
    music: MusicConfig
    coupling: CouplingModel | None


def _comb(count: int, start: float, spread: float) -> tuple[float, ...]:
    return tuple(start + spread * z / (count - 1) for z in range(count))


def uncoupled_comb(seed: int = 101) -> ScenarioPreset:
    """55 sources from -49 to +49 degrees, 600 snapshots, no coupling."""
    scenario = Scenario(
        angles_deg=_comb(55, -49.0, 98.0),
        snapshots=600,
        snr_db=0.0,
        seed=seed,
    )
    return ScenarioPreset(
        name="fig12",
        scenario=scenario,
        music=MusicConfig.for_step(55, 0.05),
        coupling=None,
    )


def coupled_comb(seed: int = 202) -> ScenarioPreset:
    """27 sources from -59 to +59 degrees, 1000 snapshots, banded coupling."""
    scenario = Scenario(
        angles_deg=_comb(27, -59.0, 118.0),
        snapshots=1000,
        snr_db=0.0,
        seed=seed,
    )
    return ScenarioPreset(
        name="fig13",
        scenario=scenario,
        music=MusicConfig.for_step(27, 0.05),
        coupling=PAPER_V,
    )


_PRESETS = {
    "fig12": uncoupled_comb,
    "fig13": coupled_comb,
}


def preset_names() -> tuple[str, ...]:
    return tuple(sorted(_PRESETS))


def get_scenario_preset(name: str, seed: int | None = None) -> ScenarioPreset:
    try:
        builder = _PRESETS[name]
    except KeyError:
        known = ", ".join(preset_names())
        raise ValueError(f"unknown scenario preset {name!r} (known: {known})") from None
    return builder() if seed is None else builder(seed=seed)
