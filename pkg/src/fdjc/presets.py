"""Figure presets: the shared physical constants plus one k.g value per panel."""

from __future__ import annotations

import math

from .errors import UnknownPreset

HBAR = 1.054571817e-34  # J s
ATOM_MASS = 1e-26  # kg
WAVE_NUMBER = 1e7  # 1/m

# Doppler shift per unit momentum, momentum measured in units of hbar k
RECOIL_RATE = HBAR * WAVE_NUMBER**2 / ATOM_MASS

BASE = {
    "lambda_c": 1e5,
    "delta_k_bar": 3e7,
    "nu": 1e7,
    "recoil_rate": RECOIL_RATE,
    "c_e": 1 / math.sqrt(2),
    "c_g": 1 / math.sqrt(2),
    "alpha": 2.0,
    "kind": "q_type",
    "q": 1.04,
    "kappa": 0.0,
    "p_nodes": 32,
    "t_max_scaled": 25.0,
    "t_points": 2001,
    "tail_tol": 1e-12,
}

PANEL_KG = {"a": 0.0, "b": 2e7, "c": 8e7}
FIGURE_OUTPUT = {"1": "W", "2": "Fy", "3": "dp", "4": "G2", "5": "S2"}
FIGURE_TITLE = {
    "1": "population inversion",
    "2": "dipole squeezing F_y",
    "3": "momentum diffusion",
    "4": "second-order correlation",
    "5": "quadrature squeezing S_2",
}

PRESET_NAMES = tuple(f"fig{f}{panel}" for f in "12345" for panel in "abc")


def preset_values(name: str) -> dict:
    """Configuration values of a named preset (a fresh dict each call)."""
    if name not in PRESET_NAMES:
        raise UnknownPreset(name, PRESET_NAMES)
    values = dict(BASE)
    values["kg"] = PANEL_KG[name[-1]]
    values["outputs"] = [FIGURE_OUTPUT[name[3]]]
    return values


def preset(name: str):
    """:class:`ModelParams` of a named preset."""
    from .config import build_params

    return build_params(preset_values(name))


def describe(name: str) -> str:
    v = preset_values(name)
    return f"{name}  kg={v['kg']:g}  output={v['outputs'][0]}  ({FIGURE_TITLE[name[3]]})"
