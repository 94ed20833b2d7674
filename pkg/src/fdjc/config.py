"""Run configuration: parsing, validation and conversion to :class:`ModelParams`.

Configuration files are YAML mappings (JSON is accepted too, being a subset).
Physical keys and the symbols they stand for:

=============  ===========================================================
lambda_c       atom-field coupling lambda [rad/s]
delta_k_bar    central detuning Delta_k at p = 0 [rad/s]
kg             k.g, wave-vector times gravitational acceleration [1/s^2]
nu             field frequency nu [rad/s]
omega          atomic frequency omega [rad/s]; optional, must equal nu + delta_k_bar
recoil_rate    hbar k^2 / M [rad/s]
c_e, c_g       initial atomic amplitudes (number or [re, im])
alpha          coherent-state amplitude alpha
kind           deformation: identity, q_type or kerr
q              deformation parameter of q_type
kappa          Kerr constant of kerr
p_nodes        momentum quadrature nodes
t_max_scaled   end of the time window in units of 1/lambda
t_points       number of output times
tail_tol       photon-number truncation tolerance
max_terms, abs_tol, rel_tol   series controls
=============  ===========================================================

Run keys: ``preset``, ``outputs``, ``mode``, ``out_dir``, ``threads``,
``sweep`` (a one-entry mapping ``{key: [values]}``) and ``code_version``
(informational; present in emitted manifests).
"""

from __future__ import annotations

import difflib
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np
import yaml

from .deformation import DeformationSpec, q_coherent_weights
from .dynamics import ModelParams
from .errors import ConfigError, MissingKey, ParseError, UnknownKey
from .observables import OBSERVABLES
from .presets import preset_values
from .specialfn import SeriesControl

PHYSICAL_KEYS = (
    "lambda_c",
    "delta_k_bar",
    "kg",
    "nu",
    "omega",
    "recoil_rate",
    "c_e",
    "c_g",
    "alpha",
    "kind",
    "q",
    "kappa",
    "p_nodes",
    "t_max_scaled",
    "t_points",
    "tail_tol",
    "max_terms",
    "abs_tol",
    "rel_tol",
)
OPTIONAL_KEYS = ("omega", "q", "kappa", "max_terms", "abs_tol", "rel_tol")
REQUIRED_KEYS = tuple(k for k in PHYSICAL_KEYS if k not in OPTIONAL_KEYS)
RUN_KEYS = ("preset", "outputs", "mode", "out_dir", "threads", "sweep", "code_version")
ALL_KEYS = PHYSICAL_KEYS + RUN_KEYS
MODES = ("closed_form", "oracle", "both")


@dataclass
class RunConfig:
    """A validated run request.

    ``overrides`` holds physical keys; with a ``preset`` they are merged over
    the preset values, without one they must form the full parameter set.
    """

    preset: Optional[str] = None
    overrides: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    out_dir: Optional[str] = None
    mode: str = "closed_form"
    threads: int = 1
    sweep: Optional[dict] = None

    def __post_init__(self):
        validate_keys(self.overrides, PHYSICAL_KEYS)
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        for name in self.outputs:
            if name not in OBSERVABLES:
                raise ConfigError(f"unknown observable {name!r}; choose from {OBSERVABLES}")
        if not isinstance(self.threads, int) or self.threads < 1:
            raise ConfigError("threads must be a positive integer")
        if self.preset is None:
            missing = set(REQUIRED_KEYS) - set(self.overrides)
            if missing:
                raise MissingKey(missing)
        else:
            preset_values(self.preset)  # raises UnknownPreset
        if self.sweep is not None:
            if not isinstance(self.sweep, dict) or len(self.sweep) != 1:
                raise ConfigError("sweep must map exactly one key to a list of values")
            (key, values), = self.sweep.items()
            validate_keys({key: None}, PHYSICAL_KEYS)
            if not isinstance(values, list) or not values:
                raise ConfigError(f"sweep values for {key!r} must be a non-empty list")

    def resolved(self) -> dict:
        """Full physical parameter set (preset values overlaid with overrides)."""
        values = preset_values(self.preset) if self.preset else {}
        values.pop("outputs", None)
        values.update(self.overrides)
        return values

    def effective_outputs(self) -> list:
        if self.outputs:
            return list(self.outputs)
        if self.preset:
            return preset_values(self.preset)["outputs"]
        return ["W"]

    def with_override(self, key, value) -> "RunConfig":
        ov = dict(self.overrides)
        ov[key] = value
        return RunConfig(self.preset, ov, list(self.outputs), self.out_dir, self.mode, self.threads, None)


def validate_keys(mapping, allowed=ALL_KEYS):
    for key in mapping:
        if key not in allowed:
            close = difflib.get_close_matches(str(key), allowed, n=1, cutoff=0.5)
            raise UnknownKey(key, close[0] if close else None)


def _key_line(text: str, key: str):
    for i, line in enumerate(text.splitlines(), start=1):
        stripped = line.lstrip().lstrip("{").lstrip()
        if stripped.startswith(f"{key}:") or stripped.startswith(f'"{key}"'):
            return i
    return None


def parse_config_text(text: str, preset: Optional[str] = None) -> RunConfig:
    """Parse configuration text; ``preset`` (e.g. from the command line) wins over the file."""
    try:
        data = yaml.safe_load(text) if text.strip() else {}
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        raise ParseError(f"malformed configuration: {getattr(exc, 'problem', exc)}", line=line) from None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ParseError("configuration must be a key-value mapping", line=1)
    for key in data:
        if key not in ALL_KEYS:
            close = difflib.get_close_matches(str(key), ALL_KEYS, n=1, cutoff=0.5)
            exc = UnknownKey(key, close[0] if close else None)
            exc.line = _key_line(text, str(key))
            raise exc
    data = dict(data)
    data.pop("code_version", None)
    run = {k: data.pop(k) for k in RUN_KEYS if k in data}
    if preset is not None:
        run["preset"] = preset
    for key, value in data.items():
        try:
            _coerce(key, value)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"bad value {value!r}: {exc}", line=_key_line(text, key), key=key) from None
    outputs = run.get("outputs", [])
    if isinstance(outputs, str):
        outputs = [outputs]
    return RunConfig(
        preset=run.get("preset"),
        overrides=data,
        outputs=list(outputs),
        out_dir=run.get("out_dir"),
        mode=run.get("mode", "closed_form"),
        threads=run.get("threads", 1),
        sweep=run.get("sweep"),
    )


def load_config(path, preset: Optional[str] = None) -> RunConfig:
    """Read and validate a configuration file.

    Raises
    ------
    ParseError
        Malformed text or a value of the wrong type (with line and key).
    UnknownKey
        A key outside the documented set; the nearest valid key is suggested.
    MissingKey
        No preset and an incomplete physical parameter set.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config_text(text, preset=preset)


def _complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError("complex values are written [re, im]")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        return complex(value.replace(" ", ""))
    return complex(float(value))


def _coerce(key: str, value: Any):
    if key in ("c_e", "c_g"):
        return _complex(value)
    if key == "kind":
        if value not in ("identity", "q_type", "kerr"):
            raise ValueError("kind must be identity, q_type or kerr")
        return value
    if key in ("p_nodes", "t_points", "max_terms"):
        if isinstance(value, bool) or float(value) != int(float(value)):
            raise ValueError("expected an integer")
        return int(float(value))
    if value is None and key in OPTIONAL_KEYS:
        return None
    if isinstance(value, bool):
        raise ValueError("expected a number")
    out = float(value)
    if not math.isfinite(out):
        raise ValueError("expected a finite number")
    return out


def build_params(values: dict) -> ModelParams:
    """Construct :class:`ModelParams` from a resolved physical parameter set."""
    missing = set(REQUIRED_KEYS) - set(values)
    if missing:
        raise MissingKey(missing)
    v = {k: _coerce(k, values[k]) for k in PHYSICAL_KEYS if k in values}
    kind = v["kind"]
    try:
        if kind == "identity":
            spec = DeformationSpec.identity()
        elif kind == "q_type":
            spec = DeformationSpec.q_type(v.get("q") if v.get("q") is not None else math.nan)
        else:
            spec = DeformationSpec.kerr(v.get("kappa") or 0.0)
        if v["t_points"] < 1 or v["t_max_scaled"] <= 0 and v["t_points"] > 1:
            raise ValueError("need t_points >= 1 and t_max_scaled > 0")
        if v["lambda_c"] <= 0:
            raise ValueError("lambda_c must be positive (time is scaled by it)")
        tol = SeriesControl(
            max_terms=v.get("max_terms") or SeriesControl.max_terms,
            abs_tol=v.get("abs_tol") or SeriesControl.abs_tol,
            rel_tol=v.get("rel_tol") or SeriesControl.rel_tol,
        )
        weights = q_coherent_weights(spec, v["alpha"], v["tail_tol"])
        t_grid = np.linspace(0.0, v["t_max_scaled"], v["t_points"]) / v["lambda_c"]
        return ModelParams(
            lambda_c=v["lambda_c"],
            delta_k_bar=v["delta_k_bar"],
            kg=v["kg"],
            nu=v["nu"],
            omega=v.get("omega"),
            recoil_rate=v["recoil_rate"],
            c_e=v["c_e"],
            c_g=v["c_g"],
            weights=weights,
            spec=spec,
            p_nodes=v["p_nodes"],
            t_grid=t_grid,
            tol=tol,
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None


def manifest_values(values: dict) -> dict:
    """Physical values in a JSON-ready form (complex numbers as [re, im])."""
    out = {}
    for key in PHYSICAL_KEYS:
        if key not in values or values[key] is None:
            continue
        val = _coerce(key, values[key])
        if isinstance(val, complex):
            val = [val.real, val.imag]
        out[key] = val
    return out
