"""Strict TOML configuration for scenarios, sweeps, and outputs.

Every physical quantity in a config file carries an explicit unit suffix
(_ns, _s, _A, _A_per_s, _H, _F, _Wb, _Js); the parser converts to SI on
load.  Unknown keys anywhere are an error, naming the offending path, so
a typo in a physics constant can never pass silently.
"""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import dataclass

if sys.version_info >= (3, 11):
    import tomllib
else:  # Python 3.10
    import tomli as tomllib

from .pulses import GaussianPulse, LinearPulse, PulseShape, SumPulse, WindowedConstantPulse
from .single_qubit import DeviceParams, FLUX_QUANTUM, HBAR, SingleQubitScenario
from .sweep import RegimeThresholds
from .two_qubit import TwoQubitModel

__all__ = ["Config", "ConfigError", "parse_config", "load_config", "build_scenario"]

NS = 1e-9


class ConfigError(ValueError):
    """Invalid configuration; the message names the field and constraint."""


@dataclass(frozen=True)
class Config:
    """Fully-resolved run configuration (defaults applied)."""

    kind: str                       # "single_qubit" | "two_qubit"
    device: DeviceParams
    stark_pulse: PulseShape         # A
    pump_pulse: PulseShape | None   # A, single_qubit only
    t_start: float                  # s
    t_end: float                    # s
    passage_window: tuple[float, float] | None
    gamma: float | None             # dimensionless, scalar runs
    gamma_list: tuple[float, ...] | None
    t_ref: float                    # s
    step: float | None              # s; None = span / 20000
    record_every: int
    full_hilbert: bool
    initial_state: str              # ground|excited|01|10
    output_directory: str
    thresholds: RegimeThresholds
    resolved: dict                  # plain fully-resolved tree, for hashing

    def hash(self) -> str:
        """sha256 over the fully-resolved config; changes iff a resolved
        field changes."""
        blob = json.dumps(self.resolved, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


class _Section:
    """One mapping level of the raw document with typed, tracked access."""

    def __init__(self, data: dict, path: str):
        if not isinstance(data, dict):
            raise ConfigError(f"{path or 'config'}: expected a table")
        self.data = data
        self.path = path
        self.seen: set[str] = set()

    def _name(self, key: str) -> str:
        return f"{self.path}.{key}" if self.path else key

    def has(self, key: str) -> bool:
        return key in self.data

    def child(self, key: str, required: bool = True) -> "_Section | None":
        if key not in self.data:
            if required:
                raise ConfigError(f"missing required section [{self._name(key)}]")
            return None
        self.seen.add(key)
        return _Section(self.data[key], self._name(key))

    def number(self, key: str, default=None, required: bool = False):
        if key not in self.data:
            if required:
                raise ConfigError(f"missing required key {self._name(key)}")
            return default
        self.seen.add(key)
        value = self.data[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{self._name(key)}: expected a number, got {value!r}")
        return float(value)

    def integer(self, key: str, default=None, required: bool = False):
        if key not in self.data:
            if required:
                raise ConfigError(f"missing required key {self._name(key)}")
            return default
        self.seen.add(key)
        value = self.data[key]
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{self._name(key)}: expected an integer, got {value!r}")
        return value

    def string(self, key: str, default=None, required: bool = False, choices=None):
        if key not in self.data:
            if required:
                raise ConfigError(f"missing required key {self._name(key)}")
            return default
        self.seen.add(key)
        value = self.data[key]
        if not isinstance(value, str):
            raise ConfigError(f"{self._name(key)}: expected a string, got {value!r}")
        if choices is not None and value not in choices:
            raise ConfigError(f"{self._name(key)}: must be one of {sorted(choices)}, got {value!r}")
        return value

    def boolean(self, key: str, default=False):
        if key not in self.data:
            return default
        self.seen.add(key)
        value = self.data[key]
        if not isinstance(value, bool):
            raise ConfigError(f"{self._name(key)}: expected a boolean, got {value!r}")
        return value

    def number_list(self, key: str, required: bool = False):
        if key not in self.data:
            if required:
                raise ConfigError(f"missing required key {self._name(key)}")
            return None
        self.seen.add(key)
        value = self.data[key]
        if not isinstance(value, list) or any(
            isinstance(v, bool) or not isinstance(v, (int, float)) for v in value
        ):
            raise ConfigError(f"{self._name(key)}: expected a list of numbers")
        return tuple(float(v) for v in value)

    def table_list(self, key: str, required: bool = False):
        if key not in self.data:
            if required:
                raise ConfigError(f"missing required key {self._name(key)}")
            return None
        self.seen.add(key)
        value = self.data[key]
        if not isinstance(value, list):
            raise ConfigError(f"{self._name(key)}: expected a list of tables")
        return [_Section(v, f"{self._name(key)}[{i}]") for i, v in enumerate(value)]

    def reject_unknown(self):
        unknown = set(self.data) - self.seen
        if unknown:
            name = sorted(unknown)[0]
            raise ConfigError(f"unknown key {self._name(name)}")


def _parse_pulse(section: _Section) -> PulseShape:
    kind = section.string("kind", required=True,
                          choices={"linear", "windowed_constant", "gaussian", "sum"})
    if kind == "linear":
        pulse: PulseShape = LinearPulse(
            slope=section.number("slope_A_per_s", required=True),
            offset=section.number("offset_A", default=0.0),
        )
    elif kind == "windowed_constant":
        t_on = section.number("t_on_ns", required=True) * NS
        t_off = section.number("t_off_ns", required=True) * NS
        level = section.number("level_A", required=True)
        if not t_on < t_off:
            raise ConfigError(f"{section.path}: window requires t_on_ns < t_off_ns")
        pulse = WindowedConstantPulse(level, t_on, t_off)
    elif kind == "gaussian":
        width = section.number("width_ns", required=True) * NS
        if width <= 0:
            raise ConfigError(f"{section.path}.width_ns: must be > 0")
        pulse = GaussianPulse(
            peak=section.number("peak_A", required=True),
            center=section.number("center_ns", required=True) * NS,
            width=width,
        )
    else:
        parts = section.table_list("parts", required=True)
        if not parts:
            raise ConfigError(f"{section.path}.parts: must not be empty")
        shapes = []
        for part in parts:
            shapes.append(_parse_pulse(part))
            part.reject_unknown()
        pulse = SumPulse(tuple(shapes))
    section.reject_unknown()
    return pulse


def _parse_device(section: _Section) -> DeviceParams:
    try:
        return DeviceParams(
            mutual_inductance=section.number("mutual_inductance_H", required=True),
            loop_inductance=section.number("loop_inductance_H", required=True),
            delta_00=section.number("delta_00", required=True),
            delta_11=section.number("delta_11", required=True),
            delta_01=section.number("delta_01", required=True),
            p_00=section.number("p_00_Js", default=0.0),
            p_11=section.number("p_11_Js", default=0.0),
            p_10=section.number("p_10_Js", default=0.0),
            coupling_capacitance=section.number("coupling_capacitance_F", default=1e-12),
            flux_quantum=section.number("flux_quantum_Wb", default=FLUX_QUANTUM),
            hbar=section.number("hbar_Js", default=HBAR),
        )
    except ValueError as exc:
        raise ConfigError(f"{section.path}: {exc}") from exc


def _device_resolved(dev: DeviceParams) -> dict:
    return {
        "mutual_inductance_H": dev.mutual_inductance,
        "loop_inductance_H": dev.loop_inductance,
        "delta_00": dev.delta_00,
        "delta_11": dev.delta_11,
        "delta_01": dev.delta_01,
        "p_00_Js": dev.p_00,
        "p_11_Js": dev.p_11,
        "p_10_Js": dev.p_10,
        "coupling_capacitance_F": dev.coupling_capacitance,
        "flux_quantum_Wb": dev.flux_quantum,
        "hbar_Js": dev.hbar,
    }


def _pulse_resolved(pulse: PulseShape | None) -> dict | None:
    if pulse is None:
        return None
    if isinstance(pulse, LinearPulse):
        return {"kind": "linear", "slope_A_per_s": pulse.slope, "offset_A": pulse.offset}
    if isinstance(pulse, WindowedConstantPulse):
        return {"kind": "windowed_constant", "level_A": pulse.level,
                "t_on_ns": pulse.t_on / NS, "t_off_ns": pulse.t_off / NS}
    if isinstance(pulse, GaussianPulse):
        return {"kind": "gaussian", "peak_A": pulse.peak,
                "center_ns": pulse.center / NS, "width_ns": pulse.width / NS}
    assert isinstance(pulse, SumPulse)
    return {"kind": "sum", "parts": [_pulse_resolved(p) for p in pulse.parts]}


def parse_config(text: str) -> Config:
    """Parse and fully resolve a TOML configuration document."""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML: {exc}") from exc
    root = _Section(raw, "")

    kind = root.string("kind", required=True, choices={"single_qubit", "two_qubit"})
    device_section = root.child("device")
    device = _parse_device(device_section)
    device_section.reject_unknown()

    pulses = root.child("pulses")
    stark = _parse_pulse(pulses.child("stark"))
    pump = None
    if kind == "single_qubit":
        pump = _parse_pulse(pulses.child("pump"))
    elif pulses.has("pump"):
        raise ConfigError("pulses.pump: not allowed for kind = 'two_qubit'")
    pulses.reject_unknown()

    time = root.child("time")
    t_start = time.number("t_start_ns", required=True) * NS
    t_end = time.number("t_end_ns", required=True) * NS
    if not t_start < t_end:
        raise ConfigError("time: requires t_start_ns < t_end_ns")
    window = None
    if time.has("t_b_ns") or time.has("t_m_ns"):
        t_b = time.number("t_b_ns", required=True) * NS
        t_m = time.number("t_m_ns", required=True) * NS
        if not t_start < t_b < t_m < t_end:
            raise ConfigError("time: requires t_start_ns < t_b_ns < t_m_ns < t_end_ns")
        window = (t_b, t_m)
    time.reject_unknown()

    diss = root.child("dissipation")
    gamma = diss.number("gamma")
    gamma_list = diss.number_list("gamma_list")
    if gamma is None and gamma_list is None:
        raise ConfigError("dissipation: requires gamma or gamma_list")
    if gamma is not None and gamma_list is not None:
        raise ConfigError("dissipation: gamma and gamma_list are mutually exclusive")
    if gamma is not None and gamma < 0:
        raise ConfigError(f"dissipation.gamma: must satisfy gamma >= 0, got {gamma}")
    if gamma_list is not None:
        if any(g < 0 for g in gamma_list):
            raise ConfigError("dissipation.gamma_list: all entries must satisfy gamma >= 0")
        if any(b < a for a, b in zip(gamma_list, gamma_list[1:])):
            raise ConfigError("dissipation.gamma_list: entries must be sorted ascending")
    t_ref = diss.number("T_ref_s", required=True)
    if t_ref <= 0:
        raise ConfigError(f"dissipation.T_ref_s: must be > 0, got {t_ref}")
    diss.reject_unknown()

    integ = root.child("integrator", required=False)
    step = None
    record_every = 20
    full_hilbert = False
    if integ is not None:
        step_ns = integ.number("step_ns")
        if step_ns is not None:
            if step_ns <= 0:
                raise ConfigError(f"integrator.step_ns: must be > 0, got {step_ns}")
            step = step_ns * NS
        record_every = integ.integer("record_every", default=20)
        if record_every < 1:
            raise ConfigError(f"integrator.record_every: must be >= 1, got {record_every}")
        full_hilbert = integ.boolean("full_hilbert")
        if full_hilbert and kind != "two_qubit":
            raise ConfigError("integrator.full_hilbert: only valid for kind = 'two_qubit'")
        integ.reject_unknown()

    init = root.child("initial", required=False)
    if kind == "single_qubit":
        initial = "ground"
        if init is not None:
            initial = init.string("state", default="ground", choices={"ground", "excited"})
    else:
        initial = "01"
        if init is not None:
            initial = init.string("state", default="01", choices={"01", "10"})
    if init is not None:
        init.reject_unknown()

    out = root.child("output", required=False)
    out_dir = "out"
    if out is not None:
        out_dir = out.string("directory", default="out")
        out.reject_unknown()

    reg = root.child("regimes", required=False)
    thresholds = RegimeThresholds()
    if reg is not None:
        try:
            thresholds = RegimeThresholds(
                weak_max=reg.number("weak_max", default=0.1),
                very_strong_min=reg.number("very_strong_min", default=10.0),
            )
        except ValueError as exc:
            raise ConfigError(f"regimes: {exc}") from exc
        reg.reject_unknown()

    root.reject_unknown()

    resolved = {
        "kind": kind,
        "device": _device_resolved(device),
        "pulses": {"stark": _pulse_resolved(stark), "pump": _pulse_resolved(pump)},
        "time": {
            "t_start_ns": t_start / NS,
            "t_end_ns": t_end / NS,
            "t_b_ns": window[0] / NS if window else None,
            "t_m_ns": window[1] / NS if window else None,
        },
        "dissipation": {
            "gamma": gamma,
            "gamma_list": list(gamma_list) if gamma_list is not None else None,
            "T_ref_s": t_ref,
        },
        "integrator": {
            "step_ns": step / NS if step is not None else (t_end - t_start) / 20000 / NS,
            "record_every": record_every,
            "full_hilbert": full_hilbert,
        },
        "initial": {"state": initial},
        "output": {"directory": out_dir},
        "regimes": {
            "weak_max": thresholds.weak_max,
            "very_strong_min": thresholds.very_strong_min,
        },
    }

    return Config(
        kind=kind,
        device=device,
        stark_pulse=stark,
        pump_pulse=pump,
        t_start=t_start,
        t_end=t_end,
        passage_window=window,
        gamma=gamma,
        gamma_list=gamma_list,
        t_ref=t_ref,
        step=step,
        record_every=record_every,
        full_hilbert=full_hilbert,
        initial_state=initial,
        output_directory=out_dir,
        thresholds=thresholds,
        resolved=resolved,
    )


def load_config(path) -> Config:
    """Read and parse a config file."""
    with open(path, "rb") as fh:
        text = fh.read().decode("utf-8")
    return parse_config(text)


def build_scenario(config: Config, gamma_dimensionless: float | None = None):
    """Scenario object for the config; gamma_dimensionless overrides the
    config's scalar gamma (both are divided by T_ref)."""
    g = gamma_dimensionless if gamma_dimensionless is not None else (config.gamma or 0.0)
    decay = g / config.t_ref
    if config.kind == "single_qubit":
        return SingleQubitScenario(
            device=config.device,
            stark_pulse=config.stark_pulse,
            pump_pulse=config.pump_pulse,
            gamma=decay,
            t_start=config.t_start,
            t_end=config.t_end,
            initial_state=config.initial_state,
            passage_window=config.passage_window,
        )
    return TwoQubitModel(
        device=config.device,
        stark_pulse_q2=config.stark_pulse,
        gamma=decay,
        t_start=config.t_start,
        t_end=config.t_end,
    )
