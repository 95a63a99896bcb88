"""Single flux-qubit inversion driven by a linear bias ramp and a
windowed microwave pump.

The device mapping converts current waveforms into the angular-frequency
drive pair (Omega, Delta): matching the interaction-picture qubit matrix
to the generic two-level form gives

    hbar Omega(t) / 2 = -(Phi0 / 2 pi) (xi(t) / 2) delta_01,
    hbar Delta(t)     = -(Phi0 / 2 pi) M I_dc(t) (delta_11 - delta_00) / L.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import StateVector, Trajectory, TwoLevelGenerator, propagate
from .pulses import PulseShape, ScrapSchedule, WindowedConstantPulse, scale_pulse

__all__ = [
    "DeviceParams",
    "SingleQubitScenario",
    "josephson_map",
    "build_single_qubit_schedule",
    "run_single",
    "decay_rate_fit",
    "post_passage_window",
    "pre_passage_window",
]

FLUX_QUANTUM = 2.067833848e-15  # Wb
HBAR = 1.054571817e-34          # J s


@dataclass(frozen=True)
class DeviceParams:
    """Flux-qubit constants used by the current-to-frequency mappings.

    delta_ij are the dimensionless phase matrix elements; p_ij (J s) and
    the coupling capacitance only enter the two-qubit model.
    """

    mutual_inductance: float      # H
    loop_inductance: float        # H
    delta_00: float
    delta_11: float
    delta_01: float               # = delta_10 by symmetry
    p_00: float = 0.0             # J s
    p_11: float = 0.0             # J s
    p_10: float = 0.0             # J s
    coupling_capacitance: float = 1e-12  # F
    flux_quantum: float = FLUX_QUANTUM   # Wb
    hbar: float = HBAR                   # J s

    def __post_init__(self):
        for name in ("flux_quantum", "mutual_inductance", "loop_inductance",
                     "coupling_capacitance", "hbar"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive, got {getattr(self, name)}")
        if self.delta_11 == self.delta_00:
            raise ValueError("delta_11 must differ from delta_00 (the chirp vanishes otherwise)")


def josephson_map(device: DeviceParams, i_dc: PulseShape, xi: PulseShape
                  ) -> tuple[PulseShape, PulseShape]:
    """Map the bias-current ramp and pump-current waveforms to the
    (rabi, detuning) pair in rad/s.

    Both returned waveforms support value() and derivative(); the map is
    linear, so the variants of the inputs are preserved.
    """
    if device.delta_11 == device.delta_00:
        raise ValueError("delta_11 must differ from delta_00 (the chirp vanishes otherwise)")
    phi_over_2pi = device.flux_quantum / (2.0 * math.pi)
    rabi = scale_pulse(xi, -phi_over_2pi * device.delta_01 / device.hbar)
    detuning = scale_pulse(
        i_dc,
        -phi_over_2pi
        * device.mutual_inductance
        * (device.delta_11 - device.delta_00)
        / (device.loop_inductance * device.hbar),
    )
    return rabi, detuning


@dataclass(frozen=True)
class SingleQubitScenario:
    """Complete single-qubit run description in device quantities."""

    device: DeviceParams
    stark_pulse: PulseShape   # I_dc(t), A
    pump_pulse: PulseShape    # xi(t), A
    gamma: float              # 1/s
    t_start: float            # s
    t_end: float              # s
    initial_state: str = "ground"      # "ground" | "excited"
    passage_window: tuple[float, float] | None = None  # (t_b, t_m); pump window if None

    def __post_init__(self):
        if not self.t_start < self.t_end:
            raise ValueError(f"scenario requires t_start < t_end, got [{self.t_start}, {self.t_end}]")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if self.initial_state not in ("ground", "excited"):
            raise ValueError(f"initial_state must be 'ground' or 'excited', got {self.initial_state!r}")


def _window_of(scenario: SingleQubitScenario) -> tuple[float, float]:
    if scenario.passage_window is not None:
        return scenario.passage_window
    if isinstance(scenario.pump_pulse, WindowedConstantPulse):
        return scenario.pump_pulse.t_on, scenario.pump_pulse.t_off
    span = scenario.t_end - scenario.t_start
    return scenario.t_start + 0.25 * span, scenario.t_start + 0.75 * span


def build_single_qubit_schedule(scenario: SingleQubitScenario) -> ScrapSchedule:
    """Angular-frequency schedule for the scenario via the device mapping."""
    rabi, detuning = josephson_map(scenario.device, scenario.stark_pulse, scenario.pump_pulse)
    return ScrapSchedule(
        rabi=rabi,
        detuning=detuning,
        gamma=scenario.gamma,
        t_start=scenario.t_start,
        t_end=scenario.t_end,
        passage_window=_window_of(scenario),
    )


def run_single(scenario: SingleQubitScenario, step: float | None = None,
               record_every: int = 20) -> Trajectory:
    """Propagate the scenario from its initial basis state; the trajectory
    carries mixing-angle and adiabaticity samples."""
    schedule = build_single_qubit_schedule(scenario)
    gen = TwoLevelGenerator(schedule)
    psi0 = StateVector.ground() if scenario.initial_state == "ground" else StateVector.excited()
    return propagate(gen, psi0, scenario.t_start, scenario.t_end,
                     step=step, record_every=record_every)


# Fraction of the pre/post passage interval skipped by the default decay-fit
# windows, to clear residual passage transients.
_FIT_MARGIN = 0.05


def post_passage_window(schedule: ScrapSchedule) -> tuple[float, float]:
    """Default fit window after the passage, [t_m + 5% of the tail, t_end]."""
    t_m = schedule.passage_window[1]
    return t_m + _FIT_MARGIN * (schedule.t_end - t_m), schedule.t_end


def pre_passage_window(schedule: ScrapSchedule) -> tuple[float, float]:
    """Default fit window before the passage, [t_start, t_b - 5% of the head]."""
    t_b = schedule.passage_window[0]
    return schedule.t_start, t_b - _FIT_MARGIN * (t_b - schedule.t_start)


def decay_rate_fit(traj: Trajectory, window: tuple[float, float], level_index: int) -> float:
    """Least-squares decay rate of one level's population over a window.

    Fits ln P(t) linearly and returns -slope/2, which equals Gamma for a
    pure exp(-2 Gamma t) tail.  Rejects windows that leave fewer than 10
    samples, lie outside the trajectory, or contain nonpositive samples.
    """
    lo, hi = window
    t = traj.times
    if lo < t[0] - 1e-15 * abs(t[0]) or hi > t[-1] + 1e-15 * abs(t[-1]):
        raise ValueError(f"fit window [{lo}, {hi}] outside trajectory range [{t[0]}, {t[-1]}]")
    mask = (t >= lo) & (t <= hi)
    if int(mask.sum()) < 10:
        raise ValueError(f"fit window contains {int(mask.sum())} samples; need at least 10")
    pop = traj.populations[mask, level_index]
    if np.any(pop <= 0.0):
        raise ValueError("population must be strictly positive over the fit window")
    slope = np.polyfit(t[mask], np.log(pop), 1)[0]
    return -0.5 * float(slope)
