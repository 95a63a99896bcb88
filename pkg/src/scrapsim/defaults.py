"""Shipped default scenarios.

The device constants below are a consistent fictitious set: junction
matrix elements depend on fabrication details, so these values were
calibrated so that the shipped pulse shapes realize a clean adiabatic
passage
(single qubit: final transfer >= 0.999 with eta_max <= 0.05; two-qubit
block: transfer >= 0.999 with eta_max near 0.09) and are then frozen.
Every value can be overridden through the CLI config files.
"""

from __future__ import annotations

from .pulses import LinearPulse, WindowedConstantPulse
from .single_qubit import DeviceParams, SingleQubitScenario
from .two_qubit import TwoQubitModel

__all__ = [
    "SINGLE_QUBIT_T_REF",
    "TWO_QUBIT_T_REF",
    "SINGLE_QUBIT_STEP",
    "TWO_QUBIT_STEP",
    "CANONICAL_RECORD_EVERY",
    "canonical_device",
    "canonical_single_qubit",
    "two_qubit_device",
    "canonical_two_qubit",
    "gaussian_stark_counterexample",
]

# Characteristic pulse widths used to express decay rates as the
# dimensionless gamma = Gamma * T_ref.
SINGLE_QUBIT_T_REF = 2e-8   # s
TWO_QUBIT_T_REF = 4e-7      # s

# Shipped integrator settings: fine enough that the lossless canonical
# runs conserve norm to 1e-9 and halving the step moves no recorded
# population by more than 1e-8.
SINGLE_QUBIT_STEP = 1e-14   # s (2e6 steps over the 20 ns gate)
TWO_QUBIT_STEP = 2e-13      # s (2e6 steps over the 400 ns passage)
CANONICAL_RECORD_EVERY = 2000  # 1000 recorded samples

# Pulse magnitudes: bias ramp 0.1 A/us on qubit 1, -3.5 A/us on qubit 2,
# pump current -1.88 nA gated on [-3.5, 3.5] ns.
SINGLE_STARK_SLOPE = 1e5        # A/s
TWO_QUBIT_STARK_SLOPE = -3.5e6  # A/s
PUMP_CURRENT = -1.88e-9         # A

# Calibrated matrix elements (see module docstring).  With the inductances
# below, delta_01 sets the pump Rabi frequency to 32 rad/ns and delta_11
# the chirp rate to -95.11 rad/ns^2; the two-qubit set realizes a constant
# 0.5 rad/ns coupling swept through resonance at 0.179874 rad/ns^2.
MUTUAL_INDUCTANCE = 2e-12       # H
LOOP_INDUCTANCE = 1e-10         # H
COUPLING_CAPACITANCE = 1e-12    # F
SINGLE_DELTA_01 = 5.45421832638714
SINGLE_DELTA_11 = 0.015238301960041258
TWO_QUBIT_DELTA_11 = 8.233997707197562e-07
TWO_QUBIT_P_10 = 7.55716412340814e-35  # J s


def canonical_device() -> DeviceParams:
    """Device constants of the shipped single-qubit scenario."""
    return DeviceParams(
        mutual_inductance=MUTUAL_INDUCTANCE,
        loop_inductance=LOOP_INDUCTANCE,
        delta_00=0.0,
        delta_11=SINGLE_DELTA_11,
        delta_01=SINGLE_DELTA_01,
    )


def canonical_single_qubit(gamma: float = 0.0, initial_state: str = "ground"
                           ) -> SingleQubitScenario:
    """Shipped single-qubit inversion: 20 ns gate, pump on [-3.5, 3.5] ns,
    chirp crossing resonance at t = 0; gamma is the decay rate in 1/s."""
    return SingleQubitScenario(
        device=canonical_device(),
        stark_pulse=LinearPulse(SINGLE_STARK_SLOPE, 0.0),
        pump_pulse=WindowedConstantPulse(PUMP_CURRENT, -3.5e-9, 3.5e-9),
        gamma=gamma,
        t_start=-10e-9,
        t_end=10e-9,
        initial_state=initial_state,
    )


def two_qubit_device() -> DeviceParams:
    """Device constants of the shipped two-qubit scenario."""
    return DeviceParams(
        mutual_inductance=MUTUAL_INDUCTANCE,
        loop_inductance=LOOP_INDUCTANCE,
        delta_00=0.0,
        delta_11=TWO_QUBIT_DELTA_11,
        delta_01=SINGLE_DELTA_01,
        p_10=TWO_QUBIT_P_10,
        coupling_capacitance=COUPLING_CAPACITANCE,
    )


def canonical_two_qubit(gamma: float = 0.0) -> TwoQubitModel:
    """Shipped two-qubit transfer: 400 ns passage with the bias ramp on
    qubit 2 sweeping the |01>-|10> splitting through zero at t = 0."""
    return TwoQubitModel(
        device=two_qubit_device(),
        stark_pulse_q2=LinearPulse(TWO_QUBIT_STARK_SLOPE, 0.0),
        gamma=gamma,
        t_start=-200e-9,
        t_end=200e-9,
    )


def gaussian_stark_counterexample():
    """Schedule with a Gaussian chirp and a weak pump that badly violates
    adiabaticity (peak adiabaticity parameter well above 10): the chirp
    collapses towards zero inside the pump window while still moving."""
    from .pulses import GaussianPulse, ScrapSchedule

    return ScrapSchedule(
        rabi=WindowedConstantPulse(5e6, -6e-9, 6e-9),
        detuning=GaussianPulse(2e10, 0.0, 1e-9),
        gamma=0.0,
        t_start=-8e-9,
        t_end=8e-9,
        passage_window=(-6e-9, 6e-9),
    )
