"""Simulation toolkit for Stark-chirped rapid adiabatic passage (SCRAP)
in dissipative two-level and coupled two-qubit flux systems.

The package propagates the non-Hermitian Schrodinger equation for chirped
pulse schedules, computes adiabatic-frame diagnostics (mixing angle,
adiabaticity parameter, analytic transfer estimates), and runs
dissipation sweeps that are written out as deterministic CSV/SVG files.
"""

__version__ = "0.1.0"

from .pulses import (
    PulseShape,
    LinearPulse,
    WindowedConstantPulse,
    GaussianPulse,
    SumPulse,
    ScrapSchedule,
    make_counterintuitive_pair,
    scale_pulse,
)
from .dynamics import (
    StateVector,
    Trajectory,
    HamiltonianGenerator,
    TwoLevelGenerator,
    propagate,
    hermitian_reference,
)
from .adiabatic import (
    AdiabaticFrame,
    mixing_angle,
    adiabatic_energies,
    adiabaticity_eta,
    to_adiabatic_frame,
    adiabatic_populations,
    analytic_transfer,
    eta_profile_max,
)
from .single_qubit import (
    DeviceParams,
    SingleQubitScenario,
    josephson_map,
    build_single_qubit_schedule,
    run_single,
    decay_rate_fit,
)
from .two_qubit import (
    TwoQubitModel,
    FourLevelGenerator,
    build_two_qubit_h,
    reduce_subspace,
    reduced_adiabatic_h,
    run_iswap,
)
from .sweep import (
    Regime,
    RegimeThresholds,
    SweepResult,
    MapResult,
    regime_classify,
    gamma_sweep,
    time_gamma_map,
    default_gamma_grid,
)
