"""Dissipation sweeps: final transfer efficiency and population-vs-time
maps over a grid of dimensionless decay rates gamma = Gamma * T_ref.

Sweep entries are independent pure runs; they are executed in input
order and assembled into immutable result containers, so repeated sweeps
of the same inputs are bit-identical.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .adiabatic import analytic_transfer
from .single_qubit import SingleQubitScenario, build_single_qubit_schedule, run_single
from .two_qubit import BLOCK_LABELS, TwoQubitModel, run_iswap

__all__ = [
    "Regime",
    "RegimeThresholds",
    "SweepResult",
    "MapResult",
    "SweepError",
    "regime_classify",
    "default_gamma_grid",
    "gamma_sweep",
    "time_gamma_map",
    "target_level_index",
]


class Regime(Enum):
    """Dissipation regime of a dimensionless decay rate."""

    WEAK = "weak"
    STRONG = "strong"
    VERY_STRONG = "very_strong"


@dataclass(frozen=True)
class RegimeThresholds:
    """Regime cuts: weak below weak_max, very strong at or above
    very_strong_min, strong in between."""

    weak_max: float = 0.1
    very_strong_min: float = 10.0

    def __post_init__(self):
        if not 0 < self.weak_max < self.very_strong_min:
            raise ValueError(
                f"thresholds require 0 < weak_max < very_strong_min, got "
                f"{self.weak_max}, {self.very_strong_min}"
            )


DEFAULT_THRESHOLDS = RegimeThresholds()


def regime_classify(gamma: float, thresholds: RegimeThresholds = DEFAULT_THRESHOLDS) -> Regime:
    """Classify a dimensionless decay rate; rejects negative gamma."""
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    if gamma < thresholds.weak_max:
        return Regime.WEAK
    if gamma >= thresholds.very_strong_min:
        return Regime.VERY_STRONG
    return Regime.STRONG


def default_gamma_grid(points: int = 60, lo: float = 1e-3, hi: float = 1e2) -> np.ndarray:
    """Log-spaced gamma grid spanning the weak through very-strong regimes."""
    return np.logspace(math.log10(lo), math.log10(hi), points)


@dataclass(frozen=True)
class SweepResult:
    """Final target populations over a gamma grid, with the analytic
    adiabatic-path estimate alongside."""

    scenario_id: str
    t_ref: float                      # s, the T in gamma = Gamma * T
    gamma_values: tuple[float, ...]
    final_numeric: tuple[float, ...]
    final_analytic: tuple[float, ...]


@dataclass(frozen=True)
class MapResult:
    """Target population over the (gamma, t) grid; rows follow gamma_values
    and columns the shared time axis."""

    scenario_id: str
    t_ref: float
    gamma_values: tuple[float, ...]
    times: tuple[float, ...]
    grid: tuple[tuple[float, ...], ...]


class SweepError(RuntimeError):
    """A sweep entry failed; the message names the offending gamma."""


def target_level_index(scenario, initial: str | None = None) -> int:
    """Index of the transfer target level in the recorded populations."""
    if isinstance(scenario, SingleQubitScenario):
        return 1 if scenario.initial_state == "ground" else 0
    if isinstance(scenario, TwoQubitModel):
        label = initial if initial is not None else "01"
        return 1 - BLOCK_LABELS.index(label)
    raise TypeError(f"unsupported scenario type {type(scenario).__name__}")


def _check_gammas(gammas) -> tuple[float, ...]:
    gammas = tuple(float(g) for g in gammas)
    if not gammas:
        raise ValueError("gamma grid must not be empty")
    if any(g < 0 for g in gammas):
        raise ValueError("gamma values must be nonnegative")
    if any(b < a for a, b in zip(gammas, gammas[1:])):
        raise ValueError("gamma values must be sorted ascending")
    return gammas


def _run_entry(scenario, gamma_dimensionless: float, t_ref: float, initial, step, record_every):
    decay = gamma_dimensionless / t_ref
    try:
        if isinstance(scenario, SingleQubitScenario):
            entry = dataclasses.replace(scenario, gamma=decay)
            return run_single(entry, step=step, record_every=record_every)
        entry = dataclasses.replace(scenario, gamma=decay)
        return run_iswap(entry, initial=initial if initial is not None else "01",
                         step=step, record_every=record_every)
    except Exception as exc:
        raise SweepError(f"sweep entry gamma={gamma_dimensionless} failed: {exc}") from exc


def _scenario_id(scenario, initial) -> str:
    if isinstance(scenario, SingleQubitScenario):
        return f"single_qubit/{scenario.initial_state}"
    return f"two_qubit/{initial if initial is not None else '01'}"


def gamma_sweep(scenario, gammas, t_ref: float, initial: str | None = None,
                step: float | None = None, record_every: int = 20) -> SweepResult:
    """Run the scenario once per gamma and record the final target
    population, numeric and analytic.

    For the single qubit the analytic column is the adiabatic-path decay
    estimate; for the two-qubit block it is the exact factorization law
    P(0-run) * exp(-2 Gamma (t_end - t_start)).
    """
    gammas = _check_gammas(gammas)
    if t_ref <= 0:
        raise ValueError(f"t_ref must be positive, got {t_ref}")
    target = target_level_index(scenario, initial)
    numeric: list[float] = []
    analytic: list[float] = []

    if isinstance(scenario, SingleQubitScenario):
        schedule = build_single_qubit_schedule(dataclasses.replace(scenario, gamma=0.0))
        which = "from_ground" if scenario.initial_state == "ground" else "from_excited"
        for g in gammas:
            traj = _run_entry(scenario, g, t_ref, initial, step, record_every)
            numeric.append(float(traj.populations[-1, target]))
            analytic.append(analytic_transfer(g / t_ref, schedule, which))
    else:
        lossless = _run_entry(scenario, 0.0, t_ref, initial, step, record_every)
        base = float(lossless.populations[-1, target])
        span = scenario.t_end - scenario.t_start
        for g in gammas:
            if g == 0.0:
                traj = lossless
            else:
                traj = _run_entry(scenario, g, t_ref, initial, step, record_every)
            numeric.append(float(traj.populations[-1, target]))
            analytic.append(base * math.exp(-2.0 * (g / t_ref) * span))

    return SweepResult(
        scenario_id=_scenario_id(scenario, initial),
        t_ref=t_ref,
        gamma_values=gammas,
        final_numeric=tuple(numeric),
        final_analytic=tuple(analytic),
    )


def time_gamma_map(scenario, gammas, t_ref: float, initial: str | None = None,
                   step: float | None = None, record_every: int = 20) -> MapResult:
    """Full target-population trace per gamma on a shared time axis."""
    gammas = _check_gammas(gammas)
    if t_ref <= 0:
        raise ValueError(f"t_ref must be positive, got {t_ref}")
    target = target_level_index(scenario, initial)
    times: tuple[float, ...] | None = None
    rows: list[tuple[float, ...]] = []
    for g in gammas:
        traj = _run_entry(scenario, g, t_ref, initial, step, record_every)
        if times is None:
            times = tuple(float(t) for t in traj.times)
        rows.append(tuple(float(p) for p in traj.populations[:, target]))
    return MapResult(
        scenario_id=_scenario_id(scenario, initial),
        t_ref=t_ref,
        gamma_values=gammas,
        times=times,
        grid=tuple(rows),
    )
