"""Adiabatic-frame quantities: mixing angle, adiabatic energies, the
adiabaticity parameter, and quadrature-based dissipative transfer
estimates for chirped two-level schedules."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pulses import ScrapSchedule

__all__ = [
    "AdiabaticFrame",
    "mixing_angle",
    "adiabatic_energies",
    "adiabaticity_eta",
    "eta_from_arrays",
    "to_adiabatic_frame",
    "adiabatic_populations",
    "analytic_transfer",
    "eta_profile_max",
]


@dataclass(frozen=True)
class AdiabaticFrame:
    """Instantaneous adiabatic frame of the lossless two-level problem."""

    theta: float        # mixing angle, rad, in [0, pi/2]
    eps_plus: float     # upper adiabatic energy, rad/s
    eps_minus: float    # lower adiabatic energy, rad/s


def mixing_angle(omega, delta):
    """Mixing angle theta = atan2(|omega|, delta) / 2 in [0, pi/2].

    Continuous as the detuning sweeps through zero with a nonzero drive;
    the sign of omega is a gauge and is discarded.  Returns 0 at the
    degenerate point omega = delta = 0 (trajectory recording holds the
    previous sample there instead).
    """
    if np.ndim(omega) == 0 and np.ndim(delta) == 0:
        return 0.5 * math.atan2(abs(omega), delta)
    return 0.5 * np.arctan2(np.abs(omega), delta)


def adiabatic_energies(omega, delta):
    """Adiabatic energies (eps_plus, eps_minus) = delta +/- sqrt(delta^2 + omega^2)."""
    root = np.sqrt(np.asarray(delta, dtype=float) ** 2 + np.asarray(omega, dtype=float) ** 2)
    if np.ndim(root) == 0:
        return delta + float(root), delta - float(root)
    return delta + root, delta - root


def adiabatic_frame(omega: float, delta: float) -> AdiabaticFrame:
    """Bundle the mixing angle and adiabatic energies at one instant."""
    eps_plus, eps_minus = adiabatic_energies(omega, delta)
    return AdiabaticFrame(mixing_angle(omega, delta), eps_plus, eps_minus)


def adiabaticity_eta(omega, omega_dot, delta, delta_dot):
    """Adiabaticity parameter
    eta = |omega * delta_dot - delta * omega_dot| / (2 (delta^2 + omega^2)^{3/2}).

    Values much smaller than 1 indicate adiabatic following.  Returns
    +inf at the singular point omega = delta = 0.
    """
    gap_sq = omega * omega + delta * delta
    if gap_sq == 0.0:
        return math.inf
    return abs(omega * delta_dot - delta * omega_dot) / (2.0 * gap_sq ** 1.5)


def eta_from_arrays(omega, omega_dot, delta, delta_dot):
    """Vectorized adiabaticity parameter; singular samples map to +inf."""
    omega = np.asarray(omega, dtype=float)
    delta = np.asarray(delta, dtype=float)
    gap_sq = omega * omega + delta * delta
    num = np.abs(omega * np.asarray(delta_dot) - delta * np.asarray(omega_dot))
    with np.errstate(divide="ignore", invalid="ignore"):
        eta = num / (2.0 * gap_sq ** 1.5)
    return np.where(gap_sq == 0.0, np.inf, eta)


def to_adiabatic_frame(psi, theta: float) -> tuple[complex, complex]:
    """Amplitudes (a_plus, a_minus) of a 2-level state in the adiabatic basis.

    a_plus = sin(theta) C0 + cos(theta) C1,
    a_minus = cos(theta) C0 - sin(theta) C1; the map is an isometry.
    """
    amps = getattr(psi, "amplitudes", psi)
    c0, c1 = amps[0], amps[1]
    s, c = math.sin(theta), math.cos(theta)
    return s * c0 + c * c1, c * c0 - s * c1


def adiabatic_populations(amplitudes: np.ndarray, theta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """|a_plus|^2 and |a_minus|^2 along a recorded 2-level trajectory."""
    c0 = amplitudes[:, 0]
    c1 = amplitudes[:, 1]
    s = np.sin(theta)
    c = np.cos(theta)
    a_plus = s * c0 + c * c1
    a_minus = c * c0 - s * c1
    return np.abs(a_plus) ** 2, np.abs(a_minus) ** 2


def _simpson(values: np.ndarray, dt: float) -> float:
    """Composite Simpson rule on a uniform grid; if the number of
    subintervals is odd the final one is added as a trapezoid."""
    n = len(values) - 1
    if n < 1:
        return 0.0
    total = 0.0
    m = n if n % 2 == 0 else n - 1
    if m >= 2:
        total += (dt / 3.0) * (
            values[0]
            + values[m]
            + 4.0 * float(np.sum(values[1:m:2]))
            + 2.0 * float(np.sum(values[2:m:2]))
        )
    if m != n:
        total += 0.5 * dt * (values[n - 1] + values[n])
    return total


DEFAULT_GRID_STEPS = 20000


def analytic_transfer(gamma: float, schedule: ScrapSchedule, target: str,
                      samples: int = DEFAULT_GRID_STEPS + 1) -> float:
    """Adiabatic-path estimate of the final target population.

    For a counterintuitive passage starting from the ground state the
    transfer rides the lower adiabatic path, which decays at
    gamma * sin^2(theta); the estimate is exp(-2 gamma int sin^2 theta dt).
    Starting from the excited state the upper path decays at
    gamma * cos^2(theta) and the integrand is cos^2 theta.

    target is "from_ground" or "from_excited"; gamma must be >= 0.
    """
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    if target not in ("from_ground", "from_excited"):
        raise ValueError(f"unknown target {target!r}")
    times = np.linspace(schedule.t_start, schedule.t_end, samples)
    dt = (schedule.t_end - schedule.t_start) / (samples - 1)
    omega = np.asarray(schedule.rabi.value(times), dtype=float)
    delta = np.asarray(schedule.detuning.value(times), dtype=float)
    theta = mixing_angle(omega, delta)
    integrand = np.sin(theta) ** 2 if target == "from_ground" else np.cos(theta) ** 2
    return math.exp(-2.0 * gamma * _simpson(integrand, dt))


def eta_profile_max(schedule: ScrapSchedule, samples: int = 2001) -> float:
    """Maximum adiabaticity parameter over a uniform sample grid of the
    schedule; +inf if any sample hits the singular point."""
    if samples < 2:
        raise ValueError(f"samples must be >= 2, got {samples}")
    times = np.linspace(schedule.t_start, schedule.t_end, samples)
    omega = np.asarray(schedule.rabi.value(times), dtype=float)
    delta = np.asarray(schedule.detuning.value(times), dtype=float)
    omega_dot = np.asarray(schedule.rabi.derivative(times), dtype=float)
    delta_dot = np.asarray(schedule.detuning.derivative(times), dtype=float)
    eta = eta_from_arrays(omega, omega_dot, delta, delta_dot)
    return float(np.max(eta))
