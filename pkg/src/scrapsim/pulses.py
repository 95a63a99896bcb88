"""Time-dependent control waveforms and chirp schedules.

All waveforms are immutable and evaluate deterministically; values and
analytic derivatives accept scalars or numpy arrays of times (seconds).
Rabi/detuning waveforms are stored in angular-frequency units (rad/s);
raw current pulses only appear inside the device mapping layers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PulseShape",
    "LinearPulse",
    "WindowedConstantPulse",
    "GaussianPulse",
    "SumPulse",
    "ScrapSchedule",
    "make_counterintuitive_pair",
    "scale_pulse",
    "constant_pulse",
]


class PulseShape:
    """Base class for waveform variants.

    Subclasses implement ``_value`` and ``_derivative`` on float arrays.
    """

    def _value(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _derivative(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def value(self, t):
        """Waveform value at time(s) ``t``."""
        out = self._value(np.asarray(t, dtype=float))
        return float(out) if np.ndim(out) == 0 else out

    def derivative(self, t):
        """Analytic time derivative at time(s) ``t``."""
        out = self._derivative(np.asarray(t, dtype=float))
        return float(out) if np.ndim(out) == 0 else out

    def limit(self, t: float, side: int) -> float:
        """One-sided limit at ``t`` (side < 0 from below, > 0 from above).

        Equal to ``value(t)`` except at jump discontinuities.
        """
        return self.value(t)

    def breakpoints(self) -> tuple[float, ...]:
        """Times where the waveform is discontinuous or non-smooth."""
        return ()


@dataclass(frozen=True)
class LinearPulse(PulseShape):
    """Linear ramp ``slope * t + offset``."""

    slope: float
    offset: float = 0.0

    def _value(self, t):
        return self.slope * t + self.offset

    def _derivative(self, t):
        return np.broadcast_to(np.float64(self.slope), np.shape(t)).copy() if np.ndim(t) else np.float64(self.slope)


@dataclass(frozen=True)
class WindowedConstantPulse(PulseShape):
    """Constant ``level`` on the closed window [t_on, t_off], zero outside.

    The derivative is defined as 0 everywhere; the jump at the window
    edges is handled by the propagator splitting integration there.
    """

    level: float
    t_on: float
    t_off: float

    def __post_init__(self):
        if not self.t_on < self.t_off:
            raise ValueError(f"window requires t_on < t_off, got [{self.t_on}, {self.t_off}]")

    def _value(self, t):
        return np.where((t >= self.t_on) & (t <= self.t_off), self.level, 0.0)

    def _derivative(self, t):
        return np.zeros_like(t) if np.ndim(t) else np.float64(0.0)

    def limit(self, t, side):
        if t == self.t_on and side < 0:
            return 0.0
        if t == self.t_off and side > 0:
            return 0.0
        return self.value(t)

    def breakpoints(self):
        return (self.t_on, self.t_off)


@dataclass(frozen=True)
class GaussianPulse(PulseShape):
    """Gaussian ``peak * exp(-(t - center)^2 / (2 width^2))``; width is the
    standard deviation and must be positive."""

    peak: float
    center: float
    width: float

    def __post_init__(self):
        if not self.width > 0:
            raise ValueError(f"gaussian width must be > 0, got {self.width}")

    def _value(self, t):
        u = (t - self.center) / self.width
        return self.peak * np.exp(-0.5 * u * u)

    def _derivative(self, t):
        u = (t - self.center) / self.width
        return -self.peak * np.exp(-0.5 * u * u) * u / self.width


@dataclass(frozen=True)
class SumPulse(PulseShape):
    """Pointwise sum of component waveforms (left-to-right accumulation)."""

    parts: tuple[PulseShape, ...]

    def __init__(self, parts):
        object.__setattr__(self, "parts", tuple(parts))
        if not self.parts:
            raise ValueError("SumPulse requires at least one part")

    def _value(self, t):
        acc = self.parts[0]._value(t)
        for p in self.parts[1:]:
            acc = acc + p._value(t)
        return acc

    def _derivative(self, t):
        acc = self.parts[0]._derivative(t)
        for p in self.parts[1:]:
            acc = acc + p._derivative(t)
        return acc

    def limit(self, t, side):
        acc = self.parts[0].limit(t, side)
        for p in self.parts[1:]:
            acc = acc + p.limit(t, side)
        return acc

    def breakpoints(self):
        pts: list[float] = []
        for p in self.parts:
            pts.extend(p.breakpoints())
        return tuple(sorted(set(pts)))


def constant_pulse(level: float) -> LinearPulse:
    """Constant waveform (zero-slope ramp)."""
    return LinearPulse(0.0, level)


def scale_pulse(shape: PulseShape, factor: float) -> PulseShape:
    """Waveform scaled by a real factor, preserving the variant."""
    if isinstance(shape, LinearPulse):
        return LinearPulse(shape.slope * factor, shape.offset * factor)
    if isinstance(shape, WindowedConstantPulse):
        return WindowedConstantPulse(shape.level * factor, shape.t_on, shape.t_off)
    if isinstance(shape, GaussianPulse):
        return GaussianPulse(shape.peak * factor, shape.center, shape.width)
    if isinstance(shape, SumPulse):
        return SumPulse(tuple(scale_pulse(p, factor) for p in shape.parts))
    raise TypeError(f"cannot scale pulse of type {type(shape).__name__}")


@dataclass(frozen=True)
class ScrapSchedule:
    """Complete drive specification for the dissipative two-level problem.

    rabi and detuning are angular-frequency waveforms (rad/s); gamma is
    the amplitude decay rate of the upper level (1/s); passage_window is
    the (t_b, t_m) interval during which the state is in superposition.
    """

    rabi: PulseShape
    detuning: PulseShape
    gamma: float
    t_start: float
    t_end: float
    passage_window: tuple[float, float]

    def __post_init__(self):
        t_b, t_m = self.passage_window
        if not (self.t_start < t_b < t_m < self.t_end):
            raise ValueError(
                f"schedule requires t_start < t_b < t_m < t_end, got "
                f"{self.t_start} < {t_b} < {t_m} < {self.t_end}"
            )
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")

    def breakpoints(self) -> tuple[float, ...]:
        pts = set(self.rabi.breakpoints()) | set(self.detuning.breakpoints())
        return tuple(sorted(pts))


# Margin before/after the pump window in units of the pump window length,
# matching the shipped geometry (window 7 ns inside a 20 ns gate interval).
_WINDOW_MARGIN_RATIO = 6.5 / 7.0


def make_counterintuitive_pair(
    stark_slope: float,
    pump_level: float,
    t_on: float,
    t_off: float,
    gamma: float = 0.0,
) -> ScrapSchedule:
    """Schedule with a linear chirp crossing zero at the centre of a
    windowed-constant pump.

    The chirp starts before the pump switches on and keeps ramping after
    it switches off; the overall time span extends past the pump window
    by 6.5/7 of the window length on each side.
    """
    if not t_on < t_off:
        raise ValueError(f"pump window requires t_on < t_off, got [{t_on}, {t_off}]")
    if pump_level == 0:
        raise ValueError("pump_level must be nonzero")
    t_mid = 0.5 * (t_on + t_off)
    detuning = LinearPulse(stark_slope, -stark_slope * t_mid)
    rabi = WindowedConstantPulse(pump_level, t_on, t_off)
    margin = (t_off - t_on) * _WINDOW_MARGIN_RATIO
    return ScrapSchedule(
        rabi=rabi,
        detuning=detuning,
        gamma=gamma,
        t_start=t_on - margin,
        t_end=t_off + margin,
        passage_window=(t_on, t_off),
    )
