import numpy as np
import pytest

from scrapsim.adiabatic import eta_profile_max
from scrapsim.pulses import (
    GaussianPulse,
    LinearPulse,
    ScrapSchedule,
    SumPulse,
    WindowedConstantPulse,
    constant_pulse,
    make_counterintuitive_pair,
    scale_pulse,
)

NS = 1e-9


class TestEvaluation:
    def test_linear_ramp_value(self):
        # bias ramp 0.1 per unit time evaluated at t = 2
        assert LinearPulse(0.1, 0.0).value(2.0) == pytest.approx(0.2, abs=0.0)

    def test_windowed_constant_outside_window_is_zero(self):
        pulse = WindowedConstantPulse(-1.88e-9, -3.5 * NS, 3.5 * NS)
        assert pulse.value(5 * NS) == 0.0
        assert pulse.value(-5 * NS) == 0.0

    def test_windowed_constant_closed_edges(self):
        pulse = WindowedConstantPulse(2.0, 1.0, 3.0)
        assert pulse.value(1.0) == 2.0
        assert pulse.value(3.0) == 2.0
        assert pulse.value(2.0) == 2.0

    def test_gaussian_peak_at_center(self):
        assert GaussianPulse(1.0, 0.0, 2.5).value(0.0) == 1.0

    def test_sum_is_exactly_linear(self):
        a = LinearPulse(0.3, 1.7)
        b = GaussianPulse(2.0, 0.5, 1.0)
        s = SumPulse((a, b))
        for t in np.linspace(-3, 3, 37):
            assert s.value(t) == a.value(t) + b.value(t)

    def test_evaluation_is_deterministic(self):
        pulse = GaussianPulse(3.7, 1.1, 0.9)
        values = {pulse.value(0.625) for _ in range(50)}
        assert len(values) == 1

    def test_vectorized_matches_scalar(self):
        pulse = SumPulse((LinearPulse(2.0, -1.0), WindowedConstantPulse(5.0, 0.0, 1.0)))
        times = np.linspace(-1.0, 2.0, 101)
        vec = pulse.value(times)
        assert all(vec[i] == pulse.value(t) for i, t in enumerate(times))


class TestDerivatives:
    def test_linear_derivative_is_slope(self):
        pulse = LinearPulse(-4.2, 0.3)
        for t in (-1.0, 0.0, 17.5):
            assert pulse.derivative(t) == -4.2

    def test_windowed_constant_derivative_zero(self):
        pulse = WindowedConstantPulse(1.0, -1.0, 1.0)
        assert pulse.derivative(0.5) == 0.0
        assert pulse.derivative(-1.0) == 0.0  # edge convention
        assert pulse.derivative(1.0) == 0.0

    def test_gaussian_derivative_zero_at_center(self):
        assert GaussianPulse(1.0, 0.7, 0.2).derivative(0.7) == 0.0

    @pytest.mark.parametrize("pulse,scale", [
        (LinearPulse(3.0, -2.0), 1.0),
        (GaussianPulse(2.0, 0.2, 0.8), 1.0),
        (WindowedConstantPulse(4.0, -5.0, 5.0), 10.0),
        (SumPulse((LinearPulse(1.5, 0.0), GaussianPulse(1.0, -0.3, 0.5))), 1.0),
    ])
    def test_derivative_matches_central_differences(self, pulse, scale):
        # interior points only, away from any discontinuity
        rng = np.random.default_rng(7)
        h = 1e-6 * scale
        for t in rng.uniform(-0.4 * scale, 0.4 * scale, size=100):
            numeric = (pulse.value(t + h) - pulse.value(t - h)) / (2 * h)
            exact = pulse.derivative(t)
            assert numeric == pytest.approx(exact, rel=1e-6, abs=1e-9 * max(1.0, abs(exact)))


class TestLimitsAndBreakpoints:
    def test_one_sided_limits_at_window_edges(self):
        pulse = WindowedConstantPulse(2.0, 1.0, 3.0)
        assert pulse.limit(1.0, -1) == 0.0
        assert pulse.limit(1.0, +1) == 2.0
        assert pulse.limit(3.0, -1) == 2.0
        assert pulse.limit(3.0, +1) == 0.0
        assert pulse.limit(2.0, -1) == 2.0

    def test_smooth_pulses_have_no_breakpoints(self):
        assert LinearPulse(1.0, 0.0).breakpoints() == ()
        assert GaussianPulse(1.0, 0.0, 1.0).breakpoints() == ()

    def test_sum_collects_breakpoints(self):
        s = SumPulse((WindowedConstantPulse(1.0, 0.0, 1.0),
                      WindowedConstantPulse(1.0, 0.5, 2.0)))
        assert s.breakpoints() == (0.0, 0.5, 1.0, 2.0)


class TestValidation:
    def test_windowed_constant_rejects_bad_window(self):
        with pytest.raises(ValueError, match="t_on < t_off"):
            WindowedConstantPulse(1.0, 2.0, 2.0)

    def test_gaussian_rejects_nonpositive_width(self):
        with pytest.raises(ValueError, match="width"):
            GaussianPulse(1.0, 0.0, 0.0)

    def test_schedule_requires_ordered_times(self):
        with pytest.raises(ValueError, match="t_start < t_b < t_m < t_end"):
            ScrapSchedule(constant_pulse(1.0), constant_pulse(0.0), 0.0,
                          0.0, 1.0, (0.5, 2.0))

    def test_schedule_rejects_negative_gamma(self):
        with pytest.raises(ValueError, match="gamma"):
            ScrapSchedule(constant_pulse(1.0), constant_pulse(0.0), -1.0,
                          0.0, 1.0, (0.2, 0.8))


class TestScale:
    @pytest.mark.parametrize("pulse", [
        LinearPulse(3.0, -2.0),
        WindowedConstantPulse(4.0, -1.0, 1.0),
        GaussianPulse(2.0, 0.2, 0.8),
        SumPulse((LinearPulse(1.0, 0.5), GaussianPulse(1.0, 0.0, 1.0))),
    ])
    def test_scaling_multiplies_values(self, pulse):
        scaled = scale_pulse(pulse, -2.5)
        assert type(scaled) is type(pulse)
        for t in np.linspace(-1.5, 1.5, 11):
            assert scaled.value(t) == pytest.approx(-2.5 * pulse.value(t), rel=1e-15, abs=0.0)


class TestCounterintuitivePair:
    def test_chirp_crosses_zero_at_window_center(self):
        sched = make_counterintuitive_pair(-9.5e19, 3.2e10, -3.5 * NS, 3.5 * NS)
        assert sched.detuning.value(0.0) == 0.0
        assert sched.rabi.value(0.0) == 3.2e10
        assert sched.passage_window == (-3.5 * NS, 3.5 * NS)

    def test_pump_vanishes_outside_window(self):
        sched = make_counterintuitive_pair(-1e19, 1e9, -3.5 * NS, 3.5 * NS)
        assert sched.rabi.value(3.5 * NS + 1e-12) == 0.0
        assert sched.rabi.value(sched.t_end) == 0.0

    def test_spans_shipped_geometry(self):
        sched = make_counterintuitive_pair(-1e19, 1e9, -3.5 * NS, 3.5 * NS)
        assert sched.t_start == pytest.approx(-10 * NS, rel=1e-12)
        assert sched.t_end == pytest.approx(10 * NS, rel=1e-12)

    def test_off_center_window_still_crosses_inside(self):
        sched = make_counterintuitive_pair(2.0, 1.0, 1.0, 3.0)
        assert sched.detuning.value(2.0) == 0.0
        assert sched.detuning.value(1.0) * sched.detuning.value(3.0) < 0

    def test_rejects_bad_window(self):
        with pytest.raises(ValueError, match="t_on < t_off"):
            make_counterintuitive_pair(1.0, 1.0, 2.0, 1.0)

    def test_rejects_zero_pump(self):
        with pytest.raises(ValueError, match="pump_level"):
            make_counterintuitive_pair(1.0, 0.0, 0.0, 1.0)

    def test_calibrated_canonical_pair_is_adiabatic(self, canonical_schedule):
        # frozen calibration: the shipped chirp/pump pair keeps the
        # adiabaticity parameter at or below 0.05 everywhere
        assert eta_profile_max(canonical_schedule, 2001) <= 0.05

    def test_result_satisfies_schedule_invariants(self):
        sched = make_counterintuitive_pair(-5.0, 2.0, -1.0, 1.0, gamma=3.0)
        t_b, t_m = sched.passage_window
        assert sched.t_start < t_b < t_m < sched.t_end
        assert sched.gamma == 3.0
