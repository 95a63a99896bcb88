import math

import numpy as np
import pytest

from scrapsim.defaults import (
    SINGLE_QUBIT_T_REF,
    TWO_QUBIT_T_REF,
    canonical_single_qubit,
    canonical_two_qubit,
)
from scrapsim.sweep import (
    Regime,
    RegimeThresholds,
    SweepError,
    default_gamma_grid,
    gamma_sweep,
    regime_classify,
    time_gamma_map,
)


# coarser but converged settings: sweeps run dozens of propagations
SWEEP_STEP = 4e-14
SWEEP_RECORD = 500
TWO_QUBIT_SWEEP_STEP = 1e-12


class TestRegimes:
    def test_weak(self):
        assert regime_classify(0.05) is Regime.WEAK

    def test_strong(self):
        assert regime_classify(1.0) is Regime.STRONG

    def test_very_strong(self):
        assert regime_classify(50.0) is Regime.VERY_STRONG

    def test_boundaries(self):
        assert regime_classify(0.1) is Regime.STRONG
        assert regime_classify(10.0) is Regime.VERY_STRONG

    def test_rejects_negative(self):
        with pytest.raises(ValueError, match="gamma"):
            regime_classify(-0.1)

    def test_threshold_override(self):
        custom = RegimeThresholds(weak_max=0.5, very_strong_min=2.0)
        assert regime_classify(0.3, custom) is Regime.WEAK
        assert regime_classify(3.0, custom) is Regime.VERY_STRONG

    def test_threshold_validation(self):
        with pytest.raises(ValueError, match="thresholds"):
            RegimeThresholds(weak_max=5.0, very_strong_min=1.0)

    def test_default_grid_spans_all_regimes(self):
        grid = default_gamma_grid()
        assert len(grid) == 60
        assert grid[0] == pytest.approx(1e-3)
        assert grid[-1] == pytest.approx(1e2)
        labels = {regime_classify(g) for g in grid}
        assert labels == {Regime.WEAK, Regime.STRONG, Regime.VERY_STRONG}


class TestGammaSweep:
    def test_zero_entry_equals_plain_run(self):
        from scrapsim.single_qubit import run_single

        scenario = canonical_single_qubit()
        sweep = gamma_sweep(scenario, [0.0], SINGLE_QUBIT_T_REF,
                            step=SWEEP_STEP, record_every=SWEEP_RECORD)
        direct = run_single(scenario, step=SWEEP_STEP, record_every=SWEEP_RECORD)
        assert sweep.final_numeric[0] == direct.populations[-1, 1]

    def test_numeric_tracks_analytic_up_to_unit_gamma(self):
        gammas = [0.01, 0.05, 0.1, 0.3, 0.5, 1.0, 3.0, 10.0]
        sweep = gamma_sweep(canonical_single_qubit(), gammas, SINGLE_QUBIT_T_REF,
                            step=SWEEP_STEP, record_every=SWEEP_RECORD)
        for g, num, ana in zip(sweep.gamma_values, sweep.final_numeric, sweep.final_analytic):
            if g <= 1.0:
                assert abs(num - ana) <= 0.01, f"gamma={g}"

    def test_very_strong_dissipation_destroys_transfer(self):
        sweep = gamma_sweep(canonical_single_qubit(), [10.0], SINGLE_QUBIT_T_REF,
                            step=SWEEP_STEP, record_every=SWEEP_RECORD)
        assert sweep.final_numeric[0] <= 0.05

    def test_monotone_damage(self):
        gammas = list(default_gamma_grid(20))
        sweep = gamma_sweep(canonical_single_qubit(), gammas, SINGLE_QUBIT_T_REF,
                            step=SWEEP_STEP, record_every=SWEEP_RECORD)
        pops = sweep.final_numeric
        assert all(b <= a + 1e-9 for a, b in zip(pops, pops[1:]))

    def test_two_qubit_sweep_obeys_factorization_law(self):
        gammas = [0.0, 0.1, 0.5, 1.0, 5.0, 20.0, 100.0]
        model = canonical_two_qubit()
        sweep = gamma_sweep(model, gammas, TWO_QUBIT_T_REF,
                            step=TWO_QUBIT_SWEEP_STEP, record_every=2000)
        span = model.t_end - model.t_start
        base = sweep.final_numeric[0]
        for g, num, ana in zip(sweep.gamma_values, sweep.final_numeric, sweep.final_analytic):
            law = base * math.exp(-2.0 * (g / TWO_QUBIT_T_REF) * span)
            assert abs(num - law) <= 1e-6
            assert ana == pytest.approx(law, abs=1e-300)

    def test_determinism(self):
        gammas = [0.0, 0.5, 2.0]
        a = gamma_sweep(canonical_single_qubit(), gammas, SINGLE_QUBIT_T_REF,
                        step=SWEEP_STEP, record_every=SWEEP_RECORD)
        b = gamma_sweep(canonical_single_qubit(), gammas, SINGLE_QUBIT_T_REF,
                        step=SWEEP_STEP, record_every=SWEEP_RECORD)
        assert a == b

    def test_rejects_unsorted_gammas(self):
        with pytest.raises(ValueError, match="sorted"):
            gamma_sweep(canonical_single_qubit(), [1.0, 0.5], SINGLE_QUBIT_T_REF)

    def test_rejects_negative_gammas(self):
        with pytest.raises(ValueError, match="nonnegative"):
            gamma_sweep(canonical_single_qubit(), [-1.0, 0.5], SINGLE_QUBIT_T_REF)

    def test_failing_entry_names_its_gamma(self):
        # a step wider than the window is rejected inside the entry run
        with pytest.raises(SweepError, match="gamma=0.7"):
            gamma_sweep(canonical_single_qubit(), [0.7], SINGLE_QUBIT_T_REF, step=1.0)

    def test_excited_start_sweeps_the_ground_population(self):
        scenario = canonical_single_qubit(initial_state="excited")
        sweep = gamma_sweep(scenario, [0.0], SINGLE_QUBIT_T_REF,
                            step=SWEEP_STEP, record_every=SWEEP_RECORD)
        assert sweep.scenario_id == "single_qubit/excited"
        assert sweep.final_numeric[0] >= 0.999


class TestTimeGammaMap:
    def test_single_row_equals_trajectory(self):
        import dataclasses

        from scrapsim.single_qubit import run_single

        result = time_gamma_map(canonical_single_qubit(), [0.5], SINGLE_QUBIT_T_REF,
                                step=SWEEP_STEP, record_every=SWEEP_RECORD)
        scenario = dataclasses.replace(canonical_single_qubit(),
                                       gamma=0.5 / SINGLE_QUBIT_T_REF)
        traj = run_single(scenario, step=SWEEP_STEP, record_every=SWEEP_RECORD)
        assert len(result.gamma_values) == 1
        assert np.array_equal(result.grid[0], traj.populations[:, 1])
        assert np.array_equal(result.times, traj.times)

    def test_grid_shape_and_bounds(self):
        gammas = [0.0, 0.5, 5.0]
        result = time_gamma_map(canonical_single_qubit(), gammas, SINGLE_QUBIT_T_REF,
                                step=SWEEP_STEP, record_every=SWEEP_RECORD)
        assert len(result.grid) == len(gammas)
        assert all(len(row) == len(result.times) for row in result.grid)
        flat = np.asarray(result.grid)
        assert flat.min() >= 0.0
        assert flat.max() <= 1.0 + 1e-9

    def test_lossless_row_ends_complete(self):
        result = time_gamma_map(canonical_single_qubit(), [0.0], SINGLE_QUBIT_T_REF,
                                step=SWEEP_STEP, record_every=SWEEP_RECORD)
        assert result.grid[0][-1] >= 0.999
