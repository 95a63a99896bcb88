import pytest

from scrapsim.config import ConfigError, load_config, parse_config
from scrapsim.pulses import LinearPulse, SumPulse, WindowedConstantPulse
from scrapsim.single_qubit import SingleQubitScenario
from scrapsim.two_qubit import TwoQubitModel
from scrapsim.config import build_scenario

MINIMAL_SINGLE = """
kind = "single_qubit"

[device]
mutual_inductance_H = 2e-12
loop_inductance_H = 1e-10
delta_00 = 0.0
delta_11 = 0.015
delta_01 = 5.45

[pulses.stark]
kind = "linear"
slope_A_per_s = 1e5

[pulses.pump]
kind = "windowed_constant"
level_A = -1.88e-9
t_on_ns = -3.5
t_off_ns = 3.5

[time]
t_start_ns = -10.0
t_end_ns = 10.0

[dissipation]
gamma = 0.0
T_ref_s = 2e-8
"""


def single_text(**edits):
    text = MINIMAL_SINGLE
    for old, new in edits.items():
        assert old in text
        text = text.replace(old, new)
    return text


class TestParsing:
    def test_shipped_single_qubit_config(self, config_dir):
        config = load_config(config_dir / "single_qubit.toml")
        assert config.kind == "single_qubit"
        assert config.t_start == pytest.approx(-10e-9, rel=1e-12)
        assert config.t_end == pytest.approx(10e-9, rel=1e-12)
        assert config.passage_window == pytest.approx((-3.5e-9, 3.5e-9), rel=1e-12)
        assert config.gamma == 0.0
        assert config.t_ref == 2e-8
        assert config.step == pytest.approx(1e-14, rel=1e-12)
        assert config.record_every == 2000
        assert isinstance(config.pump_pulse, WindowedConstantPulse)
        assert isinstance(config.stark_pulse, LinearPulse)

    def test_shipped_two_qubit_config(self, config_dir):
        config = load_config(config_dir / "two_qubit.toml")
        assert config.kind == "two_qubit"
        assert config.pump_pulse is None
        assert config.device.p_10 > 0
        assert config.initial_state == "01"

    def test_defaults_applied_when_sections_missing(self):
        config = parse_config(MINIMAL_SINGLE)
        assert config.step is None            # resolved to span/20000 at run time
        assert config.record_every == 20
        assert config.output_directory == "out"
        assert config.thresholds.weak_max == 0.1
        assert config.thresholds.very_strong_min == 10.0
        assert config.initial_state == "ground"
        assert config.resolved["integrator"]["step_ns"] == pytest.approx(1e-3)

    def test_sum_pulse_parses(self):
        text = single_text(**{
            'kind = "linear"\nslope_A_per_s = 1e5':
            'kind = "sum"\n[[pulses.stark.parts]]\nkind = "linear"\nslope_A_per_s = 1e5\n'
            '[[pulses.stark.parts]]\nkind = "gaussian"\npeak_A = 1e-9\ncenter_ns = 0.0\nwidth_ns = 1.0'
        })
        config = parse_config(text)
        assert isinstance(config.stark_pulse, SumPulse)
        assert len(config.stark_pulse.parts) == 2


class TestValidation:
    def test_negative_gamma_names_field_and_constraint(self):
        with pytest.raises(ConfigError, match=r"dissipation\.gamma.*>= 0"):
            parse_config(single_text(**{"gamma = 0.0": "gamma = -1.0"}))

    def test_unknown_key_is_fatal(self):
        with pytest.raises(ConfigError, match="unknown key device.delta_22"):
            parse_config(single_text(**{"delta_11 = 0.015": "delta_11 = 0.015\ndelta_22 = 1.0"}))

    def test_unknown_top_level_section_is_fatal(self):
        with pytest.raises(ConfigError, match="unknown key extras"):
            parse_config(MINIMAL_SINGLE + "\n[extras]\nx = 1\n")

    def test_missing_required_key(self):
        with pytest.raises(ConfigError, match="missing required key time.t_end_ns"):
            parse_config(single_text(**{"t_end_ns = 10.0\n": ""}))

    def test_missing_required_section(self):
        with pytest.raises(ConfigError, match=r"missing required section \[dissipation\]"):
            parse_config(MINIMAL_SINGLE.split("[dissipation]")[0])

    def test_gamma_and_gamma_list_are_exclusive(self):
        with pytest.raises(ConfigError, match="mutually exclusive"):
            parse_config(single_text(**{"gamma = 0.0": "gamma = 0.0\ngamma_list = [0.0, 1.0]"}))

    def test_one_of_gamma_or_list_required(self):
        with pytest.raises(ConfigError, match="gamma or gamma_list"):
            parse_config(single_text(**{"gamma = 0.0\n": ""}))

    def test_gamma_list_must_be_sorted(self):
        with pytest.raises(ConfigError, match="sorted"):
            parse_config(single_text(**{"gamma = 0.0": "gamma_list = [1.0, 0.5]"}))

    def test_pump_forbidden_for_two_qubit(self):
        text = single_text(**{'kind = "single_qubit"': 'kind = "two_qubit"'})
        with pytest.raises(ConfigError, match="pump.*not allowed"):
            parse_config(text)

    def test_type_errors_name_the_key(self):
        with pytest.raises(ConfigError, match="time.t_start_ns.*number"):
            parse_config(single_text(**{"t_start_ns = -10.0": 't_start_ns = "early"'}))

    def test_window_ordering_enforced(self):
        with pytest.raises(ConfigError, match="t_start_ns < t_b_ns"):
            parse_config(single_text(**{
                "t_end_ns = 10.0": "t_end_ns = 10.0\nt_b_ns = -20.0\nt_m_ns = 3.5"}))

    def test_bad_toml_reports_config_error(self):
        with pytest.raises(ConfigError, match="invalid TOML"):
            parse_config("kind = [unterminated")

    def test_full_hilbert_only_for_two_qubit(self):
        with pytest.raises(ConfigError, match="full_hilbert"):
            parse_config(MINIMAL_SINGLE + "\n[integrator]\nfull_hilbert = true\n")


class TestHashing:
    def test_hash_stable_across_reparse(self):
        assert parse_config(MINIMAL_SINGLE).hash() == parse_config(MINIMAL_SINGLE).hash()

    def test_hash_ignores_key_order(self):
        reordered = MINIMAL_SINGLE.replace(
            "mutual_inductance_H = 2e-12\nloop_inductance_H = 1e-10",
            "loop_inductance_H = 1e-10\nmutual_inductance_H = 2e-12")
        assert parse_config(MINIMAL_SINGLE).hash() == parse_config(reordered).hash()

    def test_hash_changes_with_any_resolved_field(self):
        base = parse_config(MINIMAL_SINGLE).hash()
        assert parse_config(single_text(**{"gamma = 0.0": "gamma = 0.5"})).hash() != base
        assert parse_config(single_text(**{"delta_01 = 5.45": "delta_01 = 5.46"})).hash() != base

    def test_explicit_default_hashes_like_omitted_default(self):
        explicit = MINIMAL_SINGLE + "\n[integrator]\nrecord_every = 20\n"
        assert parse_config(explicit).hash() == parse_config(MINIMAL_SINGLE).hash()


class TestScenarioBuilding:
    def test_single_qubit_scenario(self):
        config = parse_config(MINIMAL_SINGLE)
        scenario = build_scenario(config)
        assert isinstance(scenario, SingleQubitScenario)
        assert scenario.gamma == 0.0
        assert scenario.t_start == pytest.approx(-10e-9, rel=1e-12)

    def test_gamma_override_divides_by_t_ref(self):
        config = parse_config(MINIMAL_SINGLE)
        scenario = build_scenario(config, 0.5)
        assert scenario.gamma == pytest.approx(0.5 / 2e-8, rel=1e-15)

    def test_two_qubit_model(self, config_dir):
        config = load_config(config_dir / "two_qubit.toml")
        model = build_scenario(config)
        assert isinstance(model, TwoQubitModel)
        assert model.t_start == pytest.approx(-200e-9, rel=1e-12)
