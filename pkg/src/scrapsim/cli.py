"""Command-line entry point.

    scrap run <config>       propagate one scenario, write trajectory + summary
    scrap sweep <config>     final population over the configured gamma list
    scrap map <config>       population over the (gamma, t) grid
    scrap validate <config>  run the physics property checks, no files

Flags: --out <dir> (default from the config, then ./out), --svg (also emit
plots), --step <seconds> (override the integrator step), --quiet.
Exit codes: 0 success, 1 usage or config error, 2 numerical or property
failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import os
import sys

import numpy as np

from .adiabatic import analytic_transfer, eta_profile_max
from .config import Config, ConfigError, build_scenario, load_config
from .dynamics import default_step
from .output import (
    write_manifest,
    write_map_csv,
    write_summary_csv,
    write_sweep_csv,
    write_trajectory_csv,
)
from .single_qubit import (
    build_single_qubit_schedule,
    decay_rate_fit,
    post_passage_window,
    pre_passage_window,
    run_single,
)
from .sweep import SweepError, gamma_sweep, regime_classify, time_gamma_map
from .svgplot import heatmap_svg, line_chart_svg
from .two_qubit import BASIS_LABELS_4, BLOCK_LABELS, build_two_qubit_h, reduce_subspace, run_iswap

NS = 1e-9


class PropertyFailure(RuntimeError):
    """A validate property check failed."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="scrap", description="SCRAP transfer simulator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, text in (
        ("run", "propagate one scenario and write trajectory/summary CSV"),
        ("sweep", "final target population over the configured gamma list"),
        ("map", "target population over the (gamma, t) grid"),
        ("validate", "run physics property checks on the configured scenario"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("config", help="TOML config file")
        p.add_argument("--out", default=None, help="output directory (default: config, then ./out)")
        p.add_argument("--svg", action="store_true", help="also emit SVG plots")
        p.add_argument("--step", type=float, default=None, metavar="SECONDS",
                       help="override the integrator step")
        p.add_argument("--quiet", action="store_true", help="suppress progress output")
    return parser


def _say(quiet: bool, message: str) -> None:
    if not quiet:
        print(message)


def _labels(config: Config) -> tuple[str, ...]:
    if config.kind == "single_qubit":
        return ("0", "1")
    return BASIS_LABELS_4 if config.full_hilbert else BLOCK_LABELS


def _step_of(config: Config, args) -> float | None:
    if args.step is not None:
        if args.step <= 0:
            raise ConfigError(f"--step must be > 0, got {args.step}")
        return args.step
    return config.step


def _run_trajectory(config: Config, step: float | None, gamma: float | None = None,
                    record_every: int | None = None):
    scenario = build_scenario(config, gamma)
    record = record_every if record_every is not None else config.record_every
    if config.kind == "single_qubit":
        return run_single(scenario, step=step, record_every=record)
    return run_iswap(scenario, initial=config.initial_state, step=step,
                     record_every=record, full=config.full_hilbert)


def _block_schedule_of(config: Config, gamma_dimensionless: float):
    model = build_scenario(config, gamma_dimensionless)
    return reduce_subspace(build_two_qubit_h(model)).analysis_schedule


def _summary_fields(config: Config, traj, labels, step) -> dict:
    gamma = config.gamma or 0.0
    decay = gamma / config.t_ref
    fields: dict[str, object] = {
        "kind": config.kind,
        "initial_state": config.initial_state,
        "gamma": gamma,
        "Gamma_per_s": decay,
    }
    for lab, p in zip(labels, traj.final_populations):
        fields[f"final_p{lab}"] = float(p)

    if config.kind == "single_qubit":
        schedule = build_single_qubit_schedule(build_scenario(config, 0.0))
        which = "from_ground" if config.initial_state == "ground" else "from_excited"
        fields["eta_max"] = eta_profile_max(schedule)
        fields["p_target_analytic"] = analytic_transfer(decay, schedule, which)
        fitted = None
        if gamma > 0:
            window = (post_passage_window(schedule) if config.initial_state == "ground"
                      else pre_passage_window(schedule))
            fitted = decay_rate_fit(traj, window, 1)
        fields["fitted_Gamma_per_s"] = fitted
    else:
        schedule = _block_schedule_of(config, 0.0)
        fields["eta_max"] = eta_profile_max(schedule)
        target_label = "10" if config.initial_state == "01" else "01"
        target = labels.index(target_label)
        if gamma > 0:
            lossless = _run_trajectory(config, step, gamma=0.0)
            base = float(lossless.populations[-1, target])
        else:
            base = float(traj.populations[-1, target])
        span = config.t_end - config.t_start
        fields["p_target_analytic"] = base * math.exp(-2.0 * decay * span)
        fitted = None
        if gamma > 0:
            fitted = decay_rate_fit(traj, post_passage_window(schedule), target)
        fields["fitted_Gamma_per_s"] = fitted
    fields["regime"] = regime_classify(gamma, config.thresholds).value
    return fields


def cmd_run(config: Config, out_dir: str, svg: bool, step: float | None, quiet: bool) -> int:
    if config.gamma is None:
        raise ConfigError("run requires a scalar dissipation.gamma (got gamma_list)")
    labels = _labels(config)
    traj = _run_trajectory(config, step)
    files = []

    path = os.path.join(out_dir, "trajectory.csv")
    write_trajectory_csv(path, traj, labels)
    files.append(path)

    summary = _summary_fields(config, traj, labels, step)
    path = os.path.join(out_dir, "summary.csv")
    write_summary_csv(path, summary)
    files.append(path)

    if svg:
        path = os.path.join(out_dir, "trajectory.svg")
        line_chart_svg(
            path,
            [t / NS for t in traj.times],
            [traj.populations[:, i] for i in range(traj.dim)],
            [f"P{lab}" for lab in labels],
            title="Population transfer",
            x_label="t (ns)",
            y_label="population",
        )
        files.append(path)

    manifest = os.path.join(out_dir, "manifest.json")
    write_manifest(manifest, config.hash(), "run", files)
    _say(quiet, f"wrote {', '.join(os.path.basename(f) for f in files)} and manifest.json "
                f"to {out_dir}")
    _say(quiet, "final populations: "
                + ", ".join(f"P{lab}={summary[f'final_p{lab}']:.6f}" for lab in labels))
    return 0


def cmd_sweep(config: Config, out_dir: str, svg: bool, step: float | None, quiet: bool) -> int:
    if config.gamma_list is None:
        raise ConfigError("sweep requires dissipation.gamma_list")
    scenario = build_scenario(config, 0.0)
    initial = config.initial_state if config.kind == "two_qubit" else None
    sweep = gamma_sweep(scenario, config.gamma_list, config.t_ref, initial=initial,
                        step=step, record_every=config.record_every)
    files = []
    path = os.path.join(out_dir, "sweep.csv")
    write_sweep_csv(path, sweep, config.thresholds)
    files.append(path)
    if svg:
        path = os.path.join(out_dir, "sweep.svg")
        line_chart_svg(
            path,
            sweep.gamma_values,
            [sweep.final_numeric, sweep.final_analytic],
            ["numeric", "analytic"],
            title=f"Final transfer vs dissipation ({sweep.scenario_id})",
            x_label="gamma = Gamma T",
            y_label="final target population",
            log_x=min(sweep.gamma_values) > 0,
        )
        files.append(path)
    manifest = os.path.join(out_dir, "manifest.json")
    write_manifest(manifest, config.hash(), "sweep", files)
    _say(quiet, f"swept {len(sweep.gamma_values)} gamma values; wrote "
                f"{', '.join(os.path.basename(f) for f in files)} to {out_dir}")
    return 0


def cmd_map(config: Config, out_dir: str, svg: bool, step: float | None, quiet: bool) -> int:
    if config.gamma_list is None:
        raise ConfigError("map requires dissipation.gamma_list")
    scenario = build_scenario(config, 0.0)
    initial = config.initial_state if config.kind == "two_qubit" else None
    result = time_gamma_map(scenario, config.gamma_list, config.t_ref, initial=initial,
                            step=step, record_every=config.record_every)
    files = []
    path = os.path.join(out_dir, "map.csv")
    write_map_csv(path, result)
    files.append(path)
    if svg:
        path = os.path.join(out_dir, "map.svg")
        gammas = result.gamma_values
        log_y = min(gammas) > 0 and max(gammas) / min(gammas) > 30
        heatmap_svg(
            path,
            [t / NS for t in result.times],
            gammas,
            result.grid,
            title=f"Target population over (gamma, t) ({result.scenario_id})",
            x_label="t (ns)",
            y_label="gamma = Gamma T",
            log_y=log_y,
        )
        files.append(path)
    manifest = os.path.join(out_dir, "manifest.json")
    write_manifest(manifest, config.hash(), "map", files)
    _say(quiet, f"mapped {len(result.gamma_values)} x {len(result.times)} grid; wrote "
                f"{', '.join(os.path.basename(f) for f in files)} to {out_dir}")
    return 0


def _flip_drive(config: Config) -> Config:
    """Config with the coupling drive sign flipped (a pure gauge)."""
    from .pulses import scale_pulse

    if config.kind == "single_qubit":
        return dataclasses.replace(config, pump_pulse=scale_pulse(config.pump_pulse, -1.0))
    device = dataclasses.replace(config.device, p_10=-config.device.p_10)
    return dataclasses.replace(config, device=device)


def cmd_validate(config: Config, out_dir: str, svg: bool, step: float | None, quiet: bool) -> int:
    checks: list[tuple[str, float, float]] = []  # (name, value, bound)
    gamma = config.gamma if config.gamma is not None else 0.0
    step = step if step is not None else config.step
    span_step = step if step is not None else default_step(config.t_start, config.t_end)

    lossless = _run_trajectory(config, step, gamma=0.0)
    checks.append(("norm_conservation", float(np.abs(lossless.norm - 1.0).max()), 1e-9))

    traj = _run_trajectory(config, step, gamma=gamma)
    flipped = _run_trajectory(_flip_drive(config), step, gamma=gamma)
    checks.append(("gauge_invariance",
                   float(np.abs(traj.populations - flipped.populations).max()), 1e-12))

    if gamma > 0:
        growth = float(np.diff(traj.norm).max())
        checks.append(("monotone_norm", max(growth, 0.0), 1e-12))

    if config.kind == "single_qubit":
        schedule = build_single_qubit_schedule(build_scenario(config, 0.0))
        which = "from_ground" if config.initial_state == "ground" else "from_excited"
        target = 1 if config.initial_state == "ground" else 0
        estimate = analytic_transfer(gamma / config.t_ref, schedule, which)
        checks.append(("analytic_agreement",
                       abs(float(traj.populations[-1, target]) - estimate), 0.01))
    else:
        decay = gamma / config.t_ref
        factor = np.exp(-2.0 * decay * (traj.times - traj.times[0]))
        deviation = float(np.abs(traj.populations - factor[:, None] * lossless.populations).max())
        checks.append(("dissipation_factorization", deviation, 1e-8))

    halved = _run_trajectory(config, span_step / 2.0, gamma=gamma,
                             record_every=2 * config.record_every)
    checks.append(("step_halving_convergence",
                   float(np.abs(traj.populations - halved.populations).max()), 1e-8))

    failed = []
    for name, value, bound in checks:
        ok = value <= bound
        print(f"{'PASS' if ok else 'FAIL'} {name}: {value:.3e} {'<=' if ok else '>'} {bound:.0e}")
        if not ok:
            failed.append(name)
    if failed:
        raise PropertyFailure(f"property checks failed: {', '.join(failed)}")
    _say(quiet, "all property checks passed")
    return 0


_COMMANDS = {"run": cmd_run, "sweep": cmd_sweep, "map": cmd_map, "validate": cmd_validate}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = load_config(args.config)
        out_dir = args.out if args.out is not None else config.output_directory
        if args.command != "validate":
            os.makedirs(out_dir, exist_ok=True)
        step = _step_of(config, args)
        return _COMMANDS[args.command](config, out_dir, args.svg, step, args.quiet)
    except ConfigError as exc:
        print(f"scrap: config error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"scrap: i/o error: {exc}", file=sys.stderr)
        return 3
    except (PropertyFailure, SweepError, ValueError, RuntimeError) as exc:
        print(f"scrap: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
