import pathlib

import pytest

from scrapsim.defaults import (
    CANONICAL_RECORD_EVERY,
    SINGLE_QUBIT_STEP,
    SINGLE_QUBIT_T_REF,
    TWO_QUBIT_STEP,
    TWO_QUBIT_T_REF,
    canonical_single_qubit,
    canonical_two_qubit,
)
from scrapsim.single_qubit import build_single_qubit_schedule, run_single
from scrapsim.two_qubit import run_iswap

REPO_ROOT = pathlib.Path(__file__).resolve().parent.parent
CONFIG_DIR = REPO_ROOT / "configs"


def run_canonical_single(gamma_dimensionless=0.0, initial_state="ground", step=None):
    scenario = canonical_single_qubit(gamma=gamma_dimensionless / SINGLE_QUBIT_T_REF,
                                      initial_state=initial_state)
    return run_single(scenario, step=step if step is not None else SINGLE_QUBIT_STEP,
                      record_every=CANONICAL_RECORD_EVERY)


def run_canonical_two_qubit(gamma_dimensionless=0.0, initial="01", full=False, step=None):
    model = canonical_two_qubit(gamma=gamma_dimensionless / TWO_QUBIT_T_REF)
    return run_iswap(model, initial=initial, full=full,
                     step=step if step is not None else TWO_QUBIT_STEP,
                     record_every=CANONICAL_RECORD_EVERY)


@pytest.fixture(scope="session")
def canonical_schedule():
    return build_single_qubit_schedule(canonical_single_qubit())


@pytest.fixture(scope="session")
def canonical_run():
    return run_canonical_single()


@pytest.fixture(scope="session")
def canonical_run_gamma1():
    return run_canonical_single(1.0)


@pytest.fixture(scope="session")
def canonical_run_excited():
    return run_canonical_single(0.0, initial_state="excited")


@pytest.fixture(scope="session")
def canonical_run_excited_gamma1():
    return run_canonical_single(1.0, initial_state="excited")


@pytest.fixture(scope="session")
def two_qubit_run():
    return run_canonical_two_qubit()


@pytest.fixture(scope="session")
def config_dir():
    return CONFIG_DIR
