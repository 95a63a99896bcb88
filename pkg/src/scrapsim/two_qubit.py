"""Capacitively coupled pair of identical flux qubits driven by a bias
ramp on the second qubit.

The 4x4 generator couples only the middle block {|01>, |10>}; |00> has
no decay term and |11> decays at twice the single-level rate.  The
diagonal entries (divided by hbar) are

    d_00 = u(t) delta_00 + P(p00, p00),   d_01 = u(t) delta_11 + P(p00, p11),
    d_10 = u(t) delta_00 + P(p11, p00),   d_11 = u(t) delta_11 + P(p11, p11),

with u(t) = -(M Phi0 / 2 pi L) I2dc(t) / hbar and
P(a, b) = (2 pi / Phi0)^2 a b / (Cm hbar); the constant inter-qubit
coupling is w = (2 pi / Phi0)^2 p10^2 / (Cm hbar).

Because the anti-Hermitian part of the middle block is -i Gamma times the
identity, the dissipative block dynamics factorize exactly into
exp(-Gamma (t - t0)) times the lossless dynamics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import HamiltonianGenerator, StateVector, Trajectory, propagate
from .pulses import LinearPulse, PulseShape, ScrapSchedule, SumPulse, constant_pulse, scale_pulse
from .single_qubit import DeviceParams

__all__ = [
    "TwoQubitModel",
    "FourLevelGenerator",
    "BlockGenerator",
    "build_two_qubit_h",
    "reduce_subspace",
    "reduced_adiabatic_h",
    "run_iswap",
    "BASIS_LABELS_4",
    "BLOCK_LABELS",
]

BASIS_LABELS_4 = ("00", "01", "10", "11")
BLOCK_LABELS = ("01", "10")


@dataclass(frozen=True)
class TwoQubitModel:
    """Two identical junctions with a chirp current applied to qubit 2."""

    device: DeviceParams
    stark_pulse_q2: PulseShape  # I2dc(t), A
    gamma: float                # 1/s
    t_start: float              # s
    t_end: float                # s

    def __post_init__(self):
        if not self.t_start < self.t_end:
            raise ValueError(f"model requires t_start < t_end, got [{self.t_start}, {self.t_end}]")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")


def _coefficients(model: TwoQubitModel):
    """(u pulse in rad/s per delta unit, p-term matrix P[a][b] in rad/s, w in rad/s)."""
    dev = model.device
    u_scale = -(dev.mutual_inductance * dev.flux_quantum
                / (2.0 * math.pi * dev.loop_inductance * dev.hbar))
    u = scale_pulse(model.stark_pulse_q2, u_scale)
    p_scale = (2.0 * math.pi / dev.flux_quantum) ** 2 / (dev.coupling_capacitance * dev.hbar)
    p00, p11 = dev.p_00, dev.p_11
    p_terms = {
        "00": p_scale * p00 * p00,
        "01": p_scale * p00 * p11,
        "10": p_scale * p11 * p00,
        "11": p_scale * p11 * p11,
    }
    w = p_scale * dev.p_10 * dev.p_10
    return u, p_terms, w


def _diag_pulse(u: PulseShape, delta: float, const: float) -> PulseShape:
    scaled = scale_pulse(u, delta)
    if const == 0.0:
        return scaled
    return SumPulse((scaled, constant_pulse(const)))


class FourLevelGenerator(HamiltonianGenerator):
    """Generator of the driven two-qubit system in the product basis
    (|00>, |01>, |10>, |11>)."""

    dim = 4

    def __init__(self, model: TwoQubitModel):
        self.model = model
        self.gamma = model.gamma
        u, p_terms, w = _coefficients(model)
        dev = model.device
        self.diag_pulses = (
            _diag_pulse(u, dev.delta_00, p_terms["00"]),
            _diag_pulse(u, dev.delta_11, p_terms["01"]),
            _diag_pulse(u, dev.delta_00, p_terms["10"]),
            _diag_pulse(u, dev.delta_11, p_terms["11"]),
        )
        self.coupling = w  # Omega_01 = Omega_10, rad/s

    def matrices(self, times):
        times = np.asarray(times, dtype=float)
        h = np.zeros(times.shape + (4, 4), dtype=complex)
        decay = (0.0, self.gamma, self.gamma, 2.0 * self.gamma)
        for i, (pulse, g) in enumerate(zip(self.diag_pulses, decay)):
            h[..., i, i] = np.asarray(pulse.value(times), dtype=float) - 1j * g
        h[..., 1, 2] = self.coupling
        h[..., 2, 1] = self.coupling
        return h

    def matrix_limit(self, t, side):
        h = np.zeros((4, 4), dtype=complex)
        decay = (0.0, self.gamma, self.gamma, 2.0 * self.gamma)
        for i, (pulse, g) in enumerate(zip(self.diag_pulses, decay)):
            h[i, i] = pulse.limit(t, side) - 1j * g
        h[1, 2] = self.coupling
        h[2, 1] = self.coupling
        return h

    def breakpoints(self, t0, tf):
        pts: set[float] = set()
        for p in self.diag_pulses:
            pts.update(p.breakpoints())
        return tuple(b for b in sorted(pts) if t0 <= b <= tf)

    def with_gamma(self, gamma):
        return FourLevelGenerator(
            TwoQubitModel(self.model.device, self.model.stark_pulse_q2,
                          gamma, self.model.t_start, self.model.t_end)
        )


def build_two_qubit_h(model: TwoQubitModel) -> FourLevelGenerator:
    """4x4 generator with the decay pattern (0, Gamma, Gamma, 2 Gamma) on
    the diagonal and the constant coupling on the middle block."""
    return FourLevelGenerator(model)


# Half-width of the block passage window in units of the effective drive:
# |detuning difference| <= 4 * (2 w) marks the superposition region.
_PASSAGE_GAP_FACTOR = 4.0


def _block_schedule(d01: PulseShape, d10: PulseShape, coupling: float,
                    gamma: float, t_start: float, t_end: float) -> ScrapSchedule:
    """Effective two-level schedule of the middle block.

    Removing d01 times the identity (a pure gauge) leaves the standard
    form with Omega_eff = 2 w and Delta_eff = d10 - d01.
    """
    omega_eff = 2.0 * coupling
    if isinstance(d01, LinearPulse) and isinstance(d10, LinearPulse):
        detuning: PulseShape = LinearPulse(d10.slope - d01.slope, d10.offset - d01.offset)
    else:
        detuning = SumPulse((d10, scale_pulse(d01, -1.0)))
    span = t_end - t_start
    t_b, t_m = t_start + 0.25 * span, t_end - 0.25 * span
    if isinstance(detuning, LinearPulse) and detuning.slope != 0.0 and omega_eff != 0.0:
        crossing = -detuning.offset / detuning.slope
        half = abs(_PASSAGE_GAP_FACTOR * omega_eff / detuning.slope)
        lo, hi = crossing - half, crossing + half
        if t_start < lo < hi < t_end:
            t_b, t_m = lo, hi
    return ScrapSchedule(
        rabi=constant_pulse(omega_eff),
        detuning=detuning,
        gamma=gamma,
        t_start=t_start,
        t_end=t_end,
        passage_window=(t_b, t_m),
    )


class BlockGenerator(HamiltonianGenerator):
    """2x2 generator of the {|01>, |10>} block,
    [[d01 - i Gamma, w], [w, d10 - i Gamma]]."""

    dim = 2

    def __init__(self, d01: PulseShape, d10: PulseShape, coupling: float,
                 gamma: float, t_start: float, t_end: float):
        self.d01 = d01
        self.d10 = d10
        self.coupling = coupling
        self.gamma = gamma
        self._t_span = (t_start, t_end)
        self.analysis_schedule = _block_schedule(d01, d10, coupling, gamma, t_start, t_end)

    def entries(self, times):
        times = np.asarray(times, dtype=float)
        e00 = np.asarray(self.d01.value(times), dtype=float) - 1j * self.gamma
        e11 = np.asarray(self.d10.value(times), dtype=float) - 1j * self.gamma
        e01 = np.full_like(times, self.coupling, dtype=complex)
        return e00, e01, e11

    def entries_limit(self, t, side):
        return (self.d01.limit(t, side) - 1j * self.gamma,
                self.coupling + 0j,
                self.d10.limit(t, side) - 1j * self.gamma)

    def matrices(self, times):
        e00, e01, e11 = self.entries(times)
        h = np.zeros(np.shape(e00) + (2, 2), dtype=complex)
        h[..., 0, 0] = e00
        h[..., 0, 1] = e01
        h[..., 1, 0] = e01
        h[..., 1, 1] = e11
        return h

    def matrix_limit(self, t, side):
        e00, e01, e11 = self.entries_limit(t, side)
        return np.array([[e00, e01], [e01, e11]], dtype=complex)

    def breakpoints(self, t0, tf):
        pts = set(self.d01.breakpoints()) | set(self.d10.breakpoints())
        return tuple(b for b in sorted(pts) if t0 <= b <= tf)

    def with_gamma(self, gamma):
        t0, tf = self._t_span
        return BlockGenerator(self.d01, self.d10, self.coupling, gamma, t0, tf)


# All couplings outside the {|01>, |10>} block must vanish to this level
# for the reduced dynamics to be exactly equivalent.
_OFF_BLOCK_TOL = 1e-14


def reduce_subspace(h4: FourLevelGenerator) -> BlockGenerator:
    """2x2 generator of the {|01>, |10>} block of a two-qubit generator.

    Raises ValueError if any coupling out of the block exceeds 1e-14 at
    sampled times (the model structure guarantees they are exactly zero).
    """
    t0, tf = h4.model.t_start, h4.model.t_end
    samples = np.linspace(t0, tf, 7)
    mats = h4.matrices(samples)
    off_block = np.abs(mats).max(axis=0)
    off_block[1:3, 1:3] = 0.0
    for i in range(4):
        off_block[i, i] = 0.0
    worst = float(off_block.max())
    if worst > _OFF_BLOCK_TOL:
        raise ValueError(
            f"off-block coupling {worst} exceeds {_OFF_BLOCK_TOL}; "
            "the {|01>, |10>} reduction is invalid for this model"
        )
    return BlockGenerator(h4.diag_pulses[1], h4.diag_pulses[2], h4.coupling,
                          h4.gamma, t0, tf)


def reduced_adiabatic_h(delta01: float, delta10: float, omega01: float,
                        gamma: float) -> tuple[float, float, float]:
    """Adiabatic energies of the reduced block and its uniform decay rate,

        eps_pm = ((d10 - d01) +/- sqrt(4 w^2 + (d10 - d01)^2)) / 2,

    all in rad/s; the decay rate applies to both block levels equally.
    """
    diff = delta10 - delta01
    root = math.sqrt(4.0 * omega01 * omega01 + diff * diff)
    return 0.5 * (diff + root), 0.5 * (diff - root), gamma


def iswap_initial_state(initial: str, full: bool = False) -> StateVector:
    if initial not in BLOCK_LABELS:
        raise ValueError(f"initial state must be '01' or '10', got {initial!r}")
    if full:
        return StateVector.basis(4, BASIS_LABELS_4.index(initial))
    return StateVector.basis(2, BLOCK_LABELS.index(initial))


def run_iswap(model: TwoQubitModel, initial: str = "01", step: float | None = None,
              record_every: int = 20, full: bool = False) -> Trajectory:
    """Propagate the transfer between |01> and |10>.

    By default the reduced 2x2 block is propagated (exactly equivalent to
    the 4-level dynamics and about 4x cheaper); full=True propagates the
    entire product space instead.
    """
    h4 = build_two_qubit_h(model)
    if full:
        gen: HamiltonianGenerator = h4
    else:
        gen = reduce_subspace(h4)
    psi0 = iswap_initial_state(initial, full=full)
    return propagate(gen, psi0, model.t_start, model.t_end,
                     step=step, record_every=record_every)
