"""Fixed-step propagation of the non-Hermitian Schrodinger equation.

The propagator advances i dpsi/dt = H(t) psi (H in rad/s) with the
classical 4th-order Runge-Kutta scheme on a uniform step grid.  Steps
never straddle a pulse discontinuity: window edges are inserted as grid
points and the stage evaluations at a boundary use the one-sided limit
belonging to the step's own side.  Norm loss under decay is physical and
is never renormalized away.

For speed the per-step RK4 update is expressed as a transfer matrix
M_k (a polynomial in the stage matrices, independent of the state), so
whole blocks of steps are assembled with vectorized batched products and
reduced pairwise before being applied to the state.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .adiabatic import eta_from_arrays
from .pulses import ScrapSchedule

__all__ = [
    "StateVector",
    "Trajectory",
    "HamiltonianGenerator",
    "TwoLevelGenerator",
    "propagate",
    "hermitian_reference",
    "default_step",
]

DEFAULT_STEP_COUNT = 20000
DEFAULT_RECORD_EVERY = 20


def default_step(t0: float, tf: float) -> float:
    """Default integrator step, (tf - t0) / 20000."""
    return (tf - t0) / DEFAULT_STEP_COUNT


@dataclass(frozen=True)
class StateVector:
    """Unit-norm complex state of dimension 2 or 4."""

    amplitudes: tuple[complex, ...]

    def __post_init__(self):
        if len(self.amplitudes) not in (2, 4):
            raise ValueError(f"state dimension must be 2 or 4, got {len(self.amplitudes)}")
        norm = math.sqrt(sum(abs(a) ** 2 for a in self.amplitudes))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"initial state must be unit norm, got |psi| = {norm!r}")

    @classmethod
    def basis(cls, dim: int, index: int) -> "StateVector":
        amps = [0j] * dim
        amps[index] = 1.0 + 0j
        return cls(tuple(amps))

    @classmethod
    def ground(cls) -> "StateVector":
        return cls.basis(2, 0)

    @classmethod
    def excited(cls) -> "StateVector":
        return cls.basis(2, 1)

    @property
    def dim(self) -> int:
        return len(self.amplitudes)

    def populations(self) -> np.ndarray:
        return np.abs(np.asarray(self.amplitudes)) ** 2

    def norm(self) -> float:
        return float(np.linalg.norm(np.asarray(self.amplitudes)))


@dataclass(frozen=True)
class Trajectory:
    """Recorded samples of a propagation.

    theta and eta are only filled for two-level generators that carry an
    analysis schedule; they are None otherwise.
    """

    times: np.ndarray        # (n,) s
    amplitudes: np.ndarray   # (n, d) complex
    populations: np.ndarray  # (n, d) |C_i|^2
    norm: np.ndarray         # (n,) 2-norm of the state
    theta: np.ndarray | None = None  # (n,) rad
    eta: np.ndarray | None = None    # (n,) dimensionless

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[1]

    def population_at(self, index: int) -> np.ndarray:
        """Populations |C_i|^2 at one recorded sample (IndexError if out of range)."""
        n = len(self.times)
        if not -n <= index < n:
            raise IndexError(f"sample index {index} out of range for {n} samples")
        return self.populations[index]

    @property
    def final_populations(self) -> np.ndarray:
        return self.populations[-1]


class HamiltonianGenerator:
    """Time-dependent generator H(t)/hbar (rad/s) of dimension 2 or 4.

    Subclasses provide vectorized matrix sampling plus one-sided limits at
    pulse discontinuities, and know how to rebuild themselves with a
    different decay rate.
    """

    dim: int
    gamma: float
    analysis_schedule: ScrapSchedule | None = None

    def matrices(self, times: np.ndarray) -> np.ndarray:
        """Stacked (len(times), dim, dim) matrices H(t)/hbar."""
        raise NotImplementedError

    def matrix_limit(self, t: float, side: int) -> np.ndarray:
        """One-sided matrix limit at t (side < 0 from below, > 0 from above)."""
        raise NotImplementedError

    def breakpoints(self, t0: float, tf: float) -> tuple[float, ...]:
        """Pulse discontinuities within [t0, tf]."""
        raise NotImplementedError

    def with_gamma(self, gamma: float) -> "HamiltonianGenerator":
        raise NotImplementedError

    def sample(self, t: float) -> np.ndarray:
        """Matrix at a single time."""
        return self.matrices(np.asarray([t], dtype=float))[0]


class TwoLevelGenerator(HamiltonianGenerator):
    """Generator of the dissipative driven two-level system,

        H(t)/hbar = [[0, Omega/2], [Omega/2, Delta - i Gamma]],

    built from a ScrapSchedule (Omega = rabi, Delta = detuning, both rad/s).
    """

    dim = 2

    def __init__(self, schedule: ScrapSchedule):
        self.schedule = schedule
        self.gamma = schedule.gamma
        self.analysis_schedule = schedule

    def entries(self, times):
        """Symmetric 2x2 entries (H00, H01, H11) as arrays over times."""
        times = np.asarray(times, dtype=float)
        omega = np.asarray(self.schedule.rabi.value(times), dtype=float)
        delta = np.asarray(self.schedule.detuning.value(times), dtype=float)
        zeros = np.zeros_like(omega, dtype=complex)
        return zeros, 0.5 * omega + 0j, delta - 1j * self.gamma

    def entries_limit(self, t, side):
        omega = self.schedule.rabi.limit(t, side)
        delta = self.schedule.detuning.limit(t, side)
        return 0j, 0.5 * omega + 0j, delta - 1j * self.gamma

    def matrices(self, times):
        h00, h01, h11 = self.entries(times)
        h = np.zeros(np.shape(h01) + (2, 2), dtype=complex)
        h[..., 0, 0] = h00
        h[..., 0, 1] = h01
        h[..., 1, 0] = h01
        h[..., 1, 1] = h11
        return h

    def matrix_limit(self, t, side):
        h00, h01, h11 = self.entries_limit(t, side)
        return np.array([[h00, h01], [h01, h11]], dtype=complex)

    def breakpoints(self, t0, tf):
        return tuple(b for b in self.schedule.breakpoints() if t0 <= b <= tf)

    def with_gamma(self, gamma):
        return TwoLevelGenerator(dataclasses.replace(self.schedule, gamma=gamma))


def hermitian_reference(gen: HamiltonianGenerator) -> HamiltonianGenerator:
    """The same generator with the decay rate forced to zero."""
    return gen.with_gamma(0.0)


# --- step grid -----------------------------------------------------------

# Breakpoints closer than this fraction of a step to an existing grid point
# reuse that point instead of creating a micro-step.
_SNAP_TOL = 1e-6


def _build_grid(t0, tf, step, record_every, breakpoints):
    """Uniform step grid from t0 with the final point forced to tf, plus
    inserted breakpoints.

    Returns (times, record_indices, fixups) where fixups maps a grid index
    to the exact discontinuity time whose one-sided limits the stage
    evaluations at that point must use.  Recording counts uniform steps, so
    inserted points never shift the recorded times.
    """
    span = tf - t0
    n_uniform = int(math.floor(span / step * (1.0 + 1e-12)))
    times = t0 + step * np.arange(n_uniform + 1, dtype=float)
    if times[-1] >= tf - 1e-9 * step:
        times[-1] = tf
    else:
        times = np.append(times, tf)
    rec = np.zeros(len(times), dtype=bool)
    rec[np.arange(0, n_uniform + 1, record_every)] = True
    rec[-1] = True

    tol = step * _SNAP_TOL
    fixups: dict[int, float] = {}
    for b in sorted(set(breakpoints)):
        if b < t0 or b > tf:
            continue
        i = int(np.searchsorted(times, b))
        near = None
        if i < len(times) and abs(times[i] - b) <= tol:
            near = i
        elif i > 0 and abs(times[i - 1] - b) <= tol:
            near = i - 1
        if near is not None:
            fixups[near] = b
        else:
            times = np.insert(times, i, b)
            rec = np.insert(rec, i, False)
            fixups = {(k + 1 if k >= i else k): v for k, v in fixups.items()}
            fixups[i] = b
    return times, np.nonzero(rec)[0], fixups


# --- propagation ---------------------------------------------------------

# Steps assembled per vectorized chunk, scaled down for larger matrices.
# Sized so chunk temporaries stay below the glibc mmap threshold; larger
# chunks cost more in first-touch page faults than they save in call count.
_CHUNK_TARGET = 32000


def _reduce_blocks(mats: np.ndarray, block_bounds: list[tuple[int, int]]) -> np.ndarray:
    """Fold per-step transfer matrices into one matrix per block
    (pairwise tree with identity padding; blocks index into mats)."""
    dim = mats.shape[-1]
    nb = len(block_bounds)
    longest = max(b - a for a, b in block_bounds)
    width = 1 << max(0, (longest - 1).bit_length())
    tree = np.broadcast_to(np.eye(dim, dtype=complex), (nb, width, dim, dim)).copy()
    for bi, (a, b) in enumerate(block_bounds):
        tree[bi, : b - a] = mats[a:b]
    while tree.shape[1] > 1:
        tree = np.matmul(tree[:, 1::2], tree[:, 0::2])
    return tree[:, 0]


def _two_level_chunk(gen, starts, mids, ends, h, fix_start, fix_end):
    """Per-step 2x2 RK4 transfer-matrix entries for one chunk of steps.

    Works on the symmetric entry arrays (H00, H01, H11) instead of stacked
    matrices; returns (m00, m01, m10, m11).
    """
    e00_s, e01_s, e11_s = gen.entries(starts)
    e00_m, e01_m, e11_m = gen.entries(mids)
    e00_e, e01_e, e11_e = gen.entries(ends)
    for j, t in fix_start:
        e00_s[j], e01_s[j], e11_s[j] = gen.entries_limit(t, +1)
    for j, t in fix_end:
        e00_e[j], e01_e[j], e11_e[j] = gen.entries_limit(t, -1)
    for arr in (e00_s, e01_s, e11_s, e00_m, e01_m, e11_m, e00_e, e01_e, e11_e):
        if not np.isfinite(arr).all():
            raise ValueError(f"non-finite Hamiltonian entries in [{starts[0]}, {ends[-1]}]")

    def stage(a00, a01, a11, b00, b01, b10, b11):
        # (-i A) @ B for symmetric A
        r00 = a00 * b00 + a01 * b10
        r01 = a00 * b01 + a01 * b11
        r10 = a01 * b00 + a11 * b10
        r11 = a01 * b01 + a11 * b11
        return -1j * r00, -1j * r01, -1j * r10, -1j * r11

    k1_00, k1_01, k1_10, k1_11 = -1j * e00_s, -1j * e01_s, -1j * e01_s, -1j * e11_s
    c = 0.5 * h
    k2 = stage(e00_m, e01_m, e11_m, 1.0 + c * k1_00, c * k1_01, c * k1_10, 1.0 + c * k1_11)
    k3 = stage(e00_m, e01_m, e11_m, 1.0 + c * k2[0], c * k2[1], c * k2[2], 1.0 + c * k2[3])
    k4 = stage(e00_e, e01_e, e11_e, 1.0 + h * k3[0], h * k3[1], h * k3[2], 1.0 + h * k3[3])
    w = h / 6.0
    m00 = 1.0 + w * (k1_00 + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
    m01 = w * (k1_01 + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
    m10 = w * (k1_10 + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
    m11 = 1.0 + w * (k1_11 + 2.0 * k2[3] + 2.0 * k3[3] + k4[3])
    return m00, m01, m10, m11


def _reduce_blocks_two_level(m00, m01, m10, m11, block_bounds):
    """2x2 analogue of _reduce_blocks on component arrays."""
    nb = len(block_bounds)
    longest = max(b - a for a, b in block_bounds)
    width = 1 << max(0, (longest - 1).bit_length())
    t00 = np.ones((nb, width), dtype=complex)
    t01 = np.zeros((nb, width), dtype=complex)
    t10 = np.zeros((nb, width), dtype=complex)
    t11 = np.ones((nb, width), dtype=complex)
    for bi, (a, b) in enumerate(block_bounds):
        t00[bi, : b - a] = m00[a:b]
        t01[bi, : b - a] = m01[a:b]
        t10[bi, : b - a] = m10[a:b]
        t11[bi, : b - a] = m11[a:b]
    while t00.shape[1] > 1:
        y00, y01, y10, y11 = t00[:, 1::2], t01[:, 1::2], t10[:, 1::2], t11[:, 1::2]
        x00, x01, x10, x11 = t00[:, 0::2], t01[:, 0::2], t10[:, 0::2], t11[:, 0::2]
        t00 = y00 * x00 + y01 * x10
        t01 = y00 * x01 + y01 * x11
        t10 = y10 * x00 + y11 * x10
        t11 = y10 * x01 + y11 * x11
    return t00[:, 0], t01[:, 0], t10[:, 0], t11[:, 0]


def propagate(
    gen: HamiltonianGenerator,
    psi0: StateVector,
    t0: float,
    tf: float,
    step: float | None = None,
    record_every: int = DEFAULT_RECORD_EVERY,
) -> Trajectory:
    """Propagate i dpsi/dt = H(t) psi from t0 to tf and record samples.

    step defaults to (tf - t0)/20000; the final step is shortened so the
    last sample lands exactly on tf.  Every record_every-th uniform step
    is recorded (plus the final point).  Raises ValueError on bad windows,
    on step > tf - t0, on non-unit initial states, and on non-finite
    Hamiltonian entries.
    """
    if not t0 < tf:
        raise ValueError(f"propagation window requires t0 < tf, got [{t0}, {tf}]")
    if step is None:
        step = default_step(t0, tf)
    if not step > 0:
        raise ValueError(f"step must be positive, got {step}")
    if step > tf - t0:
        raise ValueError(f"step {step} exceeds the propagation window {tf - t0}")
    if record_every < 1:
        raise ValueError(f"record_every must be >= 1, got {record_every}")
    if psi0.dim != gen.dim:
        raise ValueError(f"state dimension {psi0.dim} does not match generator dimension {gen.dim}")

    times, rec_idx, fixups = _build_grid(t0, tf, step, record_every, gen.breakpoints(t0, tf))
    dim = gen.dim
    eye = np.eye(dim, dtype=complex)
    psi = np.asarray(psi0.amplitudes, dtype=complex)

    recorded = np.empty((len(rec_idx), dim), dtype=complex)
    recorded[0] = psi

    fast = dim == 2 and hasattr(gen, "entries")
    chunk_steps = max(1024, _CHUNK_TARGET // (dim * dim))
    out_pos = 1
    block = 0
    n_blocks = len(rec_idx) - 1
    while block < n_blocks:
        # group consecutive record blocks into one vectorized chunk
        first = block
        a = int(rec_idx[first])
        while block < n_blocks and int(rec_idx[block + 1]) - a <= chunk_steps:
            block += 1
        if block == first:
            block += 1  # single oversized block
        b = int(rec_idx[block])

        starts = times[a:b]
        ends = times[a + 1 : b + 1]
        h = ends - starts
        mids = starts + 0.5 * h
        fix_start = [(i - a, t) for i, t in fixups.items() if a <= i < b]
        fix_end = [(i - 1 - a, t) for i, t in fixups.items() if a < i <= b]
        bounds = [
            (int(rec_idx[j]) - a, int(rec_idx[j + 1]) - a) for j in range(first, block)
        ]

        if fast:
            m00, m01, m10, m11 = _two_level_chunk(gen, starts, mids, ends, h, fix_start, fix_end)
            b00, b01, b10, b11 = _reduce_blocks_two_level(m00, m01, m10, m11, bounds)
            c0, c1 = psi[0], psi[1]
            for j in range(len(bounds)):
                c0, c1 = b00[j] * c0 + b01[j] * c1, b10[j] * c0 + b11[j] * c1
                recorded[out_pos, 0] = c0
                recorded[out_pos, 1] = c1
                out_pos += 1
            psi = np.array([c0, c1], dtype=complex)
        else:
            h_s = gen.matrices(starts)
            h_m = gen.matrices(mids)
            h_e = gen.matrices(ends)
            for j, t in fix_start:
                h_s[j] = gen.matrix_limit(t, +1)
            for j, t in fix_end:
                h_e[j] = gen.matrix_limit(t, -1)
            if not (np.isfinite(h_s).all() and np.isfinite(h_m).all() and np.isfinite(h_e).all()):
                raise ValueError(f"non-finite Hamiltonian entries in [{starts[0]}, {ends[-1]}]")

            hh = h[:, None, None]
            k1 = -1j * h_s
            a_m = -1j * h_m
            k2 = np.matmul(a_m, eye + (0.5 * hh) * k1)
            k3 = np.matmul(a_m, eye + (0.5 * hh) * k2)
            k4 = np.matmul(-1j * h_e, eye + hh * k3)
            mats = eye + (hh / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

            transfer = _reduce_blocks(mats, bounds)
            for j in range(len(bounds)):
                psi = transfer[j] @ psi
                recorded[out_pos] = psi
                out_pos += 1

    rec_times = times[rec_idx]
    populations = np.abs(recorded) ** 2
    norm = np.sqrt(populations.sum(axis=1))

    theta = eta = None
    schedule = gen.analysis_schedule
    if dim == 2 and schedule is not None:
        omega = np.asarray(schedule.rabi.value(rec_times), dtype=float)
        delta = np.asarray(schedule.detuning.value(rec_times), dtype=float)
        theta = 0.5 * np.arctan2(np.abs(omega), delta)
        degenerate = np.nonzero((omega == 0.0) & (delta == 0.0))[0]
        for i in degenerate:  # hold the previous sample at the singular point
            theta[i] = theta[i - 1] if i > 0 else 0.0
        omega_dot = np.asarray(schedule.rabi.derivative(rec_times), dtype=float)
        delta_dot = np.asarray(schedule.detuning.derivative(rec_times), dtype=float)
        eta = eta_from_arrays(omega, omega_dot, delta, delta_dot)

    return Trajectory(
        times=rec_times,
        amplitudes=recorded,
        populations=populations,
        norm=norm,
        theta=theta,
        eta=eta,
    )
