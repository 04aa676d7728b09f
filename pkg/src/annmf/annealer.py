"""Simulated-annealing minimization of QUBO problems.

Four entry points:

- forward_anneal: independent Metropolis restarts from uniform-random states
  under geometric cooling, one recorded solution per cycle (a "read").
- reverse_anneal: every cycle starts from a caller-supplied state, heats to a
  peak temperature controlled by the holding-time parameter, dwells there,
  then cools back down. Short holding times search near the start; long ones
  approach an unseeded search.
- adaptive_refine / reverse_refine: the two refinement loops built on seeded
  calls. adaptive_refine doubles the holding time after every failed call and
  resets it after every success; reverse_refine keeps it fixed.
- brute_force_minimum: exact enumeration oracle for small problems.

All reported energies include the problem offset, so they are true objective
values, directly comparable across calls.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np
from numba import njit

from .errors import ShapeError, SizeError
from .qubo import QuboProblem
from .timing import t_rev

__all__ = [
    "AnnealConfig",
    "ReverseConfig",
    "Sample",
    "AttemptRecord",
    "AnnealOutcome",
    "derive_seed",
    "brute_force_minimum",
    "forward_anneal",
    "reverse_anneal",
    "adaptive_refine",
    "reverse_refine",
    "mean_hamming",
    "TEMPERATURE_RATIO",
    "IMPROVEMENT_TOL",
    "BRUTE_FORCE_MAX_VARS",
]

# Default t_final/t_initial ratio when neither temperature is given explicitly.
# The final temperature must sit well below the smallest energy gaps of a
# fine-grained fixed-point encoding (1e-7 scale at the default 0.001 step),
# otherwise the cold phase cannot discriminate between near-degenerate states.
TEMPERATURE_RATIO = 3e-7
# Strict-improvement margin; avoids floating-point ping-pong between moves.
IMPROVEMENT_TOL = 1e-12
# Metropolis exp() is skipped when delta/t exceeds this (acceptance < 4e-18).
_EXP_ARG_CUTOFF = 40.0
# Enumeration cap: 2^24 states.
BRUTE_FORCE_MAX_VARS = 24
# Fraction of reverse sweeps spent heating and dwelling (the rest cools).
_HEAT_FRACTION = 0.25
_HOLD_FRACTION = 0.25


@dataclass(frozen=True)
class AnnealConfig:
    """Knobs of one annealing call.

    cycles is the number of independent reads; sweeps_per_cycle the Metropolis
    sweeps inside each read. Temperatures left at None are resolved per
    problem: t_initial from the coefficient magnitudes (max over variables of
    |linear| plus total |coupling|, so initial acceptance is near 1) and
    t_final as TEMPERATURE_RATIO times t_initial.
    """

    cycles: int = 10000
    sweeps_per_cycle: int = 100
    t_initial: float | None = None
    t_final: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.cycles < 1:
            raise ValueError(f"cycles must be at least 1, got {self.cycles}")
        if self.sweeps_per_cycle < 1:
            raise ValueError(
                f"sweeps_per_cycle must be at least 1, got {self.sweeps_per_cycle}"
            )
        if self.t_final is not None and self.t_final <= 0:
            raise ValueError(f"t_final must be positive, got {self.t_final}")
        if self.t_initial is not None and self.t_final is not None:
            if not self.t_initial > self.t_final:
                raise ValueError(
                    f"need t_initial > t_final > 0, got {self.t_initial} <= {self.t_final}"
                )

    def resolve_temperatures(self, qubo: QuboProblem) -> tuple[float, float]:
        """Concrete (t_initial, t_final) for this problem."""
        t_init = self.t_initial
        if t_init is None:
            b = qubo.coupling_matrix
            scale = float(np.max(np.abs(qubo.linear) + np.sum(np.abs(b), axis=1)))
            t_init = scale if scale > 0 else 1.0
        t_fin = self.t_final
        if t_fin is None:
            t_fin = TEMPERATURE_RATIO * t_init
        if not t_init > t_fin > 0:
            raise ValueError(f"need t_initial > t_final > 0, got ({t_init}, {t_fin})")
        return float(t_init), float(t_fin)


@dataclass(frozen=True)
class ReverseConfig:
    """Knobs of seeded refinement.

    holding_time is the starting dwell in microseconds; holding_max caps the
    escalation; max_attempts bounds the number of seeded calls per refinement
    loop.
    """

    holding_time: float = 1.0
    max_attempts: int = 50
    holding_max: float = 200.0
    base: AnnealConfig = field(default_factory=AnnealConfig)

    def __post_init__(self):
        if not 0 < self.holding_time <= self.holding_max:
            raise ValueError(
                f"holding_time must be in (0, {self.holding_max}], got {self.holding_time}"
            )
        if self.max_attempts < 1:
            raise ValueError(f"max_attempts must be at least 1, got {self.max_attempts}")


class Sample(NamedTuple):
    q: np.ndarray
    energy: float


@dataclass(frozen=True)
class AttemptRecord:
    """Diagnostics of one seeded call inside a refinement loop."""

    attempt: int
    holding_time: float
    best_energy: float
    improved: bool
    mean_hamming: float
    modeled_qpu_us: float


@dataclass(frozen=True)
class AnnealOutcome:
    """Result of one annealing or refinement call.

    best_energy includes the problem offset and equals the minimum over
    samples. For seeded calls the start state is the first sample, so the
    result can never be worse than where it started. mean_hamming averages
    the Hamming distance between consecutive recorded solutions (0.0 when
    fewer than two cycle solutions exist). attempts_used counts seeded calls
    (0 for a plain forward call).
    """

    best_q: np.ndarray
    best_energy: float
    samples: tuple[Sample, ...]
    mean_hamming: float
    attempts_used: int
    modeled_qpu_us: float
    attempt_log: tuple[AttemptRecord, ...] = ()


def derive_seed(base: int, key: int) -> int:
    """Independent child seed for trial or attempt ``key`` of stream ``base``."""
    return int(np.random.SeedSequence(base, spawn_key=(key,)).generate_state(1)[0])


def _cycle_seeds(seed: int, cycles: int) -> np.ndarray:
    return np.random.SeedSequence(seed).generate_state(cycles, dtype=np.uint32)


@njit(cache=True)
def _metropolis_cycles(linear, coupling, temps, seeds, q_start, random_start):
    """Run one Metropolis read per seed and return the final states/energies.

    Each read reseeds the generator, so results are independent of execution
    order. Local fields f[i] = linear[i] + sum_j coupling[i, j] q[j] are
    updated incrementally; the returned energy is recomputed exactly from the
    final state.
    """
    n_cycles = seeds.shape[0]
    n = linear.shape[0]
    n_sweeps = temps.shape[0]
    states = np.empty((n_cycles, n), dtype=np.int8)
    energies = np.empty(n_cycles, dtype=np.float64)
    for c in range(n_cycles):
        np.random.seed(seeds[c])
        q = np.empty(n, dtype=np.int8)
        if random_start:
            for i in range(n):
                q[i] = 1 if np.random.random() < 0.5 else 0
        else:
            for i in range(n):
                q[i] = q_start[i]
        f = linear.copy()
        for i in range(n):
            if q[i] == 1:
                for j in range(n):
                    f[j] += coupling[j, i]
        for s in range(n_sweeps):
            t = temps[s]
            for i in range(n):
                delta = (1.0 - 2.0 * q[i]) * f[i]
                accept = delta <= 0.0
                if not accept:
                    x = delta / t
                    if x < _EXP_ARG_CUTOFF and np.random.random() < np.exp(-x):
                        accept = True
                if accept:
                    sign = 1.0 - 2.0 * q[i]
                    q[i] = 1 - q[i]
                    for j in range(n):
                        f[j] += sign * coupling[j, i]
        states[c] = q
        e = 0.0
        for i in range(n):
            if q[i] == 1:
                e += linear[i]
                for j in range(i + 1, n):
                    if q[j] == 1:
                        e += coupling[i, j]
        energies[c] = e
    return states, energies


@njit(cache=True)
def _enumerate_minimum(linear, coupling):
    """Exact minimum by Gray-code enumeration.

    Candidate improvements are re-evaluated from scratch so incremental
    floating-point drift cannot corrupt the result; ties go to the state with
    the lowest LSB-first integer value.
    """
    n = linear.shape[0]
    q = np.zeros(n, dtype=np.int8)
    f = linear.copy()
    e = 0.0
    best_e = 0.0
    best_int = 0
    best_q = q.copy()
    cur_int = 0
    total = 1 << n
    for g in range(1, total):
        b = 0
        gg = g
        while gg & 1 == 0:
            b += 1
            gg >>= 1
        delta = (1.0 - 2.0 * q[b]) * f[b]
        sign = 1.0 - 2.0 * q[b]
        if q[b] == 0:
            q[b] = 1
            cur_int += 1 << b
        else:
            q[b] = 0
            cur_int -= 1 << b
        e += delta
        for j in range(n):
            f[j] += sign * coupling[j, b]
        if e <= best_e + 1e-9:
            exact = 0.0
            for i in range(n):
                if q[i] == 1:
                    exact += linear[i]
                    for j in range(i + 1, n):
                        if q[j] == 1:
                            exact += coupling[i, j]
            e = exact
            if exact < best_e or (exact == best_e and cur_int < best_int):
                best_e = exact
                best_int = cur_int
                best_q = q.copy()
    return best_q, best_e


def brute_force_minimum(qubo: QuboProblem) -> tuple[np.ndarray, float]:
    """Exact global minimizer and its objective value (offset included)."""
    if qubo.n_vars > BRUTE_FORCE_MAX_VARS:
        raise SizeError(
            f"exhaustive search is capped at {BRUTE_FORCE_MAX_VARS} variables, "
            f"got {qubo.n_vars}"
        )
    best_q, best_e = _enumerate_minimum(qubo.linear, qubo.coupling_matrix)
    return best_q, float(best_e) + qubo.offset


def _forward_temps(t_init: float, t_fin: float, sweeps: int) -> np.ndarray:
    i = np.arange(sweeps, dtype=np.float64)
    return t_init * (t_fin / t_init) ** (i / sweeps)


def _reverse_temps(t_init: float, t_fin: float, sweeps: int, holding_time: float, holding_max: float) -> np.ndarray:
    """Heat / hold / cool temperature profile of one seeded read.

    The dwell temperature rises with holding time, reaching t_initial at the
    cap, so longer dwells search wider neighborhoods of the start state.
    """
    t_peak = t_fin * (t_init / t_fin) ** min(1.0, holding_time / holding_max)
    n_heat = max(1, round(sweeps * _HEAT_FRACTION))
    n_hold = max(1, round(sweeps * _HOLD_FRACTION))
    n_cool = sweeps - n_heat - n_hold
    heat = t_fin * (t_peak / t_fin) ** (np.arange(1, n_heat + 1) / n_heat)
    hold = np.full(n_hold, t_peak)
    cool = t_peak * (t_fin / t_peak) ** (np.arange(1, n_cool + 1) / n_cool)
    return np.concatenate([heat, hold, cool])


def _validate_state(qubo: QuboProblem, q0: np.ndarray) -> np.ndarray:
    q0 = np.asarray(q0)
    if q0.shape != (qubo.n_vars,):
        raise ShapeError(f"start state has shape {q0.shape}, expected ({qubo.n_vars},)")
    q0 = q0.astype(np.int8)
    if not np.all((q0 == 0) | (q0 == 1)):
        raise ValueError("start state must be a 0/1 vector")
    return q0


def _state_energy(qubo: QuboProblem, q: np.ndarray) -> float:
    qf = q.astype(np.float64)
    return float(qubo.linear @ qf + 0.5 * qf @ (qubo.coupling_matrix @ qf)) + qubo.offset


def _consecutive_hamming(states: np.ndarray) -> float:
    if states.shape[0] < 2:
        return 0.0
    return float(np.mean(np.sum(states[1:] != states[:-1], axis=1)))


def forward_anneal(qubo: QuboProblem, cfg: AnnealConfig) -> AnnealOutcome:
    """Independent random-restart reads; the recorded solution of each cycle
    is its final state."""
    t_init, t_fin = cfg.resolve_temperatures(qubo)
    temps = _forward_temps(t_init, t_fin, cfg.sweeps_per_cycle)
    seeds = _cycle_seeds(cfg.seed, cfg.cycles)
    dummy = np.zeros(qubo.n_vars, dtype=np.int8)
    states, energies = _metropolis_cycles(
        qubo.linear, qubo.coupling_matrix, temps, seeds, dummy, True
    )
    energies = energies + qubo.offset
    best = int(np.argmin(energies))
    samples = tuple(Sample(states[c].copy(), float(energies[c])) for c in range(cfg.cycles))
    return AnnealOutcome(
        best_q=states[best].copy(),
        best_energy=float(energies[best]),
        samples=samples,
        mean_hamming=_consecutive_hamming(states),
        attempts_used=0,
        modeled_qpu_us=t_rev(1, 0.0, cfg.cycles),
    )


def reverse_anneal(qubo: QuboProblem, q0: np.ndarray, cfg: ReverseConfig) -> AnnealOutcome:
    """Seeded reads around q0. The start state is the first sample, so
    best_q stays q0 unless some cycle finds strictly lower energy."""
    q0 = _validate_state(qubo, q0)
    base = cfg.base
    if base.sweeps_per_cycle < 4:
        raise ValueError(
            f"seeded reads need at least 4 sweeps per cycle, got {base.sweeps_per_cycle}"
        )
    t_init, t_fin = base.resolve_temperatures(qubo)
    temps = _reverse_temps(
        t_init, t_fin, base.sweeps_per_cycle, cfg.holding_time, cfg.holding_max
    )
    seeds = _cycle_seeds(base.seed, base.cycles)
    states, energies = _metropolis_cycles(
        qubo.linear, qubo.coupling_matrix, temps, seeds, q0, False
    )
    energies = energies + qubo.offset
    e0 = _state_energy(qubo, q0)
    all_states = np.concatenate([q0[None, :], states])
    all_energies = np.concatenate([[e0], energies])
    best = int(np.argmin(all_energies))
    samples = tuple(
        Sample(all_states[c].copy(), float(all_energies[c]))
        for c in range(all_states.shape[0])
    )
    return AnnealOutcome(
        best_q=all_states[best].copy(),
        best_energy=float(all_energies[best]),
        samples=samples,
        mean_hamming=_consecutive_hamming(states),
        attempts_used=1,
        modeled_qpu_us=t_rev(1, cfg.holding_time, base.cycles),
    )


def _refinement_loop(
    qubo: QuboProblem,
    q0: np.ndarray,
    cfg: ReverseConfig,
    target_energy: float | None,
    escalate: bool,
    on_call=None,
) -> AnnealOutcome:
    q0 = _validate_state(qubo, q0)
    current_q = q0
    current_e = _state_energy(qubo, q0)
    holding = cfg.holding_time
    trajectory = [Sample(q0.copy(), current_e)]
    log: list[AttemptRecord] = []
    total_qpu = 0.0
    attempts = 0
    for attempt in range(1, cfg.max_attempts + 1):
        call_cfg = replace(
            cfg,
            holding_time=holding,
            base=replace(cfg.base, seed=derive_seed(cfg.base.seed, attempt)),
        )
        out = reverse_anneal(qubo, current_q, call_cfg)
        if on_call is not None:
            on_call(attempt, out)
        attempts = attempt
        total_qpu += out.modeled_qpu_us
        improved = out.best_energy < current_e - IMPROVEMENT_TOL
        log.append(
            AttemptRecord(
                attempt=attempt,
                holding_time=holding,
                best_energy=out.best_energy,
                improved=improved,
                mean_hamming=out.mean_hamming,
                modeled_qpu_us=out.modeled_qpu_us,
            )
        )
        if improved:
            current_q = out.best_q
            current_e = out.best_energy
            holding = cfg.holding_time
        elif escalate:
            holding = min(2.0 * holding, cfg.holding_max)
        trajectory.append(Sample(current_q.copy(), current_e))
        if target_energy is not None and current_e <= target_energy + IMPROVEMENT_TOL:
            break
    states = np.stack([s.q for s in trajectory])
    return AnnealOutcome(
        best_q=current_q.copy(),
        best_energy=current_e,
        samples=tuple(trajectory),
        mean_hamming=_consecutive_hamming(states),
        attempts_used=attempts,
        modeled_qpu_us=total_qpu,
        attempt_log=tuple(log),
    )


def adaptive_refine(
    qubo: QuboProblem,
    q0: np.ndarray,
    cfg: ReverseConfig,
    target_energy: float | None = None,
    on_call=None,
) -> AnnealOutcome:
    """Seeded refinement with holding-time escalation.

    Each call searches around the current point. A strict improvement moves
    the point and resets the holding time to its start value; a failed call
    doubles it (capped at holding_max), widening the next search. Stops when
    target_energy is reached or max_attempts calls were made. Samples record
    the current point after each call. on_call, when given, receives
    (attempt index, raw call outcome) after every underlying anneal, which
    is how callers can inspect every read instead of just adopted points.
    """
    return _refinement_loop(qubo, q0, cfg, target_energy, escalate=True, on_call=on_call)


def reverse_refine(
    qubo: QuboProblem,
    q0: np.ndarray,
    cfg: ReverseConfig,
    target_energy: float | None = None,
    on_call=None,
) -> AnnealOutcome:
    """Plain seeded refinement: same loop as adaptive_refine but the holding
    time never changes, so the search breadth stays fixed."""
    return _refinement_loop(qubo, q0, cfg, target_energy, escalate=False, on_call=on_call)


def mean_hamming(solutions) -> float:
    """Mean Hamming distance between consecutive bit-vectors."""
    states = [np.asarray(s) for s in solutions]
    if len(states) < 2:
        raise statistics.StatisticsError(
            f"mean Hamming distance needs at least 2 solutions, got {len(states)}"
        )
    length = states[0].shape[0]
    for s in states:
        if s.shape != (length,):
            raise ShapeError("all solutions must have the same length")
    stacked = np.stack(states)
    return float(np.mean(np.sum(stacked[1:] != stacked[:-1], axis=1)))
