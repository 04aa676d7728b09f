"""Model of annealer processor time.

Every minimization call costs its cycle count times the per-cycle duration;
a seeded (reverse) call additionally dwells ``holding time`` microseconds per
cycle. The model counts pure anneal time only: programming, readout, and
network latency are excluded.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError

__all__ = [
    "TimingParams",
    "t_rev",
    "t_factorization",
    "duration_breakdown",
    "US_PER_SECOND",
    "SECONDS_PER_HOUR",
]

US_PER_SECOND = 1e6
SECONDS_PER_HOUR = 3600.0

# Worst-case caps of the modeled hardware workflow.
MAX_CALLS = 50
MAX_HOLDING_US = 200.0


@dataclass(frozen=True)
class TimingParams:
    """Inputs of the worst-case time estimate.

    Defaults describe the reference workflow: up to 50 refinement calls of
    10000 cycles each, holding time capped at 200 us, 50 sweeps over a
    2-row matrix, 1 us per anneal cycle.
    """

    n_calls: int = MAX_CALLS
    t_h: float = MAX_HOLDING_US
    n_cycles: int = 10000
    n_iterations: int = 50
    n_rows: int = 2
    cycle_us: float = 1.0

    def __post_init__(self):
        for name in ("n_calls", "t_h", "n_cycles", "n_iterations", "n_rows", "cycle_us"):
            value = getattr(self, name)
            if value < 0:
                raise InputError(f"{name} must be non-negative, got {value}")
        if self.n_calls > MAX_CALLS:
            raise InputError(f"n_calls must be at most {MAX_CALLS}, got {self.n_calls}")
        if self.t_h > MAX_HOLDING_US:
            raise InputError(f"t_h must be at most {MAX_HOLDING_US}, got {self.t_h}")


def t_rev(n_calls: float, t_h: float, n_cycles: float, cycle_us: float = 1.0) -> float:
    """Microseconds spent by ``n_calls`` seeded refinement calls of
    ``n_cycles`` cycles each, dwelling ``t_h`` us per cycle.

    A plain unseeded call is the ``t_h = 0`` case: n_cycles * cycle_us.
    """
    for name, value in (("n_calls", n_calls), ("t_h", t_h), ("n_cycles", n_cycles), ("cycle_us", cycle_us)):
        if value < 0:
            raise InputError(f"{name} must be non-negative, got {value}")
    return n_calls * (t_h + cycle_us) * n_cycles


def t_factorization(n_iterations: float, n_rows: float, t_rev_us: float) -> float:
    """Microseconds for a full factorization: one refinement budget per row
    per sweep."""
    for name, value in (("n_iterations", n_iterations), ("n_rows", n_rows), ("t_rev_us", t_rev_us)):
        if value < 0:
            raise InputError(f"{name} must be non-negative, got {value}")
    return n_iterations * n_rows * t_rev_us


def duration_breakdown(us: float) -> tuple[float, float, float]:
    """The same duration in (microseconds, seconds, hours)."""
    seconds = us / US_PER_SECOND
    return us, seconds, seconds / SECONDS_PER_HOUR
