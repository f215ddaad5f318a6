"""Simulated annealing over the birth/death/change kernel."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .density import DensityGrid
from .errors import InvalidSchedule
from .model import DataSet, EnergyBreakdown, SourceConfig
from .sampler import BirthDeathChange, Window

GEOMETRIC = "geometric"
LOGARITHMIC = "logarithmic"


@dataclass(frozen=True)
class Schedule:
    """Cooling schedule.

    ``geometric``: T(k) = T0 * c**k. ``logarithmic``: T(k) = T0 / ln(k + e),
    for which ``c`` is ignored.
    """

    T0: float = 1000.0
    c: float = 0.995
    k_max: int = 10_000
    kind: str = GEOMETRIC

    def __post_init__(self):
        if not (math.isfinite(self.T0) and self.T0 > 0):
            raise InvalidSchedule("T0 must be finite and > 0")
        if not (0.0 < self.c < 1.0):
            raise InvalidSchedule("cooling factor c must lie in (0, 1)")
        if int(self.k_max) != self.k_max or self.k_max < 1:
            raise InvalidSchedule("k_max must be an integer >= 1")
        if self.kind not in (GEOMETRIC, LOGARITHMIC):
            raise InvalidSchedule(f"unknown schedule kind {self.kind!r}")


def temperature(schedule: Schedule, k: int) -> float:
    if k < 0:
        raise ValueError("k must be >= 0")
    if schedule.kind == LOGARITHMIC:
        return schedule.T0 / math.log(k + math.e)
    # exp/log form keeps T > 0 representable further than repeated products
    return schedule.T0 * math.exp(k * math.log(schedule.c))


class TraceRow(NamedTuple):
    k: int
    T: float
    u_total: float
    n: int
    move: str
    accepted: bool


@dataclass
class AnnealResult:
    best_config: SourceConfig
    best_energy: EnergyBreakdown
    final_config: SourceConfig
    final_energy: EnergyBreakdown
    trace: list[TraceRow] = field(repr=False)
    density: DensityGrid | None = field(default=None, repr=False)


def default_init(data: DataSet, window: Window, seed) -> SourceConfig:
    """Three points drawn uniformly on the window."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return SourceConfig(window.uniform(rng, 3))


def anneal(init, kernel: BirthDeathChange, schedule: Schedule, seed,
           density: DensityGrid | None = None, burn_in_frac: float = 0.2) -> AnnealResult:
    """Run ``schedule.k_max`` kernel steps, cooling after each one.

    Step ``k`` (1-based) samples at ``temperature(schedule, k - 1)``. The
    returned best configuration is the lowest-energy state visited, ``init``
    included. When ``density`` is given, every state after the first
    ``burn_in_frac`` of the iterations is accumulated into it, whether the
    step was accepted or not.
    """
    if not isinstance(schedule, Schedule):
        raise InvalidSchedule("schedule must be a Schedule")
    if not (0.0 <= burn_in_frac < 1.0):
        raise ValueError("burn_in_frac must lie in [0, 1)")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    state = kernel.init_state(init, rng)
    best = state
    burn_in = int(math.floor(burn_in_frac * schedule.k_max))
    trace = []
    visited = []
    for k in range(1, schedule.k_max + 1):
        T = temperature(schedule, k - 1)
        state = kernel.step(state, T)
        e = state.energy
        trace.append(TraceRow(k, T, e.u_total, e.n, state.move, state.accepted))
        if e.u_total < best.energy.u_total:
            best = state
        if density is not None and k > burn_in:
            visited.append(state.config.points)
    if visited:
        density.accumulate(np.concatenate(visited))
    return AnnealResult(best.config, best.energy, state.config, state.energy, trace, density)
