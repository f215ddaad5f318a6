"""Birth/death/change Metropolis-Hastings kernel over source configurations.

At temperature ``T`` the chain targets ``p(x) ** (1 / T)``. Only the density
ratio is tempered; proposal correction factors enter untempered, so at
``T = 1`` the acceptance probabilities are the plain birth/death/change
Metropolis-Hastings ratios.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geometry as geo
from .errors import InvalidParams, OutOfWindow
from .model import DataSet, EnergyBreakdown, ModelParams, SourceConfig, energy

BIRTH, DEATH, CHANGE, HOLD = "birth", "death", "change", "hold"


@dataclass(frozen=True)
class Window:
    """Axis-aligned rectangle in which sources may live."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        vals = (self.x_min, self.x_max, self.y_min, self.y_max)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidParams("window bounds must be finite")
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise InvalidParams("window needs x_min < x_max and y_min < y_max")

    @property
    def mu(self) -> float:
        return (self.x_max - self.x_min) * (self.y_max - self.y_min)

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        return (self.x_min, self.x_max, self.y_min, self.y_max)

    @classmethod
    def from_data(cls, points, margin: float = 0.5) -> Window:
        """Bounding box of ``points`` grown by ``margin`` times each axis range
        on each side. A zero-range axis falls back to a unit-wide interval."""
        if margin < 0:
            raise InvalidParams("window margin must be >= 0")
        pts = geo.as_points(points)
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        span = hi - lo
        lo, hi = lo - margin * span, hi + margin * span
        flat = hi <= lo
        lo = np.where(flat, lo - 0.5, lo)
        hi = np.where(flat, hi + 0.5, hi)
        return cls(float(lo[0]), float(hi[0]), float(lo[1]), float(hi[1]))

    def contains(self, points) -> np.ndarray:
        p = geo.as_points(points)
        return ((p[:, 0] >= self.x_min) & (p[:, 0] <= self.x_max)
                & (p[:, 1] >= self.y_min) & (p[:, 1] <= self.y_max))

    def uniform(self, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
        u = rng.random((1 if size is None else size, 2))
        pts = np.column_stack([
            self.x_min + u[:, 0] * (self.x_max - self.x_min),
            self.y_min + u[:, 1] * (self.y_max - self.y_min),
        ])
        return pts[0] if size is None else pts


@dataclass(frozen=True)
class SamplerParams:
    p_b: float = 0.35
    p_d: float = 0.35
    p_c: float = 0.3
    r_c: float = 0.3

    def __post_init__(self):
        probs = (self.p_b, self.p_d, self.p_c)
        if any(not (0.0 <= p <= 1.0) for p in probs):
            raise InvalidParams("move probabilities must lie in [0, 1]")
        if sum(probs) > 1.0 + 1e-12:
            raise InvalidParams("p_b + p_d + p_c must not exceed 1")
        if not (math.isfinite(self.r_c) and self.r_c > 0):
            raise InvalidParams("r_c must be finite and > 0")


@dataclass(frozen=True, eq=False)
class ChainState:
    """Current configuration with its cached energy.

    ``rng`` is shared between a state and its successors; stepping advances it.
    ``move``/``accepted`` describe the transition that produced this state.
    """

    config: SourceConfig
    energy: EnergyBreakdown
    rng: np.random.Generator
    move: str = "init"
    accepted: bool = False


def _accept(rng: np.random.Generator, log_beta: float) -> bool:
    u = rng.random()
    return log_beta >= 0.0 or u < math.exp(log_beta)


class BirthDeathChange:
    """Transition kernel bound to one data set and parameter set.

    Subclasses change the proposal space by overriding the ``propose_*``
    hooks and :attr:`birth_measure`.
    """

    def __init__(self, data: DataSet, params: ModelParams, sampler_params: SamplerParams,
                 window: Window):
        self.data = data
        self.params = params
        self.sp = sampler_params
        self.window = window

    # -- energy and proposal hooks -------------------------------------
    def energy(self, config: SourceConfig) -> EnergyBreakdown:
        return energy(config, self.data, self.params)

    @property
    def birth_measure(self) -> float:
        return self.window.mu

    def propose_birth(self, state: ChainState):
        """Point to add, or None for an impossible proposal."""
        return self.window.uniform(state.rng)

    def propose_change(self, state: ChainState, i: int):
        """Replacement for source ``i``, or None when it falls outside the space."""
        rng, r_c = state.rng, self.sp.r_c
        while True:
            d = (rng.random(2) * 2.0 - 1.0) * r_c
            if d[0] * d[0] + d[1] * d[1] <= r_c * r_c:
                break
        xi = state.config.points[i] + d
        if not self.window.contains(xi)[0]:
            return None
        return xi

    # -- acceptance probabilities (log scale) --------------------------
    def log_birth_acceptance(self, n: int, delta_u: float, T: float) -> float:
        """Birth from a configuration with ``n`` sources raising energy by ``delta_u``."""
        if self.sp.p_d == 0:
            return -math.inf
        if self.sp.p_b == 0:
            return 0.0
        return min(0.0, math.log(self.sp.p_d / self.sp.p_b) - delta_u / T
                   + math.log(self.birth_measure / (n + 1)))

    def log_death_acceptance(self, n: int, delta_u: float, T: float) -> float:
        """Death from a configuration with ``n`` sources raising energy by ``delta_u``."""
        if self.sp.p_b == 0:
            return -math.inf
        if self.sp.p_d == 0:
            return 0.0
        return min(0.0, math.log(self.sp.p_b / self.sp.p_d) - delta_u / T
                   + math.log(n / self.birth_measure))

    @staticmethod
    def log_change_acceptance(delta_u: float, T: float) -> float:
        return min(0.0, -delta_u / T)

    def birth_acceptance(self, n, delta_u, T) -> float:
        return math.exp(self.log_birth_acceptance(n, delta_u, T))

    def death_acceptance(self, n, delta_u, T) -> float:
        return math.exp(self.log_death_acceptance(n, delta_u, T))

    # -- moves ---------------------------------------------------------
    def init_state(self, config, rng: np.random.Generator) -> ChainState:
        if not isinstance(config, SourceConfig):
            config = SourceConfig(config)
        if not np.all(self.window.contains(config.points)):
            raise OutOfWindow("initial configuration leaves the window")
        return ChainState(config, self.energy(config), rng)

    @staticmethod
    def _rejected(state: ChainState, kind: str) -> ChainState:
        return ChainState(state.config, state.energy, state.rng, kind, False)

    def move_birth(self, state: ChainState, T: float) -> tuple[ChainState, bool]:
        eta = self.propose_birth(state)
        if eta is None:
            return self._rejected(state, BIRTH), False
        new = state.config.with_point(eta)
        e_new = self.energy(new)
        log_beta = self.log_birth_acceptance(state.config.n, e_new.u_total - state.energy.u_total, T)
        if _accept(state.rng, log_beta):
            return ChainState(new, e_new, state.rng, BIRTH, True), True
        return self._rejected(state, BIRTH), False

    def move_death(self, state: ChainState, T: float) -> tuple[ChainState, bool]:
        n = state.config.n
        i = int(state.rng.random() * n)
        if n <= 1:
            # the empty configuration has no defined energy
            return self._rejected(state, DEATH), False
        new = state.config.without(i)
        e_new = self.energy(new)
        log_beta = self.log_death_acceptance(n, e_new.u_total - state.energy.u_total, T)
        if _accept(state.rng, log_beta):
            return ChainState(new, e_new, state.rng, DEATH, True), True
        return self._rejected(state, DEATH), False

    def move_change(self, state: ChainState, T: float) -> tuple[ChainState, bool]:
        i = int(state.rng.random() * state.config.n)
        xi = self.propose_change(state, i)
        if xi is None:
            return self._rejected(state, CHANGE), False
        new = state.config.replaced(i, xi)
        e_new = self.energy(new)
        log_beta = self.log_change_acceptance(e_new.u_total - state.energy.u_total, T)
        if _accept(state.rng, log_beta):
            return ChainState(new, e_new, state.rng, CHANGE, True), True
        return self._rejected(state, CHANGE), False

    def step(self, state: ChainState, T: float) -> ChainState:
        if not T > 0:
            raise ValueError("temperature must be positive")
        u = state.rng.random()
        sp = self.sp
        if u < sp.p_b:
            return self.move_birth(state, T)[0]
        if u < sp.p_b + sp.p_d:
            return self.move_death(state, T)[0]
        if u < sp.p_b + sp.p_d + sp.p_c:
            return self.move_change(state, T)[0]
        return self._rejected(state, HOLD)
