"""Exact ground truth on tiny discretised problems.

Sources are restricted to the centres of a ``g`` by ``g`` grid and to at
most ``n_max`` per configuration, which makes the state space small enough
to enumerate. :class:`SnappedKernel` runs the usual birth/death/change
dynamics on that same finite space, so its empirical distribution can be
compared exactly with :func:`enumerate_gibbs`.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import TooLarge
from .model import DataSet, EnergyBreakdown, ModelParams, SourceConfig, energy
from .sampler import BirthDeathChange, ChainState, SamplerParams, Window

MAX_STATES = 100_000


@dataclass(frozen=True, eq=False)
class DiscreteInstance:
    window: Window
    g: int
    n_max: int
    data: DataSet
    params: ModelParams
    grid_points: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.g < 1 or self.n_max < 1:
            raise ValueError("g and n_max must be >= 1")
        w = self.window
        xs = w.x_min + (np.arange(self.g) + 0.5) * (w.x_max - w.x_min) / self.g
        ys = w.y_min + (np.arange(self.g) + 0.5) * (w.y_max - w.y_min) / self.g
        # index = i * g + j for column i, row j
        pts = np.array([(x, y) for x in xs for y in ys])
        pts.setflags(write=False)
        object.__setattr__(self, "grid_points", pts)

    @property
    def cell_width(self) -> float:
        return (self.window.x_max - self.window.x_min) / self.g

    def n_states(self) -> int:
        n = self.g * self.g
        return sum(math.comb(n, k) for k in range(1, min(self.n_max, n) + 1))

    def configurations(self):
        """All index tuples of size 1..n_max in lexicographic order per size."""
        if self.n_states() > MAX_STATES:
            raise TooLarge(f"{self.n_states()} configurations exceeds the cap of {MAX_STATES}")
        n = self.g * self.g
        for k in range(1, min(self.n_max, n) + 1):
            yield from itertools.combinations(range(n), k)

    def energy_of(self, key) -> EnergyBreakdown:
        return energy(self.grid_points[list(key)], self.data, self.params)


def random_instance(rng: np.random.Generator, g: int = 3, n_max: int = 3, m: int = 4,
                    theta=None) -> DiscreteInstance:
    """Instance on the window [0, g] x [0, g] (unit cells) with ``m`` uniform
    data points and, unless given, random parameters of order one."""
    window = Window(0.0, float(g), 0.0, float(g))
    data = DataSet(window.uniform(rng, m))
    if theta is None:
        theta = (rng.uniform(0, 2), rng.uniform(0, 1), -rng.uniform(0, 2),
                 rng.uniform(0, 2), rng.uniform(0, 1))
    return DiscreteInstance(window, g, n_max, data, ModelParams.from_theta(theta, r=1.0))


def _log_weights(inst: DiscreteInstance, T: float):
    if not T > 0:
        raise ValueError("temperature must be positive")
    keys = list(inst.configurations())
    logw = np.array([-inst.energy_of(k).u_total / T for k in keys])
    return keys, logw


def enumerate_gibbs(inst: DiscreteInstance, T: float = 1.0) -> dict[tuple, float]:
    """Exact tempered Gibbs probabilities keyed by sorted index tuples."""
    keys, logw = _log_weights(inst, T)
    logw -= logw.max()
    w = np.exp(logw)
    w /= w.sum()
    return dict(zip(keys, w.tolist()))


def brute_min(inst: DiscreteInstance) -> tuple[tuple, float]:
    """Global energy minimiser; ties go to the lexicographically smallest key."""
    best_key, best_u = None, math.inf
    for key in inst.configurations():
        u = inst.energy_of(key).u_total
        if u < best_u or (u == best_u and key < best_key):
            best_key, best_u = key, u
    return best_key, best_u


class SnappedKernel(BirthDeathChange):
    """Birth/death/change restricted to the grid points of an instance.

    Births draw a grid point uniformly and use the number of grid points in
    place of the window area. Changes shift a source by a lattice offset
    drawn uniformly from those no longer than ``r_c``; offsets that leave
    the grid or land on an occupied point are rejected, which keeps the
    proposal symmetric.
    """

    def __init__(self, inst: DiscreteInstance, sampler_params: SamplerParams):
        super().__init__(inst.data, inst.params, sampler_params, inst.window)
        self.inst = inst
        self.index = {tuple(p): i for i, p in enumerate(inst.grid_points.tolist())}
        w = inst.cell_width
        reach = int(math.floor(sampler_params.r_c / w))
        self.offsets = [(a, b) for a in range(-reach, reach + 1) for b in range(-reach, reach + 1)
                        if (a or b) and (a * a + b * b) * w * w <= sampler_params.r_c ** 2]
        self._cache: dict[tuple, EnergyBreakdown] = {}

    def key(self, config: SourceConfig) -> tuple:
        return tuple(sorted(self.index[p] for p in map(tuple, config.points.tolist())))

    def config_of(self, key) -> SourceConfig:
        return SourceConfig(self.inst.grid_points[list(key)])

    def energy(self, config: SourceConfig) -> EnergyBreakdown:
        k = self.key(config)
        e = self._cache.get(k)
        if e is None:
            e = self._cache[k] = self.inst.energy_of(k)
        return e

    @property
    def birth_measure(self) -> float:
        return float(len(self.inst.grid_points))

    def propose_birth(self, state: ChainState):
        n_grid = len(self.inst.grid_points)
        i = int(state.rng.random() * n_grid)
        if state.config.n >= self.inst.n_max or i in self.key(state.config):
            return None
        return self.inst.grid_points[i]

    def propose_change(self, state: ChainState, i: int):
        if not self.offsets:
            return None
        a, b = self.offsets[int(state.rng.random() * len(self.offsets))]
        g = self.inst.g
        col, row = divmod(self.index[tuple(state.config.points[i].tolist())], g)
        col, row = col + a, row + b
        if not (0 <= col < g and 0 <= row < g):
            return None
        j = col * g + row
        if j in self.key(state.config):
            return None
        return self.inst.grid_points[j]

    def random_init(self, rng: np.random.Generator) -> SourceConfig:
        """A single uniformly chosen grid point."""
        return self.config_of((int(rng.random() * len(self.inst.grid_points)),))
