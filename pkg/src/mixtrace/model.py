"""Gibbs energy of a source configuration given observed mixtures.

The energy splits into a data term and an interaction term::

    U_data  = theta1 * g + theta2 * sum_alpha + theta3 * n_e
    U_inter = theta4 * n + theta5 * n_r

where ``g`` is the absolute hull-area mismatch between sources and data,
``sum_alpha`` the summed squared distance from each datum to its nearest
source, ``n_e`` the number of data points enclosed by the source hull,
``n`` the number of sources and ``n_r`` the number of source pairs closer
than ``r``. Only energy differences are ever used, so the normalising
constant of the density is never needed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import geometry as geo
from .errors import EmptyConfiguration, InvalidParams


@dataclass(frozen=True, eq=False)
class DataSet:
    """Observed mixture points with their hull cached at construction."""

    points: np.ndarray
    hull: geo.Hull = field(init=False, repr=False)
    hull_area: float = field(init=False)

    def __post_init__(self):
        pts = geo.as_points(self.points).copy()
        if len(pts) == 0:
            raise geo.EmptyPointSet("a data set needs at least one point")
        if not np.all(np.isfinite(pts)):
            raise ValueError("data points must be finite")
        pts.setflags(write=False)
        hull = geo.convex_hull(pts)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "hull", hull)
        object.__setattr__(self, "hull_area", geo.hull_area(hull))

    @property
    def m(self) -> int:
        return len(self.points)


@dataclass(frozen=True, eq=False)
class SourceConfig:
    """An unordered, variable-size set of candidate source positions."""

    points: np.ndarray

    def __post_init__(self):
        pts = geo.as_points(self.points).copy()
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return len(self.points)

    def __len__(self):
        return len(self.points)

    def with_point(self, p) -> SourceConfig:
        return SourceConfig(np.vstack([self.points, geo.as_points(p)]))

    def without(self, i: int) -> SourceConfig:
        return SourceConfig(np.delete(self.points, i, axis=0))

    def replaced(self, i: int, p) -> SourceConfig:
        pts = self.points.copy()
        pts[i] = p
        return SourceConfig(pts)


@dataclass(frozen=True)
class ModelParams:
    theta1: float
    theta2: float
    theta3: float
    theta4: float
    theta5: float
    r: float

    def __post_init__(self):
        checks = [
            (self.theta1 >= 0, "theta1 must be >= 0"),
            (self.theta2 >= 0, "theta2 must be >= 0"),
            (self.theta3 <= 0, "theta3 must be <= 0"),
            (self.theta4 >= 0, "theta4 must be >= 0"),
            (self.theta5 >= 0, "theta5 must be >= 0"),
            (math.isfinite(self.r) and self.r > 0, "r must be finite and > 0"),
        ]
        for ok, msg in checks:
            if not ok:
                raise InvalidParams(msg)
        if not all(math.isfinite(t) for t in self.theta):
            raise InvalidParams("theta must be finite")

    @classmethod
    def from_theta(cls, theta, r: float) -> ModelParams:
        theta = list(theta)
        if len(theta) != 5:
            raise InvalidParams(f"theta needs 5 components, got {len(theta)}")
        return cls(*(float(t) for t in theta), r=float(r))

    @property
    def theta(self) -> tuple[float, float, float, float, float]:
        return (self.theta1, self.theta2, self.theta3, self.theta4, self.theta5)


@dataclass(frozen=True)
class EnergyBreakdown:
    g: float
    sum_alpha: float
    n_e: int
    n: int
    n_r: int
    u_data: float
    u_inter: float
    u_total: float


def _points(config) -> np.ndarray:
    pts = config.points if isinstance(config, SourceConfig) else geo.as_points(config)
    if len(pts) == 0:
        raise EmptyConfiguration("source configuration is empty")
    return pts


def stat_g(config, data: DataSet) -> float:
    pts = _points(config)
    return abs(geo.hull_area(geo.convex_hull(pts)) - data.hull_area)


def stat_sum_alpha(config, data: DataSet) -> float:
    return float(geo.min_sq_dists(data.points, _points(config)).sum())


def stat_n_e(config, data: DataSet) -> int:
    hull = geo.convex_hull(_points(config))
    return int(np.count_nonzero(geo.hull_contains_many(hull, data.points)))


def energy(config, data: DataSet, params: ModelParams) -> EnergyBreakdown:
    pts = _points(config)
    hull = geo.convex_hull(pts)
    g = abs(geo.hull_area(hull) - data.hull_area)
    sum_alpha = float(geo.min_sq_dists(data.points, pts).sum())
    n_e = int(np.count_nonzero(geo.hull_contains_many(hull, data.points)))
    n = len(pts)
    n_r = geo.pairs_within(pts, params.r)
    t1, t2, t3, t4, t5 = params.theta
    u_data = t1 * g + t2 * sum_alpha + t3 * n_e
    u_inter = t4 * n + t5 * n_r
    return EnergyBreakdown(g, sum_alpha, n_e, n, n_r, u_data, u_inter, u_data + u_inter)


def log_density_ratio(config_new, config_old, data: DataSet, params: ModelParams,
                      T: float) -> float:
    """log of (p(new) / p(old)) ** (1 / T)."""
    if not T > 0:
        raise ValueError("temperature must be positive")
    u_new = energy(config_new, data, params).u_total
    u_old = energy(config_old, data, params).u_total
    return -(u_new - u_old) / T
