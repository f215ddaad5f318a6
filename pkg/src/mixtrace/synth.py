"""Synthetic mixtures: Dirichlet-weighted barycentres of known sources plus
Gaussian measurement noise."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import geometry as geo
from .errors import InvalidAlpha, InvalidParams
from .model import DataSet

# Default true sources for the simulated experiment: a near-equilateral
# triangle with sides 6.0, 6.003 and 6.003.
DEFAULT_SOURCES = ((0.0, 0.0), (6.0, 0.0), (3.0, 5.2))


@dataclass(frozen=True)
class MixtureSpec:
    sources: tuple = DEFAULT_SOURCES
    m: int = 100
    dirichlet_alpha: tuple | None = None
    noise_var: float = 0.1

    def __post_init__(self):
        src = geo.as_points(self.sources)
        if len(src) < 2:
            raise InvalidParams("a mixture needs at least 2 sources")
        if not np.all(np.isfinite(src)):
            raise InvalidParams("source coordinates must be finite")
        object.__setattr__(self, "sources", tuple(map(tuple, src.tolist())))
        if self.dirichlet_alpha is None:
            object.__setattr__(self, "dirichlet_alpha", (1.0,) * len(src))
        alpha = tuple(float(a) for a in self.dirichlet_alpha)
        object.__setattr__(self, "dirichlet_alpha", alpha)
        if len(alpha) != len(src):
            raise InvalidAlpha(f"{len(alpha)} alpha values for {len(src)} sources")
        if any(not a > 0 for a in alpha):
            raise InvalidAlpha("Dirichlet parameters must be > 0")
        if int(self.m) != self.m or self.m < 1:
            raise InvalidParams("m must be an integer >= 1")
        if not self.noise_var >= 0:
            raise InvalidParams("noise_var must be >= 0")


@dataclass(frozen=True, eq=False)
class Mixture:
    data: DataSet
    clean: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    sources: np.ndarray


def sample_weights(rng: np.random.Generator, alpha, size: int | None = None) -> np.ndarray:
    """Dirichlet draws as normalised Gamma(alpha_i, 1) variates.

    With ``size`` given, returns a ``(size, k)`` array of weight vectors.
    """
    a = np.asarray(alpha, dtype=float)
    if a.ndim != 1 or len(a) == 0 or np.any(~(a > 0)):
        raise InvalidAlpha("Dirichlet parameters must be a non-empty vector of positive reals")
    shape = a.shape if size is None else (size, len(a))
    g = rng.standard_gamma(np.broadcast_to(a, shape))
    return g / g.sum(axis=-1, keepdims=True)


def generate(spec: MixtureSpec, rng: np.random.Generator) -> Mixture:
    src = np.asarray(spec.sources, dtype=float)
    w = sample_weights(rng, spec.dirichlet_alpha, size=spec.m)
    clean = w @ src
    noisy = clean + rng.normal(0.0, np.sqrt(spec.noise_var), size=clean.shape)
    return Mixture(DataSet(noisy), clean, w, src)


def paper_sim_dataset(seed, m: int = 100, sources=DEFAULT_SOURCES,
                      noise_var: float = 0.1) -> tuple[DataSet, np.ndarray]:
    """Three-source simulated experiment: Dirichlet(1, 1, 1) weights and
    per-coordinate noise variance 0.1."""
    spec = MixtureSpec(sources=sources, m=m, dirichlet_alpha=(1.0, 1.0, 1.0),
                       noise_var=noise_var)
    mix = generate(spec, np.random.default_rng(seed))
    return mix.data, mix.sources
