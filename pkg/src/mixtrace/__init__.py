"""Source (end-member) detection for 2D mixture data with a Gibbs point
process optimised by simulated annealing."""

__version__ = "0.1.0"

from .annealer import AnnealResult, Schedule, anneal, default_init, temperature
from .density import DensityGrid, modes
from .model import DataSet, EnergyBreakdown, ModelParams, SourceConfig, energy
from .sampler import BirthDeathChange, SamplerParams, Window
from .synth import MixtureSpec, generate, paper_sim_dataset

__all__ = [
    "AnnealResult", "BirthDeathChange", "DataSet", "DensityGrid", "EnergyBreakdown",
    "MixtureSpec", "ModelParams", "SamplerParams", "Schedule", "SourceConfig", "Window",
    "anneal", "default_init", "energy", "generate", "modes", "paper_sim_dataset",
    "temperature",
]
