"""Run configuration for ``mixtrace detect`` and the shipped parameter presets."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .annealer import GEOMETRIC, LOGARITHMIC, Schedule
from .errors import IoError, MixtraceError
from .model import ModelParams
from .sampler import SamplerParams, Window


class ConfigError(MixtraceError, ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    theta: tuple = (100.0, 1.0, -100.0, 700.0, 50.0)
    r: float = 2.0
    r_c: float = 0.3
    p_b: float = 0.35
    p_d: float = 0.35
    p_c: float = 0.3
    T0: float = 1000.0
    c: float = 0.995
    k_max: int = 10_000
    seed: int = 0
    chains: int = 1
    # "auto", a margin factor, or explicit [x_min, x_max, y_min, y_max]
    window: object = "auto"
    grid: tuple = (200, 200)
    burn_in_frac: float = 0.2
    modes_k: int = 3
    min_separation_cells: int = 10
    schedule: str = GEOMETRIC
    axis_labels: tuple = ("x", "y")
    preset: str = field(default="paper-sim", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "theta", tuple(float(t) for t in self.theta))
        object.__setattr__(self, "grid", tuple(int(g) for g in self.grid))
        object.__setattr__(self, "axis_labels", tuple(str(a) for a in self.axis_labels))
        if isinstance(self.window, list):
            object.__setattr__(self, "window", tuple(float(v) for v in self.window))
        self.validate()

    def validate(self) -> None:
        # constructing the component objects runs their own invariant checks
        try:
            self.model_params()
            self.sampler_params()
            self.annealing_schedule()
        except MixtraceError as exc:
            raise ConfigError(str(exc)) from None
        for name in ("seed", "chains", "modes_k", "min_separation_cells"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise ConfigError(f"{name} must be an integer")
        if self.seed < 0:
            raise ConfigError("seed must be >= 0")
        if self.chains < 1:
            raise ConfigError("chains must be >= 1")
        if self.modes_k < 1 or self.min_separation_cells < 1:
            raise ConfigError("modes_k and min_separation_cells must be >= 1")
        if len(self.grid) != 2 or min(self.grid) < 1:
            raise ConfigError("grid must be [nx, ny] with both >= 1")
        if not (0.0 <= self.burn_in_frac < 1.0):
            raise ConfigError("burn_in_frac must lie in [0, 1)")
        if len(self.axis_labels) != 2:
            raise ConfigError("axis_labels must name exactly two axes")
        w = self.window
        if isinstance(w, str):
            if w != "auto":
                raise ConfigError("window must be 'auto', a margin factor or 4 bounds")
        elif isinstance(w, (int, float)) and not isinstance(w, bool):
            if not (math.isfinite(w) and w >= 0):
                raise ConfigError("window margin must be finite and >= 0")
        elif isinstance(w, tuple) and len(w) == 4:
            try:
                Window(*w)
            except MixtraceError as exc:
                raise ConfigError(f"window: {exc}") from None
        else:
            raise ConfigError("window must be 'auto', a margin factor or 4 bounds")

    def model_params(self) -> ModelParams:
        return ModelParams.from_theta(self.theta, self.r)

    def sampler_params(self) -> SamplerParams:
        return SamplerParams(self.p_b, self.p_d, self.p_c, self.r_c)

    def annealing_schedule(self) -> Schedule:
        if self.schedule not in (GEOMETRIC, LOGARITHMIC):
            raise ConfigError(f"schedule must be {GEOMETRIC!r} or {LOGARITHMIC!r}")
        if not isinstance(self.k_max, int) or isinstance(self.k_max, bool):
            raise ConfigError("k_max must be an integer")
        return Schedule(self.T0, self.c, self.k_max, self.schedule)

    def window_for(self, points) -> Window:
        w = self.window
        if w == "auto":
            return Window.from_data(points, 0.5)
        if isinstance(w, tuple):
            return Window(*w)
        return Window.from_data(points, float(w))

    def to_dict(self) -> dict:
        d = asdict(self)
        for k, v in d.items():
            if isinstance(v, tuple):
                d[k] = list(v)
        return d


PRESETS = {
    "paper-sim": {},
    "paper-fig4": {"theta": [200, 1, -1200, 210, 5]},
    "paper-fig5": {"theta": [196, 2, -1200, 220, 5]},
}

FIELD_NAMES = {f.name for f in fields(RunConfig)}


def from_dict(d: dict, base: str | None = None) -> RunConfig:
    """Build a config from ``d`` layered over a preset.

    The preset is ``base`` if given, else ``d["preset"]``, else ``paper-sim``.
    Unknown keys are rejected.
    """
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(d) - FIELD_NAMES)
    if unknown:
        raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
    name = base or d.get("preset", "paper-sim")
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    merged = {**PRESETS[name], **d, "preset": name}
    try:
        return RunConfig(**merged)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None


def load(name_or_path) -> RunConfig:
    """Resolve a preset name or read a JSON config file."""
    if str(name_or_path) in PRESETS:
        return from_dict({}, base=str(name_or_path))
    path = Path(name_or_path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read config {path}: {exc}") from exc
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    return from_dict(d)
