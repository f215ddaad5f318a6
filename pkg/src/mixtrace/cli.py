"""``mixtrace`` command line: simulate, detect and density.

Exit codes: 0 success, 2 user or configuration error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__, config as cfg
from .annealer import anneal, default_init
from .csvio import read_points, write_points, write_table
from .density import DensityGrid, modes, read_grid, write_grid
from .errors import IoError, MixtraceError
from .model import DataSet
from .render import density_svg, trace_svg
from .sampler import BirthDeathChange
from .synth import MixtureSpec, generate

log = logging.getLogger("mixtrace")

EXIT_OK, EXIT_USER, EXIT_IO = 0, 2, 3

TRACE_HEADER = ["chain", "k", "T", "u_total", "n", "move", "accepted"]


def _setup_logging():
    level = os.environ.get("MIXTRACE_LOG", "info").upper()
    logging.basicConfig(level=getattr(logging, level, logging.INFO), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def _ensure_dir(path) -> Path:
    p = Path(path)
    try:
        p.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create {p}: {exc}") from exc
    return p


def _load_spec(path) -> MixtureSpec:
    if path is None:
        return MixtureSpec()
    try:
        d = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoError(f"cannot read spec {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise cfg.ConfigError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    if not isinstance(d, dict):
        raise cfg.ConfigError(f"{path}: spec must be a JSON object")
    allowed = {"sources", "m", "dirichlet_alpha", "noise_var"}
    unknown = sorted(set(d) - allowed)
    if unknown:
        raise cfg.ConfigError(f"{path}: unknown spec key(s): {', '.join(unknown)}")
    try:
        return MixtureSpec(**d)
    except (TypeError, ValueError) as exc:
        raise cfg.ConfigError(f"{path}: {exc}") from None


def cmd_simulate(args) -> int:
    spec = _load_spec(args.spec)
    mix = generate(spec, np.random.default_rng(args.seed))
    out = _ensure_dir(args.out)
    write_points(out / "data.csv", mix.data.points)
    write_points(out / "true_sources.csv", mix.sources)
    log.info("wrote %d data points and %d true sources to %s", mix.data.m, len(mix.sources), out)
    return EXIT_OK


def run_chain(points, conf: cfg.RunConfig, chain: int):
    """One independent annealing chain seeded with ``conf.seed + chain``."""
    data = DataSet(points)
    window = conf.window_for(data.points)
    kernel = BirthDeathChange(data, conf.model_params(), conf.sampler_params(), window)
    rng = np.random.default_rng(conf.seed + chain)
    init = default_init(data, window, rng)
    grid = DensityGrid(window, *conf.grid)
    return anneal(init, kernel, conf.annealing_schedule(), rng, density=grid,
                  burn_in_frac=conf.burn_in_frac)


def _run_chain_star(a):
    return run_chain(*a)


def detect(points, conf: cfg.RunConfig):
    """Run all chains; returns (per-chain results, merged grid, best result)."""
    jobs = [(points, conf, i) for i in range(conf.chains)]
    if conf.chains == 1:
        results = [run_chain(*jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=min(conf.chains, os.cpu_count() or 1)) as ex:
            results = list(ex.map(_run_chain_star, jobs))
    merged = results[0].density
    for res in results[1:]:
        merged = merged.merge(res.density)
    # lowest energy wins; ties go to the lowest chain index
    best = min(results, key=lambda res: res.best_energy.u_total)
    return results, merged, best


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def cmd_detect(args) -> int:
    conf = cfg.load(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.chains is not None:
        overrides["chains"] = args.chains
    if overrides:
        conf = cfg.from_dict({**conf.to_dict(), **overrides})
    points = read_points(args.data)
    data = DataSet(points)
    window = conf.window_for(data.points)
    lo, hi = data.points.min(axis=0), data.points.max(axis=0)
    log.info("data: %d points, %s in [%g, %g], %s in [%g, %g]", data.m,
             conf.axis_labels[0], lo[0], hi[0], conf.axis_labels[1], lo[1], hi[1])
    log.info("window: x in [%g, %g], y in [%g, %g], area %g", *window.bounds, window.mu)

    results, grid, best = detect(data.points, conf)
    found = modes(grid, conf.modes_k, conf.min_separation_cells)
    log.info("best energy %.6g with %d sources; %d modes", best.best_energy.u_total,
             best.best_energy.n, len(found.centers))

    out = _ensure_dir(args.out)
    write_points(out / "best_sources.csv", best.best_config.points)
    write_points(out / "modes.csv", found.centers, {"count": found.counts})
    write_grid(grid, out / "density.csv")
    write_table(out / "trace.csv", TRACE_HEADER,
                ((i, *row) for i, res in enumerate(results) for row in res.trace))
    try:
        (out / "density.svg").write_text(
            density_svg(grid, data.points, found.centers), encoding="utf-8")
        tr = results[0].trace
        (out / "trace.svg").write_text(
            trace_svg([t.k for t in tr], [t.u_total for t in tr]), encoding="utf-8")
        manifest = {
            "version": __version__,
            "config": conf.to_dict(),
            "data_file": str(args.data),
            "data_sha256": _sha256(args.data),
            "data_ranges": {"x": [float(lo[0]), float(hi[0])], "y": [float(lo[1]), float(hi[1])]},
            "window": list(window.bounds),
            "best_energy": asdict(best.best_energy),
            "modes_complete": found.complete,
        }
        (out / "run_manifest.json").write_text(json.dumps(manifest, indent=2) + "\n",
                                               encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write outputs to {out}: {exc}") from exc
    return EXIT_OK


def cmd_density(args) -> int:
    grid = read_grid(args.grid)
    data = read_points(args.data) if args.data else None
    mode_pts = read_points(args.modes) if args.modes else None
    try:
        Path(args.out).write_text(density_svg(grid, data, mode_pts, blur=args.blur),
                                  encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {args.out}: {exc}") from exc
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mixtrace", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="generate a synthetic mixture data set")
    s.add_argument("--spec", help="JSON mixture spec (default: three-source simulation)")
    s.add_argument("--out", required=True, help="output directory")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_simulate)

    d = sub.add_parser("detect", help="detect sources by simulated annealing")
    d.add_argument("--data", required=True, help="CSV with x,y columns")
    d.add_argument("--config", default="paper-sim",
                   help=f"preset ({', '.join(cfg.PRESETS)}) or JSON config file")
    d.add_argument("--out", required=True, help="output directory")
    d.add_argument("--seed", type=int)
    d.add_argument("--chains", type=int)
    d.set_defaults(func=cmd_detect)

    g = sub.add_parser("density", help="render a density grid as SVG")
    g.add_argument("--grid", required=True)
    g.add_argument("--data")
    g.add_argument("--modes")
    g.add_argument("--out", required=True)
    g.add_argument("--blur", type=int, default=0, help="display box-blur radius in cells")
    g.set_defaults(func=cmd_density)
    return p


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except IoError as exc:
        log.error("%s", exc)
        return EXIT_IO
    except (MixtraceError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_USER


if __name__ == "__main__":
    sys.exit(main())
