"""Seeded experiment runner: models, methods, metrics, and persisted records.

One experiment builds its model once, derives the budget and the shared warm
basis once, runs the requested exploration methods, and scores their vertex
clouds. Every random stream is derived from the master seed and a fixed
per-purpose label, so adding or dropping a method never perturbs another's
draws and a stored record can be re-run bit-for-bit.

Volumes are computed in scale-normalized coordinates (each interest variable
divided by its characteristic scale); normalized volumes and gains are
invariant to that common choice.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .algorithm import (
    DEFAULT_OPTIONS,
    ExplorerOptions,
    build_budgeted_lp,
    characteristic_scales,
    explore,
    generate_direction_set,
)
from .baselines import (
    RandomDirectionsConfig,
    SporesConfig,
    run_random_directions,
    run_spores,
)
from .hub import HubConfig, build_hub_lp, horizon_config, hub_presets
from .lp import read_lp
from .metrics import (
    efficiency_gain,
    hull_volume,
    normalized_volumes,
    planar_reference,
    projection_outline,
    scaling_slope,
)

METHODS = ("funplex", "spores", "random_directions")

# fixed labels deriving per-purpose streams from the master seed
_STREAM_LABELS = {"funplex": 23, "random_directions": 37, "spores": 41, "volume": 53}


def stream_rng(master_seed: int, purpose: str) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((master_seed, _STREAM_LABELS[purpose])))


class StageError(RuntimeError):
    """An experiment stage failed; carries the stage name for diagnostics."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[stage={stage}] {message}")
        self.stage = stage


@dataclass
class ExperimentConfig:
    """Self-contained description of one experiment run."""

    preset: str = "base"
    fixture: str | None = None
    methods: tuple[str, ...] = METHODS
    epsilon: float = 0.05
    n_objectives: int = 200
    n_interest: int | None = None
    master_seed: int = 13
    record_intermediaries: bool = True
    check_all_objectives: bool = True
    warm_start: bool = True
    scale_objectives: bool = True
    rd_variant: str = "symmetric"
    scale_fallback: float = 1000.0
    spores_r0: float = 0.5
    spores_gamma: float = 100.0
    volume_method: str = "auto"
    volume_samples: int = 200_000
    planar_directions: int | None = None
    hub_overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods: {sorted(unknown)}")
        if not self.methods:
            raise ValueError("at least one method required")
        self.methods = tuple(self.methods)

    def explorer_options(self) -> ExplorerOptions:
        return ExplorerOptions(
            record_intermediaries=self.record_intermediaries,
            check_all_objectives=self.check_all_objectives,
            warm_start=self.warm_start,
            scale_objectives=self.scale_objectives,
        )

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        if "methods" in data:
            data["methods"] = tuple(data["methods"])
        return cls(**data)


@dataclass
class MethodRecord:
    method: str
    pivots: int
    n_solves: int
    flops: int
    wall_time_s: float
    n_vertices: int
    points: list
    costs: list
    tags: list
    volume: float | None = None
    volume_se: float | None = None
    normalized_volume: float | None = None
    volume_gain: float | None = None
    efficiency_gain: float | None = None


@dataclass
class RunRecord:
    config: dict
    n_columns: int
    n_rows: int
    f_min: float
    budget_limit: float
    scales: list
    interest_names: list
    methods: dict
    outlines: dict = field(default_factory=dict)
    version: str = __version__
    created_unix: float = 0.0

    def as_dict(self) -> dict:
        out = asdict(self)
        out["methods"] = {k: asdict(v) if isinstance(v, MethodRecord) else v
                          for k, v in self.methods.items()}
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "RunRecord":
        data = dict(data)
        data["methods"] = {k: MethodRecord(**v) for k, v in data["methods"].items()}
        return cls(**data)


def _build_model(config: ExperimentConfig):
    if config.fixture is not None:
        lp = read_lp(config.fixture)
        if not lp.interest_columns:
            raise ValueError(f"fixture {config.fixture} declares no interest variables")
        capacity_map = {lp.column_names[j]: (j,) for j in lp.interest_columns}
        return lp, capacity_map
    presets = hub_presets()
    if config.preset not in presets:
        raise ValueError(f"unknown preset {config.preset!r} (have {sorted(presets)})")
    hub_cfg = presets[config.preset].config
    overrides = dict(config.hub_overrides)
    horizon = overrides.pop("horizon", None)
    if horizon is not None:
        hub_cfg = horizon_config(hub_cfg, int(horizon))
    if config.n_interest is not None:
        overrides.setdefault("n_interest", config.n_interest)
    if overrides:
        hub_cfg = replace(hub_cfg, **overrides)
    model = build_hub_lp(hub_cfg)
    return model.lp, model.spores_capacity_map()


def run_experiment(config: ExperimentConfig) -> RunRecord:
    """Build, budget, explore with each method, and score one configuration."""
    try:
        lp, capacity_map = _build_model(config)
    except Exception as exc:
        raise StageError("model-build", str(exc)) from exc

    try:
        budgeted = build_budgeted_lp(lp, config.epsilon)
        scales = characteristic_scales(lp, budgeted.cost_vertex[: lp.n],
                                       config.scale_fallback)
    except Exception as exc:
        raise StageError("budget", str(exc)) from exc
    dedupe_tol = 1e-6 * float(scales.max())
    objective_scales = scales if config.scale_objectives else np.ones_like(scales)

    methods: dict[str, MethodRecord] = {}
    for method in config.methods:
        t0 = time.perf_counter()
        try:
            if method == "funplex":
                dset = generate_direction_set(
                    config.n_objectives, objective_scales, lp.interest_columns,
                    rng=stream_rng(config.master_seed, "funplex"),
                )
                run = explore(budgeted, dset, config.explorer_options(),
                              dedupe_tol=dedupe_tol)
                store, pivots, flops = run.store, run.total_phase2_pivots, run.flops
                n_solves = config.n_objectives
            elif method == "spores":
                spores_cfg = SporesConfig(
                    capacity_columns=capacity_map,
                    r0=config.spores_r0,
                    gamma=config.spores_gamma,
                )
                run = run_spores(budgeted, spores_cfg,
                                 total_objectives=config.n_objectives,
                                 dedupe_tol=dedupe_tol)
                store, pivots, flops = run.store, run.total_phase2_pivots, run.flops
                n_solves = run.n_solves
            else:
                rd_cfg = RandomDirectionsConfig(config.n_objectives, config.rd_variant)
                run = run_random_directions(
                    budgeted, rd_cfg,
                    rng=stream_rng(config.master_seed, "random_directions"),
                    dedupe_tol=dedupe_tol,
                )
                store, pivots, flops = run.store, run.total_phase2_pivots, run.flops
                n_solves = run.n_solves
        except Exception as exc:
            raise StageError(method, str(exc)) from exc
        methods[method] = MethodRecord(
            method=method,
            pivots=int(pivots),
            n_solves=int(n_solves),
            flops=int(flops),
            wall_time_s=time.perf_counter() - t0,
            n_vertices=len(store),
            points=[list(map(float, p)) for p in store.points],
            costs=[float(c) for c in store.costs],
            tags=list(store.tags),
        )

    try:
        _score(methods, scales, config)
    except Exception as exc:
        raise StageError("metrics", str(exc)) from exc

    outlines: dict = {}
    if config.planar_directions:
        try:
            outlines = _planar_outlines(budgeted, methods, scales, config.planar_directions)
        except Exception as exc:
            raise StageError("planar", str(exc)) from exc

    return RunRecord(
        config=config.as_dict(),
        n_columns=lp.n,
        n_rows=lp.m,
        f_min=float(budgeted.f_min),
        budget_limit=float(budgeted.budget_limit),
        scales=[float(s) for s in scales],
        interest_names=[lp.column_names[j] for j in lp.interest_columns],
        methods=methods,
        outlines=outlines,
        created_unix=time.time(),
    )


def _score(methods: dict[str, MethodRecord], scales: np.ndarray,
           config: ExperimentConfig) -> None:
    volumes = {}
    for name, rec in methods.items():
        points = np.asarray(rec.points, dtype=float)
        if len(points) < len(scales) + 1:
            rec.volume = 0.0
            continue
        result = hull_volume(points / scales, method=config.volume_method,
                             samples=config.volume_samples,
                             seed=config.master_seed)
        rec.volume = result.volume
        rec.volume_se = result.standard_error
        volumes[name] = result.volume
    if "funplex" in volumes and volumes["funplex"] > 0:
        table = normalized_volumes(volumes)
        fx = methods["funplex"]
        for name, rec in methods.items():
            if name in table:
                rec.normalized_volume = table[name]
            if name != "funplex" and volumes.get(name):
                rec.volume_gain = volume_gain_safe(volumes["funplex"], volumes[name])
                rec.efficiency_gain = efficiency_gain(rec.pivots, fx.pivots)


def volume_gain_safe(funplex_volume: float, baseline_volume: float) -> float | None:
    if baseline_volume <= 0:
        return None
    return funplex_volume / baseline_volume


def _planar_outlines(budgeted, methods, scales, n_directions):
    n_dims = len(budgeted.lp.interest_columns)
    outlines: dict[str, dict] = {}
    for i in range(n_dims):
        for j in range(i + 1, n_dims):
            panel: dict[str, list] = {}
            ref = planar_reference(budgeted, (i, j), n_directions, scales=scales)
            panel["reference"] = ref.vertices.tolist()
            for name, rec in methods.items():
                points = np.asarray(rec.points, dtype=float)
                if len(points) >= 3:
                    outline = projection_outline(points, (i, j))
                    panel[name] = outline.vertices.tolist()
            outlines[f"{i}-{j}"] = panel
    return outlines


# -- sweeps -----------------------------------------------------------------------

SWEEP_AXES = ("horizon", "pv_sites", "n_k", "n_d")


@dataclass
class SweepResult:
    axis: str
    grid: list
    records: list
    slopes: dict


def _config_for_grid_point(config: ExperimentConfig, axis: str, value) -> ExperimentConfig:
    if axis == "horizon":
        overrides = dict(config.hub_overrides)
        overrides["horizon"] = int(value)
        return replace(config, hub_overrides=overrides)
    if axis == "pv_sites":
        overrides = dict(config.hub_overrides)
        overrides["n_pv_sites"] = int(value)
        return replace(config, hub_overrides=overrides)
    if axis == "n_k":
        return replace(config, n_objectives=int(value))
    if axis == "n_d":
        return replace(config, n_interest=int(value))
    raise ValueError(f"unknown sweep axis {axis!r}")


def run_sweep(config: ExperimentConfig, axis: str, grid=None) -> SweepResult:
    """One experiment per grid point, same master seed throughout.

    For the objective-count axis the per-method pivot totals get a log-log
    slope summary; other axes summarize efficiency and volume gains only.
    """
    if axis not in SWEEP_AXES:
        raise StageError("sweep", f"unknown axis {axis!r} (have {SWEEP_AXES})")
    if grid is None:
        grid = hub_presets()[axis].sweep_grid
    grid = list(grid)
    if not grid:
        raise StageError("sweep", "empty grid")
    if axis == "pv_sites" and config.fixture is None:
        config = replace(config, preset="pv_sites")
    records = []
    for value in grid:
        records.append(run_experiment(_config_for_grid_point(config, axis, value)))
    slopes: dict[str, float] = {}
    if axis == "n_k" and len(grid) >= 3:
        for method in config.methods:
            pivots = [rec.methods[method].pivots for rec in records]
            slopes[method] = scaling_slope(grid, pivots)
    return SweepResult(axis=axis, grid=grid, records=records, slopes=slopes)


# -- persistence --------------------------------------------------------------------


def write_records(records, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec.as_dict()) + "\n")


def read_records(path) -> list[RunRecord]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(RunRecord.from_dict(json.loads(line)))
    return out


def emit_tables(records, outdir) -> list[Path]:
    """Write the quality table, efficiency table, outline files, and records."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    quality = outdir / "quality.csv"
    with open(quality, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["run", "method", "volume", "normalized_volume", "volume_gain"])
        for k, rec in enumerate(records):
            for name, m in rec.methods.items():
                writer.writerow([k, name, m.volume, m.normalized_volume, m.volume_gain])
    written.append(quality)

    efficiency = outdir / "efficiency.csv"
    with open(efficiency, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["run", "method", "pivots", "complexity_per_pivot", "runtime_s",
             "n_solves", "efficiency_gain"]
        )
        for k, rec in enumerate(records):
            for name, m in rec.methods.items():
                label = "O(n(m+Nk))" if name == "funplex" else "O(nm)"
                writer.writerow(
                    [k, name, m.pivots, label, round(m.wall_time_s, 4),
                     m.n_solves, m.efficiency_gain]
                )
    written.append(efficiency)

    for k, rec in enumerate(records):
        for pair, panel in rec.outlines.items():
            for name, vertices in panel.items():
                path = outdir / "outlines" / f"run{k}_{pair}_{name}.csv"
                path.parent.mkdir(parents=True, exist_ok=True)
                with open(path, "w", newline="", encoding="utf-8") as fh:
                    writer = csv.writer(fh)
                    writer.writerow(["x", "y"])
                    writer.writerows(vertices)
                written.append(path)

    records_path = outdir / "records.jsonl"
    write_records(records, records_path)
    written.append(records_path)
    return written


def emit_sweep_tables(sweep: SweepResult, outdir) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    curve = outdir / f"sweep_{sweep.axis}.csv"
    methods = list(sweep.records[0].methods)
    with open(curve, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        header = [sweep.axis]
        for m in methods:
            header += [f"{m}_pivots", f"{m}_volume", f"{m}_efficiency_gain", f"{m}_volume_gain"]
        writer.writerow(header)
        for value, rec in zip(sweep.grid, sweep.records):
            row = [value]
            for m in methods:
                mr = rec.methods[m]
                row += [mr.pivots, mr.volume, mr.efficiency_gain, mr.volume_gain]
            writer.writerow(row)
    written.append(curve)
    if sweep.slopes:
        slopes_path = outdir / f"slopes_{sweep.axis}.json"
        slopes_path.write_text(json.dumps(sweep.slopes, indent=2) + "\n", encoding="utf-8")
        written.append(slopes_path)
    written += emit_tables(sweep.records, outdir)
    return written
