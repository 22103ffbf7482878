"""Sweep harness: run (n, seed) cells, collect per-cell records, emit CSV.

A sweep cell samples a point set, builds the graph with the banded
generator, and runs the toggled analyses. Cells are independent; with
``jobs > 1`` they run in a process pool, and the output row order is by
(n, seed) regardless of completion order. All fields except the ``*_ms``
timings are deterministic functions of the config.
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from typing import TextIO

from .analysis import (
    check_core_clique,
    check_underpass,
    component_report,
    core_node_ids,
    degree_stats,
    inner_band_hops,
    max_empty_sector_run,
)
from .geometry import ModelParams
from .graphgen import build_banded
from .sampling import MODE_FIXED, MODE_POISSON, sample_fixed, sample_poisson

__all__ = ["SweepConfig", "SweepRecord", "run_sweep", "write_sweep_csv", "CSV_COLUMNS"]

CSV_COLUMNS = [
    "n",
    "seed",
    "R",
    "m",
    "mean_degree",
    "beta_hat",
    "giant_size",
    "second_size",
    "giant_diameter",
    "max_empty_run",
    "inner_band_hops",
    "gen_ms",
    "analysis_ms",
]


@dataclass(frozen=True)
class SweepConfig:
    """One sweep: the n values, model constants, seeds per n, and toggles.

    Seeds run 1..seeds for every n. ``underpass_trials`` is the per-cell
    triple count (0 disables the check).
    """

    n_values: tuple[int, ...]
    alpha: float
    C: float
    seeds: int
    mode: str = MODE_FIXED
    inner_c: float = 1.0
    out_csv: str = ""
    jobs: int = 1
    underpass_trials: int = 0
    run_diameter: bool = True
    run_degrees: bool = True
    run_sectors: bool = True
    run_inner_hops: bool = True

    def __post_init__(self) -> None:
        values = tuple(int(v) for v in self.n_values)
        if not values:
            raise ValueError("n_values must be non-empty")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("n_values must be strictly increasing")
        if self.seeds < 1:
            raise ValueError("seeds must be >= 1")
        if self.mode not in (MODE_FIXED, MODE_POISSON):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        # validates alpha > 0 and n >= 1 the same way a cell would
        ModelParams(values[0], self.alpha, self.C)
        object.__setattr__(self, "n_values", values)

    @classmethod
    def from_json(cls, stream: TextIO) -> "SweepConfig":
        raw = json.load(stream)
        if not isinstance(raw, dict):
            raise ValueError("sweep config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "n_values" in raw:
            raw["n_values"] = tuple(raw["n_values"])
        return cls(**raw)


@dataclass
class SweepRecord:
    """One (n, seed) cell. CSV columns plus bookkeeping fields that do not
    go into the table."""

    n: int
    seed: int
    R: float = math.nan
    m: float = math.nan
    mean_degree: float = math.nan
    beta_hat: float = math.nan
    giant_size: float = math.nan
    second_size: float = math.nan
    giant_diameter: float = math.nan
    max_empty_run: float = math.nan
    inner_band_hops: float = math.nan
    gen_ms: float = math.nan
    analysis_ms: float = math.nan
    underpass_violations: int = 0
    underpass_tested: int = 0
    core_clique: bool = True
    core_in_giant: bool = True
    core_size: int = 0
    inner_anomalies: int = 0
    failed: bool = False
    error: str = ""

    def csv_row(self) -> str:
        cells = []
        for name in CSV_COLUMNS:
            value = getattr(self, name)
            if name in ("n", "seed"):
                cells.append(str(int(value)))
            elif isinstance(value, float) and value.is_integer() and math.isfinite(value):
                cells.append(str(int(value)))
            else:
                cells.append(repr(value))
        return ",".join(cells)


def _run_cell(config: SweepConfig, n: int, seed: int) -> SweepRecord:
    record = SweepRecord(n=n, seed=seed)
    try:
        params = ModelParams(n, config.alpha, config.C)
        record.R = params.R
        sampler = sample_poisson if config.mode == MODE_POISSON else sample_fixed
        t0 = time.perf_counter()
        ps = sampler(params, seed)
        g = build_banded(ps)
        record.gen_ms = (time.perf_counter() - t0) * 1000.0
        record.m = float(g.m)
        t1 = time.perf_counter()
        if config.run_degrees:
            degrees = degree_stats(g)
            record.mean_degree = degrees.mean_degree
            record.beta_hat = degrees.beta_hat
        comps = component_report(g, with_diameters=config.run_diameter)
        record.giant_size = float(comps.giant_size)
        record.second_size = float(comps.second_size)
        if config.run_diameter:
            record.giant_diameter = float(comps.giant_diameter)
        if config.run_sectors:
            record.max_empty_run = float(max_empty_sector_run(ps, params, config.inner_c))
        if config.run_inner_hops:
            reach = inner_band_hops(g, params, config.inner_c)
            record.inner_band_hops = float(reach.max_hops)
            record.inner_anomalies = reach.anomalies
        if config.underpass_trials > 0:
            result = check_underpass(g, config.underpass_trials, seed=seed)
            record.underpass_violations = result.violations
            record.underpass_tested = result.tested
        core = core_node_ids(g)
        record.core_size = int(core.size)
        record.core_clique = check_core_clique(g)
        record.core_in_giant = bool(
            core.size == 0 or bool((comps.labels[core] == comps.giant_label).all())
        )
        record.analysis_ms = (time.perf_counter() - t1) * 1000.0
    except Exception as exc:  # isolate the failing cell, keep the sweep going
        record.failed = True
        record.error = f"{type(exc).__name__}: {exc}"
    return record


def _cell_args(config: SweepConfig):
    for n in config.n_values:
        for seed in range(1, config.seeds + 1):
            yield n, seed


def run_sweep(config: SweepConfig) -> list[SweepRecord]:
    """Run every cell; records come back sorted by (n, seed)."""
    cells = list(_cell_args(config))
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            records = list(
                pool.map(_run_cell, [config] * len(cells), *zip(*cells))
            )
    else:
        records = [_run_cell(config, n, seed) for n, seed in cells]
    records.sort(key=lambda rec: (rec.n, rec.seed))
    return records


def write_sweep_csv(records: list[SweepRecord], stream: TextIO) -> None:
    stream.write(",".join(CSV_COLUMNS) + "\n")
    for record in records:
        stream.write(record.csv_row() + "\n")


def default_jobs() -> int:
    """--jobs fallback: the HRG_JOBS environment variable, else 1."""
    raw = os.environ.get("HRG_JOBS", "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return 1
