"""Experiment presets, the complexity report and the self-test.

Presets mirror the published scenarios at desk scale. The link budget uses a
128.1 dB reference loss at 1 km (urban macro-cell figure) on top of the
``d ** -3.6`` decay, with the default -100 dBm noise floor; the source gives
neither, so absolute outage levels are indicative only.
"""

from __future__ import annotations

import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Sequence

import numpy as np

from . import montecarlo
from .baselines import SCHEMES, exhaustive_search, path_count
from .channel import end_to_end_sinr, sample_large_scale, sample_small_scale
from .dp import count_comparisons, dp_solve, optimal_select
from .errors import BudgetExceeded
from .montecarlo import OutageEstimate
from .topology import NetworkConfig, expand_thresholds, prepare
from .trellis import build_branch_weights, n_states

REFERENCE_LOSS_DB = 128.1
POWER_RANGE_DBM = tuple(float(p) for p in range(16, 41, 4))
COMPARED_SCHEMES = ("optimal", "drs", "greedy", "hop-greedy")


@dataclass
class Series:
    name: str
    config: NetworkConfig
    axis: str
    values: tuple
    schemes: tuple[str, ...] = COMPARED_SCHEMES
    n_large_scale: int = 1


def _cfg(n, m, hops, dist, threshold_db, interference, shadowing, power=30.0) -> NetworkConfig:
    return NetworkConfig(
        n_pairs=n,
        relays_per_hop=m,
        n_hops=hops,
        total_distance_km=dist,
        tx_power_dbm=power,
        sinr_thresholds=expand_thresholds(threshold_db, n),
        interference_enabled=interference,
        shadowing_enabled=shadowing,
        reference_loss_db=REFERENCE_LOSS_DB,
    )


# fixed power for the tabulated M=6, D_L=5 km scenario
TABLE_POWER_DBM = 23.0


def _table_series() -> list[Series]:
    base = _cfg(2, 6, 10, 5.0, 3.0, interference=False, shadowing=True, power=TABLE_POWER_DBM)
    return [
        Series("N=2", base, "L", (8, 10, 12, 14)),
        Series("L=10", base, "N", (2, 3, 4, 5)),
    ]


def _preset_fig3() -> list[Series]:
    cfg = _cfg(3, 4, 6, 3.0, 3.0, interference=False, shadowing=True)
    return [Series("N=3,M=4,L=6", cfg, "tx_power_dbm", POWER_RANGE_DBM)]


def _preset_table2_row() -> list[Series]:
    cfg = _cfg(2, 6, 10, 5.0, 3.0, interference=False, shadowing=True, power=TABLE_POWER_DBM)
    return [Series("N=2,L=10", cfg, "tx_power_dbm", (TABLE_POWER_DBM,))]


def _preset_outage_m_l() -> list[Series]:
    out = []
    for m in (6, 9, 12):
        for hops in (10, 15, 20):
            cfg = _cfg(2, m, hops, 10.0, -3.0, interference=True, shadowing=False)
            out.append(Series(f"M={m},L={hops}", cfg, "tx_power_dbm", POWER_RANGE_DBM, ("optimal",)))
    return out


def _preset_outage_n() -> list[Series]:
    out = []
    for m in (5, 6):
        for n in (2, 3, 4):
            cfg = _cfg(n, m, 20, 10.0, -5.0, interference=True, shadowing=False)
            out.append(Series(f"N={n},M={m}", cfg, "tx_power_dbm", POWER_RANGE_DBM, ("optimal",)))
    return out


PRESETS = {
    "fig3": _preset_fig3,
    "table1": _table_series,
    "table2": _table_series,
    "table2-row": _preset_table2_row,
    "outage-m-l": _preset_outage_m_l,
    "outage-n": _preset_outage_n,
    "complexity": None,  # handled by emit_complexity_report
}


def preset_series(name: str) -> list[Series]:
    try:
        factory = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    if factory is None:
        raise ValueError(f"preset {name!r} is a complexity report, not an outage sweep")
    return factory()


@dataclass
class ExperimentSpec:
    """What to run and where to put it.

    Either ``preset`` names a canned set of series, or ``config`` plus
    ``axis``/``values`` describe a single sweep (no axis: one point).
    """

    preset: str | None = None
    config: NetworkConfig | None = None
    axis: str | None = None
    values: tuple = ()
    schemes: tuple[str, ...] = ()
    n_slots: int = 10_000
    seed: int = 0
    out: str | Path | None = None
    fmt: str = "csv"
    threads: int = 1
    n_large_scale: int = 1
    config_overrides: dict = field(default_factory=dict)


def resolve_series(spec: ExperimentSpec) -> list[Series]:
    if spec.preset is not None:
        series = preset_series(spec.preset)
        for s in series:
            if spec.config_overrides:
                s.config = s.config.replace(**spec.config_overrides)
            if spec.schemes:
                s.schemes = tuple(spec.schemes)
            if spec.axis is not None:
                s.axis, s.values = spec.axis, tuple(spec.values)
            s.n_large_scale = max(s.n_large_scale, spec.n_large_scale)
        return series
    if spec.config is None:
        raise ValueError("need a preset or a config")
    axis = spec.axis or "tx_power_dbm"
    values = tuple(spec.values) or (spec.config.tx_power_dbm,)
    schemes = tuple(spec.schemes) or COMPARED_SCHEMES
    return [Series("custom", spec.config, axis, values, schemes, spec.n_large_scale)]


def run_series(series: Sequence[Series], n_slots: int, seed: int, threads: int = 1) -> list[tuple[str, OutageEstimate]]:
    rows = []
    for s in series:
        for est in montecarlo.sweep(s.config, s.axis, s.values, s.schemes, n_slots, seed,
                                    threads=threads, n_large_scale=s.n_large_scale):
            rows.append((s.name, est))
    return rows


def write_results(rows: list[tuple[str, OutageEstimate]], out: str | Path | IO[str], fmt: str) -> None:
    if fmt == "csv":
        montecarlo.write_csv(rows, out)
        return
    if fmt != "json":
        raise ValueError(f"unknown output format {fmt!r}")
    payload = [
        {
            "series": series,
            "scheme": e.label,
            "axis_value": e.axis_value,
            "trials": e.trials,
            "outage_count": e.outage_count,
            "outage_prob": e.probability,
            "ci_low": e.wilson_ci_95[0],
            "ci_high": e.wilson_ci_95[1],
            "mean_time_ms": e.mean_time_ms,
            "mean_comparisons": e.mean_comparisons,
        }
        for series, e in rows
    ]
    text = json.dumps(payload, indent=2) + "\n"
    if isinstance(out, (str, Path)):
        Path(out).write_text(text)
    else:
        out.write(text)


def summary_lines(rows: list[tuple[str, OutageEstimate]]) -> list[str]:
    """One line per (series, scheme): outage probability along the axis."""
    grouped: dict[tuple[str, str], list[OutageEstimate]] = {}
    for series, e in rows:
        grouped.setdefault((series, e.label), []).append(e)
    lines = []
    for (series, label), ests in grouped.items():
        pts = " ".join(f"{e.axis_value:g}:{e.probability:.4g}" for e in ests)
        lines.append(f"{series:<14} {label:<11} {pts}")
    return lines


def run(spec: ExperimentSpec, stdout: IO[str] | None = None) -> int:
    """Execute ``spec``; returns the process exit status."""
    stdout = sys.stdout if stdout is None else stdout
    if spec.preset == "complexity":
        rows = emit_complexity_report([2], 3, range(3, 11), n_instances=10, seed=spec.seed)
        write_complexity_report(rows, spec.out if spec.out is not None else stdout, spec.fmt)
        for r in rows:
            print(f"N={r['N']} L={r['L']} dp {r['dp_time_ms']:.4f} ms, exhaustive {r['exhaustive_time_ms']}", file=stdout)
        return 0
    rows = run_series(resolve_series(spec), spec.n_slots, spec.seed, spec.threads)
    if spec.out is not None:
        write_results(rows, spec.out, spec.fmt)
    for line in summary_lines(rows):
        print(line, file=stdout)
    if spec.out is None:
        write_results(rows, stdout, spec.fmt)
    return 0


# complexity -----------------------------------------------------------------

def emit_complexity_report(n_list: Sequence[int], n_relays: int, hops_list: Sequence[int],
                           n_instances: int, seed: int, total_distance_km: float = 3.0,
                           budget: int = 20_000_000) -> list[dict]:
    """Mean DP and exhaustive-search time per (N, L) on shared branch weights.

    Only the search is timed; both methods receive the same precomputed
    weights. Exhaustive search is ``"skipped"`` when ``Z**(L-1)`` exceeds
    ``budget``.
    """
    rows = []
    for n in n_list:
        for hops in hops_list:
            cfg = prepare(NetworkConfig(n, n_relays, hops, total_distance_km,
                                        reference_loss_db=REFERENCE_LOSS_DB))
            z = n_states(n, n_relays)
            large = sample_large_scale(cfg, seed)
            dp_times, ex_times, comps = [], [], []
            skipped = path_count(z, hops) > budget
            for k in range(n_instances):
                weights = build_branch_weights(sample_small_scale(large, seed, k), cfg)
                t0 = time.perf_counter()
                best, tables = dp_solve(weights)
                dp_times.append(time.perf_counter() - t0)
                comps.append(tables.comparison_count)
                if not skipped:
                    t0 = time.perf_counter()
                    try:
                        ref = exhaustive_search(weights, budget=budget)
                    except BudgetExceeded:
                        skipped = True
                        continue
                    ex_times.append(time.perf_counter() - t0)
                    assert ref.value == best.value
            rows.append({
                "N": n,
                "M": n_relays,
                "L": hops,
                "Z": z,
                "dp_comparisons": int(np.mean(comps)),
                "exhaustive_paths": path_count(z, hops),
                "dp_time_ms": float(np.mean(dp_times) * 1e3),
                "exhaustive_time_ms": "skipped" if skipped else float(np.mean(ex_times) * 1e3),
            })
    return rows


COMPLEXITY_COLUMNS = ["N", "M", "L", "Z", "dp_comparisons", "exhaustive_paths", "dp_time_ms", "exhaustive_time_ms"]


def write_complexity_report(rows: list[dict], out: str | Path | IO[str], fmt: str = "csv") -> None:
    own = isinstance(out, (str, Path))
    fh = open(out, "w") if own else out
    try:
        if fmt == "json":
            fh.write(json.dumps(rows, indent=2) + "\n")
            return
        fh.write("# non-deterministic columns: dp_time_ms,exhaustive_time_ms\n")
        fh.write(",".join(COMPLEXITY_COLUMNS) + "\n")
        for r in rows:
            fh.write(",".join(str(r[c]) for c in COMPLEXITY_COLUMNS) + "\n")
    finally:
        if own:
            fh.close()


# self-test ------------------------------------------------------------------

def selftest(n_instances: int = 100, seed: int = 0) -> tuple[bool, list[str]]:
    """Oracle, counting, flattening and dominance checks on small random networks."""
    rng = np.random.default_rng(seed)
    failures = []
    for k in range(n_instances):
        n = int(rng.integers(1, 3))
        m = int(rng.integers(max(2, n), 4))
        hops = int(rng.integers(2, 6))
        cfg = prepare(NetworkConfig(
            n, m, hops, float(rng.uniform(0.5, 5.0)),
            tx_power_dbm=float(rng.uniform(10, 40)),
            sinr_thresholds=tuple(rng.uniform(0.2, 4.0, n)),
            interference_enabled=bool(rng.integers(0, 2)),
            reference_loss_db=REFERENCE_LOSS_DB,
        ))
        large = sample_large_scale(cfg, int(rng.integers(2**31)))
        realization = sample_small_scale(large, k, 0)
        weights = build_branch_weights(realization, cfg)
        best, tables = dp_solve(weights)
        ref = exhaustive_search(weights)
        z = n_states(n, m)
        tag = f"instance {k} (N={n}, M={m}, L={hops})"
        if best.value != ref.value:
            failures.append(f"{tag}: dp {best.value!r} != exhaustive {ref.value!r}")
        if tables.comparison_count != count_comparisons(z, hops):
            failures.append(f"{tag}: {tables.comparison_count} comparisons, expected {count_comparisons(z, hops)}")
        relays = [sp[x] for sp, x in zip(weights.spaces, best.x_opt)]
        flat = float(end_to_end_sinr(realization, relays, cfg).min())
        if abs(flat - best.value) > 1e-12 * max(abs(flat), 1e-300):
            failures.append(f"{tag}: path value {best.value!r} != recomputed {flat!r}")
        opt = optimal_select(realization, cfg).value
        for name in ("greedy", "hop-greedy", "drs"):
            v = SCHEMES[name](realization, cfg).value
            if v > opt:
                failures.append(f"{tag}: {name} value {v!r} beats optimal {opt!r}")
    return not failures, failures
