"""Monte-Carlo estimation of network outage probability.

Large-scale fading is drawn once per run and held fixed; every time slot
draws fresh Rayleigh fading and hands the same realization to each scheme.
Outage counts depend only on ``(config, seed, n_slots)``.
"""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np
from scipy.stats import binomtest

from .baselines import SCHEME_LABELS, get_selector
from .channel import LargeScaleRealization, sample_large_scale, sample_small_scale
from .dp import RelayAssignment
from .topology import NetworkConfig, prepare

SWEEP_AXES = ("tx_power_dbm", "L", "M", "N")

CSV_COLUMNS = ["series", "scheme", "axis_value", "trials", "outage_prob", "ci_low", "ci_high",
               "mean_time_ms", "mean_comparisons"]
TIMING_COLUMNS = ("mean_time_ms",)


@dataclass
class OutageEstimate:
    scheme: str
    trials: int
    outage_count: int
    probability: float
    wilson_ci_95: tuple[float, float]
    mean_time_ms: float
    mean_comparisons: float
    axis_value: float | None = None

    @property
    def label(self) -> str:
        return SCHEME_LABELS.get(self.scheme, self.scheme)


@dataclass
class SlotRecord:
    """Raw per-slot results; arrays are (schemes, slots)."""

    schemes: tuple[str, ...]
    values: np.ndarray
    times_s: np.ndarray
    comparisons: np.ndarray
    x_opt: list[list[tuple[int, ...]]]

    @property
    def outage(self) -> np.ndarray:
        return self.values < 1.0


def is_outage(assignment: RelayAssignment) -> bool:
    """Network outage: some pair ends below its threshold (normalized SINR < 1)."""
    if assignment.per_user_sinr is not None:
        return bool(np.min(assignment.per_user_sinr) < 1.0)
    return bool(assignment.value < 1.0)


def wilson_interval(count: int, trials: int) -> tuple[float, float]:
    ci = binomtest(int(count), int(trials)).proportion_ci(confidence_level=0.95, method="wilson")
    p = count / trials
    return max(0.0, min(float(ci.low), p)), min(1.0, max(float(ci.high), p))


def run_slots(config: NetworkConfig, schemes: Sequence[str], n_slots: int, seed: int,
              threads: int = 1, n_large_scale: int = 1,
              large: LargeScaleRealization | None = None, keep_paths: bool = False) -> SlotRecord:
    """Run every scheme on the same ``n_slots`` fading slots per large-scale draw.

    ``large`` overrides the large-scale draw (e.g. one loaded from a replay
    file); it then applies to every outer iteration.
    """
    if n_slots < 1:
        raise ValueError("n_slots must be >= 1")
    config = prepare(config)
    schemes = tuple(schemes)
    selectors = [get_selector(s) for s in schemes]
    total = n_slots * n_large_scale
    values = np.empty((len(schemes), total))
    times = np.empty((len(schemes), total))
    comps = np.empty((len(schemes), total), dtype=np.int64)
    paths: list[list] = [[None] * total for _ in schemes] if keep_paths else []

    bigs = [large if large is not None else sample_large_scale(config, seed, r) for r in range(n_large_scale)]

    def work(slots: range) -> None:
        for t in slots:
            realization = sample_small_scale(bigs[t // n_slots], seed, t)
            for k, select in enumerate(selectors):
                t0 = time.perf_counter()
                a = select(realization, config)
                times[k, t] = time.perf_counter() - t0
                values[k, t] = a.value
                comps[k, t] = a.comparisons
                if keep_paths:
                    paths[k][t] = a.x_opt

    threads = max(1, int(threads))
    if threads == 1:
        work(range(total))
    else:
        step = -(-total // threads)
        with ThreadPoolExecutor(threads) as pool:
            list(pool.map(work, [range(i, min(i + step, total)) for i in range(0, total, step)]))
    return SlotRecord(schemes, values, times, comps, paths)


def summarize(record: SlotRecord, axis_value: float | None = None) -> list[OutageEstimate]:
    out = []
    trials = record.values.shape[1]
    for k, scheme in enumerate(record.schemes):
        count = int(record.outage[k].sum())
        out.append(OutageEstimate(
            scheme=scheme,
            trials=trials,
            outage_count=count,
            probability=count / trials,
            wilson_ci_95=wilson_interval(count, trials),
            mean_time_ms=float(record.times_s[k].mean() * 1e3),
            mean_comparisons=float(record.comparisons[k].mean()),
            axis_value=axis_value,
        ))
    return out


def estimate_outage(config: NetworkConfig, schemes: Sequence[str], n_slots: int, seed: int,
                    threads: int = 1, n_large_scale: int = 1,
                    large: LargeScaleRealization | None = None) -> list[OutageEstimate]:
    """Outage probability of each scheme over ``n_slots`` slots."""
    record = run_slots(config, schemes, n_slots, seed, threads, n_large_scale, large)
    return summarize(record)


def config_along_axis(config: NetworkConfig, axis: str, value) -> NetworkConfig:
    """Copy of ``config`` with one sweep parameter changed."""
    if axis == "tx_power_dbm":
        return config.replace(tx_power_dbm=float(value))
    if axis == "L":
        return config.replace(n_hops=int(value), relays_per_hop=config.n_relays, dummy_relays=())
    if axis == "M":
        return config.replace(relays_per_hop=int(value), dummy_relays=())
    if axis == "N":
        thr = config.thresholds
        if len(set(thr.tolist())) > 1:
            raise ValueError("an N sweep needs one common SINR threshold")
        return config.replace(n_pairs=int(value), sinr_thresholds=(float(thr[0]),) * int(value))
    raise ValueError(f"unknown sweep axis {axis!r}; choose from {SWEEP_AXES}")


def sweep(config: NetworkConfig, axis: str, values: Iterable, schemes: Sequence[str],
          n_slots: int, seed: int, threads: int = 1, n_large_scale: int = 1) -> list[OutageEstimate]:
    """Repeat :func:`estimate_outage` for each value of one parameter.

    The same ``seed`` is used throughout. Power sweeps therefore see the very
    same channels at every point; L, M and N change the network shape and
    thereby draw new channels.
    """
    rows = []
    for v in values:
        cfg = config_along_axis(config, axis, v)
        record = run_slots(cfg, schemes, n_slots, seed, threads, n_large_scale)
        rows.extend(summarize(record, axis_value=v))
    return rows


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(rows: Iterable[tuple[str, OutageEstimate]], out: str | Path | IO[str],
              include_timing: bool = True) -> None:
    """Write ``(series, estimate)`` rows; timing is flagged as non-deterministic."""
    own = isinstance(out, (str, Path))
    fh = open(out, "w", newline="") if own else out
    try:
        cols = [c for c in CSV_COLUMNS if include_timing or c not in TIMING_COLUMNS]
        fh.write("# non-deterministic columns: " + ",".join(TIMING_COLUMNS) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for series, e in rows:
            rec = {
                "series": series,
                "scheme": e.label,
                "axis_value": "" if e.axis_value is None else _fmt(e.axis_value),
                "trials": e.trials,
                "outage_prob": _fmt(e.probability),
                "ci_low": _fmt(e.wilson_ci_95[0]),
                "ci_high": _fmt(e.wilson_ci_95[1]),
                "mean_time_ms": f"{e.mean_time_ms:.6f}",
                "mean_comparisons": _fmt(e.mean_comparisons),
            }
            w.writerow([rec[c] for c in cols])
    finally:
        if own:
            fh.close()


def csv_text(rows: Iterable[tuple[str, OutageEstimate]], include_timing: bool = True) -> str:
    buf = io.StringIO()
    write_csv(rows, buf, include_timing)
    return buf.getvalue()
