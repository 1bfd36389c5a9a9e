"""Command-line entry point: ``relaydp`` or ``python -m relaydp``.

Precedence for scenario parameters: explicit flags, then ``--config`` file,
then the preset (or built-in defaults).
"""

from __future__ import annotations

import argparse
import sys

from .baselines import SCHEMES
from .channel import dump_large_scale, load_large_scale, sample_large_scale
from .errors import RelayError
from .experiments import PRESETS, ExperimentSpec, run, selftest
from .montecarlo import SWEEP_AXES, run_slots, summarize, write_csv
from .topology import NetworkConfig, config_from_mapping, parse_config_text

_CONFIG_FLAGS = {
    "n_pairs": "n_pairs",
    "relays": "relays_per_hop",
    "hops": "n_hops",
    "distance_km": "total_distance_km",
    "path_loss_exponent": "path_loss_exponent",
    "shadowing_db": "shadowing_std_db",
    "tx_power_dbm": "tx_power_dbm",
    "noise_dbm": "noise_power_dbm",
    "reference_loss_db": "reference_loss_db",
    "threshold_db": "sinr_thresholds_db",
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="relaydp",
        description="Optimal and baseline relay selection for multi-user multi-hop DF networks.",
    )
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--config", help="flat 'key = value' scenario file")
    p.add_argument("--scheme", action="append", choices=sorted(SCHEMES),
                   help="scheme to evaluate (repeatable)")
    p.add_argument("--slots", type=int, default=10_000, help="fading slots per point (default 10000)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--axis", choices=SWEEP_AXES)
    p.add_argument("--values", help="comma-separated sweep values")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--large-scale", type=int, default=1, dest="n_large_scale",
                   help="independent large-scale draws per point (default 1)")
    p.add_argument("--replay", help="large-scale CSV to reuse instead of sampling")
    p.add_argument("--dump-large-scale", help="write the run's large-scale draw to this CSV")
    p.add_argument("--selftest", action="store_true", help="run the oracle self-test and exit")

    g = p.add_argument_group("scenario")
    g.add_argument("--n-pairs", type=int)
    g.add_argument("--relays", help="relays per stage: one count or a comma list")
    g.add_argument("--hops", type=int)
    g.add_argument("--distance-km", type=float)
    g.add_argument("--path-loss-exponent", type=float)
    g.add_argument("--shadowing-db", type=float)
    g.add_argument("--tx-power-dbm", type=float)
    g.add_argument("--noise-dbm", type=float)
    g.add_argument("--reference-loss-db", type=float)
    g.add_argument("--threshold-db", help="SINR threshold(s) in dB, one or one per pair")
    g.add_argument("--interference", action=argparse.BooleanOptionalAction, default=None)
    g.add_argument("--shadowing", action=argparse.BooleanOptionalAction, default=None)
    return p


def _overrides(args: argparse.Namespace) -> dict[str, str]:
    out: dict[str, str] = {}
    if args.config:
        with open(args.config) as fh:
            out.update(parse_config_text(fh.read()))
    for flag, key in _CONFIG_FLAGS.items():
        value = getattr(args, flag)
        if value is not None:
            out[key] = str(value)
    if args.interference is not None:
        out["interference_enabled"] = str(args.interference)
    if args.shadowing is not None:
        out["shadowing_enabled"] = str(args.shadowing)
    return out


def _typed(overrides: dict[str, str]) -> dict:
    """Parse preset overrides into typed field values."""
    cfg = config_from_mapping(overrides, base=NetworkConfig(1, 1, 2, 1.0))
    keys = set(overrides) - {"sinr_thresholds_db"}
    if "sinr_thresholds_db" in overrides:
        keys.add("sinr_thresholds")
    return {k: getattr(cfg, k) for k in keys}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.selftest:
            ok, failures = selftest()
            for line in failures:
                print(line, file=sys.stderr)
            print("selftest: " + ("all checks passed" if ok else f"{len(failures)} failures"))
            return 0 if ok else 1

        overrides = _overrides(args)
        values = tuple(float(v) for v in args.values.split(",")) if args.values else ()
        if args.axis in ("L", "M", "N"):
            values = tuple(int(v) for v in values)

        if args.preset is None:
            config = config_from_mapping(overrides)
            spec = ExperimentSpec(config=config, axis=args.axis, values=values,
                                  schemes=tuple(args.scheme or ()), n_slots=args.slots,
                                  seed=args.seed, out=args.out, fmt=args.fmt,
                                  threads=args.threads, n_large_scale=args.n_large_scale)
        else:
            typed = _typed(overrides) if overrides else {}
            spec = ExperimentSpec(preset=args.preset, axis=args.axis, values=values,
                                  schemes=tuple(args.scheme or ()), n_slots=args.slots,
                                  seed=args.seed, out=args.out, fmt=args.fmt,
                                  threads=args.threads, n_large_scale=args.n_large_scale,
                                  config_overrides=typed)

        if args.dump_large_scale or args.replay:
            if spec.config is None:
                raise RelayError("--replay/--dump-large-scale need an explicit scenario, not a preset")
            if args.dump_large_scale:
                dump_large_scale(sample_large_scale(spec.config, spec.seed), args.dump_large_scale)
            if args.replay:
                large = load_large_scale(args.replay, spec.config)
                record = run_slots(spec.config, spec.schemes or ("optimal",), spec.n_slots,
                                   spec.seed, spec.threads, large=large)
                rows = [("replay", e) for e in summarize(record)]
                write_csv(rows, args.out or sys.stdout)
                for _, e in rows:
                    print(f"{e.label:<11} outage {e.probability:.4g}", file=sys.stderr)
                return 0
        return run(spec)
    except (RelayError, ValueError, OSError) as exc:
        print(f"relaydp: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
