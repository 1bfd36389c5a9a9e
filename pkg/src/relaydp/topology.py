"""Network scenario definition, validation and dummy-relay padding.

Nodes of one layer (sources, each relay stage, destinations) sit at the same
point of a line and consecutive layers are equally spaced, so every link of a
hop has length ``total_distance_km / n_hops``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    ConfigError,
    NonPositiveParameter,
    ThresholdCountMismatch,
    TooFewRelays,
)


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def dbm_to_watts(dbm: float) -> float:
    return float(10.0 ** ((dbm - 30.0) / 10.0))


@dataclass(frozen=True)
class NetworkConfig:
    """All parameters of one relay-network scenario.

    ``relays_per_hop`` is either one integer (uniform) or one count per relay
    stage (``n_hops - 1`` entries). ``sinr_thresholds`` are linear; ``None``
    means 0 dB for every pair. ``dummy_relays`` lists, per stage, the relay
    indices that are zero-gain placeholders; it is filled in by
    :func:`pad_dummy_relays` and should normally be left empty.

    ``reference_loss_db`` is an extra attenuation applied to every link (the
    path loss at 1 km). Leaving it at 0 gives attenuation ``d ** -alpha``.
    """

    n_pairs: int
    relays_per_hop: int | tuple[int, ...]
    n_hops: int
    total_distance_km: float
    path_loss_exponent: float = 3.6
    shadowing_std_db: float = 8.0
    tx_power_dbm: float = 30.0
    noise_power_dbm: float = -100.0
    sinr_thresholds: tuple[float, ...] | None = None
    interference_enabled: bool = True
    shadowing_enabled: bool = True
    reference_loss_db: float = 0.0
    dummy_relays: tuple[tuple[int, ...], ...] = field(default=())

    # derived quantities -------------------------------------------------

    @property
    def n_stages(self) -> int:
        """Number of relay stages, ``L - 1``."""
        return self.n_hops - 1

    @property
    def n_relays(self) -> int:
        """Relays per stage after padding, ``max(M_l)``."""
        if isinstance(self.relays_per_hop, int):
            return self.relays_per_hop
        return max(self.relays_per_hop)

    @property
    def hop_distance_km(self) -> float:
        return self.total_distance_km / self.n_hops

    @property
    def tx_power_w(self) -> float:
        return dbm_to_watts(self.tx_power_dbm)

    @property
    def noise_power_w(self) -> float:
        return dbm_to_watts(self.noise_power_dbm)

    @property
    def thresholds(self) -> np.ndarray:
        if self.sinr_thresholds is None:
            return np.ones(self.n_pairs)
        return np.asarray(self.sinr_thresholds, dtype=float)

    def stage_dummies(self, stage: int) -> tuple[int, ...]:
        """Dummy relay indices of relay stage ``stage`` (0-based)."""
        if not self.dummy_relays:
            return ()
        return self.dummy_relays[stage]

    def hop_shape(self, hop: int) -> tuple[int, int]:
        """(transmitters, receivers) of hop ``hop`` (0-based, ``0..L-1``)."""
        n, m = self.n_pairs, self.n_relays
        return (n if hop == 0 else m, n if hop == self.n_hops - 1 else m)

    def replace(self, **changes) -> "NetworkConfig":
        return dataclasses.replace(self, **changes)


def validate(config: NetworkConfig) -> NetworkConfig:
    """Check ``config`` and return a normalized copy.

    Normalization expands a uniform relay count to a per-stage tuple and
    turns thresholds into a float tuple. Applying it twice is a no-op.
    """
    n, n_hops = config.n_pairs, config.n_hops
    if int(n) != n or n < 1:
        raise NonPositiveParameter(f"n_pairs must be a positive integer, got {n!r}")
    if int(n_hops) != n_hops or n_hops < 2:
        raise ConfigError(f"n_hops must be an integer >= 2, got {n_hops!r}")
    n, n_hops = int(n), int(n_hops)

    relays = config.relays_per_hop
    if isinstance(relays, (int, np.integer)):
        relays = (int(relays),) * (n_hops - 1)
    else:
        relays = tuple(int(m) for m in relays)
        if len(relays) == 1 and n_hops > 2:
            relays = relays * (n_hops - 1)
    if len(relays) != n_hops - 1:
        raise ConfigError(
            f"relays_per_hop needs {n_hops - 1} entries for {n_hops} hops, got {len(relays)}"
        )
    if min(relays) < 1:
        raise NonPositiveParameter(f"relay counts must be positive, got {relays}")

    dummies = tuple(tuple(sorted(int(d) for d in s)) for s in config.dummy_relays)
    if dummies and len(dummies) != n_hops - 1:
        raise ConfigError("dummy_relays needs one entry per relay stage")
    real = [m - (len(dummies[s]) if dummies else 0) for s, m in enumerate(relays)]
    if min(real) < n:
        stage = int(np.argmin(real))
        raise TooFewRelays(
            f"relay stage {stage + 1} has {real[stage]} usable relays for {n} pairs"
        )

    for name in ("total_distance_km", "path_loss_exponent"):
        if not getattr(config, name) > 0:
            raise NonPositiveParameter(f"{name} must be > 0, got {getattr(config, name)!r}")
    if not config.shadowing_std_db >= 0:
        raise NonPositiveParameter("shadowing_std_db must be >= 0")

    thresholds = config.sinr_thresholds
    if thresholds is None:
        thresholds = (1.0,) * n
    elif np.isscalar(thresholds):
        thresholds = (float(thresholds),) * n
    thresholds = tuple(float(t) for t in thresholds)
    if len(thresholds) == 1:
        thresholds = thresholds * n
    if len(thresholds) != n:
        raise ThresholdCountMismatch(f"{len(thresholds)} thresholds for {n} pairs")
    if min(thresholds) <= 0:
        raise NonPositiveParameter(f"SINR thresholds must be > 0, got {thresholds}")

    return dataclasses.replace(
        config,
        n_pairs=n,
        n_hops=n_hops,
        relays_per_hop=relays,
        sinr_thresholds=thresholds,
        dummy_relays=dummies,
    )


def pad_dummy_relays(config: NetworkConfig) -> tuple[NetworkConfig, tuple[tuple[int, ...], ...]]:
    """Equalize relay counts to ``M = max(M_l)`` with zero-gain dummies.

    Stage ``l`` keeps its real relays at indices ``0..M_l-1`` and receives
    dummies at ``M_l..M-1``. Returns the padded config and the per-stage
    dummy indices (also stored on the config).
    """
    config = validate(config)
    m = config.n_relays
    relays = config.relays_per_hop
    old = config.dummy_relays or ((),) * len(relays)
    mask = tuple(
        tuple(sorted(set(old[s]) | set(range(m_l, m)))) for s, m_l in enumerate(relays)
    )
    padded = dataclasses.replace(config, relays_per_hop=(m,) * len(relays), dummy_relays=mask)
    return validate(padded), mask


def prepare(config: NetworkConfig) -> NetworkConfig:
    """Validate and pad; the form every downstream routine expects."""
    return pad_dummy_relays(config)[0]


# config file ingestion ------------------------------------------------------

_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(NetworkConfig)}
_BOOL_WORDS = {"1": True, "true": True, "yes": True, "on": True,
               "0": False, "false": False, "no": False, "off": False}


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key in ("interference_enabled", "shadowing_enabled"):
        try:
            return _BOOL_WORDS[raw.lower()]
        except KeyError:
            raise ConfigError(f"{key}: expected a boolean, got {raw!r}") from None
    if key in ("n_pairs", "n_hops"):
        return int(raw)
    if key == "relays_per_hop":
        parts = [p for p in raw.replace(" ", "").split(",") if p]
        return int(parts[0]) if len(parts) == 1 else tuple(int(p) for p in parts)
    if key in ("sinr_thresholds", "sinr_thresholds_db"):
        return tuple(float(p) for p in raw.split(",") if p.strip())
    return float(raw)


def config_from_mapping(values: Mapping[str, object], base: NetworkConfig | None = None) -> NetworkConfig:
    """Build a config from string or typed values; ``base`` supplies the rest.

    ``sinr_thresholds_db`` is accepted as an alternative to the linear
    ``sinr_thresholds`` key. A single threshold applies to every pair.
    """
    kw: dict[str, object] = {}
    for key, value in values.items():
        key = key.strip()
        if key != "sinr_thresholds_db" and key not in _FIELD_TYPES:
            raise ConfigError(f"unknown config key {key!r}")
        if key == "dummy_relays":
            raise ConfigError("dummy_relays is derived and cannot be set")
        kw[key] = _parse_value(key, value) if isinstance(value, str) else value

    if "sinr_thresholds_db" in kw:
        db = kw.pop("sinr_thresholds_db")
        kw["sinr_thresholds"] = tuple(float(v) for v in np.atleast_1d(db_to_linear(db)))

    if base is not None:
        return dataclasses.replace(base, **kw)
    missing = {"n_pairs", "relays_per_hop", "n_hops", "total_distance_km"} - kw.keys()
    if missing:
        raise ConfigError(f"missing required config keys: {sorted(missing)}")
    return NetworkConfig(**kw)


def parse_config_text(text: str) -> dict[str, str]:
    """Parse flat ``key = value`` lines; ``#`` starts a comment."""
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def load_config(path: str | Path, base: NetworkConfig | None = None) -> NetworkConfig:
    return config_from_mapping(parse_config_text(Path(path).read_text()), base=base)


def expand_thresholds(thresholds_db: float | Sequence[float], n_pairs: int) -> tuple[float, ...]:
    lin = np.atleast_1d(db_to_linear(thresholds_db))
    if lin.size == 1:
        lin = np.repeat(lin, n_pairs)
    return tuple(float(v) for v in lin)
