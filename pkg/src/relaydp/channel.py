"""Channel sampling and per-hop SINR evaluation.

Random streams: the large-scale draw of run ``seed`` comes from
``default_rng([seed, LARGE_SCALE_KEY])`` and the small-scale draw of time slot
``slot`` from ``default_rng([seed, SMALL_SCALE_KEY, slot])``. Slots are
therefore reproducible one by one, in any order.
"""

from __future__ import annotations

import csv
import functools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ShapeMismatch
from .topology import NetworkConfig, db_to_linear, prepare

LARGE_SCALE_KEY = 0x4C53  # "LS"
SMALL_SCALE_KEY = 0x5353  # "SS"


@dataclass(frozen=True)
class LargeScaleRealization:
    """Path loss times shadowing per link, one ``T_l x R_l`` matrix per hop."""

    attenuation: tuple[np.ndarray, ...]

    @property
    def n_hops(self) -> int:
        return len(self.attenuation)


@dataclass(frozen=True)
class ChannelRealization:
    """Power gains ``|h[i, j, l]|**2`` of one time slot, one matrix per hop."""

    gains: tuple[np.ndarray, ...]

    @property
    def n_hops(self) -> int:
        return len(self.gains)


def _hop_dummy_masks(config: NetworkConfig, hop: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    tx = config.stage_dummies(hop - 1) if hop > 0 else ()
    rx = config.stage_dummies(hop) if hop < config.n_hops - 1 else ()
    return tx, rx


def shadowing_db(rng: np.random.Generator, size, std_db: float) -> np.ndarray:
    """Log-normal shadowing in the dB domain: zero-mean Gaussian, ``std_db`` spread."""
    return rng.normal(0.0, std_db, size=size)


def sample_large_scale(config: NetworkConfig, seed: int, index: int = 0) -> LargeScaleRealization:
    """Draw path loss and one i.i.d. shadowing value per directed link.

    Entries are ``10**(-reference_loss_db/10) * d**-alpha * S`` with ``d`` the
    hop distance in km. Rows and columns of dummy relays are set to zero after
    drawing, so the random stream does not depend on the padding. ``index``
    selects further independent draws for multi-realization runs.
    """
    config = prepare(config)
    key = [seed, LARGE_SCALE_KEY] + ([index] if index else [])
    rng = np.random.default_rng(key)
    mean_loss = float(db_to_linear(-config.reference_loss_db)) * (
        config.hop_distance_km ** (-config.path_loss_exponent)
    )
    out = []
    for hop in range(config.n_hops):
        shape = config.hop_shape(hop)
        a = np.full(shape, mean_loss)
        if config.shadowing_enabled and config.shadowing_std_db > 0:
            a = a * db_to_linear(shadowing_db(rng, shape, config.shadowing_std_db))
        tx_dummy, rx_dummy = _hop_dummy_masks(config, hop)
        a[list(tx_dummy), :] = 0.0
        a[:, list(rx_dummy)] = 0.0
        a.setflags(write=False)
        out.append(a)
    return LargeScaleRealization(tuple(out))


def sample_small_scale(large: LargeScaleRealization, seed: int, slot: int) -> ChannelRealization:
    """Multiply each attenuation by a unit-mean exponential (Rayleigh power) draw."""
    rng = np.random.default_rng([seed, SMALL_SCALE_KEY, slot])
    gains = []
    for a in large.attenuation:
        g = a * rng.standard_exponential(a.shape)
        g.setflags(write=False)
        gains.append(g)
    return ChannelRealization(tuple(gains))


def check_shapes(realization: ChannelRealization | LargeScaleRealization, config: NetworkConfig) -> None:
    mats = realization.gains if isinstance(realization, ChannelRealization) else realization.attenuation
    if len(mats) != config.n_hops:
        raise ShapeMismatch(f"{len(mats)} hop matrices for {config.n_hops} hops")
    for hop, mat in enumerate(mats):
        if mat.shape != config.hop_shape(hop):
            raise ShapeMismatch(f"hop {hop}: shape {mat.shape}, expected {config.hop_shape(hop)}")


def normalized_sinr(gain, tx, rx, tx_power, noise, thresholds, interference=True):
    """Normalized SINR of every pair on one hop, vectorized over assignments.

    ``tx`` and ``rx`` hold transmitter/receiver indices with the pair index on
    the last axis; leading axes broadcast against each other. The result has
    the broadcast shape. Interference is accumulated pair by pair in index
    order so the same assignment always gives bit-identical values.
    """
    tx = np.asarray(tx)
    rx = np.asarray(rx)
    n = tx.shape[-1]
    lead = np.broadcast_shapes(tx.shape[:-1], rx.shape[:-1])
    out = np.empty(lead + (n,))
    for i in range(n):
        r = rx[..., i]
        signal = gain[tx[..., i], r]
        interf = 0.0
        if interference:
            for j in range(n):
                if j != i:
                    interf = interf + gain[tx[..., j], r]
        out[..., i] = tx_power * signal / (noise + tx_power * interf) / thresholds[i]
    return out


def hop_sinr(gain: np.ndarray, tx_assign, rx_assign, config: NetworkConfig) -> np.ndarray:
    """Normalized per-pair SINR of one hop for one transmitter/receiver assignment.

    ``tx_assign[i]`` and ``rx_assign[i]`` are the indices of pair ``i``'s
    transmitter and receiver in ``gain``.
    """
    return normalized_sinr(
        gain,
        np.asarray(tx_assign, dtype=np.intp),
        np.asarray(rx_assign, dtype=np.intp),
        config.tx_power_w,
        config.noise_power_w,
        config.thresholds,
        config.interference_enabled,
    )


@functools.lru_cache(maxsize=32)
def identity_assignment(n_pairs: int) -> np.ndarray:
    """Sources and destinations: pair ``i`` uses node ``i`` (read-only)."""
    ident = np.arange(n_pairs, dtype=np.intp)
    ident.setflags(write=False)
    return ident


@functools.lru_cache(maxsize=32)
def boundary_states(n_pairs: int) -> np.ndarray:
    """The single source (or destination) trellis state as a ``1 x N`` array."""
    return identity_assignment(n_pairs)[None, :]


def path_sinr(realization: ChannelRealization, stage_assignments, config: NetworkConfig) -> np.ndarray:
    """Per-hop normalized SINR matrix (hops x pairs) along a full relay path.

    ``stage_assignments`` holds one length-N relay assignment per relay stage.
    """
    ident = identity_assignment(config.n_pairs)
    nodes = [ident, *[np.asarray(a, dtype=np.intp) for a in stage_assignments], ident]
    if len(nodes) != config.n_hops + 1:
        raise ShapeMismatch(f"{len(nodes) - 2} stage assignments for {config.n_stages} stages")
    return np.stack(
        [hop_sinr(g, nodes[h], nodes[h + 1], config) for h, g in enumerate(realization.gains)]
    )


def end_to_end_sinr(realization: ChannelRealization, stage_assignments, config: NetworkConfig) -> np.ndarray:
    """Per-pair end-to-end normalized SINR: the weakest hop of each pair."""
    return path_sinr(realization, stage_assignments, config).min(axis=0)


# replay files ---------------------------------------------------------------

def dump_large_scale(large: LargeScaleRealization, path: str | Path) -> None:
    """Write ``hop,tx,rx,attenuation`` rows (0-based indices, round-trip floats)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["hop", "tx", "rx", "attenuation"])
        for hop, a in enumerate(large.attenuation):
            for (i, j), v in np.ndenumerate(a):
                w.writerow([hop, i, j, repr(float(v))])


def load_large_scale(path: str | Path, config: NetworkConfig | None = None) -> LargeScaleRealization:
    """Read a file written by :func:`dump_large_scale`.

    Shapes are inferred from the largest indices unless ``config`` is given,
    in which case they are checked against it.
    """
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            rows.append((int(rec["hop"]), int(rec["tx"]), int(rec["rx"]), float(rec["attenuation"])))
    if not rows:
        raise ShapeMismatch(f"{path}: no attenuation rows")
    n_hops = max(r[0] for r in rows) + 1
    shapes = [
        (max(r[1] for r in rows if r[0] == h) + 1, max(r[2] for r in rows if r[0] == h) + 1)
        for h in range(n_hops)
    ]
    if config is not None:
        config = prepare(config)
        expected = [config.hop_shape(h) for h in range(config.n_hops)]
        if shapes != expected:
            raise ShapeMismatch(f"{path}: hop shapes {shapes} do not match the scenario {expected}")
    mats = [np.zeros(s) for s in shapes]
    for hop, i, j, v in rows:
        try:
            mats[hop][i, j] = v
        except IndexError:
            raise ShapeMismatch(f"{path}: entry ({hop}, {i}, {j}) out of range") from None
    for m in mats:
        m.setflags(write=False)
    large = LargeScaleRealization(tuple(mats))
    if config is not None:
        check_shapes(large, config)
    return large
