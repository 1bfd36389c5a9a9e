"""Aggregated trellis: relay-combination states and branch weights.

A state of relay stage ``l`` is an ordered, injective assignment of the N
pairs to relays of that stage. Because a branch between two states fixes
every transmitter and receiver of the hop, its weight (the smallest
normalized SINR of the N links) depends on the two states alone, which makes
a Viterbi-style max-min recursion exact.

State indices are 0-based and follow lexicographic order of the assignment.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from math import perm
from pathlib import Path
from typing import Callable, Iterator, Sequence

import numpy as np

from .channel import ChannelRealization, boundary_states, check_shapes, hop_sinr
from .errors import EmptyStateSpace, ShapeMismatch, TooFewRelays
from .topology import NetworkConfig, prepare

@dataclass(frozen=True, eq=False)
class StateSpace:
    states: np.ndarray  # (Z, N) relay indices
    n_relays: int

    def __len__(self) -> int:
        return len(self.states)

    @property
    def size(self) -> int:
        return len(self.states)

    @functools.cached_property
    def _lookup(self) -> dict[tuple[int, ...], int]:
        return {tuple(int(r) for r in s): k for k, s in enumerate(self.states)}

    def index(self, assignment: Sequence[int]) -> int:
        try:
            return self._lookup[tuple(int(r) for r in assignment)]
        except KeyError:
            raise KeyError(f"{tuple(assignment)} is not a state of this space") from None

    def __getitem__(self, k: int) -> tuple[int, ...]:
        return tuple(int(r) for r in self.states[k])


def n_states(n_pairs: int, n_relays: int) -> int:
    """``Z = M (M-1) ... (M-N+1)``."""
    return perm(n_relays, n_pairs)


@functools.lru_cache(maxsize=64)
def _cached_space(n_pairs: int, n_relays: int, dummies: tuple[int, ...]) -> StateSpace:
    allowed = [r for r in range(n_relays) if r not in set(dummies)]
    if len(allowed) < n_pairs:
        raise TooFewRelays(f"{len(allowed)} usable relays for {n_pairs} pairs")
    states = np.array(list(itertools.permutations(allowed, n_pairs)), dtype=np.intp)
    states = states.reshape(-1, n_pairs)
    states.setflags(write=False)
    return StateSpace(states, n_relays)


def enumerate_states(n_pairs: int, n_relays: int, dummy_mask=()) -> StateSpace:
    """All ordered injective pair-to-relay assignments that avoid dummies."""
    return _cached_space(int(n_pairs), int(n_relays), tuple(sorted(int(d) for d in dummy_mask)))


def stage_spaces(config: NetworkConfig) -> tuple[StateSpace, ...]:
    """One state space per relay stage of a padded config."""
    config = prepare(config)
    return tuple(
        enumerate_states(config.n_pairs, config.n_relays, config.stage_dummies(s))
        for s in range(config.n_stages)
    )


def branch_weight(gain: np.ndarray, tx_state, rx_state, config: NetworkConfig) -> float:
    """Smallest normalized SINR over the N links of one branch."""
    return float(hop_sinr(gain, tx_state, rx_state, config).min())


class _IndexCache:
    """Flat gather indices ``tx[:, j] * R + rx[:, i]`` per (tx states, rx states, R).

    Arrays are laid out receiver-major, ``(Z_rx, Z_tx)``, so the max over
    predecessors in the DP runs along contiguous memory.
    """

    def __init__(self, maxsize: int = 64):
        self._store: dict = {}
        self._maxsize = maxsize

    def get(self, tx: np.ndarray, rx: np.ndarray, n_cols: int) -> dict:
        key = (id(tx), id(rx), n_cols)
        hit = self._store.get(key)
        if hit is not None and hit[0] is tx and hit[1] is rx:
            return hit[2]
        if len(self._store) >= self._maxsize:
            self._store.pop(next(iter(self._store)))
        table: dict = {}
        self._store[key] = (tx, rx, table)
        return table


_INDEX_CACHE = _IndexCache()


def _flat_index(table: dict, tx: np.ndarray, rx: np.ndarray, n_cols: int, j: int, i: int) -> np.ndarray:
    idx = table.get((j, i))
    if idx is None:
        idx = tx[:, j][None, :] * n_cols + rx[:, i][:, None]
        table[(j, i)] = idx
    return idx


def stage_weight_matrix(gain: np.ndarray, tx_states: np.ndarray, rx_states: np.ndarray,
                        config: NetworkConfig, cache: bool = True) -> np.ndarray:
    """Branch weights between every transmitting and receiving state of one hop.

    Entry ``[a, b]`` equals ``branch_weight(gain, tx_states[a], rx_states[b])``
    bit for bit: the arithmetic mirrors :func:`~relaydp.channel.normalized_sinr`.
    The result is a transposed view of a receiver-major array. Gather
    indices are memoized per state-array pair unless ``cache`` is false
    (use that for throwaway state arrays).
    """
    p, noise, thr = config.tx_power_w, config.noise_power_w, config.thresholds
    n = tx_states.shape[1]
    n_cols = gain.shape[1]
    flat = np.ascontiguousarray(gain).ravel()
    cacheable = cache and len(tx_states) * len(rx_states) * n * n <= 50_000_000
    table = _INDEX_CACHE.get(tx_states, rx_states, n_cols) if cacheable else {}
    out = None
    for i in range(n):
        if config.interference_enabled:
            signal = flat[_flat_index(table, tx_states, rx_states, n_cols, i, i)]
            interf = 0.0
            for j in range(n):
                if j != i:
                    interf = interf + flat[_flat_index(table, tx_states, rx_states, n_cols, j, i)]
            w = p * signal / (noise + p * interf) / thr[i]
        else:
            # same per-element arithmetic as the general case with zero interference
            snr = (p * flat / (noise + p * 0.0) / thr[i])
            w = snr[_flat_index(table, tx_states, rx_states, n_cols, i, i)]
        out = w if out is None else np.minimum(out, w, out=out)
    return out.T


class BranchWeights:
    """Per-hop branch-weight matrices of the trellis.

    ``stage(0)`` is the ``1 x Z_1`` row leaving the sources, ``stage(h)`` for
    ``0 < h < L-1`` is ``Z_h x Z_{h+1}`` and ``stage(L-1)`` is the ``Z_{L-1} x 1``
    column into the destinations. With ``lazy=True`` matrices are computed on
    request and not kept, so a solver can stream hop by hop.
    """

    def __init__(self, spaces: Sequence[StateSpace], stages: Sequence[np.ndarray] | None = None,
                 compute: Callable[[int], np.ndarray] | None = None):
        self.spaces = tuple(spaces)
        self._stages = None if stages is None else tuple(np.asarray(s, dtype=float) for s in stages)
        self._compute = compute
        if self._stages is None and compute is None:
            raise ValueError("need stage matrices or a compute callback")
        if self._stages is not None:
            self._check()

    @classmethod
    def from_matrices(cls, stages: Sequence[np.ndarray]) -> "BranchWeights":
        """Wrap raw matrices; state spaces become anonymous index ranges."""
        stages = [np.atleast_2d(np.asarray(s, dtype=float)) for s in stages]
        if len(stages) < 2:
            raise ShapeMismatch("a trellis needs at least two hops")
        spaces = []
        for s in stages[:-1]:
            z = s.shape[1]
            spaces.append(StateSpace(np.arange(z, dtype=np.intp)[:, None], z))
        return cls(spaces, stages)

    def _check(self) -> None:
        sizes = [1, *[len(s) for s in self.spaces], 1]
        if len(self._stages) != len(sizes) - 1:
            raise ShapeMismatch(f"{len(self._stages)} stage matrices for {len(sizes) - 1} hops")
        for h, mat in enumerate(self._stages):
            if mat.shape != (sizes[h], sizes[h + 1]):
                raise ShapeMismatch(f"hop {h}: weight shape {mat.shape}, expected {(sizes[h], sizes[h + 1])}")
        if any(len(s) == 0 for s in self.spaces):
            raise EmptyStateSpace("a relay stage has no states")

    @property
    def n_hops(self) -> int:
        return len(self.spaces) + 1

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.spaces)

    @property
    def lazy(self) -> bool:
        return self._stages is None

    def stage(self, hop: int) -> np.ndarray:
        if self._stages is not None:
            return self._stages[hop]
        return self._compute(hop)

    def __iter__(self) -> Iterator[np.ndarray]:
        for h in range(self.n_hops):
            yield self.stage(h)

    def materialize(self) -> "BranchWeights":
        if not self.lazy:
            return self
        return BranchWeights(self.spaces, list(self))

    def path_value(self, path: Sequence[int]) -> float:
        """Bottleneck (minimum) branch weight along a sequence of state indices."""
        idx = [0, *path, 0]
        return float(min(self.stage(h)[idx[h], idx[h + 1]] for h in range(self.n_hops)))


def build_branch_weights(realization: ChannelRealization, config: NetworkConfig,
                         spaces: Sequence[StateSpace] | None = None, lazy: bool = False) -> BranchWeights:
    """Branch-weight tensor of one channel realization."""
    config = prepare(config)
    check_shapes(realization, config)
    if spaces is None:
        spaces = stage_spaces(config)
    if len(spaces) != config.n_stages:
        raise ShapeMismatch(f"{len(spaces)} state spaces for {config.n_stages} relay stages")
    ends = boundary_states(config.n_pairs)
    nodes = [ends, *[s.states for s in spaces], ends]

    def compute(hop: int) -> np.ndarray:
        return stage_weight_matrix(realization.gains[hop], nodes[hop], nodes[hop + 1], config)

    if lazy:
        return BranchWeights(spaces, compute=compute)
    return BranchWeights(spaces, [compute(h) for h in range(config.n_hops)])


def dump_stage_weights(weights: BranchWeights, hop: int, path: str | Path) -> None:
    """Write one hop's weight matrix as CSV (rows: transmitting states)."""
    np.savetxt(path, weights.stage(hop), delimiter=",", fmt="%.17g")
