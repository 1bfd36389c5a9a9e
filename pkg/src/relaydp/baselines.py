"""Reference and comparison relay selectors.

Every selector takes ``(realization, config)`` and returns a
:class:`~relaydp.dp.RelayAssignment` scored from scratch with the configured
interference model, so values are comparable across schemes.

The greedy schemes plan on interference-free link SNRs; only the final
evaluation sees interference. ``decentralized_rs`` is a reconstruction of a
decentralized per-hop scheme from a one-line description and is reported as
"DRS-like".
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .channel import ChannelRealization, boundary_states, identity_assignment
from .dp import RelayAssignment, _as_weights, evaluate_selection, optimal_select
from .errors import BudgetExceeded, InfeasibleResidual
from .topology import NetworkConfig, prepare
from .trellis import BranchWeights, build_branch_weights, stage_spaces, stage_weight_matrix

DEFAULT_PATH_BUDGET = 20_000_000


def exhaustive_search(weights: BranchWeights | Sequence[np.ndarray], n_states: int | None = None,
                      n_hops: int | None = None, budget: int = DEFAULT_PATH_BUDGET) -> RelayAssignment:
    """Score every one of the ``Z**(L-1)`` trellis paths and keep the best.

    Ties go to the lexicographically smallest state sequence.
    """
    weights = _as_weights(weights)
    sizes = weights.sizes
    n_paths = math.prod(sizes)
    if n_paths > budget:
        raise BudgetExceeded(f"{n_paths} paths exceed the enumeration budget of {budget}")
    stages = list(weights)
    # values[z1, ..., zs] = bottleneck of the partial path through those states
    values = np.asarray(stages[0][0], dtype=float)
    for g in stages[1:-1]:
        values = np.minimum(values[..., None], g)
    values = np.minimum(values, stages[-1][:, 0])
    flat = int(np.argmax(values))
    path = tuple(int(z) for z in np.unravel_index(flat, values.shape))
    return RelayAssignment(x_opt=path, value=float(values.flat[flat]), scheme="exhaustive",
                           comparisons=n_paths)


def path_count(n_states: int, n_hops: int) -> int:
    return n_states ** (n_hops - 1)


def _link_snr(gain: np.ndarray, config: NetworkConfig, pair: int) -> np.ndarray:
    # interference-free normalized SNR, same arithmetic as normalized_sinr
    p = config.tx_power_w
    return p * gain / (config.noise_power_w + p * 0.0) / config.thresholds[pair]


def _free_mask(config: NetworkConfig, stage: int, claimed: set[int]) -> np.ndarray:
    free = np.ones(config.n_relays, dtype=bool)
    free[list(config.stage_dummies(stage))] = False
    free[list(claimed)] = False
    if not free.any():
        raise InfeasibleResidual(f"no free relay left in relay stage {stage + 1}")
    return free


def _order(config: NetworkConfig, order: Sequence[int] | None) -> list[int]:
    if order is None:
        return list(range(config.n_pairs))
    order = [int(k) for k in order]
    if sorted(order) != list(range(config.n_pairs)):
        raise ValueError(f"order must be a permutation of range({config.n_pairs})")
    return order


def greedy_select(realization: ChannelRealization, config: NetworkConfig,
                  order: Sequence[int] | None = None) -> RelayAssignment:
    """Pairs pick their best bottleneck path one after another.

    Each pair runs a single-pair max-min DP over relays nobody before it has
    claimed, then claims its path.
    """
    config = prepare(config)
    n_stages = config.n_stages
    claimed: list[set[int]] = [set() for _ in range(n_stages)]
    relays = np.zeros((n_stages, config.n_pairs), dtype=np.intp)
    comparisons = 0
    gains = realization.gains

    for k in _order(config, order):
        free = [_free_mask(config, s, claimed[s]) for s in range(n_stages)]
        u = np.where(free[0], _link_snr(gains[0][k], config, k), -np.inf)
        back = []
        for s in range(1, n_stages):
            cand = np.minimum(_link_snr(gains[s], config, k), u[:, None])
            comparisons += cand.size
            best = np.argmax(cand, axis=0)
            u = np.where(free[s], cand[best, np.arange(cand.shape[1])], -np.inf)
            back.append(best)
        last = np.minimum(_link_snr(gains[-1][:, k], config, k), u)
        comparisons += last.size
        z = int(np.argmax(last))
        path = [z]
        for best in reversed(back):
            z = int(best[z])
            path.append(z)
        path.reverse()
        for s, r in enumerate(path):
            relays[s, k] = r
            claimed[s].add(r)

    return evaluate_selection(realization, config, relays, "greedy", comparisons=comparisons)


def hop_by_hop_greedy(realization: ChannelRealization, config: NetworkConfig,
                      order: Sequence[int] | None = None) -> RelayAssignment:
    """Stage by stage, each pair grabs the free relay with its strongest incoming link."""
    config = prepare(config)
    relays = np.zeros((config.n_stages, config.n_pairs), dtype=np.intp)
    prev = identity_assignment(config.n_pairs)
    comparisons = 0
    pairs = _order(config, order)
    for s in range(config.n_stages):
        claimed: set[int] = set()
        for k in pairs:
            free = _free_mask(config, s, claimed)
            snr = np.where(free, _link_snr(realization.gains[s][prev[k]], config, k), -np.inf)
            comparisons += int(free.sum())
            r = int(np.argmax(snr))
            relays[s, k] = r
            claimed.add(r)
        prev = relays[s]
    return evaluate_selection(realization, config, relays, "hop-greedy", comparisons=comparisons)


def decentralized_rs(realization: ChannelRealization, config: NetworkConfig) -> RelayAssignment:
    """Per-hop max-min state choice; the last relay stage sees both final hops.

    Relay stages ``1..L-2`` each pick the state maximizing the smallest
    normalized SINR of their incoming hop given the previous pick. Relay
    stage ``L-1`` maximizes the smaller of its incoming and outgoing hop's
    bottleneck. With ``L = 2`` this is the optimum.
    """
    config = prepare(config)
    spaces = stage_spaces(config)
    gains = realization.gains
    ends = boundary_states(config.n_pairs)
    prev = ends
    x = []
    comparisons = 0
    for s in range(config.n_stages - 1):
        w = stage_weight_matrix(gains[s], prev, spaces[s].states, config, cache=s == 0)[0]
        comparisons += w.size
        z = int(np.argmax(w))
        x.append(z)
        prev = spaces[s].states[z][None, :]
    last = spaces[-1].states
    w_in = stage_weight_matrix(gains[-2], prev, last, config, cache=config.n_stages == 1)[0]
    w_out = stage_weight_matrix(gains[-1], last, ends, config)[:, 0]
    both = np.minimum(w_in, w_out)
    comparisons += both.size
    x.append(int(np.argmax(both)))
    relays = [sp[z] for sp, z in zip(spaces, x)]
    return evaluate_selection(realization, config, relays, "drs", x, comparisons)


def exhaustive_select(realization: ChannelRealization, config: NetworkConfig,
                      budget: int = DEFAULT_PATH_BUDGET) -> RelayAssignment:
    config = prepare(config)
    weights = build_branch_weights(realization, config)
    best = exhaustive_search(weights, budget=budget)
    relays = [sp[z] for sp, z in zip(weights.spaces, best.x_opt)]
    return evaluate_selection(realization, config, relays, "exhaustive", best.x_opt, best.comparisons)


Selector = Callable[[ChannelRealization, NetworkConfig], RelayAssignment]

SCHEMES: dict[str, Selector] = {
    "optimal": optimal_select,
    "exhaustive": exhaustive_select,
    "greedy": greedy_select,
    "hop-greedy": hop_by_hop_greedy,
    "drs": decentralized_rs,
}

SCHEME_LABELS = {
    "optimal": "optimal",
    "exhaustive": "exhaustive",
    "greedy": "greedy",
    "hop-greedy": "hop-greedy",
    "drs": "DRS-like",
}


def get_selector(name: str) -> Selector:
    try:
        return SCHEMES[name]
    except KeyError:
        raise ValueError(f"unknown scheme {name!r}; choose from {sorted(SCHEMES)}") from None
