"""Max-min dynamic programming over the aggregated trellis.

Trellis stages are 0-based here: stage ``s`` (``0..L-2``) is relay stage
``s + 1`` and stage ``L-1`` is the destination column. ``u[z, s]`` is the
best bottleneck weight of any partial path ending in state ``z`` of stage
``s``; ``v[z, s]`` is the predecessor achieving it (lowest index on ties).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import IO, Sequence

import numpy as np

from .channel import ChannelRealization, end_to_end_sinr
from .errors import EmptyStateSpace, ShapeMismatch
from .topology import NetworkConfig, prepare
from .trellis import BranchWeights, build_branch_weights


@dataclass
class DpTables:
    U: np.ndarray  # (Z, L) best bottleneck values, -inf where a stage has fewer states
    V: np.ndarray  # (Z, L) argmax predecessors
    comparison_count: int


@dataclass
class RelayAssignment:
    """Selected state per relay stage and its quality.

    ``x_opt[s]`` indexes the state space of relay stage ``s``; ``relays``
    spells the same selection out as per-stage relay tuples. ``value`` is the
    max-min objective (smallest normalized end-to-end SINR).
    """

    x_opt: tuple[int, ...]
    value: float
    per_user_sinr: np.ndarray | None = None
    relays: tuple[tuple[int, ...], ...] = ()
    scheme: str = "optimal"
    comparisons: int = 0
    extra: dict = field(default_factory=dict)


def count_comparisons(n_states: int, n_hops: int) -> int:
    """Comparisons made by the forward pass: ``Z + Z**2 (L - 2)``."""
    if n_hops < 2:
        raise ValueError("n_hops must be >= 2")
    return n_states + n_states ** 2 * (n_hops - 2)


def _as_weights(weights) -> BranchWeights:
    if isinstance(weights, BranchWeights):
        return weights
    return BranchWeights.from_matrices(weights)


def dp_solve(weights: BranchWeights | Sequence[np.ndarray], n_states: int | None = None,
             n_hops: int | None = None, trace: IO[str] | None = None) -> tuple[RelayAssignment, DpTables]:
    """Find the trellis path maximizing its smallest branch weight.

    ``weights`` may also be a plain list of stage matrices. ``n_states`` and
    ``n_hops`` are optional consistency checks. When ``trace`` is a text
    stream, one JSON object per (stage, state) is written to it.
    """
    weights = _as_weights(weights)
    L = weights.n_hops
    sizes = weights.sizes
    if n_hops is not None and n_hops != L:
        raise ShapeMismatch(f"weights describe {L} hops, not {n_hops}")
    if n_states is not None and max(sizes) != n_states:
        raise ShapeMismatch(f"weights have {max(sizes)} states per stage, not {n_states}")
    if min(sizes) == 0:
        raise EmptyStateSpace("a relay stage has no states")

    zmax = max(sizes)
    U = np.full((zmax, L), -np.inf)
    V = np.zeros((zmax, L), dtype=np.intp)
    comparisons = 0

    stages = iter(weights)
    u = np.asarray(next(stages), dtype=float)[0].copy()
    U[: len(u), 0] = u
    for s in range(1, L):
        g = next(stages)
        # receiver-major: row b holds min(g[a, b], u[a]) over predecessors a
        cand = np.minimum(g.T, u)
        comparisons += cand.size
        best = np.argmax(cand, axis=1)
        u = cand[np.arange(cand.shape[0]), best]
        U[: len(u), s] = u
        V[: len(u), s] = best

    if trace is not None:
        for s in range(L):
            for z in range(sizes[s] if s < L - 1 else 1):
                trace.write(json.dumps({"stage": s, "state": z, "u": float(U[z, s]), "v": int(V[z, s])}) + "\n")

    tables = DpTables(U, V, comparisons)
    x_opt = backtrack(tables, L)
    result = RelayAssignment(x_opt=x_opt, value=float(U[0, L - 1]), comparisons=comparisons)
    return result, tables


def backtrack(tables: DpTables, n_hops: int) -> tuple[int, ...]:
    """Follow predecessors from the destination column back to relay stage 1."""
    x = [0] * (n_hops - 1)
    z = 0
    for s in range(n_hops - 1, 0, -1):
        z = int(tables.V[z, s])
        x[s - 1] = z
    return tuple(x)


def evaluate_selection(realization: ChannelRealization, config: NetworkConfig,
                       relays: Sequence[Sequence[int]], scheme: str,
                       x_opt: Sequence[int] | None = None, comparisons: int = 0) -> RelayAssignment:
    """Score a per-stage relay selection from scratch on ``realization``."""
    per_user = end_to_end_sinr(realization, relays, config)
    relays = tuple(tuple(int(r) for r in a) for a in relays)
    if x_opt is None:
        from .trellis import stage_spaces

        x_opt = tuple(sp.index(a) for sp, a in zip(stage_spaces(config), relays))
    return RelayAssignment(
        x_opt=tuple(int(z) for z in x_opt),
        value=float(per_user.min()),
        per_user_sinr=per_user,
        relays=relays,
        scheme=scheme,
        comparisons=comparisons,
    )


def optimal_select(realization: ChannelRealization, config: NetworkConfig, lazy: bool = False) -> RelayAssignment:
    """Optimal relay selection for one channel realization."""
    config = prepare(config)
    weights = build_branch_weights(realization, config, lazy=lazy)
    result, tables = dp_solve(weights)
    relays = [sp[z] for sp, z in zip(weights.spaces, result.x_opt)]
    out = evaluate_selection(realization, config, relays, "optimal", result.x_opt, tables.comparison_count)
    out.extra["trellis_value"] = result.value
    return out
