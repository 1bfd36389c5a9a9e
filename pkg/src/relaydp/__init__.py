"""Optimal relay selection for multi-user, multi-hop decode-and-forward networks.

The relay choices of all pairs in one hop are aggregated into a single
trellis state, after which a max-min Viterbi recursion finds the selection
that maximizes the weakest pair's normalized end-to-end SINR in time linear
in the number of hops.
"""

from .baselines import (
    SCHEME_LABELS,
    SCHEMES,
    decentralized_rs,
    exhaustive_search,
    exhaustive_select,
    greedy_select,
    hop_by_hop_greedy,
)
from .channel import (
    ChannelRealization,
    LargeScaleRealization,
    hop_sinr,
    sample_large_scale,
    sample_small_scale,
)
from .dp import DpTables, RelayAssignment, backtrack, count_comparisons, dp_solve, optimal_select
from .errors import (
    BudgetExceeded,
    ConfigError,
    EmptyStateSpace,
    InfeasibleResidual,
    NonPositiveParameter,
    RelayError,
    ShapeMismatch,
    ThresholdCountMismatch,
    TooFewRelays,
)
from .experiments import emit_complexity_report
from .montecarlo import OutageEstimate, estimate_outage, is_outage, sweep
from .topology import NetworkConfig, expand_thresholds, pad_dummy_relays, prepare, validate
from .trellis import (
    BranchWeights,
    StateSpace,
    branch_weight,
    build_branch_weights,
    enumerate_states,
    stage_spaces,
)

__version__ = "0.1.0"
