# %% [markdown]
# Max-min relay selection on a small trellis
#
# Two source-destination pairs share three relays per stage over three hops.
# Each trellis state is an ordered assignment of the pairs to distinct relays,
# and a branch between two states is worth the weakest normalized SINR among
# the pairs on that hop. The best network path is the trellis path whose
# weakest branch is largest.

# %%
import numpy as np

from relaydp import (
    NetworkConfig,
    build_branch_weights,
    dp_solve,
    exhaustive_search,
    prepare,
    sample_large_scale,
    sample_small_scale,
    stage_spaces,
)

np.set_printoptions(precision=3, suppress=True)

cfg = prepare(NetworkConfig(
    n_pairs=2, relays_per_hop=3, n_hops=3, total_distance_km=1.5,
    tx_power_dbm=20.0, reference_loss_db=128.1, interference_enabled=True,
))
spaces = stage_spaces(cfg)
print("states of relay stage 1 (pair 0 relay, pair 1 relay):")
for k in range(len(spaces[0])):
    print(f"  {k}: {spaces[0][k]}")

# %% one fading slot and its branch weights
large = sample_large_scale(cfg, seed=3)
slot = sample_small_scale(large, seed=3, slot=0)
weights = build_branch_weights(slot, cfg)
for hop, mat in enumerate(weights):
    print(f"hop {hop}: {mat.shape}")
print(weights.stage(1))

# %% forward pass and backtracking
best, tables = dp_solve(weights)
print("best bottleneck per state and stage:")
print(tables.U)
print("predecessors:")
print(tables.V)
print("chosen states:", best.x_opt, "value", round(best.value, 4))
print("relays per stage:", [spaces[s][z] for s, z in enumerate(best.x_opt)])
print("comparisons:", tables.comparison_count)

# %% the exhaustive oracle agrees
ref = exhaustive_search(weights)
print("exhaustive value", round(ref.value, 4), "over", ref.comparisons, "paths")
assert ref.value == best.value
