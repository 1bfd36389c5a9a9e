# %% [markdown]
# Outage probability against transmit power
#
# Three pairs, four relays per stage, six hops over 3 km with no
# interference. Every scheme sees the same fading slots, so the optimal
# selector's outage can never exceed any baseline's.

# %%
from relaydp import NetworkConfig, SCHEME_LABELS, expand_thresholds, sweep

cfg = NetworkConfig(
    n_pairs=3, relays_per_hop=4, n_hops=6, total_distance_km=3.0,
    sinr_thresholds=expand_thresholds(3.0, 3), interference_enabled=False,
    reference_loss_db=128.1,
)
schemes = ("optimal", "greedy", "hop-greedy", "drs")
powers = (16.0, 20.0, 24.0, 28.0, 32.0)

rows = sweep(cfg, "tx_power_dbm", powers, schemes, n_slots=300, seed=1)

# %% a small table: one column per scheme
print(f"{'P [dBm]':>8} " + " ".join(f"{SCHEME_LABELS[s]:>11}" for s in schemes))
for p in powers:
    ests = [e for e in rows if e.axis_value == p]
    print(f"{p:8.0f} " + " ".join(f"{e.probability:11.3f}" for e in ests))

# %% intervals for the optimal scheme
for e in rows:
    if e.scheme == "optimal":
        lo, hi = e.wilson_ci_95
        print(f"{e.axis_value:4.0f} dBm: {e.outage_count}/{e.trials} in outage, 95% CI [{lo:.3f}, {hi:.3f}]")
