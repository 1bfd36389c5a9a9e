# %% [markdown]
# Stages with different relay counts
#
# When the relay stages hold different numbers of relays, each stage is
# padded up to the largest count with zero-gain placeholders. Placeholders
# are left out of the state spaces, so no selector can pick one.

# %%
import numpy as np

from relaydp import SCHEMES, NetworkConfig, pad_dummy_relays, sample_large_scale, sample_small_scale

cfg, dummies = pad_dummy_relays(NetworkConfig(
    n_pairs=2, relays_per_hop=(2, 4, 3), n_hops=4, total_distance_km=2.0,
    tx_power_dbm=25.0, reference_loss_db=128.1,
))
print("padded relay counts:", cfg.relays_per_hop)
print("placeholder relays per stage:", dummies)

large = sample_large_scale(cfg, seed=8)
print("attenuation into stage 1 (columns 2 and 3 are placeholders):")
print(np.array2string(large.attenuation[0], precision=2))

# %% every scheme stays on real relays
slot = sample_small_scale(large, seed=8, slot=0)
for name, select in SCHEMES.items():
    a = select(slot, cfg)
    print(f"{name:>10}: relays {a.relays}  value {a.value:.3f}")
