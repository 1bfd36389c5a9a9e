# %% [markdown]
# Search cost: dynamic programming against enumeration
#
# With two pairs and three relays per stage there are Z = 6 states per stage.
# The DP makes Z + Z^2 (L - 2) comparisons while enumeration scores Z^(L-1)
# paths, so the gap widens quickly with the number of hops.

# %%
import numpy as np

from relaydp import count_comparisons, emit_complexity_report

rows = emit_complexity_report([2], 3, range(3, 10), n_instances=5, seed=0)
print(f"{'L':>3} {'dp comps':>9} {'paths':>9} {'dp ms':>8} {'enum ms':>9}")
for r in rows:
    ex = r["exhaustive_time_ms"]
    ex = f"{ex:9.3f}" if not isinstance(ex, str) else f"{ex:>9}"
    print(f"{r['L']:3d} {r['dp_comparisons']:9d} {r['exhaustive_paths']:9d} {r['dp_time_ms']:8.3f} {ex}")

# %% comparisons grow linearly in L, paths exponentially
L = np.array([r["L"] for r in rows])
print("comparison increments:", np.diff([count_comparisons(6, int(h)) for h in L]))
print("path ratios:", np.array([r["exhaustive_paths"] for r in rows[1:]]) // np.array([r["exhaustive_paths"] for r in rows[:-1]]))
