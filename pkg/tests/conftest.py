import itertools

import numpy as np
import pytest

from relaydp.channel import sample_large_scale, sample_small_scale
from relaydp.topology import NetworkConfig, prepare

ACCEPTANCE_LINES: list[str] = []


def brute_force_maxmin(stages):
    """Plain-loop enumeration of every trellis path; lexicographic tie-break."""
    sizes = [len(s[0]) for s in stages[:-1]]
    best_val, best_path = -np.inf, None
    for path in itertools.product(*[range(z) for z in sizes]):
        idx = (0, *path, 0)
        val = min(float(stages[h][idx[h]][idx[h + 1]]) for h in range(len(stages)))
        if val > best_val:
            best_val, best_path = val, path
    return best_val, best_path


def random_weights(rng, n_states, n_hops, ties=False):
    sizes = [1] + [n_states] * (n_hops - 1) + [1]
    draw = (lambda shape: rng.integers(0, 4, shape).astype(float)) if ties else rng.random
    return [draw((sizes[h], sizes[h + 1])) for h in range(n_hops)]


def random_instance(rng, n_pairs=None, n_relays=None, n_hops=None, **kw):
    n = n_pairs or int(rng.integers(1, 3))
    m = n_relays or int(rng.integers(max(2, n), 4))
    hops = n_hops or int(rng.integers(2, 6))
    defaults = dict(
        tx_power_dbm=float(rng.uniform(10, 40)),
        sinr_thresholds=tuple(rng.uniform(0.2, 4.0, n)),
        interference_enabled=bool(rng.integers(0, 2)),
        reference_loss_db=128.1,
    )
    defaults.update(kw)
    cfg = prepare(NetworkConfig(n, m, hops, float(rng.uniform(0.5, 5.0)), **defaults))
    large = sample_large_scale(cfg, int(rng.integers(2**31)))
    return cfg, sample_small_scale(large, int(rng.integers(2**31)), 0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
