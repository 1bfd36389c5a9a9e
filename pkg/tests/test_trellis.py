import itertools

import numpy as np
import pytest

from relaydp.channel import ChannelRealization, hop_sinr, path_sinr
from relaydp.errors import EmptyStateSpace, ShapeMismatch, TooFewRelays
from relaydp.topology import NetworkConfig, prepare
from relaydp.trellis import (
    BranchWeights,
    branch_weight,
    build_branch_weights,
    dump_stage_weights,
    enumerate_states,
    n_states,
    stage_spaces,
)
from relaydp.dp import dp_solve

from conftest import random_instance

UNIT = dict(tx_power_dbm=30.0, noise_power_dbm=30.0)


def test_enumerate_two_of_three():
    sp = enumerate_states(2, 3)
    assert [sp[k] for k in range(len(sp))] == [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]


@pytest.mark.parametrize("n,m,z", [(1, 4, 4), (3, 4, 24), (2, 6, 30), (5, 6, 720)])
def test_state_count(n, m, z):
    assert n_states(n, m) == z
    assert len(enumerate_states(n, m)) == z


def test_states_distinct_injective_sorted():
    sp = enumerate_states(3, 5)
    rows = [tuple(r) for r in sp.states]
    assert rows == sorted(set(rows))
    assert all(len(set(r)) == 3 for r in rows)
    assert all(sp.index(r) == k for k, r in enumerate(rows))


def test_enumerate_skips_dummies():
    sp = enumerate_states(2, 4, dummy_mask={3})
    assert len(sp) == 6
    assert 3 not in sp.states
    with pytest.raises(TooFewRelays):
        enumerate_states(3, 4, dummy_mask={0, 1})


def test_index_of_unknown_state():
    with pytest.raises(KeyError):
        enumerate_states(2, 3).index((1, 1))


def test_branch_weight_is_minimum():
    g = np.array([[2.0, 1.0], [1.0, 3.0]])
    cfg = prepare(NetworkConfig(2, 2, 2, 1.0, **UNIT))
    assert branch_weight(g, [0, 1], [0, 1], cfg) == pytest.approx(1.0)


def test_branch_through_dummy_is_zero(rng):
    cfg, real = random_instance(rng, n_pairs=2, n_relays=(2, 3), n_hops=3)
    # relay 2 of stage 1 is a dummy: any link into it has zero gain
    assert cfg.stage_dummies(0) == (2,)
    assert branch_weight(real.gains[0], [0, 1], [0, 2], cfg) == 0.0
    assert branch_weight(real.gains[0], [0, 1], [0, 1], cfg) > 0.0


def test_weight_sizes():
    cfg, real = random_instance(np.random.default_rng(1), n_pairs=2, n_relays=3, n_hops=3)
    w = build_branch_weights(real, cfg)
    assert [s.shape for s in w] == [(1, 6), (6, 6), (6, 1)]
    assert w.sizes == (6, 6)


def test_equal_gains_give_equal_weights():
    cfg = prepare(NetworkConfig(2, 3, 4, 1.0, interference_enabled=False, **UNIT))
    real = ChannelRealization(tuple(np.full(cfg.hop_shape(h), 0.7) for h in range(4)))
    for s in build_branch_weights(real, cfg):
        assert np.all(s == s.flat[0])


@pytest.mark.parametrize("interference", [True, False])
def test_weights_match_recomputation(rng, interference):
    for _ in range(5):
        cfg, real = random_instance(rng, n_pairs=2, n_relays=3, n_hops=4, interference_enabled=interference)
        w = build_branch_weights(real, cfg)
        spaces = stage_spaces(cfg)
        ends = [(0, 1)]
        nodes = [ends, *[[sp[k] for k in range(len(sp))] for sp in spaces], ends]
        for h, mat in enumerate(w):
            for a, tx in enumerate(nodes[h]):
                for b, rx in enumerate(nodes[h + 1]):
                    ref = min(hop_sinr(real.gains[h], tx, rx, cfg))
                    assert mat[a, b] == ref


def test_interference_free_matches_link_snr(rng):
    cfg, real = random_instance(rng, n_pairs=2, n_relays=3, n_hops=3, interference_enabled=False)
    w = build_branch_weights(real, cfg).stage(1)
    sp = stage_spaces(cfg)
    p, noise, thr = cfg.tx_power_w, cfg.noise_power_w, cfg.thresholds
    for a, b in itertools.product(range(6), repeat=2):
        tx, rx = sp[0][a], sp[1][b]
        snr = [p * real.gains[1][tx[i], rx[i]] / noise / thr[i] for i in range(2)]
        assert w[a, b] == pytest.approx(min(snr), rel=1e-12)


def test_weights_nonnegative_and_deterministic(rng):
    cfg, real = random_instance(rng, n_pairs=3, n_relays=4, n_hops=3)
    a = build_branch_weights(real, cfg)
    b = build_branch_weights(real, cfg)
    for x, y in zip(a, b):
        assert np.all(x >= 0)
        assert np.array_equal(x, y)


def test_flattening_identity(rng):
    for _ in range(20):
        cfg, real = random_instance(rng)
        w = build_branch_weights(real, cfg)
        spaces = stage_spaces(cfg)
        for _ in range(5):
            path = [int(rng.integers(len(sp))) for sp in spaces]
            relays = [sp[z] for sp, z in zip(spaces, path)]
            net = path_sinr(real, relays, cfg).min()
            assert abs(w.path_value(path) - net) <= 1e-12 * max(net, 1e-300)


def test_label_permutation_keeps_optimum(rng):
    for _ in range(10):
        cfg, real = random_instance(rng, n_pairs=2, n_relays=3, n_hops=4)
        value = dp_solve(build_branch_weights(real, cfg))[0].value
        perm = [1, 0]
        swapped = list(real.gains)
        swapped[0] = swapped[0][perm, :]
        swapped[-1] = swapped[-1][:, perm]
        cfg2 = cfg.replace(sinr_thresholds=tuple(cfg.thresholds[perm]))
        value2 = dp_solve(build_branch_weights(ChannelRealization(tuple(swapped)), cfg2))[0].value
        assert value2 == pytest.approx(value, rel=1e-12)


def test_lazy_equals_materialized(rng):
    cfg, real = random_instance(rng, n_pairs=2, n_relays=4, n_hops=5)
    lazy = build_branch_weights(real, cfg, lazy=True)
    full = build_branch_weights(real, cfg)
    assert lazy.lazy and not full.lazy
    for x, y in zip(lazy, full):
        assert np.array_equal(x, y)
    assert all(np.array_equal(x, y) for x, y in zip(lazy.materialize(), full))


def test_shape_errors(rng):
    cfg, real = random_instance(rng, n_pairs=2, n_relays=3, n_hops=3)
    with pytest.raises(ShapeMismatch):
        build_branch_weights(real, cfg.replace(relays_per_hop=4))
    with pytest.raises(ShapeMismatch):
        BranchWeights.from_matrices([np.ones((1, 3)), np.ones((2, 1))])
    with pytest.raises(ShapeMismatch):
        BranchWeights.from_matrices([np.ones((1, 3))])
    with pytest.raises(EmptyStateSpace):
        BranchWeights.from_matrices([np.ones((1, 0)), np.ones((0, 1))])


def test_stage_dump(tmp_path, rng):
    cfg, real = random_instance(rng, n_pairs=2, n_relays=3, n_hops=3)
    w = build_branch_weights(real, cfg)
    path = tmp_path / "stage1.csv"
    dump_stage_weights(w, 1, path)
    back = np.loadtxt(path, delimiter=",")
    assert np.array_equal(back, w.stage(1))
