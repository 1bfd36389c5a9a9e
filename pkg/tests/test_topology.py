import pytest

from relaydp import topology
from relaydp.errors import ConfigError, NonPositiveParameter, ThresholdCountMismatch, TooFewRelays
from relaydp.topology import NetworkConfig, pad_dummy_relays, validate


def test_reference_scenario_is_valid():
    cfg = validate(NetworkConfig(3, 4, 6, 3.0))
    assert cfg.relays_per_hop == (4,) * 5
    assert cfg.hop_distance_km == pytest.approx(0.5)


def test_degenerate_single_path_network():
    cfg = validate(NetworkConfig(1, 1, 2, 1.0))
    assert cfg.relays_per_hop == (1,)
    assert cfg.n_stages == 1


def test_too_few_relays():
    with pytest.raises(TooFewRelays):
        validate(NetworkConfig(2, 1, 3, 1.0))


def test_too_few_relays_in_one_stage():
    # padding cannot create usable relays
    with pytest.raises(TooFewRelays):
        validate(NetworkConfig(2, (1, 2), 3, 1.0))


@pytest.mark.parametrize("field,value", [
    ("total_distance_km", 0.0),
    ("total_distance_km", -1.0),
    ("path_loss_exponent", 0.0),
    ("shadowing_std_db", -1.0),
    ("sinr_thresholds", (1.0, 0.0)),
])
def test_non_positive_parameters(field, value):
    cfg = NetworkConfig(2, 3, 3, 1.0).replace(**{field: value})
    with pytest.raises(NonPositiveParameter):
        validate(cfg)


def test_threshold_count_mismatch():
    with pytest.raises(ThresholdCountMismatch):
        validate(NetworkConfig(3, 4, 3, 1.0, sinr_thresholds=(1.0, 2.0)))


def test_relay_list_length_checked():
    with pytest.raises(ConfigError):
        validate(NetworkConfig(1, (2, 2, 2), 3, 1.0))


def test_validate_idempotent():
    cfg = NetworkConfig(2, (3, 5, 4), 4, 2.0, sinr_thresholds=(2.0,))
    once = validate(cfg)
    assert validate(once) == once
    assert once.sinr_thresholds == (2.0, 2.0)


def test_padding_counts():
    padded, mask = pad_dummy_relays(NetworkConfig(2, (3, 5, 4), 4, 1.0))
    assert padded.relays_per_hop == (5, 5, 5)
    assert [len(d) for d in mask] == [2, 0, 1]
    assert mask == ((3, 4), (), (4,))


def test_padding_uniform_unchanged():
    padded, mask = pad_dummy_relays(NetworkConfig(2, (4, 4), 3, 1.0))
    assert padded.relays_per_hop == (4, 4)
    assert mask == ((), ())


def test_padding_idempotent():
    padded, mask = pad_dummy_relays(NetworkConfig(2, (3, 5, 4), 4, 1.0))
    again, mask2 = pad_dummy_relays(padded)
    assert again == padded and mask2 == mask


def test_config_text_roundtrip(tmp_path):
    path = tmp_path / "net.cfg"
    path.write_text(
        "# scenario\n"
        "n_pairs = 2\n"
        "relays_per_hop = 3, 4\n"
        "n_hops = 3\n"
        "total_distance_km = 2.5   # km\n"
        "sinr_thresholds_db = 3\n"
        "interference_enabled = off\n"
    )
    cfg = validate(topology.load_config(path))
    assert cfg.relays_per_hop == (3, 4)
    assert cfg.sinr_thresholds == pytest.approx((10 ** 0.3, 10 ** 0.3))
    assert cfg.interference_enabled is False


def test_config_text_rejects_unknown_key():
    with pytest.raises(ConfigError):
        topology.config_from_mapping(topology.parse_config_text("n_pairs = 1\nbogus = 3\n"))


def test_config_text_requires_core_keys():
    with pytest.raises(ConfigError):
        topology.config_from_mapping({"n_pairs": "1"})


def test_unit_conversions():
    assert topology.dbm_to_watts(30.0) == pytest.approx(1.0)
    assert topology.dbm_to_watts(-100.0) == pytest.approx(1e-13)
