"""Tests for report models and run manifests."""

from drep.models import BettiTable, RunManifest


def test_manifest_key_ignores_run_id_and_time():
    """Two runs of the same command share a cache key."""
    a = RunManifest(command="cyclic", digest="d", params={"max_weight": 4}, version="0.1.0")
    b = RunManifest(command="cyclic", digest="d", params={"max_weight": 4}, version="0.1.0")
    assert a.run_id != b.run_id
    assert a.cache_key() == b.cache_key()
    assert a.cache_key() != RunManifest(command="cyclic", digest="d", params={"max_weight": 5}).cache_key()


def test_betti_table_accessors():
    """dim, nonzero and euler read the stored cells."""
    table = BettiTable.from_dims({(0, 0): 1, (1, 2): 2, (2, 2): 1, (0, 1): 0}, lower_bounds={(2, 2)})
    assert table.dim(1, 2) == 2
    assert table.dim(5, 5) == 0
    assert table.nonzero() == {(0, 0): 1, (1, 2): 2, (2, 2): 1}
    assert table.euler() == {0: 1, 1: 0, 2: -1}
    assert table.weights() == [0, 1, 2]
    assert [c.lower_bound for c in table.cells if c.weight == 2] == [False, True]


def test_betti_table_round_trips_through_json():
    """The CLI replays cached tables from their JSON form."""
    table = BettiTable.from_dims({(0, 1): 3}, meta={"presentation": "dual-numbers"})
    assert BettiTable.model_validate(table.model_dump(mode="json")) == table
