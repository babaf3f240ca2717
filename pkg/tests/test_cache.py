"""Tests for the on-disk result cache."""

import json

from drep.cache import ResultCache
from drep.models import RunManifest


def _manifest(**params):
    return RunManifest(command="homology", digest="abc", params=params, version="0.1.0")


def test_put_then_get(tmp_path):
    """A stored result comes back and counts as a hit."""
    cache = ResultCache(tmp_path)
    m = _manifest(n=1)
    assert cache.get(m) is None
    cache.put(m, {"cells": []})
    assert cache.get(m) == {"cells": []}
    assert (cache.hits, cache.misses) == (1, 1)


def test_key_ignores_run_identity(tmp_path):
    """Two manifests with the same inputs share an entry."""
    cache = ResultCache(tmp_path)
    cache.put(_manifest(n=2), 7)
    assert cache.get(_manifest(n=2)) == 7
    assert cache.get(_manifest(n=3)) is None


def test_fetch_computes_once(tmp_path):
    """The second fetch replays the first result."""
    cache = ResultCache(tmp_path)
    calls = []

    def compute():
        calls.append(1)
        return {"value": (1, 2)}

    first = cache.fetch(_manifest(), compute)
    second = cache.fetch(_manifest(), compute)
    assert first == second == {"value": [1, 2]}
    assert len(calls) == 1


def test_corrupt_entries_are_recomputed(tmp_path):
    """Garbage on disk is removed and treated as a miss."""
    cache = ResultCache(tmp_path)
    m = _manifest()
    path = cache.path_for(m.cache_key())
    path.parent.mkdir(parents=True)
    path.write_text("{not json", encoding="utf-8")
    assert cache.get(m) is None
    assert not path.exists()
    assert cache.fetch(m, lambda: 5) == 5
    assert json.loads(path.read_text(encoding="utf-8"))["result"] == 5


def test_disabled_cache_always_computes(tmp_path):
    """--no-cache wins over any directory."""
    cache = ResultCache.from_settings(str(tmp_path), disabled=True)
    assert not cache.enabled
    assert cache.fetch(_manifest(), lambda: 1) == 1
    assert cache.fetch(_manifest(), lambda: 2) == 2
    assert not list(tmp_path.iterdir())


def test_cache_directory_from_environment(monkeypatch, tmp_path):
    """DREP_CACHE selects the directory; unset means off."""
    monkeypatch.setenv("DREP_CACHE", str(tmp_path))
    assert ResultCache.from_settings().directory == tmp_path
    monkeypatch.delenv("DREP_CACHE")
    assert not ResultCache.from_settings().enabled


def test_results_survive_a_new_cache_instance(tmp_path):
    """put writes to disk, so a fresh ResultCache on the same directory reads it back."""
    m = _manifest(k=1)
    assert ResultCache(tmp_path).get(m) is None
    assert ResultCache(tmp_path).put(m, [1]) == [1]
    assert ResultCache(tmp_path).get(m) == [1]
