# -*- coding: utf-8 -*-
"""
磁盘缓存与 LRU 回收
"""

import os
import threading

import pytest

from style_audit.clients.cache import DiskCache, cache_gc, cache_key
from style_audit.errors import ConfigError


def _fill(cache: DiskCache, n: int, size: int = 200):
    paths = []
    for i in range(n):
        key = cache_key("model", f"text {i}")
        cache.put("emb", key, {"model": "model", "vector": "x" * size})
        p = cache.path("emb", key)
        # 时间依次递增：i 越大越新
        os.utime(p, (1_000_000 + i, 1_000_000 + i))
        paths.append(p)
    return paths


def _size(root):
    return sum(p.stat().st_size for p in root.rglob("*.json"))


def test_cache_key_separates_parts():
    assert cache_key("ab", "c") != cache_key("a", "bc")
    assert len(cache_key("m", "t")) == 64


def test_get_or_create_calls_factory_once(tmp_path):
    cache = DiskCache(tmp_path)
    calls = []

    def factory():
        calls.append(1)
        return {"output": "value"}

    results = []
    threads = [
        threading.Thread(target=lambda: results.append(cache.get_or_create("gen", "k", factory)))
        for _ in range(8)
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(calls) == 1
    assert sorted(created for _, created in results) == [False] * 7 + [True]
    assert DiskCache(tmp_path).get("gen", "k") == {"output": "value"}


def test_corrupt_entry_is_a_miss(tmp_path):
    cache = DiskCache(tmp_path)
    cache.path("gen", "bad").write_text("{oops", encoding="utf-8")
    assert cache.get("gen", "bad") is None


def test_factory_error_not_cached(memory_cache):
    def boom():
        raise RuntimeError("no")

    with pytest.raises(RuntimeError):
        memory_cache.get_or_create("gen", "k", boom)
    assert memory_cache.get("gen", "k") is None


def test_unwritable_cache_dir(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(ConfigError):
        DiskCache(blocker / "cache")


class TestGc:
    def test_under_limit_reclaims_nothing(self, tmp_path):
        _fill(DiskCache(tmp_path), 3)
        assert cache_gc(tmp_path, 10**9) == 0

    def test_double_limit_evicts_oldest_first(self, tmp_path):
        paths = _fill(DiskCache(tmp_path), 10)
        total = _size(tmp_path)
        reclaimed = cache_gc(tmp_path, total // 2)
        assert reclaimed >= total // 2
        assert _size(tmp_path) <= total // 2
        assert paths[-1].exists()
        assert not paths[0].exists()

    def test_zero_empties_cache(self, tmp_path):
        _fill(DiskCache(tmp_path), 4)
        cache_gc(tmp_path, 0)
        assert _size(tmp_path) == 0

    def test_protected_entries_survive(self, tmp_path):
        paths = _fill(DiskCache(tmp_path), 4)
        cache_gc(tmp_path, 0, protected=[paths[0]])
        assert paths[0].exists()
        assert not any(p.exists() for p in paths[1:])

    def test_hit_refreshes_recency(self, tmp_path):
        cache = DiskCache(tmp_path)
        paths = _fill(cache, 4)
        assert cache.get("emb", cache_key("model", "text 0")) is not None
        entry = paths[0].stat().st_size
        cache_gc(tmp_path, _size(tmp_path) - entry)
        assert paths[0].exists()
        assert not paths[1].exists()

    def test_missing_dir(self, tmp_path):
        with pytest.raises(ConfigError):
            cache_gc(tmp_path / "nope", 0)
