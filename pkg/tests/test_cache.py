"""
Tests for the in-memory memo cache, the on-disk table cache and Config.
"""

import sys
import os
import json
import tempfile

# Add the parent directory to the path so we can import cache
sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), '..'))

from cache import CACHE_FORMAT_VERSION, CacheManager, TableCache, cached, cache_manager
from config import Config, resolve_log_level


def test_cache_manager():
    print("Testing CacheManager...")

    manager = CacheManager()
    assert manager.get("missing") is None
    assert manager.set("key", 42)
    assert manager.get("key") == 42
    assert manager.stats() == {"total_entries": 1, "hits": 1, "misses": 1}
    assert manager.delete("key")
    assert not manager.delete("key")

    manager.enabled = False
    assert not manager.set("key", 1)
    assert manager.get("key") is None

    print("PASS: CacheManager tests passed")


def test_cached_decorator():
    print("Testing the cached decorator...")

    calls = []

    @cached
    def square(x):
        calls.append(x)
        return x * x

    assert square(7) == 49
    assert square(7) == 49
    assert square(8) == 64
    assert calls == [7, 8]
    assert square.__name__ == "square"
    assert square.__wrapped__(3) == 9
    assert calls == [7, 8, 3]

    cache_manager.flush()
    assert square(7) == 49
    assert calls == [7, 8, 3, 7]

    print("PASS: cached decorator tests passed")


def test_table_cache_files():
    print("Testing TableCache files...")

    matrix = ((2, -2), (-2, 2))
    entries = {(1, 0): 1, (0, 1): 1, (1, 1): 1}
    with tempfile.TemporaryDirectory() as tmp:
        store = TableCache(os.path.join(tmp, "tables"))
        assert store.load("abc", matrix) is None
        assert store.info() == []
        assert store.clear() == 0

        path = store.save("abc", matrix, 2, entries)
        with open(path, "r", encoding="utf-8") as handle:
            payload = json.load(handle)
        assert payload["version"] == CACHE_FORMAT_VERSION
        assert payload["entries"][0] == [[0, 1], 1]

        assert store.load("abc", matrix) == (2, entries)
        # A different matrix under the same hash is ignored
        assert store.load("abc", ((2, -3), (-3, 2))) is None

        info = store.info()
        assert info == [{"file": "abc.json", "matrix": [[2, -2], [-2, 2]], "frontier": 2, "entries": 3}]

        store.save("def", matrix, 1, {(1, 0): 1})
        assert store.clear("abc") == 1
        assert [row["file"] for row in store.info()] == ["def.json"]
        assert store.clear() == 1

    print("PASS: TableCache file tests passed")


def test_table_cache_rejects_bad_files():
    print("Testing unreadable and outdated cache files...")

    matrix = ((2, -2), (-2, 2))
    with tempfile.TemporaryDirectory() as tmp:
        store = TableCache(tmp)
        with open(store.path_for("bad"), "w", encoding="utf-8") as handle:
            handle.write("{not json")
        assert store.load("bad", matrix) is None
        assert store.info()[0]["status"] == "unreadable"

        store.save("old", matrix, 1, {(1, 0): 1})
        with open(store.path_for("old"), "r", encoding="utf-8") as handle:
            payload = json.load(handle)
        payload["version"] = CACHE_FORMAT_VERSION + 1
        with open(store.path_for("old"), "w", encoding="utf-8") as handle:
            json.dump(payload, handle)
        assert store.load("old", matrix) is None

    print("PASS: Bad cache file tests passed")


def test_config():
    print("Testing Config...")

    cfg = Config()
    assert cfg.output == "pretty"
    assert cfg.truncation_order == 256

    changed = cfg.with_overrides(output="json", threads=None, log_level="debug")
    assert changed.output == "json"
    assert changed.threads == 1
    assert changed.log_level == "DEBUG"
    assert cfg.output == "pretty"

    assert Config(log_level="loud").log_level == "INFO"

    for bad in ({"truncation_order": 0}, {"threads": -1}, {"output": "xml"}):
        try:
            cfg.with_overrides(**bad)
            assert False, f"Should have raised ValueError for {bad}"
        except ValueError:
            pass  # Expected

    assert resolve_log_level("warning") == 30
    assert resolve_log_level("nonsense") == 20

    print("PASS: Config tests passed")


if __name__ == "__main__":
    # Run all tests
    try:
        test_cache_manager()
        test_cached_decorator()
        test_table_cache_files()
        test_table_cache_rejects_bad_files()
        test_config()
        print("\nAll cache tests passed! SUCCESS")
    except Exception as e:
        print(f"\nTest failed: {e}")
        import traceback
        traceback.print_exc()
        sys.exit(1)
