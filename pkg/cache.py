import os
import json
import hashlib
import tempfile
from typing import Any, Dict, Optional, Tuple

from config import get_logger

logger = get_logger(__name__)

CACHE_FORMAT_VERSION = 1


class CacheManager:
    """Simple in-memory cache for values that are pure functions of their key."""

    def __init__(self):
        self._cache = {}
        self.enabled = True
        self._hits = 0
        self._misses = 0

    def _make_key(self, key: str) -> str:
        """Create a consistent cache key."""
        return hashlib.md5(key.encode()).hexdigest()

    def get(self, key: str) -> Optional[Any]:
        if not self.enabled:
            return None

        cache_key = self._make_key(key)
        if cache_key in self._cache:
            self._hits += 1
            return self._cache[cache_key]
        self._misses += 1
        return None

    def set(self, key: str, value: Any) -> bool:
        if not self.enabled:
            return False
        self._cache[self._make_key(key)] = value
        return True

    def delete(self, key: str) -> bool:
        cache_key = self._make_key(key)
        if cache_key in self._cache:
            del self._cache[cache_key]
            return True
        return False

    def flush(self):
        """Clear all cache entries."""
        self._cache.clear()

    def stats(self) -> dict:
        return {
            "total_entries": len(self._cache),
            "hits": self._hits,
            "misses": self._misses,
        }


# Global instance
cache_manager = CacheManager()


def cached(func):
    """Memoize a function of hashable positional arguments in cache_manager."""
    def wrapper(*args, **kwargs):
        key_parts = [func.__module__, func.__name__]
        key_parts.extend(repr(arg) for arg in args)
        key_parts.extend(f"{k}:{v!r}" for k, v in sorted(kwargs.items()))
        cache_key = "|".join(key_parts)

        cached_result = cache_manager.get(cache_key)
        if cached_result is not None:
            return cached_result

        result = func(*args, **kwargs)
        cache_manager.set(cache_key, result)
        return result
    wrapper.__name__ = func.__name__
    wrapper.__doc__ = func.__doc__
    wrapper.__wrapped__ = func
    return wrapper


class TableCache:
    """
    On-disk store for multiplicity tables, one JSON file per Cartan matrix.

    File layout: {version, gcm_hash, matrix, frontier, entries: [[coords, mult], ...]}.
    Files are replaced atomically; entries above the recorded frontier are
    treated as a partially written shell and dropped on load.
    """

    def __init__(self, cache_dir: str):
        self.cache_dir = cache_dir

    def path_for(self, gcm_hash: str) -> str:
        return os.path.join(self.cache_dir, f"{gcm_hash}.json")

    def load(self, gcm_hash: str, matrix) -> Optional[Tuple[int, Dict[Tuple[int, ...], int]]]:
        """
        Load (frontier, entries) for a matrix, or None when no usable file exists.

        Args:
            gcm_hash (str): Content hash of the Cartan matrix
            matrix: The matrix rows, compared against the stored copy

        Returns:
            Optional[Tuple[int, Dict]]: Completed frontier and root -> multiplicity map
        """
        path = self.path_for(gcm_hash)
        if not os.path.isfile(path):
            logger.debug(f"No cached table at {path}")
            return None

        try:
            with open(path, "r", encoding="utf-8") as handle:
                payload = json.load(handle)
        except (OSError, ValueError) as e:
            logger.warning(f"Ignoring unreadable table cache {path}: {e}")
            return None

        if payload.get("version") != CACHE_FORMAT_VERSION:
            logger.warning(f"Ignoring table cache {path}: version {payload.get('version')}")
            return None
        if payload.get("gcm_hash") != gcm_hash or payload.get("matrix") != [list(row) for row in matrix]:
            logger.warning(f"Ignoring table cache {path}: matrix mismatch")
            return None

        frontier = int(payload.get("frontier", 0))
        entries: Dict[Tuple[int, ...], int] = {}
        dropped = 0
        for coords, mult in payload.get("entries", []):
            key = tuple(int(c) for c in coords)
            if sum(key) > frontier:
                dropped += 1
                continue
            entries[key] = int(mult)

        if dropped:
            logger.warning(f"Table cache {path} held {dropped} entries past frontier {frontier}; truncated")
            self.save(gcm_hash, matrix, frontier, entries)

        logger.info(f"Loaded cached table {gcm_hash[:12]} with frontier {frontier} ({len(entries)} entries)")
        return frontier, entries

    def save(self, gcm_hash: str, matrix, frontier: int, entries: Dict[Tuple[int, ...], int]) -> str:
        """Write the table atomically and return the file path."""
        os.makedirs(self.cache_dir, exist_ok=True)
        path = self.path_for(gcm_hash)
        ordered = sorted(entries.items(), key=lambda item: (sum(item[0]), item[0]))
        payload = {
            "version": CACHE_FORMAT_VERSION,
            "gcm_hash": gcm_hash,
            "matrix": [list(row) for row in matrix],
            "frontier": frontier,
            "entries": [[list(coords), mult] for coords, mult in ordered],
        }

        fd, tmp_path = tempfile.mkstemp(dir=self.cache_dir, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                json.dump(payload, handle, separators=(",", ":"))
            os.replace(tmp_path, path)
        except Exception:
            if os.path.exists(tmp_path):
                os.remove(tmp_path)
            raise

        logger.debug(f"Flushed table {gcm_hash[:12]} at frontier {frontier}")
        return path

    def clear(self, gcm_hash: Optional[str] = None) -> int:
        """Delete one table file, or every table file when no hash is given."""
        if not os.path.isdir(self.cache_dir):
            return 0
        removed = 0
        for name in os.listdir(self.cache_dir):
            if not name.endswith(".json"):
                continue
            if gcm_hash is not None and name != f"{gcm_hash}.json":
                continue
            os.remove(os.path.join(self.cache_dir, name))
            removed += 1
        logger.info(f"Removed {removed} cached tables from {self.cache_dir}")
        return removed

    def info(self) -> list:
        """Summaries of the stored tables."""
        if not os.path.isdir(self.cache_dir):
            return []
        rows = []
        for name in sorted(os.listdir(self.cache_dir)):
            if not name.endswith(".json"):
                continue
            path = os.path.join(self.cache_dir, name)
            try:
                with open(path, "r", encoding="utf-8") as handle:
                    payload = json.load(handle)
            except (OSError, ValueError):
                rows.append({"file": name, "status": "unreadable"})
                continue
            rows.append({
                "file": name,
                "matrix": payload.get("matrix"),
                "frontier": payload.get("frontier"),
                "entries": len(payload.get("entries", [])),
            })
        return rows
