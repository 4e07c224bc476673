"""
Caching utilities for hardydiv.

Local divergence solves on the same patch geometry share one sparse factorization
of the energy operator; sweeps over weights and test functions hit this cache.
"""

import hashlib
import threading
from typing import Any, Callable, Hashable, Optional

from cachetools import LRUCache

from hardydiv.core.config import get_settings
from hardydiv.core.logging import get_logger

logger = get_logger("cache")


class FactorizationCache:
    """
    LRU cache for factorized operators.

    Features:
    - Keys built from patch geometry
    - Thread-safe get-or-build (sweep rows run concurrently)
    - Hit/miss statistics
    """

    def __init__(self, maxsize: Optional[int] = None):
        settings = get_settings()
        self.maxsize = maxsize or settings.factorization_cache_size
        self._cache: LRUCache = LRUCache(maxsize=self.maxsize)
        self._lock = threading.Lock()
        self._stats = {"hits": 0, "misses": 0}

    def get(self, key: Hashable) -> Optional[Any]:
        """Get value from cache."""
        with self._lock:
            value = self._cache.get(key)
            if value is not None:
                self._stats["hits"] += 1
            else:
                self._stats["misses"] += 1
        logger.debug(f"Cache {'hit' if value is not None else 'miss'}: {key}")
        return value

    def set(self, key: Hashable, value: Any) -> None:
        """Set value in cache."""
        with self._lock:
            self._cache[key] = value

    def get_or_build(self, key: Hashable, builder: Callable[[], Any]) -> Any:
        """Return the cached value for key, building and storing it on a miss."""
        value = self.get(key)
        if value is None:
            value = builder()
            self.set(key, value)
        return value

    def clear(self) -> None:
        """Clear all cached values."""
        with self._lock:
            self._cache.clear()
        logger.info("Factorization cache cleared")

    @property
    def stats(self) -> dict[str, Any]:
        """Get cache statistics."""
        total = self._stats["hits"] + self._stats["misses"]
        hit_rate = self._stats["hits"] / total if total > 0 else 0
        return {
            **self._stats,
            "total": total,
            "hit_rate": round(hit_rate, 3),
            "size": len(self._cache),
        }


def make_cache_key(*args: Any, **kwargs: Any) -> str:
    """Generate a cache key from arguments."""
    key_parts = [repr(arg) for arg in args]
    key_parts.extend(f"{k}={v!r}" for k, v in sorted(kwargs.items()))
    key_str = ":".join(key_parts)
    return hashlib.md5(key_str.encode()).hexdigest()


_factorization_cache: Optional[FactorizationCache] = None


def get_factorization_cache() -> FactorizationCache:
    """Process-wide cache for local energy factorizations."""
    global _factorization_cache
    if _factorization_cache is None:
        _factorization_cache = FactorizationCache()
    return _factorization_cache
