"""Bounded memo cache for deterministic, expensive-to-build values.

Provides a lightweight, thread-safe cache with FIFO eviction and a `memoize`
decorator. Cached values must be immutable (tuples, frozen dataclasses, or
read-only numpy arrays) because they are shared between worker threads.

Global instances:
  * `haar_cache`: Haar bin-mass vectors keyed by (n_qubits, n_bins).
  * `instance_cache`: compiled circuit instances keyed by template and size.
"""

from __future__ import annotations

import functools
import threading
from collections import OrderedDict
from collections.abc import Callable, Hashable
from typing import Any, TypeVar

from .constants import MEMO_CACHE_SIZE

T = TypeVar("T")


class MemoCache:
    """Thread-safe bounded memo table."""

    __slots__ = ("_entries", "_lock", "_maxsize")

    def __init__(self, maxsize: int = MEMO_CACHE_SIZE) -> None:
        """Initialize an empty cache holding at most `maxsize` entries."""
        self._entries: OrderedDict[Hashable, Any] = OrderedDict()
        self._lock = threading.RLock()
        self._maxsize = max(1, int(maxsize))

    def get(self, key: Hashable) -> Any | None:
        """Return the cached value for `key`, or None when absent."""
        with self._lock:
            return self._entries.get(key)

    def set(self, key: Hashable, value: Any) -> None:
        """Store a value, evicting the oldest entries beyond the size bound.

        Args:
            key: Hashable cache key.
            value: Value to store (must not be None).

        """
        with self._lock:
            self._entries[key] = value
            while len(self._entries) > self._maxsize:
                self._entries.popitem(last=False)

    def delete(self, key: Hashable) -> None:
        """Remove a key from the cache if present."""
        with self._lock:
            self._entries.pop(key, None)

    def clear(self) -> None:
        """Clear all cached items."""
        with self._lock:
            self._entries.clear()

    def size(self) -> int:
        """Return the number of cached entries."""
        with self._lock:
            return len(self._entries)


def memoize(cache: MemoCache, key_fn: Callable[..., Hashable] | None = None) -> Callable[[Callable[..., T]], Callable[..., T]]:
    """Memoize a function in `cache`.

    Exceptions are never cached. Concurrent first calls may compute the value
    twice; both results are equal, so the later store is harmless.

    Args:
        cache: Target cache.
        key_fn: Builds the key from the call arguments; defaults to
            `(func.__qualname__, args, sorted kwargs)`.

    Returns:
        A decorator.

    """

    def decorator(func: Callable[..., T]) -> Callable[..., T]:
        @functools.wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> T:
            if key_fn is None:
                key: Hashable = (func.__qualname__, args, tuple(sorted(kwargs.items())))
            else:
                key = key_fn(*args, **kwargs)
            cached = cache.get(key)
            if cached is not None:
                return cached  # type: ignore[no-any-return]
            value = func(*args, **kwargs)
            cache.set(key, value)
            return value

        return wrapper

    return decorator


haar_cache = MemoCache()
instance_cache = MemoCache()


def clear_caches() -> None:
    """Clear every global memo cache."""
    haar_cache.clear()
    instance_cache.clear()


__all__ = ["MemoCache", "clear_caches", "haar_cache", "instance_cache", "memoize"]
