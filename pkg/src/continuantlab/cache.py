"""Optional JSON memo cache, enabled by the CONTINUANT_LAB_CACHE env var.

When the variable names a directory, expensive pure computations
(dimensions, congruence closures) memoize their results there as small
JSON files keyed by a hash of their parameters.  Unset, everything
recomputes; stale files can simply be deleted.
"""

from __future__ import annotations

import hashlib
import json
import os


def _cache_dir() -> str | None:
    return os.environ.get("CONTINUANT_LAB_CACHE") or None


def _path(kind: str, key: dict) -> str | None:
    root = _cache_dir()
    if root is None:
        return None
    blob = json.dumps(key, sort_keys=True, separators=(",", ":"))
    h = hashlib.sha256(blob.encode()).hexdigest()[:24]
    return os.path.join(root, f"{kind}-{h}.json")


def cached_json(kind: str, key: dict, store: dict | None = None):
    """Fetch (store=None) or write (store=dict) a memoized JSON record."""
    path = _path(kind, key)
    if path is None:
        return None
    if store is None:
        try:
            with open(path) as fh:
                rec = json.load(fh)
            return rec["value"] if rec.get("key") == key else None
        except (OSError, ValueError, KeyError):
            return None
    os.makedirs(os.path.dirname(path), exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump({"key": key, "value": store}, fh)
    os.replace(tmp, path)
    return store
