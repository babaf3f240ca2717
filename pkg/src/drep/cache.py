"""On-disk result cache keyed by RunManifest digests."""

from __future__ import annotations

import json
import logging
import threading
from pathlib import Path
from typing import Any, Callable, Optional

from drep.config import get_settings
from drep.models import RunManifest

logger = logging.getLogger(__name__)

_write_lock = threading.Lock()


def dumps(payload: Any) -> str:
    """The one JSON rendering used for cache files and CLI output."""
    return json.dumps(payload, indent=2, sort_keys=True)


class ResultCache:
    """JSON blobs under ``directory/<key[:2]>/<key>.json``; a None directory disables caching."""

    def __init__(self, directory: Optional[Path]) -> None:
        self.directory = Path(directory).expanduser() if directory is not None else None
        self.hits = 0
        self.misses = 0

    @classmethod
    def from_settings(cls, cache_dir: Optional[str] = None, *, disabled: bool = False) -> "ResultCache":
        if disabled:
            return cls(None)
        if cache_dir:
            return cls(Path(cache_dir))
        return cls(get_settings().cache_dir)

    @property
    def enabled(self) -> bool:
        return self.directory is not None

    def path_for(self, key: str) -> Path:
        if self.directory is None:
            raise RuntimeError("cache is disabled")
        return self.directory / key[:2] / f"{key}.json"

    def get(self, manifest: RunManifest) -> Optional[Any]:
        if not self.enabled:
            return None
        key = manifest.cache_key()
        path = self.path_for(key)
        if not path.exists():
            self.misses += 1
            return None
        try:
            blob = json.loads(path.read_text(encoding="utf-8"))
            if blob.get("key") != key or "result" not in blob:
                raise ValueError("key mismatch")
        except (OSError, ValueError, AttributeError) as e:
            logger.warning(f"corrupt cache entry {path}: {e}; recomputing")
            try:
                path.unlink()
            except OSError:
                pass
            self.misses += 1
            return None
        self.hits += 1
        logger.debug(f"cache hit {key[:12]} ({manifest.command})")
        return blob["result"]

    def put(self, manifest: RunManifest, result: Any) -> Any:
        """Store ``result`` unless another writer got there first; returns the stored value."""
        if not self.enabled:
            return result
        key = manifest.cache_key()
        path = self.path_for(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        blob = {"key": key, "command": manifest.command, "params": manifest.params, "result": result}
        with _write_lock:
            try:
                with open(path, "x", encoding="utf-8") as fh:
                    fh.write(dumps(blob))
            except FileExistsError:
                existing = self.get(manifest)
                if existing is not None:
                    return existing
                with open(path, "w", encoding="utf-8") as fh:
                    fh.write(dumps(blob))
        logger.debug(f"cached {key[:12]} ({manifest.command})")
        return result

    def fetch(self, manifest: RunManifest, compute: Callable[[], Any]) -> Any:
        cached = self.get(manifest)
        if cached is not None:
            return cached
        # fresh and replayed results both pass through JSON
        return self.put(manifest, json.loads(dumps(compute())))
