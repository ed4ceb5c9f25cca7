"""Content-addressed store for Monte-Carlo weight estimates."""
from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

from .integrate import WeightEstimate


def cache_key(graph_text: str, chart: str, samples: int, seed: int) -> str:
    blob = json.dumps({"graph": graph_text, "chart": chart, "samples": samples, "seed": seed},
                      sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


class WeightCache:
    """In-memory map with an optional on-disk mirror (one JSON file per key)."""

    def __init__(self, directory: str | Path | None = None):
        self.directory = Path(directory) if directory else None
        self._mem: dict[str, WeightEstimate] = {}
        self.hits = 0
        self.misses = 0

    @classmethod
    def from_env(cls) -> "WeightCache":
        return cls(os.environ.get("KVDEFORM_CACHE") or None)

    def _path(self, key: str) -> Path:
        return self.directory / key[:2] / f"{key}.json"

    def get(self, key: str) -> WeightEstimate | None:
        if key in self._mem:
            self.hits += 1
            return self._mem[key]
        if self.directory is not None:
            path = self._path(key)
            if path.exists():
                d = json.loads(path.read_text())
                extra = {k: d[k] for k in d if k not in ("value", "stderr", "samples", "seed", "median_of_means")}
                est = WeightEstimate(d["value"], d["stderr"], d["samples"], d["seed"], d["median_of_means"], extra)
                self._mem[key] = est
                self.hits += 1
                return est
        self.misses += 1
        return None

    def put(self, key: str, est: WeightEstimate) -> None:
        self._mem[key] = est
        if self.directory is not None:
            path = self._path(key)
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps(est.to_json(), sort_keys=True))
            os.replace(tmp, path)


_DEFAULT: WeightCache | None = None


def default_cache() -> WeightCache:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = WeightCache.from_env()
    return _DEFAULT


def set_default_cache(cache: WeightCache | None) -> None:
    global _DEFAULT
    _DEFAULT = cache
