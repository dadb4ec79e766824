"""
On-disk cache of I^n values, one orjson file per key.

A key is the sha256 of the pipeline version, n and the normalized diagram
text, so editing a diagram or bumping the version simply misses.
"""

import hashlib
import logging
import os
import threading
from pathlib import Path
from typing import Optional, Union

import orjson

from groups.presentation import invariant_from_jsonable
from pipeline.models import InvariantResult

logger = logging.getLogger(__name__)


class InvariantCache:
    def __init__(self, dir_path: Union[str, Path], pipeline_version: str = "1"):
        self.dir = Path(dir_path)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.pipeline_version = str(pipeline_version)
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def key(self, diagram_text: str, n: int) -> str:
        normalized = "".join(diagram_text.split())
        material = f"{self.pipeline_version}\n{n}\n{normalized}".encode("utf-8")
        return hashlib.sha256(material).hexdigest()

    def _path(self, key: str) -> Path:
        return self.dir / f"{key}.json"

    def lookup(self, knot: str, diagram_text: str, n: int) -> Optional[InvariantResult]:
        path = self._path(self.key(diagram_text, n))
        try:
            data = orjson.loads(path.read_bytes())
        except FileNotFoundError:
            with self._lock:
                self.misses += 1
            logger.info(f"Cache miss: {knot} n={n}")
            return None
        except orjson.JSONDecodeError as e:
            logger.warning(f"Ignoring corrupt cache entry {path}: {e}")
            with self._lock:
                self.misses += 1
            return None

        with self._lock:
            self.hits += 1
        logger.info(f"Cache hit: {knot} n={n}")
        return InvariantResult(
            knot=knot,
            n=n,
            invariant=invariant_from_jsonable(data["invariant"]),
            generators=data["generators"],
            relators=data["relators"],
        )

    def store(self, diagram_text: str, result: InvariantResult) -> Path:
        path = self._path(self.key(diagram_text, result.n))
        payload = result.to_jsonable()
        payload.pop("knot")
        tmp = path.with_suffix(".tmp")
        with self._lock:
            with open(tmp, "wb") as f:
                f.write(orjson.dumps(payload, option=orjson.OPT_SORT_KEYS))
                f.flush()
                os.fsync(f.fileno())
            os.replace(tmp, path)
        logger.debug(f"Cached {result.knot} n={result.n} at {path.name}")
        return path
