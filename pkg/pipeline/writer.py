import logging
import os
import threading
from pathlib import Path
from typing import IO, Any, Dict, Iterator, List, Optional, Union

import orjson

logger = logging.getLogger(__name__)


class ResultsWriter:
    """Append-only JSON-lines file of per-(knot, n) results."""

    def __init__(self, path: Union[str, Path], truncate: bool = False):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._fp: Optional[IO[bytes]] = None
        self._lines = 0
        self._mode = "wb" if truncate else "ab"

    def _open(self):
        try:
            self._fp = open(self.path, self._mode)
            self._mode = "ab"
            logger.info(f"Writing results to {self.path}")
        except Exception as e:
            logger.error(f"Error opening results file {self.path}: {e}")
            raise

    def write_line(self, obj: Dict[str, Any]):
        line = orjson.dumps(obj, option=orjson.OPT_SORT_KEYS)
        with self._lock:
            if self._fp is None:
                self._open()
            try:
                self._fp.write(line + b"\n")
                self._fp.flush()
                self._lines += 1
            except Exception as e:
                logger.error(f"Error writing to file {self.path}: {e}")
                raise

    @property
    def lines_written(self) -> int:
        return self._lines

    def close(self):
        with self._lock:
            if self._fp:
                try:
                    self._fp.flush()
                    os.fsync(self._fp.fileno())
                    self._fp.close()
                    self._fp = None
                    logger.info(f"Results writer closed: {self.path} ({self._lines} lines)")
                except Exception as e:
                    logger.error(f"Error closing results writer: {e}")

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()


def iter_results(path: Union[str, Path]) -> Iterator[Dict[str, Any]]:
    """Yield parsed lines of a results file, skipping lines that do not parse."""
    with open(path, "rb") as f:
        for lineno, raw in enumerate(f, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                yield orjson.loads(raw)
            except orjson.JSONDecodeError:
                logger.warning(f"Skipping malformed result line {path}:{lineno}")


def read_recent(path: Union[str, Path], limit: int = 20) -> List[Dict[str, Any]]:
    if not Path(path).exists():
        return []
    lines = list(iter_results(path))
    return lines[-limit:] if limit > 0 else []
