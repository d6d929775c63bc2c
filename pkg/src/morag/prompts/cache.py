"""Append-only completion cache.

Each record is one JSON line ``{key, prompt, completion, timestamp}``. The
file is replayed at open (last record per key wins) and appended on every new
completion, so runs against the same inputs are reproducible offline. Access
is serialized with a lock: single writer, readers see a consistent dict.
"""

import json
import threading
import time
from pathlib import Path

from ..errors import DataError


class PromptCache:
    def __init__(self, path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._table = {}
        if self.path.exists():
            self._replay()

    def _replay(self) -> None:
        for lineno, line in enumerate(
            self.path.read_text(encoding="utf-8").splitlines(), start=1
        ):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
                self._table[record["key"]] = record["completion"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise DataError(
                    f"{self.path}:{lineno}: invalid cache record: {exc}"
                ) from exc

    def get(self, key: str) -> str | None:
        with self._lock:
            return self._table.get(key)

    def put(self, key: str, prompt: str, completion: str) -> None:
        record = {
            "key": key,
            "prompt": prompt,
            "completion": completion,
            "timestamp": time.time(),
        }
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(record, sort_keys=True) + "\n")
            self._table[key] = completion

    def __len__(self) -> int:
        with self._lock:
            return len(self._table)
