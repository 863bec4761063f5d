"""Content-addressed on-disk cache of sweep results.

Each entry is one file named by the config hash. Its first line holds the
sha256 of the remaining text (the JSON document). Entries whose checksum or
key does not match are deleted and treated as misses. Writes go through a
temporary file and ``os.replace``, so an interrupted run never leaves a
partial entry behind.
"""

import hashlib
import os
import sys
import tempfile
from pathlib import Path

ENV_VAR = "VORTEXPAIR_CACHE_DIR"


def default_cache_dir():
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "vortexpair"


class ResultCache:
    """Directory-backed cache keyed by :meth:`RunConfig.content_hash`."""

    def __init__(self, root=None, log=sys.stderr):
        self.root = Path(root) if root is not None else default_cache_dir()
        self.log = log
        self.hits = 0
        self.misses = 0
        self.invalidated = 0

    def path(self, key):
        return self.root / f"{key}.json"

    def get(self, key):
        from .emit import from_json

        p = self.path(key)
        try:
            text = p.read_text(encoding="utf-8")
        except FileNotFoundError:
            self.misses += 1
            return None
        except OSError as exc:
            self._note(f"cache read failed for {p}: {exc}")
            self.misses += 1
            return None
        head, _, body = text.partition("\n")
        ok = head == hashlib.sha256(body.encode()).hexdigest()
        result = None
        if ok:
            try:
                result = from_json(body)
                ok = result.config_hash == key
            except (ValueError, KeyError, TypeError):
                ok = False
        if not ok:
            self._note(f"cache entry {p.name} corrupted; recomputing")
            self.invalidate(key)
            self.misses += 1
            return None
        self.hits += 1
        return result

    def put(self, key, result):
        from .emit import to_json

        body = to_json(result)
        text = hashlib.sha256(body.encode()).hexdigest() + "\n" + body
        self.root.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            os.replace(tmp, self.path(key))
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise

    def invalidate(self, key):
        self.invalidated += 1
        try:
            self.path(key).unlink()
        except FileNotFoundError:
            pass

    def clear(self):
        if self.root.is_dir():
            for p in self.root.glob("*.json"):
                p.unlink()

    def _note(self, msg):
        if self.log:
            print(msg, file=self.log)
