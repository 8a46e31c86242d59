"""Content-addressed on-disk cache of series expansions.

Entries are JSON files named by the SHA-256 of the canonical expression text
and modulus.  The order is stored in the payload rather than the key, so a
deeper expansion serves any shallower request.  Writes go to a temp file in
the same directory and are renamed into place.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import shutil
import tempfile
import time
from pathlib import Path

from .expr import EtaExpr, evaluate
from .series import Series

log = logging.getLogger(__name__)

CACHE_VERSION = "qcong-cache/1"
ENV_VAR = "QC_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env).expanduser()
    return Path("~/.cache/qcong").expanduser()


def cache_key(text: str, modulus: int | None) -> str:
    blob = json.dumps([CACHE_VERSION, text, modulus])
    return hashlib.sha256(blob.encode()).hexdigest()


class CorruptEntry(ValueError):
    pass


class SeriesCache:
    def __init__(self, directory: str | Path | None = None):
        self.directory = Path(directory) if directory else default_cache_dir()
        self.hits = 0
        self.misses = 0

    def path_for(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def _load(self, path: Path) -> dict:
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
            if payload["version"] != CACHE_VERSION:
                return {}
            coeffs = [int(c) for c in payload["coeffs"]]
            if len(coeffs) != payload["order"]:
                raise CorruptEntry("coefficient count does not match order")
            if cache_key(payload["expression"], payload["modulus"]) != path.stem:
                raise CorruptEntry("key does not match payload")
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise CorruptEntry(str(exc)) from exc
        payload["coeffs"] = coeffs
        return payload

    def _quarantine(self, path: Path, reason: str):
        target = self.directory / "quarantine"
        target.mkdir(parents=True, exist_ok=True)
        dest = target / f"{path.name}.{time.time_ns()}"
        log.warning("corrupt cache entry %s (%s); moved to %s",
                    path.name, reason, dest)
        try:
            shutil.move(str(path), dest)
        except OSError:
            pass

    def get(self, text: str, order: int,
            modulus: int | None = None) -> Series | None:
        """Return the first ``order`` coefficients if a deep enough entry exists."""
        path = self.path_for(cache_key(text, modulus))
        if not path.exists():
            self.misses += 1
            return None
        try:
            payload = self._load(path)
        except CorruptEntry as exc:
            self._quarantine(path, str(exc))
            self.misses += 1
            return None
        if not payload or payload["order"] < order:
            self.misses += 1
            return None
        self.hits += 1
        return Series(payload["coeffs"][:order], modulus)

    def put(self, text: str, series: Series) -> Path:
        key = cache_key(text, series.modulus)
        path = self.path_for(key)
        self.directory.mkdir(parents=True, exist_ok=True)
        if path.exists():
            try:
                if self._load(path).get("order", 0) >= series.order:
                    return path
            except CorruptEntry as exc:
                self._quarantine(path, str(exc))
        payload = {
            "version": CACHE_VERSION,
            "key": key,
            "expression": text,
            "modulus": series.modulus,
            "order": series.order,
            "coeffs": [str(c) for c in series.coeffs],
            "created_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        }
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=f".{key[:12]}",
                                   suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(payload, fh)
            os.replace(tmp, path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise
        return path

    def expand(self, e: EtaExpr, order: int,
               modulus: int | None = None) -> Series:
        """Cached drop-in for :func:`qcong.expr.evaluate`."""
        text = str(e)
        hit = self.get(text, order, modulus)
        if hit is not None:
            return hit
        series = evaluate(e, order, modulus)
        self.put(text, series)
        return series

    def stats(self) -> dict:
        entries = list(self.directory.glob("*.json")) if self.directory.exists() else []
        quarantined = self.directory / "quarantine"
        return {
            "directory": str(self.directory),
            "entries": len(entries),
            "bytes": sum(p.stat().st_size for p in entries),
            "quarantined": len(list(quarantined.iterdir()))
            if quarantined.exists() else 0,
        }

    def clear(self) -> int:
        removed = 0
        if not self.directory.exists():
            return 0
        for p in self.directory.glob("*.json"):
            p.unlink()
            removed += 1
        shutil.rmtree(self.directory / "quarantine", ignore_errors=True)
        return removed
