"""Plain-text cache directory with a format header and atomic writes."""

from __future__ import annotations

import hashlib
import io
import os
from pathlib import Path

import numpy as np

from ..fermat.lines import BASIS_TABLE

CACHE_FORMAT = 1


def header_hash() -> str:
    """Hash of the hardcoded basis-line table and the cache format version."""
    blob = repr((CACHE_FORMAT, BASIS_TABLE)).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


class Cache:
    def __init__(self, directory):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.tag = header_hash()

    @property
    def header(self) -> str:
        return f"# k3sextic-cache {self.tag}\n"

    def path(self, name: str) -> Path:
        return self.dir / name

    def _atomic(self, name: str, data: bytes) -> Path:
        p = self.path(name)
        p.parent.mkdir(parents=True, exist_ok=True)
        tmp = p.with_name(p.name + ".tmp")
        with open(tmp, "wb") as f:
            f.write(data)
        os.replace(tmp, p)
        return p

    def write_text(self, name: str, body: str) -> Path:
        return self._atomic(name, (self.header + body).encode())

    def read_text(self, name: str) -> str | None:
        """Body of a cached file, or None if missing or written under another header."""
        p = self.path(name)
        if not p.exists():
            return None
        text = p.read_text()
        if not text.startswith(self.header):
            return None
        return text[len(self.header):]

    def write_arrays(self, name: str, **arrays) -> Path:
        buf = io.BytesIO()
        np.savez(buf, tag=np.array(self.tag), **arrays)
        return self._atomic(name, buf.getvalue())

    def read_arrays(self, name: str) -> dict | None:
        p = self.path(name)
        if not p.exists():
            return None
        with np.load(p) as z:
            if str(z["tag"]) != self.tag:
                return None
            return {k: z[k] for k in z.files if k != "tag"}
