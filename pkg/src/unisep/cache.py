"""On-disk element-store cache.

A cache file is one JSON header line followed by fixed-width binary rows, one
per element in canonical store order: the element's canonical bytes, then its
BFS parent (int32, little endian) and generator index (int16, little endian).
Files are content-addressed by the GroupSpec hash; ``UNISEP_CACHE_DIR``
overrides the default location.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .groups import DEFAULT_CAP, ElementStore, GroupSpec, enumerate_group

FORMAT_VERSION = 1
_TAIL = np.dtype([("parent", "<i4"), ("gen", "<i2")])


class CacheError(RuntimeError):
    pass


class CacheMismatch(CacheError):
    """The cache header does not describe the requested GroupSpec."""


class CacheCorrupt(CacheError):
    def __init__(self, path, offset: int, msg: str = "content differs from a fresh enumeration"):
        super().__init__(f"{path}: corrupt at byte offset {offset}: {msg}")
        self.offset = offset


def cache_dir() -> Path:
    env = os.environ.get("UNISEP_CACHE_DIR")
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "unisep"


def cache_path(spec: GroupSpec, key: str | None = None) -> Path:
    stem = (key or spec.name).replace("/", "_").replace(":", "_")
    return cache_dir() / f"{stem}-{spec.spec_hash()[:16]}.store"


def _header(store: ElementStore) -> dict:
    spec = store.spec
    return {
        "format": FORMAT_VERSION,
        "name": spec.name,
        "kind": spec.kind,
        "degree": spec.degree,
        "q": spec.q,
        "order": store.order,
        "spec_hash": spec.spec_hash(),
        "row_bytes": store.domain.width + _TAIL.itemsize,
        "layers": [int(x) for x in store.layer_starts],
    }


def serialize(store: ElementStore) -> bytes:
    head = (json.dumps(_header(store), sort_keys=True) + "\n").encode()
    body = store.canonical_bytes()
    tail = np.empty(store.order, dtype=_TAIL)
    tail["parent"] = store.parent
    tail["gen"] = store.gen
    rows = np.concatenate([body, tail.view(np.uint8).reshape(store.order, _TAIL.itemsize)], axis=1)
    return head + np.ascontiguousarray(rows).tobytes()


def _split(raw: bytes, path) -> tuple[dict, bytes, int]:
    nl = raw.find(b"\n")
    if nl < 0:
        raise CacheCorrupt(path, 0, "missing header line")
    try:
        head = json.loads(raw[:nl])
    except ValueError:
        raise CacheCorrupt(path, 0, "unreadable header") from None
    return head, raw[nl + 1:], nl + 1


def read_header(path) -> dict:
    with open(path, "rb") as fh:
        line = fh.readline()
    try:
        return json.loads(line)
    except ValueError:
        raise CacheCorrupt(path, 0, "unreadable header") from None


def load(spec: GroupSpec, path=None) -> ElementStore:
    path = Path(path) if path is not None else cache_path(spec)
    raw = path.read_bytes()
    head, body, _ = _split(raw, path)
    if head.get("format") != FORMAT_VERSION:
        raise CacheMismatch(f"{path}: format {head.get('format')} != {FORMAT_VERSION}")
    if head.get("spec_hash") != spec.spec_hash():
        raise CacheMismatch(f"{path}: header hash does not match GroupSpec {spec.name!r}")
    dom = spec.domain()
    width = dom.width + _TAIL.itemsize
    order = int(head["order"])
    if len(body) != order * width:
        raise CacheCorrupt(path, len(raw), f"expected {order} rows of {width} bytes")
    rows = np.frombuffer(body, dtype=np.uint8).reshape(order, width)
    data = dom.from_bytes(rows[:, : dom.width].copy())
    tail = np.ascontiguousarray(rows[:, dom.width:]).view(_TAIL).ravel()
    parent = tail["parent"].astype(np.int64)
    gen = tail["gen"].astype(np.int16)
    return ElementStore(spec, dom, data, parent, gen, list(head["layers"]))


def save(store: ElementStore, path=None) -> Path:
    path = Path(path) if path is not None else cache_path(store.spec)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_bytes(serialize(store))
    tmp.replace(path)
    return path


@dataclass
class VerifyResult:
    path: Path
    ok: bool
    offset: int | None = None


def verify(spec: GroupSpec, path=None, cap: int = DEFAULT_CAP) -> VerifyResult:
    """Re-enumerate and compare with the cached file byte for byte."""
    path = Path(path) if path is not None else cache_path(spec)
    raw = path.read_bytes()
    head, _, _ = _split(raw, path)
    if head.get("spec_hash") != spec.spec_hash():
        raise CacheMismatch(f"{path}: header hash does not match GroupSpec {spec.name!r}")
    fresh = serialize(enumerate_group(spec, cap))
    if raw == fresh:
        return VerifyResult(path, True)
    n = min(len(raw), len(fresh))
    diff = np.flatnonzero(np.frombuffer(raw[:n], np.uint8) != np.frombuffer(fresh[:n], np.uint8))
    offset = int(diff[0]) if diff.size else n
    return VerifyResult(path, False, offset)


def clear(spec: GroupSpec | None = None) -> list[Path]:
    """Remove the cache file of ``spec``, or every cache file when None."""
    d = cache_dir()
    if spec is not None:
        targets = [cache_path(spec)]
    else:
        targets = sorted(d.glob("*.store")) if d.exists() else []
    removed = []
    for p in targets:
        if p.exists():
            p.unlink()
            removed.append(p)
    return removed


def get_store(spec: GroupSpec, use_cache: bool = True, cap: int = DEFAULT_CAP) -> ElementStore:
    """Cached store when a valid file exists, otherwise enumerate (and write when caching)."""
    if use_cache:
        p = cache_path(spec)
        if p.exists():
            try:
                return load(spec, p)
            except CacheError:
                pass
    store = enumerate_group(spec, cap)
    if use_cache:
        save(store)
    return store
