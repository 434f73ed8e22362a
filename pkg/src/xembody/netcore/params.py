"""Named parameter collection with optimizer state and checkpoint I/O.

Checkpoint container (documented here, referenced from the README):

    magic   8 bytes  b"XEMBCKPT"
    hlen    4 bytes  little-endian uint32, JSON header length
    header  JSON     {"arrays": [{"name", "kind", "shape", "offset"}...],
                      "steps": {entry: int}, "meta": {...}}
    blob    raw little-endian float64 values, concatenated in header order

Arrays are sorted by (kind, name) and the header JSON uses sorted keys,
so identical contents always produce identical bytes.
"""

from __future__ import annotations

import json

import numpy as np

from .tensor import Tensor

_MAGIC = b"XEMBCKPT"


class ParamStore:
    """Uniquely named, shape-frozen float64 arrays plus Adam moments."""

    def __init__(self):
        self._entries: dict[str, Tensor] = {}
        self._m: dict[str, np.ndarray] = {}
        self._v: dict[str, np.ndarray] = {}
        self._t: dict[str, int] = {}

    def add(self, name: str, value) -> Tensor:
        if name in self._entries:
            raise ValueError(f"duplicate parameter name: {name!r}")
        arr = np.array(value, dtype=np.float64)
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"non-finite initial value for {name!r}")
        t = Tensor(arr, requires_grad=True)
        self._entries[name] = t
        self._m[name] = np.zeros_like(arr)
        self._v[name] = np.zeros_like(arr)
        self._t[name] = 0
        return t

    def __getitem__(self, name: str) -> Tensor:
        return self._entries[name]

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def names(self):
        return list(self._entries)

    def items(self):
        return self._entries.items()

    def moments(self, name: str):
        return self._m[name], self._v[name], self._t[name]

    def set_moments(self, name: str, m, v, t):
        if m.shape != self._entries[name].shape or v.shape != m.shape:
            raise ValueError(f"moment shape mismatch for {name!r}")
        self._m[name] = m
        self._v[name] = v
        self._t[name] = int(t)

    def set_value(self, name: str, value):
        """Overwrite an entry's values; the shape stays frozen."""
        arr = np.asarray(value, dtype=np.float64)
        ent = self._entries[name]
        if arr.shape != ent.data.shape:
            raise ValueError(f"shape change for {name!r}: "
                             f"{ent.data.shape} -> {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"non-finite value for {name!r}")
        ent.data = arr.copy()

    def zero_grads(self):
        for t in self._entries.values():
            t.grad = None

    def grads(self) -> dict[str, np.ndarray]:
        """Gradients after a backward pass; absent grads are zeros."""
        out = {}
        for name, t in self._entries.items():
            if t.grad is None:
                out[name] = np.zeros_like(t.data)
            else:
                out[name] = np.broadcast_to(t.grad, t.data.shape).astype(
                    np.float64, copy=True)
        return out

    # -- checkpoint I/O ----------------------------------------------------

    def save(self, path, extra_arrays: dict[str, np.ndarray] | None = None,
             meta: dict | None = None):
        """Write params, moments, extra arrays, and metadata to one file."""
        records = []
        for name, t in sorted(self._entries.items()):
            records.append(("param", name, t.data))
        for name in sorted(self._m):
            records.append(("m", name, self._m[name]))
            records.append(("v", name, self._v[name]))
        for name in sorted(extra_arrays or {}):
            records.append(("extra", name, np.asarray(extra_arrays[name],
                                                      dtype=np.float64)))
        records.sort(key=lambda r: (r[0], r[1]))
        header = {"arrays": [], "steps": dict(sorted(self._t.items())),
                  "meta": meta or {}}
        offset = 0
        blobs = []
        for kind, name, arr in records:
            header["arrays"].append({"name": name, "kind": kind,
                                     "shape": list(arr.shape),
                                     "offset": offset})
            blob = arr.astype("<f8").tobytes()
            blobs.append(blob)
            offset += len(blob)
        hjson = json.dumps(header, sort_keys=True).encode("utf-8")
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(len(hjson).to_bytes(4, "little"))
            fh.write(hjson)
            for blob in blobs:
                fh.write(blob)

    @classmethod
    def load(cls, path):
        """Read a checkpoint; returns (store, extra_arrays, meta)."""
        with open(path, "rb") as fh:
            if fh.read(8) != _MAGIC:
                raise ValueError(f"{path}: not a checkpoint file")
            hlen = int.from_bytes(fh.read(4), "little")
            header = json.loads(fh.read(hlen).decode("utf-8"))
            blob = fh.read()
        arrays = {}
        for rec in header["arrays"]:
            shape = tuple(rec["shape"])
            n = int(np.prod(shape)) if shape else 1
            start = rec["offset"]
            arr = np.frombuffer(blob, dtype="<f8", count=n,
                                offset=start).reshape(shape).copy()
            arrays[(rec["kind"], rec["name"])] = arr
        store = cls()
        extra = {}
        for (kind, name), arr in arrays.items():
            if kind == "param":
                store.add(name, arr)
            elif kind == "extra":
                extra[name] = arr
        for (kind, name), arr in arrays.items():
            if kind == "m":
                store._m[name] = arr
            elif kind == "v":
                store._v[name] = arr
        for name, t in header.get("steps", {}).items():
            store._t[name] = int(t)
        return store, extra, header.get("meta", {})
