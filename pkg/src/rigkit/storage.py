"""Graph persistence.

Binary format (extension-agnostic, magic-sniffed):

    header, 48 bytes, little-endian:
        magic   4s   b"RIGB"
        version u32  currently 1
        n       u64
        m       u64
        alpha   f64
        c0      f64
        seed    u64  master seed of the run that wrote the file
    body: for each vertex in id order, one u64 set size followed by that many
        u64 attribute ids, all little-endian.

A JSON mirror ({"format": "rig-json", ...}) covers small graphs where a
readable artifact matters more than compactness.  Neither format stores the
latent weight draws; a loaded graph carries realized normalized weights
size * sqrt(n/m) instead, so layer decompositions of a reloaded graph can
differ marginally from those of the in-memory instance that wrote it.
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass

import numpy as np

from .graphgen import BipartiteIncidence
from .model import ModelParams, realized_weights

__all__ = [
    "GraphHeader",
    "GraphFormatError",
    "write_graph",
    "read_graph",
    "file_checksum",
]

MAGIC = b"RIGB"
VERSION = 1
_HEADER = struct.Struct("<4sIQQddQ")


class GraphFormatError(ValueError):
    """Raised on malformed or truncated graph files."""


@dataclass(frozen=True)
class GraphHeader:
    n: int
    m: int
    alpha: float
    c0: float
    seed: int
    version: int = VERSION

    def params(self) -> ModelParams:
        return ModelParams(n=self.n, m=self.m, alpha=self.alpha, c0=self.c0)


def write_graph(path, inc: BipartiteIncidence, alpha: float, c0: float,
                seed: int, fmt: str = "binary") -> None:
    """Persist an incidence with its model parameters; fmt binary or json."""
    if fmt == "binary":
        _write_binary(path, inc, alpha, c0, seed)
    elif fmt == "json":
        _write_json(path, inc, alpha, c0, seed)
    else:
        raise ValueError(f"unknown graph format {fmt!r}")


def read_graph(path):
    """Load a graph file of either format.

    Returns (incidence, header, weights) with weights reconstructed from
    the stored set sizes.
    """
    with open(path, "rb") as fh:
        head = fh.read(4)
    if head == MAGIC:
        inc, header = _read_binary(path)
    elif head[:1] == b"{":
        inc, header = _read_json(path)
    else:
        raise GraphFormatError(f"{path}: not a graph file (bad magic)")
    weights = realized_weights(header.params(), inc.sizes())
    return inc, header, weights


def _write_binary(path, inc, alpha, c0, seed):
    sizes = inc.sizes()
    n = inc.n
    body = np.empty(n + inc.total_incidence, dtype="<u8")
    slots = inc.set_indptr[:-1] + np.arange(n, dtype=np.int64)
    body[slots] = sizes.astype("<u8")
    mask = np.ones(body.shape[0], dtype=bool)
    mask[slots] = False
    body[mask] = inc.set_attrs.astype("<u8")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, n, inc.m, float(alpha),
                              float(c0), int(seed)))
        fh.write(body.tobytes())


def _read_binary(path):
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise GraphFormatError(f"{path}: truncated header")
    magic, version, n, m, alpha, c0, seed = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise GraphFormatError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise GraphFormatError(f"{path}: unsupported version {version}")
    if (len(raw) - _HEADER.size) % 8:
        raise GraphFormatError(f"{path}: body is not a whole number of words")
    body = np.frombuffer(raw, dtype="<u8", offset=_HEADER.size)

    sizes = np.empty(n, dtype=np.int64)
    pos = 0
    for v in range(n):
        if pos >= body.shape[0]:
            raise GraphFormatError(f"{path}: truncated at vertex {v}")
        sizes[v] = int(body[pos])
        pos += 1 + sizes[v]
    if pos != body.shape[0]:
        raise GraphFormatError(f"{path}: {body.shape[0] - pos} trailing words")

    slots = np.zeros(n, dtype=np.int64)
    np.cumsum(sizes[:-1], out=slots[1:])
    slots += np.arange(n, dtype=np.int64)
    mask = np.ones(body.shape[0], dtype=bool)
    mask[slots] = False
    flat = body[mask].astype(np.int64)
    try:
        inc = BipartiteIncidence.from_flat(n, m, sizes, flat, presorted=False)
    except ValueError as exc:
        raise GraphFormatError(f"{path}: {exc}") from exc
    return inc, GraphHeader(n=n, m=m, alpha=alpha, c0=c0, seed=seed,
                            version=version)


def _write_json(path, inc, alpha, c0, seed):
    doc = {
        "format": "rig-json",
        "version": VERSION,
        "n": inc.n,
        "m": inc.m,
        "alpha": float(alpha),
        "c0": float(c0),
        "seed": int(seed),
        "sets": [[int(a) for a in inc.set_of(v)] for v in range(inc.n)],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _read_json(path):
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"{path}: invalid JSON ({exc})") from exc
    if doc.get("format") != "rig-json":
        raise GraphFormatError(f"{path}: not a rig-json document")
    if doc.get("version") != VERSION:
        raise GraphFormatError(f"{path}: unsupported version {doc.get('version')}")
    try:
        n, m = int(doc["n"]), int(doc["m"])
        sets = doc["sets"]
        header = GraphHeader(n=n, m=m, alpha=float(doc["alpha"]),
                             c0=float(doc["c0"]), seed=int(doc["seed"]))
    except (KeyError, TypeError) as exc:
        raise GraphFormatError(f"{path}: missing field ({exc})") from exc
    if len(sets) != n:
        raise GraphFormatError(f"{path}: expected {n} sets, found {len(sets)}")
    try:
        inc = BipartiteIncidence.from_sets(n, m, sets)
    except (ValueError, TypeError) as exc:
        raise GraphFormatError(f"{path}: bad set data ({exc})") from exc
    return inc, header


def file_checksum(path) -> str:
    """sha256 hex digest of a file's bytes."""
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()
