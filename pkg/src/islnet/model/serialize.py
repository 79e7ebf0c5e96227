"""Binary model file: magic "ISLM", versioned sections, per-section CRCs.

Layout (all integers little-endian):

    bytes 0-3   magic b"ISLM"
    u32         format version (currently 1)
    u32         manifest length, then that many UTF-8 bytes (canonical text)
    u32         CRC32 of the manifest bytes
    u64         parameter blob length, then that many bytes
    u32         CRC32 of the blob

The blob is every parameter array in bundle order (layer order, then the
layer's parameter order), each as raw little-endian float64. Shapes are
reconstructed from the manifest, so the blob carries no metadata.
"""
from __future__ import annotations

import hashlib
import struct
import zlib
from pathlib import Path

import numpy as np

from ..errors import ChecksumError, ModelFormatError, TruncatedError, VersionError
from .manifest import manifest_from_text, manifest_to_text
from .network import Model

MAGIC = b"ISLM"
FORMAT_VERSION = 1


def _param_blob(model: Model) -> bytes:
    parts = []
    for _, p in model.params():
        parts.append(np.ascontiguousarray(p.tensor.array, dtype="<f8").tobytes())
    return b"".join(parts)


def model_id(model: Model) -> str:
    """Short content hash of manifest + parameters; stable across save/load."""
    h = hashlib.sha256()
    h.update(manifest_to_text(model.manifest).encode())
    h.update(_param_blob(model))
    return h.hexdigest()[:12]


def save_model(model: Model, path) -> None:
    manifest_bytes = manifest_to_text(model.manifest).encode()
    blob = _param_blob(model)
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<I", FORMAT_VERSION))
        f.write(struct.pack("<I", len(manifest_bytes)))
        f.write(manifest_bytes)
        f.write(struct.pack("<I", zlib.crc32(manifest_bytes)))
        f.write(struct.pack("<Q", len(blob)))
        f.write(blob)
        f.write(struct.pack("<I", zlib.crc32(blob)))


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int, what: str) -> bytes:
        if self.pos + n > len(self.data):
            raise TruncatedError(f"file ended inside {what}")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def u32(self, what: str) -> int:
        return struct.unpack("<I", self.take(4, what))[0]

    def u64(self, what: str) -> int:
        return struct.unpack("<Q", self.take(8, what))[0]


def load_model(path) -> Model:
    data = Path(path).read_bytes()
    r = _Reader(data)
    if r.take(4, "magic") != MAGIC:
        raise ModelFormatError(f"{path}: not a model file (bad magic)")
    version = r.u32("version")
    if version > FORMAT_VERSION:
        raise VersionError(f"{path}: format version {version} is newer than "
                           f"supported version {FORMAT_VERSION}")
    mlen = r.u32("manifest length")
    manifest_bytes = r.take(mlen, "manifest")
    if r.u32("manifest checksum") != zlib.crc32(manifest_bytes):
        raise ChecksumError(f"{path}: manifest section checksum mismatch")
    blen = r.u64("blob length")
    blob = r.take(blen, "parameter blob")
    if r.u32("blob checksum") != zlib.crc32(blob):
        raise ChecksumError(f"{path}: parameter blob checksum mismatch")

    manifest = manifest_from_text(manifest_bytes.decode())
    model = Model.build(manifest, seed=0)
    offset = 0
    for _, p in model.params():
        n = p.tensor.size
        need = n * 8
        if offset + need > len(blob):
            raise TruncatedError(f"{path}: parameter blob shorter than manifest implies")
        arr = np.frombuffer(blob, dtype="<f8", count=n, offset=offset)
        p.tensor.array[...] = arr.reshape(p.tensor.shape)
        offset += need
    if offset != len(blob):
        raise ModelFormatError(f"{path}: parameter blob longer than manifest implies")
    model.set_mode("infer")
    return model
