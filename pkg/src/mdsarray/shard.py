"""Shard files: fixed little-endian header plus raw symbol payload.

Header layout: magic "MDSA", version u16, code digest (32 bytes), node u16,
q u32, L u64, stripe count u64, original file length u64, then a 32-byte
payload digest guarding against bit rot (that last field is how a corrupted
shard is pinned to its node even when only k shards survive).  Symbols are
one byte for q <= 256, else two bytes little-endian.
"""

import hashlib
import struct

import numpy as np

from .gf import Field

MAGIC = b"MDSA"
VERSION = 1
_HEAD = struct.Struct("<4sH32sHIQQQ32s")


class ShardError(ValueError):
    pass


def symbol_width(q: int) -> int:
    return 1 if q <= 256 else 2


def write_shard(path, code_digest: str, node: int, q: int, L: int, stripes: int,
                orig_len: int, symbols: np.ndarray):
    payload = _pack_symbols(symbols, q)
    head = _HEAD.pack(
        MAGIC,
        VERSION,
        bytes.fromhex(code_digest),
        node,
        q,
        L,
        stripes,
        orig_len,
        hashlib.sha256(payload).digest(),
    )
    with open(path, "wb") as fh:
        fh.write(head)
        fh.write(payload)


def read_shard(path, expect_digest: str | None = None) -> dict:
    with open(path, "rb") as fh:
        head = fh.read(_HEAD.size)
        payload = fh.read()
    if len(head) != _HEAD.size:
        raise ShardError(f"{path}: truncated header")
    magic, version, digest, node, q, L, stripes, orig_len, pdigest = _HEAD.unpack(head)
    if magic != MAGIC:
        raise ShardError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise ShardError(f"{path}: unsupported version {version}")
    if expect_digest is not None and digest.hex() != expect_digest:
        raise ShardError(
            f"{path}: shard belongs to a different code (digest mismatch)"
        )
    if hashlib.sha256(payload).digest() != pdigest:
        raise ShardError(f"{path}: payload corrupted (node {node})")
    want = stripes * L * symbol_width(q)
    if len(payload) != want:
        raise ShardError(f"{path}: payload length {len(payload)}, expected {want}")
    symbols = _unpack_symbols(payload, q)
    if symbols.size and int(symbols.max()) >= q:
        raise ShardError(f"{path}: symbol out of field range (node {node})")
    return {
        "digest": digest.hex(),
        "node": node,
        "q": q,
        "L": L,
        "stripes": stripes,
        "orig_len": orig_len,
        "symbols": symbols,
    }


def _pack_symbols(symbols: np.ndarray, q: int) -> bytes:
    arr = np.ascontiguousarray(symbols, dtype=np.uint16)
    if symbol_width(q) == 1:
        return arr.astype(np.uint8).tobytes()
    return arr.astype("<u2").tobytes()


def _unpack_symbols(payload: bytes, q: int) -> np.ndarray:
    if symbol_width(q) == 1:
        return np.frombuffer(payload, dtype=np.uint8).astype(np.uint16)
    return np.frombuffer(payload, dtype="<u2").astype(np.uint16)


# -- data <-> symbol packing (binary fields only) --

def bytes_to_symbols(data: bytes, field: Field, group: int) -> np.ndarray:
    """Pack a byte string into w-bit symbols, zero-padded up to a multiple
    of `group` symbols."""
    if field.p != 2:
        raise ShardError("file encoding requires a binary field")
    w = field.w
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
    nsym = -(-bits.size // w)
    nsym = max(-(-nsym // group), 1) * group  # empty input still fills one stripe
    padded = np.zeros(nsym * w, dtype=np.uint8)
    padded[: bits.size] = bits
    weights = 1 << np.arange(w - 1, -1, -1, dtype=np.uint16)
    return (padded.reshape(nsym, w).astype(np.uint16) * weights).sum(axis=1).astype(np.uint16)


def symbols_to_bytes(symbols: np.ndarray, field: Field, orig_len: int) -> bytes:
    w = field.w
    arr = np.asarray(symbols, dtype=np.uint16)
    bits = (
        (arr[:, None] >> np.arange(w - 1, -1, -1, dtype=np.uint16)) & 1
    ).astype(np.uint8)
    data = np.packbits(bits.reshape(-1))
    return data.tobytes()[:orig_len]
