"""Canonical byte encoding of tower elements and a readable nested text form.

Layout (all integers are minimal unsigned LEB128 varints)::

    element := depth e_1 level{depth - 1}
    level   := center count (keylen key x y){count}

Levels ascend; keys within a level are sorted by their own encodings and
zero pairs are omitted, so the encoding is injective and byte order gives a
total order.  The identity encodes to ``b"\\x01\\x00"``.
"""

from __future__ import annotations

from .tower import GroupElement, LevelVector, TowerError, _trim


class DecodeError(TowerError):
    pass


def _varint(n: int, out: bytearray):
    if n < 0:
        raise ValueError("varints are unsigned")
    while True:
        byte = n & 0x7F
        n >>= 7
        if n:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return


def _sorted_pairs(v: LevelVector):
    return sorted(v.pairs.items(), key=lambda kv: encode(kv[0]))


def encode(a: GroupElement) -> bytes:
    if a._enc is not None:
        return a._enc
    out = bytearray()
    _varint(len(a.levels), out)
    _varint(a.levels[0], out)
    for v in a.levels[1:]:
        if v is None:
            out += b"\x00\x00"
            continue
        _varint(v.center, out)
        _varint(len(v.pairs), out)
        for key, (x, y) in _sorted_pairs(v):
            ek = encode(key)
            _varint(len(ek), out)
            out += ek
            _varint(x, out)
            _varint(y, out)
    a._enc = bytes(out)
    return a._enc


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def varint(self) -> int:
        shift = result = 0
        start = self.pos
        while True:
            if self.pos >= len(self.data):
                raise DecodeError("truncated varint")
            byte = self.data[self.pos]
            self.pos += 1
            result |= (byte & 0x7F) << shift
            shift += 7
            if not byte & 0x80:
                break
        if self.pos - start > 1 and byte == 0:
            raise DecodeError("non-minimal varint")
        return result

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise DecodeError("truncated key")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk


def decode(tower, data: bytes, level: int | None = None) -> GroupElement:
    """Inverse of :func:`encode`; rejects every non-canonical input."""
    reader = _Reader(bytes(data))
    elem = _decode(tower, reader, tower.max_level)
    if reader.pos != len(reader.data):
        raise DecodeError("trailing bytes after element")
    if level is not None:
        return tower.embed(elem, level)
    return elem


def _decode(tower, reader: _Reader, max_depth: int) -> GroupElement:
    depth = reader.varint()
    if not 1 <= depth <= max_depth:
        raise DecodeError(f"depth {depth} outside [1, {max_depth}]")
    e1 = reader.varint()
    if e1 >= tower.primes[0]:
        raise DecodeError("level-1 exponent not reduced")
    levels = [e1]
    for k in range(2, depth + 1):
        p = tower.prime(k)
        center = reader.varint()
        count = reader.varint()
        if center >= p:
            raise DecodeError(f"level-{k} center not reduced")
        pairs = {}
        last = None
        for _ in range(count):
            ek = reader.take(reader.varint())
            if last is not None and ek <= last:
                raise DecodeError(f"level-{k} keys not strictly sorted")
            last = ek
            key = _decode(tower, _Reader(ek), k - 1)
            if encode(key) != ek:
                raise DecodeError("non-canonical key encoding")
            key = GroupElement(tower, key.levels, k - 1)
            x, y = reader.varint(), reader.varint()
            if x >= p or y >= p:
                raise DecodeError(f"level-{k} pair not reduced")
            if not (x or y):
                raise DecodeError(f"level-{k} stores a zero pair")
            pairs[key] = (x, y)
        if not pairs and not center:
            levels.append(None)
            continue
        vec = LevelVector(k, p, pairs, center)
        if not tower.level_vector_validate(vec):
            raise DecodeError(f"level-{k} vector fails the orbit-sum condition")
        levels.append(vec)
    levels = tuple(levels)
    if _trim(levels) != levels:
        raise DecodeError("trailing identity levels must be trimmed")
    return GroupElement(tower, levels, depth)


def to_hex(a: GroupElement) -> str:
    return encode(a).hex()


def from_hex(tower, token: str, level: int | None = None) -> GroupElement:
    try:
        data = bytes.fromhex(token)
    except ValueError:
        raise DecodeError(f"not a hex token: {token!r}") from None
    return decode(tower, data, level)


def format_element(a: GroupElement) -> str:
    """Nested text form, e.g. ``e1=1; L2: {e1=0 -> (2,0), e1=1 -> (1,0)} c=0``."""
    parts = [f"e1={a.levels[0]}"]
    for k, v in enumerate(a.levels[1:], start=2):
        if v is None:
            continue
        inner = ", ".join(
            f"[{format_element(key)}] -> ({x},{y})" if key.depth > 1 else f"{format_element(key)} -> ({x},{y})"
            for key, (x, y) in _sorted_pairs(v)
        )
        parts.append(f"L{k}: {{{inner}}} c={v.center}")
    return "; ".join(parts)
