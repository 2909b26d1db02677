"""Self-describing binary container for an encoded symbol stream.

Layout, all scalars little-endian::

    magic "HFRE" | version u16 | flags u16 | num_symbols u32
    symbol_width u8 | M u8 | r u8 | W u8 | original_count u64
    num_chunks u32 | num_breaking u64
    length table      num_symbols x u8
    chunk table       num_chunks x bit_len u32
    payload           per chunk ceil(bit_len / W) words of W/8 bytes
    breaking records  chunk_id u32, group_index u32, 2**r symbols
    crc32 u32         only when FLAG_CRC32 is set

Chunk word offsets are not stored; they are the exclusive prefix sum of the
per-chunk word counts.
"""
import struct
import zlib
from dataclasses import dataclass, field

import numpy as np

from .errors import CorruptStreamError

MAGIC = b"HFRE"
VERSION = 1
HEADER = struct.Struct("<4sHHIBBBBQIQ")

FLAG_MSB_FIRST = 1 << 0
FLAG_CRC32 = 1 << 1
# bits 2..15 are free for the caller (the CLI keeps its symbol mode there)
USER_FLAGS_SHIFT = 2
USER_FLAGS_MASK = 0xFFFF & ~(FLAG_MSB_FIRST | FLAG_CRC32)

WORD_WIDTHS = (8, 16, 32)


@dataclass(frozen=True)
class BreakingPoint:
    """A group of ``2**r`` symbols whose codewords overflow one word."""

    chunk_id: int
    group_index: int
    symbols: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, BreakingPoint):
            return NotImplemented
        return (self.chunk_id, self.group_index) == (other.chunk_id, other.group_index) and \
            np.array_equal(self.symbols, other.symbols)

    __hash__ = None


@dataclass
class Archive:
    num_symbols: int
    magnitude: int
    reduction: int
    word_bits: int
    original_count: int
    lengths: np.ndarray  # per-symbol codeword length, u8
    chunk_bit_lens: np.ndarray  # u32 per chunk
    payload: np.ndarray  # u32 words (only the low word_bits used)
    breaking_chunk: np.ndarray = field(default_factory=lambda: np.zeros(0, np.uint32))
    breaking_group: np.ndarray = field(default_factory=lambda: np.zeros(0, np.uint32))
    breaking_symbols: np.ndarray = None  # (records, 2**r)
    user_flags: int = 0
    checksum: bool = True

    def __post_init__(self):
        if self.breaking_symbols is None:
            self.breaking_symbols = np.zeros((0, 1 << self.reduction), dtype=np.uint16)

    @property
    def symbol_width(self):
        return 1 if self.num_symbols <= 256 else 2

    @property
    def num_chunks(self):
        return len(self.chunk_bit_lens)

    @property
    def chunk_size(self):
        return 1 << self.magnitude

    @property
    def num_breaking(self):
        return len(self.breaking_chunk)

    @property
    def num_groups(self):
        return self.num_chunks << (self.magnitude - self.reduction)

    @property
    def word_counts(self):
        W = self.word_bits
        return (self.chunk_bit_lens.astype(np.int64) + W - 1) // W

    @property
    def word_offsets(self):
        """Exclusive prefix sum of per-chunk word counts (length chunks + 1)."""
        return np.concatenate([[0], np.cumsum(self.word_counts)]).astype(np.int64)

    @property
    def payload_bits(self):
        return int(self.chunk_bit_lens.astype(np.int64).sum())

    @property
    def breaking(self):
        return [
            BreakingPoint(int(c), int(g), s.copy())
            for c, g, s in zip(self.breaking_chunk, self.breaking_group, self.breaking_symbols)
        ]

    @property
    def flags(self):
        f = FLAG_MSB_FIRST | (self.user_flags << USER_FLAGS_SHIFT)
        if self.checksum:
            f |= FLAG_CRC32
        return f

    def to_bytes(self):
        parts = [
            HEADER.pack(MAGIC, VERSION, self.flags, self.num_symbols, self.symbol_width,
                        self.magnitude, self.reduction, self.word_bits, self.original_count,
                        self.num_chunks, self.num_breaking),
            np.asarray(self.lengths, dtype=np.uint8).tobytes(),
            np.asarray(self.chunk_bit_lens, dtype="<u4").tobytes(),
            np.asarray(self.payload).astype(f"<u{self.word_bits // 8}").tobytes(),
        ]
        if self.num_breaking:
            k = 1 << self.reduction
            rec = np.zeros(self.num_breaking, dtype=[
                ("chunk", "<u4"), ("group", "<u4"), ("sym", f"<u{self.symbol_width}", (k,))])
            rec["chunk"] = self.breaking_chunk
            rec["group"] = self.breaking_group
            rec["sym"] = self.breaking_symbols
            parts.append(rec.tobytes())
        blob = b"".join(parts)
        if self.checksum:
            blob += struct.pack("<I", zlib.crc32(blob))
        return blob

    @classmethod
    def from_bytes(cls, blob):
        blob = bytes(blob)
        if len(blob) < HEADER.size:
            raise CorruptStreamError("archive shorter than its header")
        (magic, version, flags, num_symbols, width, M, r, W, original, chunks,
         nbreak) = HEADER.unpack_from(blob)
        if magic != MAGIC:
            raise CorruptStreamError(f"bad magic {magic!r}")
        if version != VERSION:
            raise CorruptStreamError(f"unsupported archive version {version}")
        if not flags & FLAG_MSB_FIRST:
            raise CorruptStreamError("only MSB-first archives are supported")
        if flags & FLAG_CRC32:
            if len(blob) < HEADER.size + 4:
                raise CorruptStreamError("archive truncated before checksum")
            body, (crc,) = blob[:-4], struct.unpack("<I", blob[-4:])
            if zlib.crc32(body) != crc:
                raise CorruptStreamError("checksum mismatch")
            blob = body
        if W not in WORD_WIDTHS:
            raise CorruptStreamError(f"unsupported word width {W}")
        if not 0 <= r < M <= 24:
            raise CorruptStreamError(f"bad magnitude/reduction pair M={M} r={r}")
        if not 1 <= num_symbols <= 1 << 16 or width != (1 if num_symbols <= 256 else 2):
            raise CorruptStreamError("bad symbol count or width")
        N = 1 << M
        if original > chunks * N or (chunks and original <= (chunks - 1) * N) or \
                (chunks == 0) != (original == 0):
            raise CorruptStreamError("chunk count does not match the original symbol count")
        if nbreak > chunks << (M - r):
            raise CorruptStreamError("more breaking records than groups")

        pos = HEADER.size

        def take(nbytes, what):
            nonlocal pos
            if pos + nbytes > len(blob):
                raise CorruptStreamError(f"archive truncated in {what}")
            out = blob[pos:pos + nbytes]
            pos += nbytes
            return out

        lengths = np.frombuffer(take(num_symbols, "length table"), dtype=np.uint8).copy()
        if lengths.max(initial=0) > W or not lengths.any():
            raise CorruptStreamError("invalid codeword length table")
        bit_lens = np.frombuffer(take(4 * chunks, "chunk table"), dtype="<u4").astype(np.uint32)
        if bit_lens.size and int(bit_lens.max()) > (N >> r) * W:
            raise CorruptStreamError("chunk bit length exceeds chunk capacity")
        nwords = int(((bit_lens.astype(np.int64) + W - 1) // W).sum())
        payload = np.frombuffer(take(nwords * W // 8, "payload"), dtype=f"<u{W // 8}").astype(np.uint32)
        k = 1 << r
        rec_dtype = np.dtype([("chunk", "<u4"), ("group", "<u4"), ("sym", f"<u{width}", (k,))])
        rec = np.frombuffer(take(nbreak * rec_dtype.itemsize, "breaking records"), dtype=rec_dtype)
        if pos != len(blob):
            raise CorruptStreamError(f"{len(blob) - pos} trailing bytes after archive")
        return cls(
            num_symbols=num_symbols, magnitude=M, reduction=r, word_bits=W,
            original_count=original, lengths=lengths, chunk_bit_lens=bit_lens, payload=payload,
            breaking_chunk=rec["chunk"].astype(np.uint32),
            breaking_group=rec["group"].astype(np.uint32),
            breaking_symbols=rec["sym"].astype(np.uint16).reshape(nbreak, k),
            user_flags=(flags & USER_FLAGS_MASK) >> USER_FLAGS_SHIFT,
            checksum=bool(flags & FLAG_CRC32),
        )

    def save(self, path):
        with open(path, "wb") as fh:
            fh.write(self.to_bytes())

    @classmethod
    def load(cls, path):
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read())
