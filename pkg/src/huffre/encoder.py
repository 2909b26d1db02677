"""Chunked encoding by reduce-merge and shuffle-merge.

A chunk of ``N = 2**M`` symbols is looked up in the codebook, its codewords
are concatenated pairwise ``r`` times (reduce-merge) so that each of the
``2**s`` resulting units roughly half-fills a ``W``-bit word, and the units
are then packed into one dense MSB-first stream over ``s = M - r`` rounds of
shuffle-merge. Any group whose concatenation would exceed ``W`` bits is
dropped from the stream and stored verbatim as a breaking record.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import _backend, _pykernels
from ._parallel import resolve_workers
from .archive import WORD_WIDTHS, Archive, BreakingPoint
from .codebook import DEFAULT_WORD_BITS, codebook_from_lengths
from .errors import CapacityError, CorruptStreamError, InputDomainError

DEFAULT_MAGNITUDE = 10
DEFAULT_REDUCTION_CAP = 3


def select_reduction_factor(beta, word_bits=DEFAULT_WORD_BITS, magnitude=None):
    """Reduction factor from the average codeword bitwidth ``beta``.

    Solves ``floor(log2 beta) + r + 1 = log2 W`` so that ``2**r`` merged
    codewords are expected to fill between half and all of a word. Clamped
    to ``[0, magnitude)`` when ``magnitude`` is given.
    """
    if beta <= 0:
        raise InputDomainError(f"average bitwidth must be positive, got {beta}")
    if word_bits & (word_bits - 1):
        raise InputDomainError(f"word width must be a power of two, got {word_bits}")
    r = int(math.log2(word_bits)) - 1 - math.floor(math.log2(beta))
    r = max(r, 0)
    if magnitude is not None:
        r = min(r, magnitude - 1)
    return r


@dataclass(frozen=True)
class EncoderConfig:
    magnitude: int = DEFAULT_MAGNITUDE
    reduction: int = DEFAULT_REDUCTION_CAP
    word_bits: int = DEFAULT_WORD_BITS
    beta: float = None

    def __post_init__(self):
        if self.word_bits not in WORD_WIDTHS:
            raise InputDomainError(f"word width must be one of {WORD_WIDTHS}, got {self.word_bits}")
        if not 1 <= self.magnitude <= 24:
            raise InputDomainError(f"magnitude must be in [1, 24], got {self.magnitude}")
        if not 0 <= self.reduction < self.magnitude:
            raise InputDomainError(
                f"reduction factor must be in [0, {self.magnitude}), got {self.reduction}")

    @classmethod
    def auto(cls, beta, magnitude=DEFAULT_MAGNITUDE, word_bits=DEFAULT_WORD_BITS,
             cap=DEFAULT_REDUCTION_CAP):
        """Config with ``r`` picked from ``beta``, capped at ``cap``."""
        r = select_reduction_factor(beta, word_bits, magnitude)
        if cap is not None:
            r = min(r, cap)
        return cls(magnitude, r, word_bits, beta)

    @property
    def chunk_size(self):
        return 1 << self.magnitude

    @property
    def shuffle(self):
        return self.magnitude - self.reduction


@dataclass(frozen=True)
class CodeUnit:
    bits: int
    length: int


def merge_pair(u, v, word_bits=DEFAULT_WORD_BITS):
    """Concatenate ``v``'s bits right after ``u``'s. Order matters."""
    length = u.length + v.length
    if length > word_bits:
        raise CapacityError(f"merged unit needs {length} bits, word width is {word_bits}")
    return CodeUnit((u.bits << v.length) | v.bits, length)


def reduce_merge(bits, lens, r, word_bits=DEFAULT_WORD_BITS, symbols=None, chunk_id=0,
                 trace=None):
    """Pairwise-merge one chunk's codewords ``r`` times.

    Returns ``(bits, lens, breaking)`` where ``breaking`` lists each group
    that overflowed ``word_bits`` (its unit is left as ``(0, 0)``). The
    original symbols of a breaking group are attached when ``symbols`` is
    given. If ``trace`` is a list, the unit count after each round is
    appended to it.
    """
    b = np.asarray(bits, dtype=np.uint64)[None, :]
    ln = np.asarray(lens, dtype=np.int64)[None, :]
    if b.shape[1] & (b.shape[1] - 1) or b.shape[1] < (1 << r):
        raise InputDomainError("unit count must be a power of two no smaller than 2**r")
    b, ln, broken = _pykernels.reduce_merge(b, ln, r, word_bits, trace=trace)
    k = 1 << r
    breaking = []
    for g in np.flatnonzero(broken[0]):
        syms = None if symbols is None else np.asarray(symbols[g * k:(g + 1) * k], dtype=np.uint16)
        breaking.append(BreakingPoint(chunk_id, int(g), syms))
    return b[0], ln[0], breaking


def shuffle_merge(bits, lens, word_bits=DEFAULT_WORD_BITS, trace=None):
    """Pack units into one dense MSB-first stream; returns ``(words, bit_len)``."""
    b = np.asarray(bits, dtype=np.uint64)[None, :]
    ln = np.asarray(lens, dtype=np.int64)[None, :]
    if np.any(ln > word_bits):
        raise CapacityError("a unit is longer than one word")
    words, bit_len = _pykernels.shuffle_merge(b, ln, word_bits, trace=trace)
    return words[0], int(bit_len[0])


@dataclass
class EncodedChunk:
    words: np.ndarray  # 2**s words, zero past bit_len
    bit_len: int
    breaking: list
    word_bits: int = DEFAULT_WORD_BITS

    @property
    def used_words(self):
        return self.words[:-(-self.bit_len // self.word_bits)]


def _check_codable(symbols, cb, offset=0, chunk_size=None):
    symbols = np.asarray(symbols)
    if symbols.size and (symbols.min() < 0 or symbols.max() >= cb.num_symbols):
        pos = int(np.flatnonzero((symbols < 0) | (symbols >= cb.num_symbols))[0])
        raise InputDomainError(f"symbol {int(symbols[pos])} at position {offset + pos} is out of range")
    missing = np.flatnonzero(np.asarray(cb.lengths)[symbols] == 0)
    if missing.size:
        pos = int(missing[0])
        where = f" (chunk {(offset + pos) // chunk_size})" if chunk_size else ""
        raise InputDomainError(
            f"symbol {int(symbols[pos])} at position {offset + pos}{where} has no codeword")


def encode_chunk(symbols, cb, cfg, chunk_id=0):
    """Encode one chunk; a short chunk is padded like the tail of ``encode``."""
    symbols = np.asarray(symbols)
    _check_codable(symbols, cb)
    N = cfg.chunk_size
    if len(symbols) > N:
        raise InputDomainError(f"chunk holds at most {N} symbols, got {len(symbols)}")
    padded = _pad(symbols, N, cb)
    bits, lens = _pykernels.lookup(padded, np.asarray(cb.bits), np.asarray(cb.lengths), cfg.magnitude)
    bits, lens, breaking = reduce_merge(bits[0], lens[0], cfg.reduction, cfg.word_bits,
                                        symbols=padded, chunk_id=chunk_id)
    words, bit_len = shuffle_merge(bits, lens, cfg.word_bits)
    return EncodedChunk(words, bit_len, breaking, cfg.word_bits)


def pad_symbol(cb):
    lengths = np.asarray(cb.lengths)
    return 0 if lengths[0] > 0 else int(np.flatnonzero(lengths)[0])


def _pad(symbols, multiple, cb):
    rem = (-len(symbols)) % multiple
    if not rem:
        return np.asarray(symbols, dtype=np.uint16)
    return np.concatenate([np.asarray(symbols, dtype=np.uint16),
                           np.full(rem, pad_symbol(cb), dtype=np.uint16)])


def encode(data, cb, cfg=None, workers=None, backend=None, checksum=True):
    """Encode a whole symbol sequence into an Archive."""
    cfg = cfg or EncoderConfig()
    workers = resolve_workers(workers)
    data = np.asarray(data)
    if data.ndim != 1:
        data = data.ravel()
    if data.size == 0:
        raise InputDomainError("cannot encode an empty sequence")
    if data.dtype.kind not in "iu":
        raise InputDomainError(f"symbols must be integers, got dtype {data.dtype}")
    if cb.max_len > cfg.word_bits:
        raise CapacityError(f"longest codeword has {cb.max_len} bits, word width is {cfg.word_bits}")
    _check_codable(data, cb, chunk_size=cfg.chunk_size)

    N = cfg.chunk_size
    padded = _pad(data, N, cb)
    words, bit_len, broken = _backend.encode_chunks(
        padded, cb.bits, cb.lengths, cfg.magnitude, cfg.reduction, cfg.word_bits,
        workers=workers, backend=backend)

    W = cfg.word_bits
    counts = (bit_len.astype(np.int64) + W - 1) // W
    keep = np.arange(words.shape[1])[None, :] < counts[:, None]
    payload = words[keep]  # row-major gather == per-chunk contiguous copy

    chunk_ids, groups = np.nonzero(broken)
    k = 1 << cfg.reduction
    starts = chunk_ids.astype(np.int64) * N + groups.astype(np.int64) * k
    brk_syms = padded[starts[:, None] + np.arange(k)[None, :]] if len(starts) else \
        np.zeros((0, k), dtype=np.uint16)
    return Archive(
        num_symbols=cb.num_symbols, magnitude=cfg.magnitude, reduction=cfg.reduction,
        word_bits=W, original_count=len(data), lengths=np.asarray(cb.lengths, dtype=np.uint8),
        chunk_bit_lens=bit_len.astype(np.uint32), payload=payload.astype(np.uint32),
        breaking_chunk=chunk_ids.astype(np.uint32), breaking_group=groups.astype(np.uint32),
        breaking_symbols=brk_syms.astype(np.uint16), checksum=checksum,
    )


def decode_archive(a, workers=None, backend=None):
    """Reconstruct the original symbol sequence from an Archive."""
    if isinstance(a, (bytes, bytearray, memoryview)):
        a = Archive.from_bytes(a)
    workers = resolve_workers(workers)
    if a.original_count == 0:
        return np.zeros(0, dtype=np.uint16)
    try:
        _, meta = codebook_from_lengths(a.lengths, a.word_bits)
    except Exception as exc:
        raise CorruptStreamError(f"unusable codeword length table: {exc}") from exc

    N = a.chunk_size
    k = 1 << a.reduction
    S = N >> a.reduction
    chunks = a.num_chunks
    brk_c = np.asarray(a.breaking_chunk, dtype=np.int64)
    brk_g = np.asarray(a.breaking_group, dtype=np.int64)
    if brk_c.size:
        if brk_c.max() >= chunks or brk_g.max() >= S:
            raise CorruptStreamError("breaking record points outside the archive")
        key = brk_c * S + brk_g
        if np.any(np.diff(key) <= 0):
            raise CorruptStreamError("breaking records are not sorted and unique")
        if a.breaking_symbols.size and a.breaking_symbols.max() >= a.num_symbols:
            raise CorruptStreamError("breaking record holds an out-of-range symbol")
    per_chunk = np.bincount(brk_c, minlength=chunks) if brk_c.size else np.zeros(chunks, np.int64)
    counts = N - k * per_chunk
    offsets = a.word_offsets
    if offsets[-1] != len(a.payload):
        raise CorruptStreamError("payload size does not match the chunk table")

    decoded, _ = _backend.decode_chunks(a.payload, offsets, a.chunk_bit_lens, counts, meta,
                                        a.word_bits, workers=workers, backend=backend)
    broken = np.zeros((chunks, S), dtype=bool)
    broken[brk_c, brk_g] = True
    mask = np.repeat(broken, k, axis=1).ravel()
    out = np.empty(chunks * N, dtype=np.uint16)
    out[~mask] = decoded
    out[mask] = np.asarray(a.breaking_symbols, dtype=np.uint16).ravel()
    return out[:a.original_count]


def breaking_overhead_bits(a):
    """Extra payload bits stored by breaking records, net of removed codeword bits."""
    lengths = np.asarray(a.lengths, dtype=np.int64)
    raw = a.num_breaking * (1 << a.reduction) * 8 * a.symbol_width
    removed = int(lengths[np.asarray(a.breaking_symbols, dtype=np.int64)].sum()) if a.num_breaking else 0
    return raw - removed
