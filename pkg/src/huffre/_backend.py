"""Pick the chunk kernels at import: compiled if available, else numpy.

Set ``HUFFRE_PURE_PYTHON=1`` to force the numpy kernels.
"""
import os

import numpy as np

from . import _pykernels
from ._parallel import parallel_map, split_ranges
from .errors import CorruptStreamError

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

AVAILABLE = {"python": _pykernels}
if _ckernels is not None:
    AVAILABLE["native"] = _ckernels


def _default():
    if os.environ.get("HUFFRE_PURE_PYTHON") == "1" or _ckernels is None:
        return "python"
    return "native"


BACKEND = _default()


def get_backend(name=None):
    name = name or BACKEND
    if name not in AVAILABLE:
        raise ValueError(f"backend {name!r} is not available (have {sorted(AVAILABLE)})")
    return name


def encode_chunks(symbols, code_bits, code_len, magnitude, r, word_bits, workers=1, backend=None):
    """Encode ``len(symbols) / 2**magnitude`` full chunks.

    Returns ``(words[chunks, 2**s], bit_len[chunks], broken[chunks, 2**s])``.
    """
    backend = get_backend(backend)
    symbols = np.ascontiguousarray(symbols, dtype=np.uint16)
    code_bits = np.ascontiguousarray(code_bits, dtype=np.uint32)
    code_len = np.ascontiguousarray(code_len, dtype=np.uint8)
    N = 1 << magnitude
    S = 1 << (magnitude - r)
    chunks = len(symbols) // N
    ranges = split_ranges(chunks, workers)

    if backend == "python":
        parts = parallel_map(
            lambda rg: _pykernels.encode_chunks(symbols[rg[0] * N:rg[1] * N], code_bits,
                                                code_len, magnitude, r, word_bits),
            ranges, workers)
        if chunks == 0:
            return (np.zeros((0, S), np.uint32), np.zeros(0, np.uint32), np.zeros((0, S), np.uint8))
        return tuple(np.concatenate(p) for p in zip(*parts))

    words = np.zeros((chunks, S), dtype=np.uint32)
    bit_len = np.zeros(chunks, dtype=np.uint32)
    broken = np.zeros((chunks, S), dtype=np.uint8)
    parallel_map(
        lambda rg: _ckernels.encode_chunks(symbols, code_bits, code_len, magnitude, r, word_bits,
                                           words, bit_len, broken, rg[0], rg[1]),
        ranges, workers)
    return words, bit_len, broken


def decode_chunks(payload, word_offsets, bit_lens, counts, meta, word_bits, workers=1,
                  backend=None, exact=True):
    """Decode every chunk; raises CorruptStreamError on the first bad chunk.

    With ``exact`` a chunk must use precisely ``bit_lens[c]`` bits; otherwise
    ``bit_lens`` only bounds how far decoding may read. Returns
    ``(symbols, consumed_bits_per_chunk)``.
    """
    backend = get_backend(backend)
    payload = np.ascontiguousarray(payload, dtype=np.uint32)
    word_offsets = np.ascontiguousarray(word_offsets, dtype=np.int64)
    bit_lens = np.ascontiguousarray(bit_lens, dtype=np.uint32)
    counts = np.ascontiguousarray(counts, dtype=np.int64)
    first = np.ascontiguousarray(meta.first, dtype=np.int64)
    count = np.ascontiguousarray(meta.count, dtype=np.int64)
    entry = np.ascontiguousarray(meta.entry, dtype=np.int64)
    by_rank = np.ascontiguousarray(meta.symbols_by_rank, dtype=np.uint16)
    H = meta.max_len
    chunks = len(bit_lens)
    ranges = split_ranges(chunks, workers)
    starts = np.concatenate([[0], np.cumsum(counts)])

    if backend == "python":
        parts = parallel_map(
            lambda rg: _pykernels.decode_chunks(
                payload, word_offsets[rg[0]:rg[1] + 1], bit_lens[rg[0]:rg[1]],
                counts[rg[0]:rg[1]], first, count, entry, by_rank, H, word_bits, rg[0]),
            ranges, workers)
        out = np.concatenate([p[0] for p in parts])
        consumed = np.concatenate([p[1] for p in parts])
    else:
        out = np.zeros(int(starts[-1]), dtype=np.uint16)
        consumed = np.zeros(chunks, dtype=np.int64)
        results = parallel_map(
            lambda rg: _ckernels.decode_chunks(payload, word_offsets, bit_lens, counts, first,
                                               count, entry, by_rank, H, word_bits, out, consumed,
                                               rg[0], rg[1], int(starts[rg[0]])),
            ranges, workers)
        for err_chunk, err_pos in results:
            if err_chunk >= 0:
                raise CorruptStreamError(
                    f"corrupt codeword stream in chunk {err_chunk} at bit {err_pos}",
                    chunk=int(err_chunk), bit_offset=int(err_pos))
    if exact:
        bad = np.flatnonzero(consumed != bit_lens.astype(np.int64))
        if bad.size:
            c = int(bad[0])
            raise CorruptStreamError(
                f"chunk {c} decoded {int(consumed[c])} bits but holds {int(bit_lens[c])}",
                chunk=c, bit_offset=int(consumed[c]))
    return out, consumed
