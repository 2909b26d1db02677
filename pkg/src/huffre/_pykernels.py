"""Numpy implementations of the chunk kernels.

Used when the compiled extension is missing, and as the reference the
compiled kernels are tested against. Every function works on a batch of
chunks at once: arrays carry a leading chunk axis.
"""
import numpy as np

from .errors import CorruptStreamError

NAME = "python"


def word_mask(word_bits):
    return np.uint64((1 << word_bits) - 1)


def lookup(symbols, code_bits, code_len, magnitude):
    """Codebook lookup: ``(bits, lens)`` shaped ``(chunks, 2**magnitude)``."""
    n = 1 << magnitude
    sym = np.asarray(symbols).reshape(-1, n)
    return code_bits[sym].astype(np.uint64), code_len[sym].astype(np.int64)


def reduce_merge(bits, lens, r, word_bits, trace=None):
    """``r`` rounds of adjacent-pair concatenation along the last axis.

    A pair whose combined length exceeds ``word_bits`` marks its group
    broken; broken units carry ``(0, 0)`` from then on. Returns
    ``(bits, lens, broken)`` with ``2**(M - r)`` units per chunk.
    """
    broken = np.zeros(bits.shape, dtype=bool)
    for _ in range(r):
        b0, b1 = bits[..., 0::2], bits[..., 1::2]
        l0, l1 = lens[..., 0::2], lens[..., 1::2]
        ln = l0 + l1
        broken = broken[..., 0::2] | broken[..., 1::2] | (ln > word_bits)
        merged = (b0 << l1.astype(np.uint64)) | b1
        bits = np.where(broken, np.uint64(0), merged)
        lens = np.where(broken, 0, ln)
        if trace is not None:
            trace.append(bits.shape[-1])
    return bits, lens, broken


def shuffle_merge(bits, lens, word_bits, trace=None):
    """Pack right-aligned units into one MSB-first stream per chunk.

    Round ``i`` pairs groups of ``2**(i-1)`` words: the right group's words
    are split around the left group's ending bit, the high part filling the
    left's residual bits and the low part spilling into the next word.
    Returns ``(words, bit_len)``.
    """
    W = word_bits
    mask = word_mask(W)
    chunks, units = bits.shape
    lens = lens.astype(np.int64)
    shift = np.where(lens > 0, W - lens, 0).astype(np.uint64)
    words = np.where(lens > 0, (bits << shift) & mask, np.uint64(0))
    group_len = lens.copy()
    half = 1
    while half < units:
        groups = units // (2 * half)
        region = words.reshape(chunks, groups, 2 * half)
        gl = group_len.reshape(chunks, groups, 2)
        left_len, right_len = gl[..., 0], gl[..., 1]
        end_word = left_len // W
        end_bit = (left_len % W).astype(np.uint64)
        residual = (np.uint64(W) - end_bit)
        right = region[..., half:].copy()
        region[..., half:] = 0
        need = int(((right_len + W - 1) // W).max()) if right_len.size else 0
        moved = 0
        for j in range(need):
            w = right[..., j]
            dest = end_word + j
            hi_part = w >> end_bit
            lo_part = np.where(end_bit > 0, (w << residual) & mask, np.uint64(0))
            _or_at(region, dest, hi_part)
            _or_at(region, dest + 1, lo_part)
            moved += int(np.count_nonzero(j < (right_len + W - 1) // W))
        words = region.reshape(chunks, units)
        group_len = left_len + right_len
        if trace is not None:
            trace.append(moved)
        half *= 2
    return words.astype(np.uint32), group_len.reshape(chunks).astype(np.uint32)


def _or_at(region, dest, values):
    limit = region.shape[-1]
    ok = dest < limit
    idx = np.where(ok, dest, 0)[..., None]
    cur = np.take_along_axis(region, idx, axis=-1)[..., 0]
    np.put_along_axis(region, idx, (cur | np.where(ok, values, np.uint64(0)))[..., None], axis=-1)


def encode_chunks(symbols, code_bits, code_len, magnitude, r, word_bits):
    """Lookup, reduce-merge and shuffle-merge for a batch of full chunks.

    Returns ``(words[chunks, 2**s], bit_len[chunks], broken[chunks, 2**s])``.
    """
    bits, lens = lookup(symbols, code_bits, code_len, magnitude)
    bits, lens, broken = reduce_merge(bits, lens, r, word_bits)
    words, bit_len = shuffle_merge(bits, lens, word_bits)
    return words, bit_len, broken.astype(np.uint8)


def decode_chunks(payload, word_offsets, bit_lens, counts, first, count, entry,
                  symbols_by_rank, max_len, word_bits, chunk_base=0):
    """Treeless canonical decode of every chunk.

    Returns ``(symbols, consumed)``: all symbols in order and the number of
    bits read from each chunk.
    """
    W = word_bits
    H = max_len
    out = np.empty(int(np.sum(counts)), dtype=np.uint16)
    lengths = [ln for ln in range(1, H + 1) if count[ln] > 0]
    low = {ln: int(first[ln]) - int(count[ln]) + 1 for ln in lengths}
    top = {ln: int(first[ln]) for ln in lengths}
    base = {ln: int(entry[ln]) for ln in lengths}
    ranks = symbols_by_rank.tolist()
    consumed = np.zeros(len(bit_lens), dtype=np.int64)
    k = 0
    for c in range(len(bit_lens)):
        words = [int(x) for x in payload[word_offsets[c]:word_offsets[c + 1]]]
        nbits = int(bit_lens[c])
        pos = 0
        for _ in range(int(counts[c])):
            widx, off = divmod(pos, W)
            acc = 0
            for j in range(3):
                acc = (acc << W) | (words[widx + j] if widx + j < len(words) else 0)
            window = (acc >> (3 * W - off - H)) & ((1 << H) - 1)
            for ln in lengths:
                prefix = window >> (H - ln)
                if prefix >= low[ln]:
                    break
            else:
                raise CorruptStreamError("no codeword matches", chunk=chunk_base + c, bit_offset=pos)
            if prefix > top[ln] or pos + ln > nbits:
                raise CorruptStreamError(
                    f"invalid or truncated codeword in chunk {chunk_base + c} at bit {pos}",
                    chunk=chunk_base + c, bit_offset=pos)
            out[k] = ranks[base[ln] + top[ln] - prefix]
            k += 1
            pos += ln
        consumed[c] = pos
    return out, consumed
