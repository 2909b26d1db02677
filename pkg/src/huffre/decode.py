"""Treeless canonical decoding driven by First/Entry tables."""
from dataclasses import dataclass

import numpy as np

from . import _backend
from .codebook import DEFAULT_WORD_BITS, DecodeMeta, codebook_from_lengths
from .errors import CorruptStreamError


@dataclass(frozen=True)
class ReverseCodebook:
    meta: DecodeMeta
    num_symbols: int

    @property
    def max_len(self):
        return self.meta.max_len

    @property
    def symbols_by_rank(self):
        return self.meta.symbols_by_rank

    @classmethod
    def from_lengths(cls, lengths, word_bits=DEFAULT_WORD_BITS):
        _, meta = codebook_from_lengths(lengths, word_bits)
        return cls(meta, len(lengths))


def decode_stream(words, count, rc, word_bits=DEFAULT_WORD_BITS, bit_len=None, backend=None):
    """Decode ``count`` symbols from MSB-first packed ``words``.

    If ``bit_len`` is given the stream must hold exactly that many bits of
    codewords; otherwise decoding may stop anywhere inside ``words``.
    Raises CorruptStreamError (with ``bit_offset``) on a bad or truncated
    codeword.
    """
    words = np.ascontiguousarray(words, dtype=np.uint32)
    if count == 0:
        if bit_len:
            raise CorruptStreamError("stream holds bits but no symbols were requested", bit_offset=0)
        return np.zeros(0, dtype=np.uint16)
    limit = len(words) * word_bits if bit_len is None else int(bit_len)
    if limit > len(words) * word_bits:
        raise CorruptStreamError(f"bit length {limit} exceeds the {len(words)} words supplied")
    out, _ = _backend.decode_chunks(
        words, np.array([0, len(words)]), np.array([limit]), np.array([count]),
        rc.meta, word_bits, backend=backend, exact=bit_len is not None)
    return out


def decode_with_tables(window_bits, meta):
    """Length and symbol of the codeword at the head of an ``H``-bit window.

    Scalar reference for the kernels; returns ``None`` if nothing matches.
    """
    H = meta.max_len
    for ln in range(1, H + 1):
        c = int(meta.count[ln])
        if not c:
            continue
        prefix = window_bits >> (H - ln)
        if prefix >= int(meta.first[ln]) - c + 1:
            if prefix > int(meta.first[ln]):
                return None
            rank = int(meta.entry[ln]) + int(meta.first[ln]) - prefix
            return ln, int(meta.symbols_by_rank[rank])
    return None
