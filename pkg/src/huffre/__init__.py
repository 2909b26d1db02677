"""Data-parallel canonical Huffman codec.

Typical use::

    from huffre import build_histogram, build_codebook, EncoderConfig, encode, decode_archive

    hist = build_histogram(symbols, num_symbols)
    cb, meta = build_codebook(hist)
    archive = encode(symbols, cb, EncoderConfig.auto(cb.average_bits(hist)))
    assert (decode_archive(archive) == symbols).all()
"""
from ._backend import BACKEND
from .archive import Archive, BreakingPoint
from .codebook import (
    Codebook,
    DecodeMeta,
    SortedHistogram,
    build_codebook,
    codebook_from_lengths,
    complement_codeword,
    generate_code_lengths,
    generate_codewords,
    invert_codeword,
    par_merge,
    sort_histogram,
)
from .decode import ReverseCodebook, decode_stream
from .encoder import (
    CodeUnit,
    EncodedChunk,
    EncoderConfig,
    decode_archive,
    encode,
    encode_chunk,
    merge_pair,
    reduce_merge,
    select_reduction_factor,
    shuffle_merge,
)
from .errors import CapacityError, CorruptStreamError, HuffreError, InputDomainError, StructuralError
from .histogram import Histogram, build_histogram, merge_histograms, zero_histogram

__version__ = "0.1.0"

__all__ = [
    "Archive",
    "BACKEND",
    "BreakingPoint",
    "CapacityError",
    "CodeUnit",
    "Codebook",
    "CorruptStreamError",
    "DecodeMeta",
    "EncodedChunk",
    "EncoderConfig",
    "Histogram",
    "HuffreError",
    "InputDomainError",
    "ReverseCodebook",
    "SortedHistogram",
    "StructuralError",
    "build_codebook",
    "build_histogram",
    "codebook_from_lengths",
    "complement_codeword",
    "decode_archive",
    "decode_stream",
    "encode",
    "encode_chunk",
    "generate_code_lengths",
    "generate_codewords",
    "invert_codeword",
    "merge_histograms",
    "merge_pair",
    "par_merge",
    "reduce_merge",
    "select_reduction_factor",
    "shuffle_merge",
    "sort_histogram",
    "zero_histogram",
]
