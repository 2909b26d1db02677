import numpy as np
import pytest

from huffre import _backend, _pykernels
from huffre.codebook import build_codebook, codebook_from_lengths
from huffre.encoder import (CodeUnit, EncoderConfig, breaking_overhead_bits, decode_archive, encode,
                            encode_chunk, merge_pair, reduce_merge, select_reduction_factor,
                            shuffle_merge)
from huffre.errors import CapacityError, InputDomainError
from huffre.histogram import build_histogram
from huffre.oracle import bits_to_str, oracle_encode
from huffre.synthetic import nyx_like


# ------------------------------------------------------------ r selection

@pytest.mark.parametrize("beta,r", [(1.03, 4), (1.0, 4), (1.99, 4), (2.0, 3), (5.16, 2),
                                    (8.0, 1), (15.9, 1), (16.0, 0), (31.0, 0)])
def test_select_reduction_factor(beta, r):
    assert select_reduction_factor(beta, 32) == r


def test_select_reduction_factor_clamps_to_magnitude():
    assert select_reduction_factor(0.5, 32, magnitude=3) == 2


def test_select_reduction_factor_rejects_nonpositive():
    with pytest.raises(InputDomainError):
        select_reduction_factor(0.0)


def test_auto_config_caps_at_three():
    assert EncoderConfig.auto(1.03).reduction == 3
    assert EncoderConfig.auto(1.03, cap=None).reduction == 4
    assert EncoderConfig.auto(5.16).reduction == 2


@pytest.mark.parametrize("kw", [dict(word_bits=24), dict(magnitude=0), dict(magnitude=10, reduction=10),
                                dict(reduction=-1)])
def test_config_validation(kw):
    with pytest.raises(InputDomainError):
        EncoderConfig(**kw)


def test_config_shuffle_factor():
    cfg = EncoderConfig(12, 4)
    assert (cfg.chunk_size, cfg.shuffle) == (4096, 8)


# ------------------------------------------------------------ merge primitives

def test_merge_pair_order_matters():
    a, b = CodeUnit(0b1, 1), CodeUnit(0b01, 2)
    assert merge_pair(a, b) == CodeUnit(0b101, 3)
    assert merge_pair(b, a) == CodeUnit(0b011, 3)


def test_merge_pair_is_associative():
    a, b, c = CodeUnit(0b1, 1), CodeUnit(0b01, 2), CodeUnit(0b110, 3)
    assert merge_pair(merge_pair(a, b), c) == merge_pair(a, merge_pair(b, c))


def test_merge_pair_overflow():
    with pytest.raises(CapacityError):
        merge_pair(CodeUnit(1, 20), CodeUnit(1, 13))
    assert merge_pair(CodeUnit(1, 4), CodeUnit(1, 4), word_bits=8).length == 8


def test_reduce_merge_example():
    bits, lens, brk = reduce_merge([1, 1, 0, 3], [1, 2, 3, 3], r=1)
    assert list(zip(bits.tolist(), lens.tolist())) == [(0b101, 3), (0b000011, 6)]
    assert brk == []


def test_reduce_merge_trace_counts_units():
    trace = []
    n = 1 << 6
    reduce_merge(np.zeros(n), np.ones(n), r=4, trace=trace)
    assert trace == [1 << (6 - i) for i in range(1, 5)]


def test_reduce_merge_marks_breaking_group():
    lens = [1] * 8
    lens[5] = 7
    bits, lens_out, brk = reduce_merge([0] * 8, lens, r=2, word_bits=8, symbols=np.arange(8), chunk_id=3)
    assert [(b.chunk_id, b.group_index, b.symbols.tolist()) for b in brk] == [(3, 1, [4, 5, 6, 7])]
    assert (int(bits[1]), int(lens_out[1])) == (0, 0)
    assert int(lens_out[0]) == 4


def test_reduce_merge_rejects_bad_unit_count():
    with pytest.raises(InputDomainError):
        reduce_merge([0, 0, 0], [1, 1, 1], r=1)


def test_shuffle_merge_example():
    # four units of 12 bits in 16-bit words -> 48 dense bits
    units = [0xABC, 0xDEF, 0x123, 0x456]
    words, bit_len = shuffle_merge(units, [12] * 4, word_bits=16)
    assert bit_len == 48
    assert bits_to_str(words, bit_len, 16) == "".join(format(u, "012b") for u in units)


def test_shuffle_merge_skips_empty_units():
    words, bit_len = shuffle_merge([0b1, 0, 0b11, 0], [1, 0, 2, 0], word_bits=8)
    assert (bits_to_str(words, bit_len, 8), bit_len) == ("111", 3)


def test_shuffle_merge_trace():
    trace = []
    shuffle_merge(np.zeros(16), np.ones(16), trace=trace)
    assert len(trace) == 4


# ------------------------------------------------------------ whole-stream encode

def _codebook(data, alphabet):
    return build_codebook(build_histogram(data, alphabet))[0]


def test_encode_chunk_matches_oracle(rng):
    data = rng.integers(0, 16, 256).astype(np.uint16)
    cb = _codebook(data, 16)
    chunk = encode_chunk(data, cb, EncoderConfig(8, 2))
    assert bits_to_str(chunk.used_words, chunk.bit_len) == oracle_encode(data, cb)
    assert chunk.breaking == []


def test_encode_chunk_too_long():
    cb, _ = codebook_from_lengths([1, 1])
    with pytest.raises(InputDomainError):
        encode_chunk(np.zeros(300, np.uint16), cb, EncoderConfig(8, 1))


def test_encode_rejects_uncoded_symbol():
    cb, _ = codebook_from_lengths([1, 1, 0])
    with pytest.raises(InputDomainError, match="position 3"):
        encode(np.array([0, 1, 0, 2]), cb)


def test_encode_rejects_empty_and_non_integer():
    cb, _ = codebook_from_lengths([1, 1])
    with pytest.raises(InputDomainError):
        encode(np.array([], dtype=np.uint16), cb)
    with pytest.raises(InputDomainError):
        encode(np.array([0.5]), cb)


def test_encode_capacity_check():
    cb, _ = codebook_from_lengths([1] + list(range(2, 12)) + [11])
    with pytest.raises(CapacityError):
        encode(np.array([11]), cb, EncoderConfig(8, 1, word_bits=8))


@pytest.mark.parametrize("M", [8, 10, 12])
@pytest.mark.parametrize("r", range(5))
def test_roundtrip_grid(rng, M, r):
    data = np.minimum(rng.geometric(0.2, int(rng.integers(1, 3 << M))) - 1, 255).astype(np.uint16)
    cb = _codebook(data, 256)
    a = encode(data, cb, EncoderConfig(M, r))
    assert np.array_equal(decode_archive(a), data)


def test_forced_breaking_roundtrip(rng):
    data = rng.integers(0, 8192, 5000).astype(np.uint16)
    cb = _codebook(data, 8192)
    a = encode(data, cb, EncoderConfig(8, 3))  # 8 codewords of ~13 bits never fit 32
    assert a.num_breaking == a.num_groups
    assert np.array_equal(decode_archive(a), data)
    assert breaking_overhead_bits(a) > 0


@pytest.mark.parametrize("W", [8, 16, 32])
def test_word_widths(rng, W):
    data = np.minimum(rng.geometric(0.4, 3000) - 1, 7).astype(np.uint16)
    cb = _codebook(data, 8)
    a = encode(data, cb, EncoderConfig(9, 2, word_bits=W))
    assert a.payload.max(initial=0) < (1 << W)
    assert np.array_equal(decode_archive(a.to_bytes()), data)


def test_single_symbol_alphabet():
    data = np.full(1000, 3, dtype=np.uint16)
    cb = _codebook(data, 5)
    a = encode(data, cb, EncoderConfig(8, 3))
    assert a.payload_bits == 1024  # one bit per symbol, padded tail included
    assert np.array_equal(decode_archive(a), data)


def test_breaking_increases_with_r():
    data = nyx_like(1 << 20, seed=3)
    cb = _codebook(data, 1024)
    fr = [encode(data, cb, EncoderConfig(10, r)).num_breaking for r in (2, 3, 4)]
    assert fr[0] <= fr[1] <= fr[2] and fr[2] > 0


# ------------------------------------------------------------ backends

@pytest.mark.skipif("native" not in _backend.AVAILABLE, reason="compiled kernels not built")
@pytest.mark.parametrize("W", [8, 16, 32])
@pytest.mark.parametrize("r", [0, 2, 4])
def test_backends_produce_identical_archives(rng, W, r):
    alphabet = 64 if W == 8 else 1024
    data = (nyx_like(20_000, 1024, seed=r) % alphabet).astype(np.uint16)
    cb = _codebook(data, alphabet)
    cfg = EncoderConfig(10, r, word_bits=W)
    blobs = {name: encode(data, cb, cfg, backend=name).to_bytes() for name in _backend.AVAILABLE}
    assert len(set(blobs.values())) == 1
    for name in _backend.AVAILABLE:
        assert np.array_equal(decode_archive(blobs["python"], backend=name), data)


def test_python_kernels_batch_equals_single_chunk(rng):
    data = rng.integers(0, 4, 4 * 256).astype(np.uint16)
    cb = _codebook(data, 4)
    words, bit_len, brk = _pykernels.encode_chunks(data, cb.bits, cb.lengths, 8, 2, 32)
    for c in range(4):
        one = encode_chunk(data[c * 256:(c + 1) * 256], cb, EncoderConfig(8, 2), chunk_id=c)
        assert one.bit_len == bit_len[c]
        assert np.array_equal(one.words, words[c])


def test_unknown_backend():
    with pytest.raises(ValueError):
        _backend.get_backend("gpu")
