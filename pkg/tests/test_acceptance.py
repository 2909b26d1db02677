"""Acceptance criteria, one test per criterion.

A PASS/FAIL/SKIP line per criterion is printed at the end of the run.
"""
import math
import time

import numpy as np
import pytest

from huffre.archive import Archive
from huffre.codebook import build_codebook, check_canonical, check_kraft, generate_code_lengths, sort_histogram
from huffre.encoder import EncoderConfig, decode_archive, encode, pad_symbol
from huffre.errors import CorruptStreamError
from huffre.histogram import build_histogram
from huffre.oracle import bits_to_str, oracle_encode, oracle_weighted_total
from huffre.synthetic import nyx_like

from conftest import data_path

pytestmark = pytest.mark.acceptance


def random_counts(rng, n, spread=30):
    kind = rng.integers(4)
    if kind == 0:
        c = rng.integers(1, 1000, n)
    elif kind == 1:
        c = rng.zipf(1.3, n).clip(1, 2 ** spread)
    elif kind == 2:
        c = (2.0 ** rng.uniform(0, spread, n)).astype(np.int64) + 1
    else:
        c = rng.integers(1, 4, n)  # heavy ties
    return c.astype(np.int64)


def log_uniform_n(rng, lo=2, hi=8192):
    return int(round(math.exp(rng.uniform(math.log(lo), math.log(hi)))))


def test_criterion_1_oracle_equivalence(record):
    rng = np.random.default_rng(1)
    t = time.perf_counter()
    trials = 1000
    ns = []
    for _ in range(trials):
        n = log_uniform_n(rng)
        ns.append(n)
        c = random_counts(rng, n)
        sh = sort_histogram(c)
        total = int((sh.freqs * generate_code_lengths(sh)).sum())
        assert total == oracle_weighted_total(c), f"n={n}"
    elapsed = time.perf_counter() - t
    record(1, f"{trials} histograms, n in [{min(ns)}, {max(ns)}], {elapsed:.1f}s")
    assert elapsed < 60


def _roundtrip_case(rng, i):
    M = [8, 10, 12][i % 3]
    r = i % 5
    alphabet = [2, 256, 1024, 8192][(i // 5) % 4]
    size = int(rng.integers(1, 3 << M))
    if i % 7 == 0:
        # forced breaking: a near-uniform large alphabet with 16 codewords per group
        data = rng.integers(0, alphabet, size).astype(np.uint16)
        W = 16 if alphabet <= 8192 and i % 2 else 32
    else:
        data = np.minimum(rng.geometric(rng.uniform(0.05, 0.9), size) - 1, alphabet - 1).astype(np.uint16)
        W = 32
    return M, r, alphabet, W, data


def test_criterion_2_roundtrip(record):
    rng = np.random.default_rng(2)
    trials, breaking_trials = 240, 0
    for i in range(trials):
        M, r, alphabet, W, data = _roundtrip_case(rng, i)
        hist = build_histogram(data, alphabet)
        cb, _ = build_codebook(hist, word_bits=32)
        if cb.max_len > W:
            W = 32
        a = encode(data, cb, EncoderConfig(M, r, W))
        breaking_trials += a.num_breaking > 0
        out = decode_archive(Archive.from_bytes(a.to_bytes()))
        assert np.array_equal(out, data), (M, r, alphabet, W)
    record(2, f"{trials} trials, {breaking_trials} with breaking records, 0 failures")
    assert breaking_trials >= 10


def test_criterion_3_canonical_invariants(record):
    rng = np.random.default_rng(3)
    checked = 0
    for _ in range(500):
        n = log_uniform_n(rng)
        c = random_counts(rng, n, spread=16)
        counts = np.zeros(n + int(rng.integers(0, 10)), dtype=np.int64)
        counts[:n] = c
        rng.shuffle(counts)
        cb, _ = build_codebook(counts)
        if cb.used > 1:
            assert check_kraft(cb.lengths) == 1
        assert check_canonical(cb)
        checked += 1
    record(3, f"{checked} codebooks: Kraft == 1, prefix-free, canonical order")


def test_criterion_4_bit_exact_payload(record):
    rng = np.random.default_rng(4)
    done = 0
    while done < 100:
        alphabet = int(rng.choice([2, 16, 256, 1024]))
        M = int(rng.choice([8, 10]))
        r = int(rng.integers(0, 3))
        size = int(rng.integers(1, 3 << M))
        data = np.minimum(rng.geometric(rng.uniform(0.1, 0.9), size) - 1, alphabet - 1).astype(np.uint16)
        cb, _ = build_codebook(build_histogram(data, alphabet))
        a = encode(data, cb, EncoderConfig(M, r))
        if a.num_breaking:
            continue
        N = a.chunk_size
        padded = np.concatenate([data, np.full(a.num_chunks * N - size, pad_symbol(cb), np.uint16)])
        offs = a.word_offsets
        for c in range(a.num_chunks):
            got = bits_to_str(a.payload[offs[c]:offs[c + 1]], int(a.chunk_bit_lens[c]), a.word_bits)
            assert got == oracle_encode(padded[c * N:(c + 1) * N], cb)
        done += 1
    record(4, f"{done} inputs bit-identical to the serial bit writer")


def test_criterion_5_determinism(record):
    rng = np.random.default_rng(5)
    cases = 0
    for alphabet, size in [(256, 100_000), (1024, 300_001), (8192, 50_000), (2, 4097)]:
        data = np.minimum(rng.geometric(0.05, size) - 1, alphabet - 1).astype(np.uint16)
        ref = None
        for workers in (1, 2, 8):
            h = build_histogram(data, alphabet, workers=workers)
            cb, _ = build_codebook(h, workers=workers)
            blob = encode(data, cb, EncoderConfig(10, 2), workers=workers).to_bytes()
            got = (h.counts.tobytes(), cb.bits.tobytes(), cb.lengths.tobytes(), blob)
            if ref is None:
                ref = got
            assert got == ref, f"workers={workers}"
            assert np.array_equal(decode_archive(blob, workers=workers), data)
        cases += 1
    record(5, f"{cases} inputs identical across workers 1/2/8")


def test_criterion_6_dataset_statistics(record):
    enwik8 = data_path("enwik8")
    nyx = data_path("nyx_quant.u16")
    if enwik8 is None and nyx is None:
        pytest.skip("datasets absent: place enwik8 and/or nyx_quant.u16 under data/ or $HUFFRE_DATA")
    notes = []
    if enwik8:
        with open(enwik8, "rb") as fh:
            raw = np.frombuffer(fh.read(), dtype=np.uint8).astype(np.uint16)
        h = build_histogram(raw, 256)
        cb, _ = build_codebook(h)
        beta = cb.average_bits(h)
        notes.append(f"enwik8 avg bits {beta:.5f} (expected 5.1639 +- 0.0005)")
        record(6, "; ".join(notes))
        assert abs(beta - 5.1639) <= 0.0005
    if nyx:
        with open(nyx, "rb") as fh:
            q = np.frombuffer(fh.read(), dtype="<u2").astype(np.uint16)
        h = build_histogram(q, 1024)
        cb, _ = build_codebook(h)
        notes.append(f"nyx-quant avg bits {cb.average_bits(h):.5f} (reference 1.0272)")
    record(6, "; ".join(notes))


def test_criterion_7_breaking_behaviour(record):
    data = nyx_like(1 << 22, 1024, seed=7)
    h = build_histogram(data, 1024)
    cb, _ = build_codebook(h)
    beta = cb.average_bits(h)
    fractions = {}
    for r in (2, 3, 4):
        a = encode(data, cb, EncoderConfig(10, r))
        fractions[r] = a.num_breaking / a.num_groups
        assert np.array_equal(decode_archive(a), data)
    record(7, f"avg {beta:.4f} bits; breaking r=2 {100 * fractions[2]:.6f}% "
              f"r=3 {100 * fractions[3]:.6f}% r=4 {100 * fractions[4]:.6f}%")
    assert abs(beta - 1.03) < 0.01
    assert fractions[3] < 0.001
    assert fractions[2] < fractions[3] < fractions[4]


def test_criterion_8_round_count(record):
    ratios = []
    for e in range(8, 14):
        n = 1 << e
        stats = {}
        generate_code_lengths(sort_histogram(np.full(n, 7)), stats=stats)
        ratios.append((n, stats["rounds"], stats["rounds"] / e))
        assert stats["rounds"] <= 4 * e
    c = max(x for _, _, x in ratios)
    record(8, "rounds/log2(n): " + ", ".join(f"n={n}:{k}" for n, k, _ in ratios) + f"; fitted c={c:.2f}")


def test_criterion_9_fuzz(record):
    rng = np.random.default_rng(9)
    blobs = []
    for checksum in (False, True):
        for alphabet, M, r in [(256, 8, 2), (1024, 8, 3), (4, 10, 1)]:
            data = (nyx_like(3000, 1024, seed=alphabet) % alphabet).astype(np.uint16)
            cb, _ = build_codebook(build_histogram(data, alphabet))
            blobs.append((encode(data, cb, EncoderConfig(M, r), checksum=checksum).to_bytes(),
                          data, checksum))
    tally = {True: [0, 0, 0], False: [0, 0, 0]}  # errors, decoded, decoded-but-different
    for i in range(1000):
        blob, data, checksum = blobs[i % len(blobs)]
        buf = bytearray(blob)
        bit = int(rng.integers(len(buf) * 8))
        buf[bit // 8] ^= 1 << (bit % 8)
        t = tally[checksum]
        try:
            out = decode_archive(bytes(buf))
        except CorruptStreamError:
            t[0] += 1
            continue
        t[1] += 1
        assert len(out) == Archive.from_bytes(bytes(buf)).original_count
        t[2] += not np.array_equal(out, data)
    record(9, f"crc on: {tally[True][0]}/{sum(tally[True][:2])} rejected; crc off: "
              f"{tally[False][0]} rejected, {tally[False][1]} decoded with the declared count "
              f"({tally[False][2]} silently different)")
    assert tally[True][1] == 0
