import numpy as np
import pytest

from huffre.errors import InputDomainError, StructuralError
from huffre.histogram import (Histogram, build_histogram, merge_histograms, reduce_histograms,
                              zero_histogram)


def test_counts_match_bincount(rng):
    data = rng.integers(0, 300, 10_001)
    h = build_histogram(data, 300)
    assert np.array_equal(h.counts, np.bincount(data, minlength=300))
    assert h.total == 10_001
    assert h.used == len(np.unique(data))


def test_small_example():
    h = build_histogram([0, 1, 1, 2, 2, 2], 4)
    assert h.counts.tolist() == [1, 2, 3, 0]


def test_empty_input_gives_zero_histogram():
    h = build_histogram([], 5)
    assert h == zero_histogram(5)
    assert h.total == 0


@pytest.mark.parametrize("workers", [1, 2, 3, 8, 64])
def test_worker_count_does_not_matter(rng, workers):
    data = rng.integers(0, 1000, 50_000)
    assert build_histogram(data, 1000, workers=workers) == build_histogram(data, 1000, workers=1)


def test_out_of_range_symbol_names_position():
    with pytest.raises(InputDomainError, match="position 2"):
        build_histogram([1, 2, 9, 0], 4)


def test_negative_symbol_rejected():
    with pytest.raises(InputDomainError):
        build_histogram(np.array([0, -1]), 4)


@pytest.mark.parametrize("n", [0, -3, (1 << 16) + 1])
def test_bad_alphabet_size(n):
    with pytest.raises(InputDomainError):
        build_histogram([0], n)


def test_merge_is_associative_and_commutative(rng):
    parts = [build_histogram(rng.integers(0, 50, 1000), 50) for _ in range(3)]
    a, b, c = parts
    assert merge_histograms(merge_histograms(a, b), c) == merge_histograms(a, merge_histograms(b, c))
    assert merge_histograms(a, b) == merge_histograms(b, a)
    assert reduce_histograms(parts) == merge_histograms(merge_histograms(a, b), c)


def test_merge_length_mismatch():
    with pytest.raises(StructuralError):
        merge_histograms(zero_histogram(3), zero_histogram(4))


def test_counts_are_read_only():
    h = build_histogram([0, 0, 1], 2)
    with pytest.raises(ValueError):
        h.counts[0] = 5
    assert isinstance(hash(h), int)
    assert isinstance(h, Histogram)
