import numpy as np
import pytest

from huffre.oracle import (bits_to_str, brute_force_optimal_cost, build_tree, canonical_from_lengths,
                           oracle_code_lengths, oracle_decode, oracle_encode, oracle_weighted_total,
                           two_finger_merge)


def test_textbook_example():
    counts = [5, 9, 12, 13, 16, 45]
    assert oracle_weighted_total(counts) == 224
    assert sorted(oracle_code_lengths(counts)) == [1, 3, 3, 3, 4, 4]


def test_tree_shape():
    tree, root = build_tree([3, 1, 1])
    assert tree.leaf_count == 3
    assert tree.internal_count == 2
    assert tree.depths(root) == {0: 1, 1: 2, 2: 2}


def test_unused_symbols_get_no_code():
    lengths = oracle_code_lengths([0, 4, 0, 4])
    assert list(lengths) == [0, 1, 0, 1]


@pytest.mark.parametrize("seed", range(20))
def test_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    freqs = rng.integers(1, 50, int(rng.integers(2, 9)))
    assert oracle_weighted_total(freqs) == brute_force_optimal_cost(freqs)


def test_canonical_shorter_is_larger():
    codes = canonical_from_lengths([2, 1, 3, 3])
    assert codes == {1: "1", 0: "01", 2: "000", 3: "001"}


def test_encode_decode():
    codes = canonical_from_lengths([2, 1, 3, 3])
    bits = oracle_encode([1, 0, 3, 2], codes)
    assert bits == "1" + "01" + "001" + "000"
    assert oracle_decode(bits, codes, 4) == [1, 0, 3, 2]
    with pytest.raises(ValueError):
        oracle_decode(bits[:-1], codes, 4)


def test_two_finger_merge_is_stable():
    a = [(1, "a"), (2, "a"), (2, "a2")]
    b = [(2, "b"), (3, "b")]
    out = two_finger_merge([x[0] for x in a], [x[0] for x in b])
    assert out == [1, 2, 2, 2, 3]


def test_bits_to_str():
    assert bits_to_str([0b1010_0000], 4, 8) == "1010"
    assert bits_to_str([0xFFFF, 0], 20, 16) == "1" * 16 + "0000"
