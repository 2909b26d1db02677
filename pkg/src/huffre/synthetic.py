"""Synthetic inputs shaped like the quantization codes of lossy compressors."""
import numpy as np


def nyx_like_probs(num_symbols=1024, p_center=0.997, decay=0.995):
    """One dominant symbol plus a slowly decaying tail.

    The defaults give an average Huffman codeword of about 1.03 bits with a
    longest codeword near 15 bits.
    """
    tail = decay ** np.arange(num_symbols - 1)
    tail *= (1.0 - p_center) / tail.sum()
    return np.concatenate([[p_center], tail])


def nyx_like(size, num_symbols=1024, seed=0, **kw):
    rng = np.random.default_rng(seed)
    probs = nyx_like_probs(num_symbols, **kw)
    return rng.choice(num_symbols, size=size, p=probs).astype(np.uint16)


def geometric_symbols(size, num_symbols, p=0.3, seed=0):
    """Geometric(p) values clipped to the alphabet."""
    rng = np.random.default_rng(seed)
    return np.minimum(rng.geometric(p, size) - 1, num_symbols - 1).astype(np.uint16)
