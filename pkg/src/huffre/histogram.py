"""Symbol frequency histograms built from per-worker private copies."""
from dataclasses import dataclass

import numpy as np

from ._parallel import parallel_map, resolve_workers, split_ranges
from .errors import InputDomainError, StructuralError

MAX_SYMBOLS = 1 << 16


@dataclass(frozen=True)
class Histogram:
    """Global frequency table; ``counts[s]`` is the occurrence count of ``s``."""

    counts: np.ndarray
    total: int

    def __post_init__(self):
        counts = np.ascontiguousarray(self.counts, dtype=np.int64)
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "total", int(self.total))

    @property
    def num_symbols(self):
        return len(self.counts)

    @property
    def used(self):
        """Number of symbols with a nonzero count."""
        return int(np.count_nonzero(self.counts))

    def __eq__(self, other):
        if not isinstance(other, Histogram):
            return NotImplemented
        return self.total == other.total and np.array_equal(self.counts, other.counts)

    def __hash__(self):
        return hash((self.total, self.counts.tobytes()))


def zero_histogram(num_symbols):
    return Histogram(np.zeros(num_symbols, dtype=np.int64), 0)


def _check_num_symbols(num_symbols):
    if not 1 <= num_symbols <= MAX_SYMBOLS:
        raise InputDomainError(f"num_symbols must be in [1, {MAX_SYMBOLS}], got {num_symbols}")


def _private_histogram(data, num_symbols):
    return np.bincount(data, minlength=num_symbols).astype(np.int64, copy=False)


def build_histogram(data, num_symbols, workers=None):
    """Count symbol occurrences of ``data``.

    The input is cut into one contiguous range per worker, each range is
    counted into a private histogram, and the private copies are reduced
    pairwise. The result does not depend on ``workers``.
    """
    _check_num_symbols(num_symbols)
    workers = resolve_workers(workers)
    data = np.asarray(data)
    if data.ndim != 1:
        data = data.ravel()
    if data.size == 0:
        return zero_histogram(num_symbols)
    if data.dtype.kind not in "iu":
        raise InputDomainError(f"symbols must be integers, got dtype {data.dtype}")
    bad = np.flatnonzero((data < 0) | (data >= num_symbols))
    if bad.size:
        pos = int(bad[0])
        raise InputDomainError(
            f"symbol {int(data[pos])} at position {pos} is outside [0, {num_symbols})"
        )

    ranges = split_ranges(data.size, workers)
    private = parallel_map(lambda rg: _private_histogram(data[rg[0]:rg[1]], num_symbols), ranges, workers)
    private = [Histogram(p, hi - lo) for p, (lo, hi) in zip(private, ranges)]
    return reduce_histograms(private)


def merge_histograms(a, b):
    if a.num_symbols != b.num_symbols:
        raise StructuralError(
            f"cannot merge histograms of {a.num_symbols} and {b.num_symbols} symbols"
        )
    return Histogram(a.counts + b.counts, a.total + b.total)


def reduce_histograms(parts):
    """Tree reduction of private histograms (pairwise, level by level)."""
    parts = list(parts)
    if not parts:
        raise ValueError("nothing to reduce")
    while len(parts) > 1:
        nxt = [merge_histograms(parts[i], parts[i + 1]) for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            nxt.append(parts[-1])
        parts = nxt
    return parts[0]
