"""Two-phase canonical Huffman codebook construction.

Phase one computes codeword lengths level-synchronously: every round forms
one new internal node ``t`` from the two smallest live nodes, then pairs up
in a single step every other live node lighter than ``t``. Phase two turns
the lengths into canonical codewords one length at a time and records the
per-length tables needed for treeless decoding.

Node state lives in flat numpy arrays (structure of arrays). Each "for all
nodes concurrently" step is one vectorised operation; the only
partition-parallel step is the merge, done with Merge Path.
"""
from dataclasses import dataclass

import numpy as np

from ._parallel import resolve_workers, split_ranges
from .errors import CapacityError, InputDomainError

DEFAULT_WORD_BITS = 32


@dataclass(frozen=True)
class SortedHistogram:
    freqs: np.ndarray  # ascending, no zeros
    symbol_of: np.ndarray  # sorted index -> original symbol
    num_symbols: int

    @property
    def n(self):
        return len(self.freqs)


def sort_histogram(h):
    """Drop unused symbols and sort the rest by (frequency, symbol)."""
    counts = np.asarray(getattr(h, "counts", h), dtype=np.int64)
    used = np.flatnonzero(counts)
    if used.size == 0:
        raise InputDomainError("histogram has no nonzero counts")
    order = np.argsort(counts[used], kind="stable")
    return SortedHistogram(counts[used][order], used[order], len(counts))


# ---------------------------------------------------------------- Merge Path

def merge_path_split(a, b, diag):
    """Number of elements taken from ``a`` among the first ``diag`` merged.

    Ties resolve in favour of ``a`` so the merge is stable.
    """
    lo = max(0, diag - len(b))
    hi = min(diag, len(a))
    while lo < hi:
        mid = (lo + hi) // 2
        if a[mid] <= b[diag - mid - 1]:
            lo = mid + 1
        else:
            hi = mid
    return lo


def merge_order(a, b, partitions=1):
    """Positions into ``concat(a, b)`` listing the stable merged order.

    The output range is cut into ``partitions`` equal diagonals; each
    partition locates its start on both inputs by binary search and merges
    its slice independently. The result does not depend on ``partitions``.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    total = len(a) + len(b)
    if total == 0:
        return np.zeros(0, dtype=np.int64)
    ranges = split_ranges(total, partitions)
    splits = [merge_path_split(a, b, lo) for lo, _ in ranges] + [len(a)]

    def merge_slice(k):
        lo, hi = ranges[k]
        ia0, ia1 = splits[k], splits[k + 1]
        ib0, ib1 = lo - ia0, hi - ia1
        keys = np.concatenate([a[ia0:ia1], b[ib0:ib1]])
        src = np.concatenate([np.arange(ia0, ia1), len(a) + np.arange(ib0, ib1)])
        # stable sort on a slice that lists a before b is a stable merge
        return src[np.argsort(keys, kind="stable")]

    parts = [merge_slice(k) for k in range(len(ranges))]
    return np.concatenate(parts)


def par_merge(a, b, partitions=1):
    """Stable merge of two ascending runs; ``a`` wins ties."""
    order = merge_order(a, b, partitions)
    return np.concatenate([np.asarray(a), np.asarray(b)])[order]


# ---------------------------------------------------------------- phase one

@dataclass
class NodeArrays:
    """Working state of the length phase.

    Leaves are indexed by sorted position, internal nodes by creation order.
    ``leaf_leader`` points at the topmost internal node above a leaf (-1 while
    the leaf is unattached); ``inode_parent`` is -1 until the node is melded.
    ``queue`` lists live internal nodes in ascending frequency order and
    ``consumed`` counts leaves taken off the front of the leaf array.
    """

    leaf_freq: np.ndarray
    leaf_leader: np.ndarray
    code_len: np.ndarray
    inode_freq: np.ndarray
    inode_parent: np.ndarray
    queue: np.ndarray
    consumed: int = 0
    num_inodes: int = 0

    @classmethod
    def init(cls, freqs):
        n = len(freqs)
        return cls(
            leaf_freq=np.asarray(freqs, dtype=np.int64),
            leaf_leader=np.full(n, -1, dtype=np.int64),
            code_len=np.zeros(n, dtype=np.int64),
            inode_freq=np.zeros(max(n - 1, 1), dtype=np.int64),
            inode_parent=np.full(max(n - 1, 1), -1, dtype=np.int64),
            queue=np.zeros(0, dtype=np.int64),
        )

    def new_inode(self, freq):
        idx = self.num_inodes
        self.inode_freq[idx] = freq
        self.num_inodes += 1
        return idx

    def attach(self, child_is_leaf, child, parent):
        if child_is_leaf:
            self.leaf_leader[child] = parent
            self.code_len[child] = 1
        else:
            self.inode_parent[child] = parent


def _new_node_from_smallest_two(st):
    """Pop the two lightest live nodes (leaf first on ties) into a new node."""
    n = len(st.leaf_freq)
    picks = []
    qpos = 0
    for _ in range(2):
        leaf_ok = st.consumed < n
        inode_ok = qpos < len(st.queue)
        if leaf_ok and (not inode_ok or st.leaf_freq[st.consumed] <= st.inode_freq[st.queue[qpos]]):
            picks.append((True, st.consumed))
            st.consumed += 1
        else:
            picks.append((False, int(st.queue[qpos])))
            qpos += 1
    st.queue = st.queue[qpos:]
    freq = sum(st.leaf_freq[i] if leaf else st.inode_freq[i] for leaf, i in picks)
    t = st.new_inode(freq)
    for leaf, i in picks:
        st.attach(leaf, i, t)
    return t


def _update_leaf_nodes(st):
    """Every leaf whose leader gained a parent this round moves one level down."""
    attached = np.flatnonzero(st.leaf_leader >= 0)
    parent = st.inode_parent[st.leaf_leader[attached]]
    moved = parent >= 0
    idx = attached[moved]
    st.code_len[idx] += 1
    st.leaf_leader[idx] = parent[moved]


def generate_code_lengths(sh, workers=None, stats=None):
    """Optimal codeword lengths aligned with ``sh.freqs`` (ascending order).

    The returned lengths are non-increasing. If ``stats`` is a dict, the
    number of rounds is stored under ``"rounds"``.
    """
    workers = resolve_workers(workers)
    freqs = np.asarray(getattr(sh, "freqs", sh), dtype=np.int64)
    n = len(freqs)
    if n == 0:
        raise InputDomainError("no symbols to build a code for")
    if n == 1:
        if stats is not None:
            stats["rounds"] = 0
        return np.ones(1, dtype=np.int64)

    st = NodeArrays.init(freqs)
    rounds = 0
    while st.consumed < n or len(st.queue) > 1:
        t = _new_node_from_smallest_two(st)
        t_freq = st.inode_freq[t]
        # every other live internal node is already lighter than t
        rest = st.queue
        lo = st.consumed
        # eligible leaves form a prefix of the unconsumed ones; the prefix
        # length is the max-reduction of (i - c + 1) over the selection mask
        hi = lo + int(np.searchsorted(st.leaf_freq[lo:], t_freq, side="left"))
        copy = np.arange(lo, hi)
        st.consumed = hi

        keys = np.concatenate([st.leaf_freq[copy], st.inode_freq[rest]])
        order = merge_order(keys[:len(copy)], keys[len(copy):], workers)
        is_leaf = order < len(copy)
        ids = np.concatenate([copy, rest])[order]
        freq = keys[order]
        keep = np.zeros(0, dtype=np.int64)
        if len(order) % 2:
            # hold back the heaviest eligible node for the next round
            if is_leaf[-1]:
                st.consumed -= 1
            else:
                keep = ids[-1:]
            is_leaf, ids, freq = is_leaf[:-1], ids[:-1], freq[:-1]

        pairs = len(ids) // 2
        pair_freq = freq.reshape(pairs, 2).sum(axis=1)
        new_ids = np.arange(st.num_inodes, st.num_inodes + pairs)
        st.inode_freq[new_ids] = pair_freq
        st.num_inodes += pairs
        parents = np.repeat(new_ids, 2)
        leaf_ids = ids[is_leaf]
        st.leaf_leader[leaf_ids] = parents[is_leaf]
        st.code_len[leaf_ids] = 1
        st.inode_parent[ids[~is_leaf]] = parents[~is_leaf]

        st.queue = np.concatenate([keep, [t], new_ids]).astype(np.int64)
        _update_leaf_nodes(st)
        rounds += 1

    if stats is not None:
        stats["rounds"] = rounds
    return st.code_len.copy()


# ---------------------------------------------------------------- phase two

def invert_codeword(bits, length):
    """Reverse the order of the low ``length`` bits of ``bits``."""
    out = 0
    for _ in range(length):
        out = (out << 1) | (bits & 1)
        bits >>= 1
    return out


def complement_codeword(bits, length):
    """Flip every bit of a ``length``-bit codeword."""
    return bits ^ ((1 << length) - 1)


@dataclass(frozen=True)
class DecodeMeta:
    """Per-length tables for treeless decoding (index 0 unused).

    ``first[l]`` is the numerically largest codeword of length ``l``,
    ``entry[l]`` the number of codewords shorter than ``l``, ``count[l]`` the
    number of codewords of length ``l``. ``symbols_by_rank[entry[l] + k]`` is
    the symbol whose codeword is ``first[l] - k``.
    """

    first: np.ndarray
    entry: np.ndarray
    count: np.ndarray
    symbols_by_rank: np.ndarray

    @property
    def max_len(self):
        return len(self.first) - 1


@dataclass(frozen=True)
class Codebook:
    bits: np.ndarray  # per-symbol codeword, right-aligned
    lengths: np.ndarray  # 0 marks an unused symbol
    max_len: int

    @property
    def num_symbols(self):
        return len(self.lengths)

    @property
    def used(self):
        return int(np.count_nonzero(self.lengths))

    def average_bits(self, h):
        """Average codeword length weighted by a histogram."""
        counts = np.asarray(getattr(h, "counts", h), dtype=np.float64)
        total = counts.sum()
        return float(counts @ self.lengths.astype(np.float64) / total) if total else 0.0

    def weighted_total(self, h):
        counts = np.asarray(getattr(h, "counts", h), dtype=np.int64)
        return int(counts @ self.lengths.astype(np.int64))

    def as_dict(self):
        return {
            s: format(int(b), f"0{int(ln)}b")
            for s, (b, ln) in enumerate(zip(self.bits, self.lengths))
            if ln > 0
        }


def generate_codewords(code_len, word_bits=DEFAULT_WORD_BITS, stats=None):
    """Canonical codewords for lengths given in non-decreasing order.

    Within one length, the codes are consecutive and handed out in reverse,
    so after the final complement earlier positions hold smaller codes and
    every shorter code is numerically above the matching prefix of every
    longer one. Returns ``(codewords, first, entry, count)``, the tables
    indexed by length.
    """
    cl = np.asarray(code_len, dtype=np.int64)
    n = len(cl)
    if n == 0:
        raise InputDomainError("no codeword lengths")
    if np.any(cl[1:] < cl[:-1]) or cl[0] < 1:
        raise InputDomainError("codeword lengths must be positive and non-decreasing")
    H = int(cl[-1])
    if H > word_bits:
        raise CapacityError(f"longest codeword needs {H} bits, word width is {word_bits}")

    cw = np.zeros(n, dtype=np.uint64)
    first = np.zeros(H + 1, dtype=np.int64)
    entry = np.zeros(H + 1, dtype=np.int64)
    count = np.zeros(H + 1, dtype=np.int64)
    if n == 1:
        first[1], count[1] = 0, 1
        if stats is not None:
            stats["levels"] = 1
        return cw, first, entry, count

    fcw = 0
    start = 0
    levels = 0
    while start < n:
        cur = int(cl[start])
        # min-reduction over positions holding a longer length
        longer = np.flatnonzero(cl[start:] > cur)
        end = start + int(longer[0]) if longer.size else n
        idx = np.arange(start, end)
        cw[start:end] = fcw + (end - 1 - idx)
        first[cur] = complement_codeword(int(cw[end - 1]), cur)
        count[cur] = end - start
        levels += 1
        if end < n:
            diff = int(cl[end]) - cur
            fcw = (int(cw[start]) + 1) << diff
        start = end

    shorter = 0
    for ln in range(1, H + 1):
        entry[ln] = shorter
        shorter += count[ln]

    mask = (np.uint64(1) << cl.astype(np.uint64)) - np.uint64(1)
    cw ^= mask
    if stats is not None:
        stats["levels"] = levels
    return cw, first, entry, count


def codebook_from_lengths(lengths, word_bits=DEFAULT_WORD_BITS):
    """Regenerate the canonical codebook from per-symbol lengths alone.

    Symbols sharing a length are ordered by symbol value, which is what
    lets an archive carry only the length table.
    """
    lengths = np.asarray(lengths, dtype=np.int64)
    used = np.flatnonzero(lengths)
    if used.size == 0:
        raise InputDomainError("codebook has no used symbols")
    if lengths.min() < 0:
        raise InputDomainError("codeword lengths must be non-negative")
    H = int(lengths.max())
    if H > word_bits:
        raise CapacityError(f"longest codeword needs {H} bits, word width is {word_bits}")
    if used.size > 1:
        kraft = int((np.int64(1) << (H - lengths[used])).sum())
        if kraft != 1 << H:
            raise InputDomainError("codeword lengths do not form a complete prefix code")
    order = used[np.lexsort((used, lengths[used]))]
    cw, first, entry, count = generate_codewords(lengths[order], word_bits)

    bits = np.zeros(len(lengths), dtype=np.uint32)
    bits[order] = cw.astype(np.uint32)

    # rank k inside a length holds the code first - k, i.e. positions run
    # backwards within each length block
    by_rank = np.empty(len(order), dtype=np.int64)
    for ln in np.flatnonzero(count):
        lo, c = int(entry[ln]), int(count[ln])
        by_rank[lo:lo + c] = order[lo:lo + c][::-1]
    cb = Codebook(bits=bits, lengths=lengths.astype(np.uint8), max_len=H)
    meta = DecodeMeta(first=first, entry=entry, count=count, symbols_by_rank=by_rank)
    return cb, meta


def build_codebook(h, word_bits=DEFAULT_WORD_BITS, workers=None, stats=None):
    """Histogram to ``(Codebook, DecodeMeta)``; unused symbols get length 0."""
    sh = sort_histogram(h)
    cl = generate_code_lengths(sh, workers=workers, stats=stats)
    lengths = np.zeros(sh.num_symbols, dtype=np.int64)
    lengths[sh.symbol_of] = cl
    if lengths.max() > word_bits:
        raise CapacityError(
            f"longest codeword needs {int(lengths.max())} bits, word width is {word_bits}"
        )
    return codebook_from_lengths(lengths, word_bits)


def check_kraft(lengths):
    """Exact Kraft sum of the used lengths as a Fraction."""
    from fractions import Fraction

    used = [int(x) for x in np.asarray(lengths) if x > 0]
    if not used:
        return Fraction(0)
    H = max(used)
    return Fraction(sum(1 << (H - ln) for ln in used), 1 << H)


def check_canonical(cb):
    """True if the used codewords are prefix-free and canonically ordered.

    For every pair of lengths l1 < l2, the top l1 bits of each length-l2 code
    must be strictly below every length-l1 code.
    """
    lengths = np.asarray(cb.lengths, dtype=np.int64)
    bits = np.asarray(cb.bits, dtype=np.int64)
    levels = {}
    for ln in np.unique(lengths[lengths > 0]):
        codes = bits[lengths == ln]
        if len(np.unique(codes)) != len(codes) or np.any(codes >> ln):
            return False
        levels[int(ln)] = codes
    keys = sorted(levels)
    for i, l1 in enumerate(keys):
        lowest = levels[l1].min()
        for l2 in keys[i + 1:]:
            if np.any((levels[l2] >> (l2 - l1)) >= lowest):
                return False
    return True
