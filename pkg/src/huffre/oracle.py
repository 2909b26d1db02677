"""Serial reference implementations used as ground truth by tests and benchmarks.

Nothing here is parallel or fast. Each function is written to be obviously
correct rather than to share code with the production path.
"""
import heapq
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

_LEAF, _INTERNAL = 0, 1


@dataclass
class OracleTree:
    """Node arena of a serially built Huffman tree.

    Leaves come first (``symbol >= 0``), internal nodes after them.
    """

    freq: list = field(default_factory=list)
    left: list = field(default_factory=list)
    right: list = field(default_factory=list)
    symbol: list = field(default_factory=list)

    def add(self, freq, left=-1, right=-1, symbol=-1):
        self.freq.append(freq)
        self.left.append(left)
        self.right.append(right)
        self.symbol.append(symbol)
        return len(self.freq) - 1

    @property
    def leaf_count(self):
        return sum(1 for s in self.symbol if s >= 0)

    @property
    def internal_count(self):
        return sum(1 for s in self.symbol if s < 0)

    def depths(self, root):
        out = {}
        stack = [(root, 0)]
        while stack:
            node, d = stack.pop()
            if self.symbol[node] >= 0:
                out[self.symbol[node]] = d
            else:
                stack.append((self.left[node], d + 1))
                stack.append((self.right[node], d + 1))
        return out


def build_tree(counts):
    """Classic priority-queue Huffman. Returns ``(tree, root)``.

    Ties go leaf before internal, then lower index first.
    """
    tree = OracleTree()
    heap = []
    for sym, f in enumerate(counts):
        if f > 0:
            node = tree.add(int(f), symbol=sym)
            heapq.heappush(heap, (int(f), _LEAF, node))
    if not heap:
        raise ValueError("histogram has no nonzero counts")
    if len(heap) == 1:
        return tree, heap[0][2]
    while len(heap) > 1:
        fa, _, a = heapq.heappop(heap)
        fb, _, b = heapq.heappop(heap)
        node = tree.add(fa + fb, left=a, right=b)
        heapq.heappush(heap, (fa + fb, _INTERNAL, node))
    return tree, heap[0][2]


def oracle_code_lengths(counts):
    """Per-symbol optimal prefix-code lengths; unused symbols get 0.

    A lone used symbol gets length 1.
    """
    counts = np.asarray(getattr(counts, "counts", counts))
    tree, root = build_tree(counts)
    lengths = np.zeros(len(counts), dtype=np.int64)
    for sym, d in tree.depths(root).items():
        lengths[sym] = max(d, 1)
    return lengths


def oracle_weighted_total(counts):
    """Sum of freq * length, computed as the sum of all merge costs."""
    counts = [int(f) for f in np.asarray(getattr(counts, "counts", counts)) if f > 0]
    if len(counts) == 1:
        return counts[0]
    heapq.heapify(counts)
    total = 0
    while len(counts) > 1:
        s = heapq.heappop(counts) + heapq.heappop(counts)
        total += s
        heapq.heappush(counts, s)
    return total


def brute_force_optimal_cost(freqs):
    """Minimum Σ f·ℓ over every complete prefix code, by exhaustive search.

    Enumerates non-increasing length vectors (matched against ascending
    frequencies) with Kraft sum exactly 1. Usable up to about 12 symbols.
    """
    freqs = sorted(int(f) for f in freqs)
    n = len(freqs)
    if n == 1:
        return freqs[0]
    best = None

    def rec(i, max_len, kraft, cost):
        nonlocal best
        if best is not None and cost >= best:
            return
        remaining = n - i
        if remaining == 0:
            if kraft == 1:
                best = cost
            return
        for ln in range(1, max_len + 1):
            k = kraft + Fraction(1, 2 ** ln)
            # the remaining symbols need at least 2^-ln each
            if k + (remaining - 1) * Fraction(1, 2 ** ln) > 1:
                continue
            rec(i + 1, ln, k, cost + freqs[i] * ln)

    rec(0, n - 1, Fraction(0), 0)
    return best


def canonical_from_lengths(lengths):
    """Canonical code where shorter codewords are numerically larger.

    Walks lengths from shortest to longest, handing each length the highest
    still-free block of values; inside one length the codes ascend with the
    symbol value. A lone used symbol gets "0". Returns ``{symbol: bitstring}``.
    """
    lengths = [int(x) for x in lengths]
    used = sorted((ln, s) for s, ln in enumerate(lengths) if ln > 0)
    if len(used) == 1:
        return {used[0][1]: "0"}
    by_len = {}
    for ln, s in used:
        by_len.setdefault(ln, []).append(s)
    codes = {}
    top = None  # highest free value at the current length
    prev = None
    for ln in sorted(by_len):
        top = (1 << ln) - 1 if top is None else ((top + 1) << (ln - prev)) - 1
        syms = by_len[ln]
        low = top - len(syms) + 1
        for k, s in enumerate(syms):
            codes[s] = format(low + k, f"0{ln}b")
        top = low - 1
        prev = ln
    return codes


def oracle_encode(data, codebook):
    """Append codewords MSB-first into one bit string of '0'/'1' characters.

    ``codebook`` is either a mapping ``symbol -> bitstring`` or an object with
    ``bits`` and ``lengths`` arrays.
    """
    if not isinstance(codebook, dict):
        codebook = {
            s: format(int(b), f"0{int(ln)}b")
            for s, (b, ln) in enumerate(zip(codebook.bits, codebook.lengths))
            if ln > 0
        }
    return "".join(codebook[int(x)] for x in data)


def oracle_decode(bitstring, codebook, count):
    """Bit-by-bit prefix matching against a ``symbol -> bitstring`` map."""
    inverse = {v: k for k, v in codebook.items()}
    out = []
    cur = ""
    for ch in bitstring:
        if len(out) == count:
            break
        cur += ch
        if cur in inverse:
            out.append(inverse[cur])
            cur = ""
    if len(out) != count:
        raise ValueError("bit string ended before all symbols were decoded")
    return out


def two_finger_merge(a, b):
    """Stable serial merge: on equal keys, elements of ``a`` come first."""
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        if b[j] < a[i]:
            out.append(b[j])
            j += 1
        else:
            out.append(a[i])
            i += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return out


def bits_to_str(words, bit_len, word_bits=32):
    """Render MSB-first packed words as a '0'/'1' string of ``bit_len`` bits."""
    s = "".join(format(int(w), f"0{word_bits}b") for w in words)
    return s[:bit_len]
