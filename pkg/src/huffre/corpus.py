"""Turning files into symbol streams and back.

Three modes:

``bytes``   one symbol per byte (256 symbols).
``u16``     one symbol per little-endian 16-bit integer; an odd trailing
            byte is padded and flagged so decoding drops it again.
``kmer:K``  nucleotide text cut into windows of K characters (stride K).
            A window of only ``acgt`` maps to one of 4**K symbols, a window
            of only ``ACGT`` to the next 4**K; any other window, and a short
            tail, is spelled out one byte per escape symbol.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InputDomainError

_KIND = {"bytes": 0, "u16": 1, "kmer": 2}
_KIND_NAME = {v: k for k, v in _KIND.items()}
_ODD_BYTE = 1 << 2
_K_SHIFT = 3

_LOWER = np.full(256, -1, dtype=np.int64)
_UPPER = np.full(256, -1, dtype=np.int64)
for _i, _c in enumerate(b"acgt"):
    _LOWER[_c] = _i
for _i, _c in enumerate(b"ACGT"):
    _UPPER[_c] = _i


@dataclass(frozen=True)
class CorpusSpec:
    path: str
    mode: str = "bytes"

    @property
    def kind(self):
        return parse_mode(self.mode)[0]

    @property
    def k(self):
        return parse_mode(self.mode)[1]


def parse_mode(mode):
    if mode in ("bytes", "u16"):
        return mode, 0
    if mode.startswith("kmer:"):
        try:
            k = int(mode.split(":", 1)[1])
        except ValueError:
            raise InputDomainError(f"bad k-mer size in {mode!r}") from None
        if not 1 <= k <= 7:
            raise InputDomainError(f"k-mer size must be in [1, 7], got {k}")
        return "kmer", k
    raise InputDomainError(f"unknown symbol mode {mode!r} (bytes, u16, kmer:K)")


def kmer_alphabet_size(k):
    return 2 * 4 ** k + 256


def to_symbols(raw, mode="bytes"):
    """Returns ``(symbols, num_symbols, user_flags)``."""
    kind, k = parse_mode(mode)
    arr = np.frombuffer(bytes(raw), dtype=np.uint8)
    flags = _KIND[kind]
    if kind == "bytes":
        return arr.astype(np.uint16), 256, flags
    if kind == "u16":
        if arr.size % 2:
            arr = np.concatenate([arr, np.zeros(1, np.uint8)])
            flags |= _ODD_BYTE
        sym = arr.view("<u2").astype(np.uint16)
        return sym, int(sym.max(initial=0)) + 1, flags
    return _kmer_symbols(arr, k), kmer_alphabet_size(k), flags | (k << _K_SHIFT)


def _kmer_symbols(arr, k):
    block = 4 ** k
    escape = 2 * block
    nfull = arr.size // k
    win = arr[:nfull * k].reshape(nfull, k).astype(np.int64)
    weights = 4 ** np.arange(k - 1, -1, -1, dtype=np.int64)
    lo, up = _LOWER[win], _UPPER[win]
    is_lo = (lo >= 0).all(axis=1)
    is_up = (up >= 0).all(axis=1)
    out = escape + win
    out[is_lo, 0] = lo[is_lo] @ weights
    out[is_up, 0] = block + up[is_up] @ weights
    keep = np.ones((nfull, k), dtype=bool)
    keep[is_lo | is_up, 1:] = False
    tail = escape + arr[nfull * k:].astype(np.int64)
    return np.concatenate([out[keep], tail]).astype(np.uint16)


def from_symbols(symbols, user_flags):
    """Inverse of :func:`to_symbols`."""
    kind = _KIND_NAME.get(user_flags & 3)
    symbols = np.asarray(symbols)
    if kind == "bytes":
        if symbols.size and symbols.max() > 255:
            raise InputDomainError("byte-mode symbol above 255")
        return symbols.astype(np.uint8).tobytes()
    if kind == "u16":
        raw = symbols.astype("<u2").tobytes()
        return raw[:-1] if user_flags & _ODD_BYTE else raw
    if kind == "kmer":
        return _kmer_bytes(symbols, user_flags >> _K_SHIFT & 0xF)
    raise InputDomainError(f"unknown symbol mode in flags {user_flags:#x}")


def _kmer_bytes(symbols, k):
    block = 4 ** k
    escape = 2 * block
    sym = symbols.astype(np.int64)
    is_esc = sym >= escape
    if np.any(sym - escape > 255):
        raise InputDomainError("k-mer escape symbol out of range")
    rows = np.zeros((sym.size, k), dtype=np.uint8)
    keep = np.zeros((sym.size, k), dtype=bool)
    rows[is_esc, 0] = sym[is_esc] - escape
    keep[is_esc, 0] = True
    km = ~is_esc
    upper = km & (sym >= block)
    value = np.where(upper, sym - block, sym)
    digits = (value[:, None] // 4 ** np.arange(k - 1, -1, -1)) % 4
    lower_tab = np.frombuffer(b"acgt", np.uint8)
    upper_tab = np.frombuffer(b"ACGT", np.uint8)
    letters = np.where(upper[:, None], upper_tab[digits], lower_tab[digits])
    rows[km] = letters[km]
    keep[km] = True
    return rows[keep].tobytes()


def shannon_entropy(counts):
    counts = np.asarray(getattr(counts, "counts", counts), dtype=np.float64)
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum()) + 0.0


def mode_name(user_flags):
    kind = _KIND_NAME.get(user_flags & 3, "?")
    return f"kmer:{user_flags >> _K_SHIFT & 0xF}" if kind == "kmer" else kind


__all__ = ["CorpusSpec", "parse_mode", "to_symbols", "from_symbols", "shannon_entropy",
           "kmer_alphabet_size", "mode_name"]
