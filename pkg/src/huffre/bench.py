"""Magnitude x reduction-factor sweep, laid out like a throughput table.

Throughput is input bytes over encode wall time (codebook lookup,
reduce-merge, shuffle-merge and gathering). Histogram and codebook times are
reported per cell so composite figures can be computed downstream.
"""
import csv
import hashlib
import io
import os
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import _backend
from .codebook import build_codebook
from .encoder import EncoderConfig, encode
from .histogram import build_histogram


@dataclass
class BenchCell:
    backend: str
    workers: int
    magnitude: int
    reduction: int
    input_bytes: int
    hist_s: float
    codebook_s: float
    encode_s: float
    breaking_pct: float
    beta: float

    @property
    def gbps(self):
        return self.input_bytes / self.encode_s / 1e9 if self.encode_s > 0 else float("inf")


def _best_of(fn, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def run_matrix(symbols, num_symbols, input_bytes, magnitudes=(12, 11, 10), reductions=(4, 3, 2),
               workers_list=(1,), backends=None, word_bits=32, repeats=3):
    backends = backends or [_backend.BACKEND]
    cells = []
    for backend in backends:
        for workers in workers_list:
            hist_s, hist = _best_of(lambda: build_histogram(symbols, num_symbols, workers=workers), repeats)
            cb_s, (cb, _) = _best_of(lambda: build_codebook(hist, word_bits, workers=workers), repeats)
            beta = cb.average_bits(hist)
            for r in reductions:
                for M in magnitudes:
                    if r >= M:
                        continue
                    cfg = EncoderConfig(M, r, word_bits, beta)
                    enc_s, archive = _best_of(
                        lambda: encode(symbols, cb, cfg, workers=workers, backend=backend), repeats)
                    pct = 100.0 * archive.num_breaking / archive.num_groups
                    cells.append(BenchCell(backend, workers, M, r, input_bytes, hist_s, cb_s,
                                           enc_s, pct, beta))
    return cells


def format_csv(cells):
    buf = io.StringIO()
    fields = list(asdict(cells[0]).keys()) + ["gbps"] if cells else []
    w = csv.writer(buf)
    w.writerow(fields)
    for c in cells:
        w.writerow(list(asdict(c).values()) + [f"{c.gbps:.6f}"])
    return buf.getvalue()


def format_text(cells):
    """One block per (backend, workers): rows r, columns M, plus breaking %."""
    lines = ["# throughput = input bytes / encode wall time (GB/s); stage times in ms"]
    keys = sorted({(c.backend, c.workers) for c in cells})
    for backend, workers in keys:
        sub = [c for c in cells if (c.backend, c.workers) == (backend, workers)]
        mags = sorted({c.magnitude for c in sub}, reverse=True)
        reds = sorted({c.reduction for c in sub}, reverse=True)
        by = {(c.reduction, c.magnitude): c for c in sub}
        lines.append(f"\nbackend={backend} workers={workers} beta={sub[0].beta:.4f} "
                     f"hist={sub[0].hist_s * 1e3:.2f}ms codebook={sub[0].codebook_s * 1e3:.2f}ms")
        corner = "r / M"
        head = f"{corner:>10}" + "".join(f"{'2^' + str(m):>12}" for m in mags) + f"{'breaking':>14}"
        lines.append(head)
        for r in reds:
            row = f"{f'({1 << r}x) {r}':>10}"
            pct = None
            for m in mags:
                c = by.get((r, m))
                row += f"{c.gbps:>12.4f}" if c else f"{'-':>12}"
                if c and m == min(mags):
                    pct = c.breaking_pct
            row += f"{pct:>13.6f}%" if pct is not None else f"{'-':>14}"
            lines.append(row)
    return "\n".join(lines) + "\n"


def compare_backends(symbols, num_symbols, magnitude=10, reduction=3, repeats=3):
    """Encode and decode wall time for every available backend."""
    from .encoder import decode_archive

    hist = build_histogram(symbols, num_symbols)
    cb, _ = build_codebook(hist)
    cfg = EncoderConfig(magnitude, reduction)
    rows = []
    for name in sorted(_backend.AVAILABLE):
        enc_s, archive = _best_of(lambda: encode(symbols, cb, cfg, backend=name), repeats)
        dec_s, out = _best_of(lambda: decode_archive(archive, backend=name), repeats)
        rows.append({"backend": name, "encode_s": enc_s, "decode_s": dec_s,
                     "roundtrip": bool(np.array_equal(out, symbols)),
                     "archive_sha256": hashlib.sha256(archive.to_bytes()).hexdigest()[:16]})
    return rows


def default_workers_list():
    n = os.cpu_count() or 1
    out = [1]
    while out[-1] * 2 <= n:
        out.append(out[-1] * 2)
    return out
