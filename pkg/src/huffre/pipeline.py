"""Histogram -> codebook -> encode, with per-stage wall times."""
import time
from dataclasses import dataclass, field

from .codebook import build_codebook
from .encoder import EncoderConfig, encode
from .histogram import build_histogram


@dataclass
class PipelineResult:
    archive: object
    histogram: object
    codebook: object
    config: EncoderConfig
    seconds: dict = field(default_factory=dict)

    @property
    def beta(self):
        return self.codebook.average_bits(self.histogram)

    @property
    def breaking_fraction(self):
        a = self.archive
        return a.num_breaking / a.num_groups if a.num_groups else 0.0


def compress(symbols, num_symbols, magnitude=10, reduction="auto", word_bits=32, workers=None,
             backend=None, checksum=True):
    """Run every encoding stage; ``reduction="auto"`` derives r from the codebook."""
    seconds = {}
    t0 = time.perf_counter()
    hist = build_histogram(symbols, num_symbols, workers=workers)
    t1 = time.perf_counter()
    cb, _ = build_codebook(hist, word_bits=word_bits, workers=workers)
    t2 = time.perf_counter()
    beta = cb.average_bits(hist)
    if reduction == "auto":
        cfg = EncoderConfig.auto(beta, magnitude, word_bits)
    else:
        cfg = EncoderConfig(magnitude, int(reduction), word_bits, beta)
    archive = encode(symbols, cb, cfg, workers=workers, backend=backend, checksum=checksum)
    t3 = time.perf_counter()
    seconds.update(histogram=t1 - t0, codebook=t2 - t1, encode=t3 - t2)
    return PipelineResult(archive, hist, cb, cfg, seconds)
