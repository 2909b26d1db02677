"""huffre command line: encode, decode, stats, bench.

Exit codes: 0 ok, 1 usage, 2 I/O, 3 corrupt archive, 4 capacity.
"""
import argparse
import csv
import os
import sys
import time

from . import _backend
from .archive import Archive
from .bench import default_workers_list, format_csv, format_text, run_matrix
from .codebook import build_codebook
from .corpus import from_symbols, mode_name, parse_mode, shannon_entropy, to_symbols
from .encoder import decode_archive, select_reduction_factor
from .errors import CapacityError, CorruptStreamError, InputDomainError
from .histogram import build_histogram
from .pipeline import compress

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_CORRUPT, EXIT_CAPACITY = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _reduction(text):
    if text == "auto":
        return text
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"reduction must be 'auto' or an integer, got {text!r}") from None


def _mode(text):
    try:
        parse_mode(text)
    except InputDomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def _default_workers():
    try:
        return max(1, int(os.environ.get("HUFFRE_WORKERS", "1")))
    except ValueError:
        return 1


def _emit(rows, fmt, out):
    """Print key/value rows as aligned text or a one-row CSV."""
    if fmt == "csv":
        w = csv.writer(out)
        w.writerow([k for k, _ in rows])
        w.writerow([v for _, v in rows])
        return
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        out.write(f"{k:<{width}}  {v}\n")


def _fmt(x):
    return f"{x:.6g}" if isinstance(x, float) else x


def cmd_encode(args, out):
    raw = _read(args.input)
    if not raw:
        raise InputDomainError("input is empty")
    symbols, num_symbols, user_flags = to_symbols(raw, args.mode)
    res = compress(symbols, num_symbols, args.magnitude, args.reduction, args.word_width,
                   workers=args.workers, checksum=not args.no_checksum)
    res.archive.user_flags = user_flags
    t = time.perf_counter()
    blob = res.archive.to_bytes()
    with open(args.output, "wb") as fh:
        fh.write(blob)
    write_s = time.perf_counter() - t
    a = res.archive
    rows = [
        ("input", args.input), ("mode", args.mode), ("input_bytes", len(raw)),
        ("symbols", len(symbols)), ("alphabet", num_symbols), ("used_symbols", res.histogram.used),
        ("entropy_bits", shannon_entropy(res.histogram)), ("avg_bits", res.beta),
        ("max_len", res.codebook.max_len), ("magnitude", a.magnitude), ("reduction", a.reduction),
        ("word_bits", a.word_bits), ("chunks", a.num_chunks), ("archive_bytes", len(blob)),
        ("ratio", len(raw) / len(blob)), ("breaking_records", a.num_breaking),
        ("breaking_pct", 100.0 * res.breaking_fraction),
        ("hist_ms", 1e3 * res.seconds["histogram"]), ("codebook_ms", 1e3 * res.seconds["codebook"]),
        ("encode_ms", 1e3 * res.seconds["encode"]), ("write_ms", 1e3 * write_s),
        ("backend", _backend.BACKEND), ("workers", args.workers),
    ]
    _emit([(k, _fmt(v)) for k, v in rows], args.format, out)
    return EXIT_OK


def cmd_decode(args, out):
    blob = _read(args.archive)
    a = Archive.from_bytes(blob)
    symbols = decode_archive(a, workers=args.workers)
    try:
        raw = from_symbols(symbols, a.user_flags)
    except InputDomainError as exc:
        raise CorruptStreamError(str(exc)) from exc
    with open(args.output, "wb") as fh:
        fh.write(raw)
    if not args.quiet:
        out.write(f"decoded {a.original_count} symbols ({mode_name(a.user_flags)}) "
                  f"-> {len(raw)} bytes\n")
    return EXIT_OK


def cmd_stats(args, out):
    raw = _read(args.input)
    symbols, num_symbols, _ = to_symbols(raw, args.mode)
    hist = build_histogram(symbols, num_symbols, workers=args.workers)
    rows = [("input", args.input), ("mode", args.mode), ("input_bytes", len(raw)),
            ("symbols", len(symbols)), ("alphabet", num_symbols), ("used_symbols", hist.used),
            ("entropy_bits", shannon_entropy(hist))]
    if hist.used:
        cb, _ = build_codebook(hist, word_bits=args.word_width, workers=args.workers)
        beta = cb.average_bits(hist)
        rows += [("avg_bits", beta), ("max_len", cb.max_len),
                 ("suggested_r", select_reduction_factor(beta, args.word_width, args.magnitude))]
        top = sorted(((int(c), s) for s, c in enumerate(hist.counts) if c), reverse=True)[:args.top]
        rows += [(f"top{i + 1}", f"symbol={s} count={c} p={c / hist.total:.6f}")
                 for i, (c, s) in enumerate(top)]
    _emit([(k, _fmt(v)) for k, v in rows], args.format, out)
    return EXIT_OK


def cmd_bench(args, out):
    raw = _read(args.input)
    symbols, num_symbols, _ = to_symbols(raw, args.mode)
    if not len(symbols):
        raise InputDomainError("input is empty")
    if args.backend == "both":
        backends = sorted(_backend.AVAILABLE)
    elif args.backend == "auto":
        backends = [_backend.BACKEND]
    else:
        backends = [_backend.get_backend(args.backend)]
    cells = run_matrix(symbols, num_symbols, len(raw), magnitudes=sorted(args.magnitudes, reverse=True),
                       reductions=sorted(args.reductions, reverse=True),
                       workers_list=args.workers_list or default_workers_list(),
                       backends=backends, word_bits=args.word_width, repeats=args.repeats)
    out.write(format_csv(cells) if args.format == "csv" else format_text(cells))
    return EXIT_OK


def _read(path):
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def build_parser():
    p = _Parser(prog="huffre", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, mode=True):
        if mode:
            sp.add_argument("--mode", type=_mode, default="bytes", help="bytes, u16 or kmer:K")
        sp.add_argument("--workers", type=int, default=_default_workers(),
                        help="worker threads (default: $HUFFRE_WORKERS or 1)")
        sp.add_argument("--format", choices=("text", "csv"), default="text")

    e = sub.add_parser("encode", help="compress a file into an archive")
    e.add_argument("input")
    e.add_argument("output")
    common(e)
    e.add_argument("--magnitude", "-M", type=int, default=10, help="chunk size is 2**M symbols")
    e.add_argument("--reduction", "-r", type=_reduction, default="auto", help="'auto' or an integer")
    e.add_argument("--word-width", "-W", type=int, choices=(8, 16, 32), default=32)
    e.add_argument("--no-checksum", action="store_true", help="omit the CRC32 trailer")
    e.set_defaults(func=cmd_encode)

    d = sub.add_parser("decode", help="restore the original file from an archive")
    d.add_argument("archive")
    d.add_argument("output")
    common(d, mode=False)
    d.add_argument("--quiet", "-q", action="store_true")
    d.set_defaults(func=cmd_decode)

    s = sub.add_parser("stats", help="histogram summary, entropy and suggested r")
    s.add_argument("input")
    common(s)
    s.add_argument("--magnitude", "-M", type=int, default=10)
    s.add_argument("--word-width", "-W", type=int, choices=(8, 16, 32), default=32)
    s.add_argument("--top", type=int, default=5)
    s.set_defaults(func=cmd_stats)

    b = sub.add_parser("bench", help="magnitude x reduction-factor throughput matrix")
    b.add_argument("input")
    common(b)
    b.add_argument("--magnitudes", type=_int_list, default=[10, 11, 12])
    b.add_argument("--reductions", type=_int_list, default=[2, 3, 4])
    b.add_argument("--workers-list", type=_int_list, default=None)
    b.add_argument("--backend", choices=("auto", "native", "python", "both"), default="auto")
    b.add_argument("--word-width", "-W", type=int, choices=(8, 16, 32), default=32)
    b.add_argument("--repeats", type=int, default=3)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "workers", 1) < 1:
        parser.error("--workers must be >= 1")
    try:
        return args.func(args, out)
    except CorruptStreamError as exc:
        print(f"huffre: corrupt archive: {exc}", file=sys.stderr)
        return EXIT_CORRUPT
    except CapacityError as exc:
        print(f"huffre: {exc}; try --word-width 32 or a smaller alphabet "
              "(length-limited codes are not supported)", file=sys.stderr)
        return EXIT_CAPACITY
    except InputDomainError as exc:
        print(f"huffre: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"huffre: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
