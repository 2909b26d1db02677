"""Compiled kernels vs numpy fallback on the same inputs.

    python3 benchmarks/compare_backends.py [--size-log2 22] [--repeats 3]
"""
import argparse

import numpy as np

from huffre import _backend
from huffre.bench import compare_backends
from huffre.synthetic import nyx_like


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size-log2", type=int, default=22)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--magnitude", type=int, default=10)
    ap.add_argument("--reduction", type=int, default=3)
    args = ap.parse_args()

    n = 1 << args.size_log2
    rng = np.random.default_rng(0)
    inputs = {
        "nyx-like (1024 sym, ~1.03 bit)": (nyx_like(n, 1024, seed=0), 1024),
        "text-like bytes (zipf)": (np.minimum(rng.zipf(1.4, n) - 1, 255).astype(np.uint16), 256),
    }
    print(f"available backends: {sorted(_backend.AVAILABLE)}; default: {_backend.BACKEND}")
    print(f"{'input':<32}{'backend':>8}{'encode s':>10}{'decode s':>10}{'enc MB/s':>10}"
          f"{'dec MB/s':>10}  {'archive sha256':<16}  ok")
    for label, (sym, alphabet) in inputs.items():
        rows = compare_backends(sym, alphabet, args.magnitude, args.reduction, args.repeats)
        mb = sym.nbytes / 1e6
        for r in rows:
            print(f"{label:<32}{r['backend']:>8}{r['encode_s']:>10.3f}{r['decode_s']:>10.3f}"
                  f"{mb / r['encode_s']:>10.1f}{mb / r['decode_s']:>10.1f}  {r['archive_sha256']:<16}"
                  f"  {r['roundtrip']}")
        if len({r["archive_sha256"] for r in rows}) != 1:
            raise SystemExit("backends disagree")


if __name__ == "__main__":
    main()
