import os
from concurrent.futures import ThreadPoolExecutor


def resolve_workers(workers=None):
    if workers is None:
        workers = int(os.environ.get("HUFFRE_WORKERS", "1") or 1)
    if workers < 1:
        raise ValueError(f"worker count must be >= 1, got {workers}")
    return workers


def split_ranges(n, parts):
    """Split ``range(n)`` into ``parts`` contiguous, nearly equal ranges."""
    parts = max(1, min(parts, n)) if n else 1
    bounds = [n * k // parts for k in range(parts + 1)]
    return [(bounds[k], bounds[k + 1]) for k in range(parts)]


def parallel_map(fn, items, workers):
    """Map ``fn`` over ``items`` on a thread pool, preserving order."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
