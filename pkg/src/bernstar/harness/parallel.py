"""Order-preserving parallel map capped by the SB_THREADS environment variable."""

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count():
    value = os.environ.get("SB_THREADS")
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            pass
    return os.cpu_count() or 1


def parallel_map(fn, items):
    """``[fn(x) for x in items]``, evaluated on a thread pool; results keep input order."""
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
