"""Worker-count control for the embarrassingly parallel loops.

MILDREP_THREADS caps the thread pool; the default of 1 keeps runs
single-threaded. Results are always returned in input order, so the thread
count never changes any output.
"""

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("MILDREP_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn, items):
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))
