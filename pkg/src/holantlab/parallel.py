"""Order-preserving map over independent branch evaluations."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor


def pmap(fn, items, jobs: int = 1) -> list:
    """``[fn(x) for x in items]``; with jobs > 1 the calls run in worker processes.

    Results come back in input order, so folds over them stay deterministic.
    """
    items = list(items)
    if jobs is None or jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as ex:
        return list(ex.map(fn, items))
