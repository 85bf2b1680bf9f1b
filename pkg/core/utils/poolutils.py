"""
Worker pool for replicate-level parallelism.
"""

from concurrent.futures import ThreadPoolExecutor


def ordered_map(func, items, jobs=1):
    """
    Apply func to every item, possibly on a thread pool.
    Results are returned in input order whatever the completion order, so any
    reduction over them is deterministic.
    :param func: (callable) the task.
    :param items: (iterable) the task inputs.
    :param jobs: (int) the number of workers; <= 1 runs serially.
    :return: (list) the results, aligned with items.
    """
    items = list(items)
    if jobs is None or jobs <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=int(jobs)) as executor:
        return list(executor.map(func, items))
