"""
Parallel execution of independent pipeline jobs
"""
import time
import logging
import multiprocessing
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import List, Callable, TypeVar, Iterable, Optional

logger = logging.getLogger("thabit_solver")

T = TypeVar('T')
R = TypeVar('R')


def execute_in_parallel(
    func: Callable[[T], R],
    items: Iterable[T],
    max_workers: Optional[int] = None,
    desc: str = "Processing"
) -> List[R]:
    """
    Execute a function on multiple items in parallel

    Results come back in the order of the items, whatever order the workers
    finish in. The first worker exception is re-raised after all jobs end.

    Args:
        func: Picklable function to execute
        items: Items to process
        max_workers: Maximum number of worker processes
        desc: Description for logging

    Returns:
        List of results, one per item
    """
    if max_workers is None:
        # Use CPU count but at least 2 and at most 8 workers
        max_workers = min(max(multiprocessing.cpu_count(), 2), 8)

    items = list(items)
    item_count = len(items)
    logger.info(f"{desc} {item_count} items with {max_workers} workers")

    start_time = time.time()
    results: List[Optional[R]] = [None] * item_count
    first_error: Optional[BaseException] = None

    with ProcessPoolExecutor(max_workers=max_workers) as executor:
        future_to_index = {executor.submit(func, item): index for index, item in enumerate(items)}

        completed = 0
        for future in as_completed(future_to_index):
            index = future_to_index[future]
            try:
                results[index] = future.result()
                completed += 1

                if item_count and completed % max(1, item_count // 10) == 0:
                    progress = (completed / item_count) * 100
                    elapsed = time.time() - start_time
                    rate = completed / elapsed if elapsed > 0 else 0
                    logger.info(f"Progress: {progress:.1f}% ({completed}/{item_count}), {rate:.2f} items/sec")

            except Exception as e:
                logger.error(f"Error processing item {items[index]}: {e}")
                if first_error is None:
                    first_error = e

    elapsed = time.time() - start_time
    logger.info(f"Completed {desc.lower()} {completed} items in {elapsed:.2f} seconds")

    if first_error is not None:
        raise first_error
    return results
