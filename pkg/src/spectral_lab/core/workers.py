"""Worker pool management."""

from collections.abc import Iterator
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager

from spectral_lab.core.config import settings


@contextmanager
def worker_pool(max_workers: int | None = None) -> Iterator[ThreadPoolExecutor]:
    """Provide a thread pool capped by ``settings.threads``.

    ``executor.map`` keeps input order, so callers combine results in a
    fixed order regardless of completion timing.

    Args:
        max_workers: Optional lower cap for this pool.

    Yields:
        Executor that shuts down when the block exits.
    """
    workers = settings.threads if max_workers is None else min(max_workers, settings.threads)
    executor = ThreadPoolExecutor(max_workers=max(1, workers))
    try:
        yield executor
    finally:
        executor.shutdown(wait=True)
