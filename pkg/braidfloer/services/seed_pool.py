"""Thread-pool work queue for chunked seed refinement."""

from __future__ import annotations

import logging
import time
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass
from threading import Lock
from typing import Callable, Dict, List, Sequence, TypeVar

LOGGER = logging.getLogger(__name__)

ChunkT = TypeVar("ChunkT")
ResultT = TypeVar("ResultT")


@dataclass
class PoolStats:
    submitted: int = 0
    completed: int = 0
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {
            "submitted": self.submitted,
            "completed": self.completed,
            "seconds": round(self.seconds, 6),
        }


class SeedPool:
    """Runs chunk jobs on a thread pool and hands results back in chunk order.

    Completion order never leaks into the output, so callers that sort and
    dedupe afterwards stay deterministic.
    """

    def __init__(self, max_workers: int = 2) -> None:
        self._lock = Lock()
        self._executor = ThreadPoolExecutor(max_workers=max_workers, thread_name_prefix="seed-pool")
        self._stats = PoolStats()
        self._closed = False

    def __enter__(self) -> "SeedPool":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    @property
    def stats(self) -> PoolStats:
        with self._lock:
            return PoolStats(self._stats.submitted, self._stats.completed, self._stats.seconds)

    def map_chunks(
        self, fn: Callable[[ChunkT], ResultT], chunks: Sequence[ChunkT]
    ) -> List[ResultT]:
        if self._closed:
            raise RuntimeError("seed pool is closed")
        futures: Dict[int, Future] = {}
        for index, chunk in enumerate(chunks):
            futures[index] = self._executor.submit(self._timed, fn, index, chunk)
        with self._lock:
            self._stats.submitted += len(futures)
        return [futures[index].result() for index in range(len(chunks))]

    def _timed(self, fn: Callable[[ChunkT], ResultT], index: int, chunk: ChunkT) -> ResultT:
        started = time.perf_counter()
        result = fn(chunk)
        elapsed = time.perf_counter() - started
        LOGGER.debug(f"Chunk {index} finished in {elapsed:.3f}s")
        with self._lock:
            self._stats.completed += 1
            self._stats.seconds += elapsed
        return result

    def close(self) -> None:
        if not self._closed:
            self._executor.shutdown(wait=True)
            self._closed = True
