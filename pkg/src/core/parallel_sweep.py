import multiprocessing
import os
from typing import Any, Callable, Dict, List, Optional, Sequence
from concurrent.futures import ProcessPoolExecutor, as_completed
import logging

logger = logging.getLogger(__name__)

THREADS_ENV = 'LAMBDA_OSC_THREADS'


def default_workers() -> int:
    value = os.environ.get(THREADS_ENV)
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            logger.warning(f"Ignoring non-integer {THREADS_ENV}={value!r}")
    return multiprocessing.cpu_count()


class ParallelSweep:
    """Runs independent jobs on a process pool; results come back in submission order."""

    def __init__(self, max_workers: Optional[int] = None):
        self.max_workers = max_workers or default_workers()
        logger.info(f"Initialized parallel sweep with {self.max_workers} workers")

    def run(self, func: Callable, jobs: Sequence[Any],
            labels: Optional[Sequence[str]] = None) -> List[Dict[str, Any]]:
        total = len(jobs)
        labels = list(labels) if labels is not None else [str(j) for j in jobs]
        results: List[Optional[Dict[str, Any]]] = [None] * total

        logger.info(f"Running {total} jobs using {self.max_workers} workers")

        if self.max_workers == 1:
            for index, job in enumerate(jobs):
                results[index] = self._collect(labels[index], lambda: func(job))
            return results

        with ProcessPoolExecutor(max_workers=self.max_workers) as executor:
            future_to_index = {
                executor.submit(func, job): index
                for index, job in enumerate(jobs)
            }

            completed = 0
            for future in as_completed(future_to_index):
                index = future_to_index[future]
                completed += 1
                results[index] = self._collect(labels[index], future.result)
                if completed % 10 == 0 or completed == total:
                    logger.debug(f"Progress: {completed}/{total} jobs")

        logger.info(f"Completed {total} jobs")
        return results

    @staticmethod
    def _collect(label: str, fetch: Callable[[], Any]) -> Dict[str, Any]:
        try:
            return {'job': label, 'status': 'ok', 'result': fetch()}
        except Exception as e:
            logger.error(f"Error in job {label}: {e}")
            return {'job': label, 'status': 'failed', 'error': str(e),
                    'code': getattr(getattr(e, 'code', None), 'value', None)}
