import logging
import psutil
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Hashable, List, Tuple

logger = logging.getLogger(__name__)

TrialJob = Callable[[int], Hashable]

CHUNKS_PER_WORKER = 4


def resolve_workers(workers: int) -> int:
    """0 means one worker per physical core"""
    if workers < 0:
        raise ValueError(f"worker count must be nonnegative, got {workers}")
    if workers == 0:
        return psutil.cpu_count(logical=False) or psutil.cpu_count() or 1
    return workers


def _run_chunk(job: TrialJob, start: int, stop: int) -> Counter:
    return Counter(job(trial) for trial in range(start, stop))


def _chunks(trials: int, count: int) -> List[Tuple[int, int]]:
    size = max(1, -(-trials // count))
    return [(start, min(start + size, trials)) for start in range(0, trials, size)]


class TrialRunner:
    """Runs independent seeded trials and tallies their outcomes.

    A trial is a picklable callable from the trial index to a hashable outcome.
    Outcomes are reduced by counting, so the tally does not depend on the
    number of workers or the order in which chunks finish.
    """

    def __init__(self, workers: int = 1):
        self.workers = resolve_workers(workers)

    def count(self, job: TrialJob, trials: int) -> Counter:
        """Tally job(0) ... job(trials - 1)"""
        if trials < 1:
            raise ValueError(f"trials must be positive, got {trials}")
        if self.workers == 1 or trials < 2 * self.workers:
            return _run_chunk(job, 0, trials)

        chunks = _chunks(trials, self.workers * CHUNKS_PER_WORKER)
        logger.debug(f"Running {trials} trials in {len(chunks)} chunks on {self.workers} processes")
        total = Counter()
        with ProcessPoolExecutor(max_workers=self.workers) as executor:
            futures = [executor.submit(_run_chunk, job, start, stop) for start, stop in chunks]
            for future in futures:
                total.update(future.result())
        return total

    def __repr__(self) -> str:
        return f"TrialRunner(workers={self.workers})"
