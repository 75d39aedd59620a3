import logging
import typing as T
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass

from tqdm import tqdm

TaskT = T.TypeVar("TaskT")
ResultT = T.TypeVar("ResultT")


@dataclass
class ProgressUpdate:
    progress: float = 0.0
    datum: T.Any = None


class JobManager:
    def __init__(self, jobs: int = 1, show_progress: bool = True) -> None:
        if jobs < 1:
            raise ValueError(f"jobs must be at least 1, got {jobs}")

        self.jobs = jobs
        self.show_progress = show_progress

    def map_tasks(
        self,
        fn: T.Callable[[TaskT], ResultT],
        tasks: T.Sequence[TaskT],
    ) -> T.Generator[ProgressUpdate, None, None]:
        """Run ``fn`` over ``tasks``, yielding one update per finished task.

        ``fn`` and the tasks must be picklable when more than one worker is used.
        Results arrive in completion order.
        """
        total = len(tasks)
        if total == 0:
            yield ProgressUpdate(1.0)
            return

        if self.jobs == 1:
            for done, task in enumerate(tasks, start=1):
                yield ProgressUpdate(done / total, fn(task))
            return

        logging.debug(f"Running {total} tasks on {self.jobs} worker processes")
        with ProcessPoolExecutor(max_workers=self.jobs) as pool:
            futures = [pool.submit(fn, task) for task in tasks]
            for done, future in enumerate(as_completed(futures), start=1):
                yield ProgressUpdate(done / total, future.result())

    def work_job(
        self, job: T.Iterable[ProgressUpdate], description: str | None = None
    ) -> list[T.Any]:
        results = []
        with tqdm(total=1.0, desc=description, disable=not self.show_progress) as pbar:
            for update in job:
                if update.datum is not None:
                    results.append(update.datum)

                pbar.n = round(update.progress, 4)
                pbar.refresh()

        return results

    def run(
        self,
        fn: T.Callable[[TaskT], ResultT],
        tasks: T.Sequence[TaskT],
        description: str | None = None,
    ) -> list[ResultT]:
        return self.work_job(self.map_tasks(fn, tasks), description)
