"""
Classification of a knot family by the pair (n, I^n).

Every knot starts at level n_start. Knots whose invariants collide at level n
are re-queued at n + 1, each (knot, n) at most once. The queue only ever
grows by one level, so it is processed in level batches: the invariants of a
batch may be computed in a process pool while the bookkeeping stays in queue
order, which keeps the outcome independent of the worker count.
"""

import logging
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache, partial
from typing import Callable, Deque, Dict, List, Mapping, Optional, Set, Tuple

from cubical.redundancy import configure_default_oracle
from groups.invariant import invariant_In
from groups.presentation import GroupPresentation, Invariant, format_invariant
from knots.embedding import embed_complement
from knots.grid import GridDiagram, parse_grid
from pipeline.cache import InvariantCache
from pipeline.errors import ClassificationIncomplete
from pipeline.fund_group import best_fund_group
from pipeline.models import ClassificationRecord, InvariantResult, PipelineSettings
from pipeline.writer import ResultsWriter

logger = logging.getLogger(__name__)

Key = Tuple[int, Invariant]
InvariantFn = Callable[[str, str, int], InvariantResult]


@lru_cache(maxsize=256)
def _cached_presentation(diagram_text: str, settings_json: str) -> GroupPresentation:
    settings = PipelineSettings.model_validate_json(settings_json)
    embedding = embed_complement(parse_grid(diagram_text), settings.pad)
    return best_fund_group(embedding.complement, settings)[0].presentation


def knot_presentation(
    d: GridDiagram, settings: Optional[PipelineSettings] = None
) -> GroupPresentation:
    """Simplified presentation of the knot group, memoized per diagram."""
    settings = settings or PipelineSettings()
    return _cached_presentation(d.to_text(), settings.model_dump_json())


def compute_invariant(
    knot: str, diagram_text: str, n: int, settings: Optional[PipelineSettings] = None
) -> InvariantResult:
    p = knot_presentation(parse_grid(diagram_text), settings)
    invariant = invariant_In(p, n)
    logger.info(f"I^{n}({knot}) = {format_invariant(invariant)}")
    return InvariantResult(
        knot=knot,
        n=n,
        invariant=invariant,
        generators=p.generators,
        relators=len(p.relators),
    )


class Classifier:
    def __init__(
        self,
        knots: Mapping[str, GridDiagram],
        settings: Optional[PipelineSettings] = None,
        n_start: int = 2,
        n_max: int = 7,
        jobs: int = 1,
        cache: Optional[InvariantCache] = None,
        writer: Optional[ResultsWriter] = None,
        invariant_fn: Optional[InvariantFn] = None,
        table_path: Optional[str] = None,
    ):
        if n_start < 1 or n_max < n_start:
            raise ValueError(f"Need 1 <= n_start <= n_max, got {n_start}, {n_max}")
        self.knots = dict(knots)
        self.settings = settings or PipelineSettings()
        self.n_start = n_start
        self.n_max = n_max
        self.jobs = max(1, jobs)
        self.cache = cache
        self.writer = writer
        self.invariant_fn = invariant_fn or partial(compute_invariant, settings=self.settings)
        self.table_path = table_path

    def _texts(self) -> Dict[str, str]:
        return {name: d.to_text() for name, d in self.knots.items()}

    def _compute_batch(
        self, batch: List[Tuple[str, int]], pool: Optional[ProcessPoolExecutor]
    ) -> List[InvariantResult]:
        texts = self._texts()
        results: Dict[int, InvariantResult] = {}
        pending: List[int] = []
        for slot, (knot, n) in enumerate(batch):
            hit = self.cache.lookup(knot, texts[knot], n) if self.cache else None
            if hit is not None:
                results[slot] = hit
            else:
                pending.append(slot)

        args = [(batch[s][0], texts[batch[s][0]], batch[s][1]) for s in pending]
        if pool is not None and len(args) > 1:
            computed = list(pool.map(self.invariant_fn, *zip(*args)))
        else:
            computed = [self.invariant_fn(*a) for a in args]

        for slot, result in zip(pending, computed):
            results[slot] = result
            if self.cache:
                self.cache.store(texts[result.knot], result)
        return [results[slot] for slot in range(len(batch))]

    def run(self, strict: bool = False) -> ClassificationRecord:
        queue: Deque[Tuple[str, int]] = deque()
        added: Set[Tuple[str, int]] = set()
        seen: Dict[Key, List[Tuple[str, int]]] = {}
        record = ClassificationRecord()
        overflow: Dict[Key, List[str]] = {}

        for name in self.knots:
            queue.append((name, self.n_start))
            added.add((name, self.n_start))

        pool: Optional[ProcessPoolExecutor] = None
        if self.jobs > 1:
            pool = ProcessPoolExecutor(
                max_workers=self.jobs,
                initializer=configure_default_oracle,
                initargs=(self.table_path,),
            )
        try:
            while queue:
                level = queue[0][1]
                batch: List[Tuple[str, int]] = []
                while queue and queue[0][1] == level:
                    batch.append(queue.popleft())
                logger.info(f"Classification level n={level}: {len(batch)} knots")

                for (knot, n), result in zip(batch, self._compute_batch(batch, pool)):
                    self._record(result, record)
                    self._bookkeep(knot, n, result.invariant, queue, added, seen, record, overflow)
        finally:
            if pool is not None:
                pool.shutdown()

        record.unresolved = sorted(sorted(group) for group in overflow.values())
        for group in record.unresolved:
            logger.warning(f"Unresolved at n_max={self.n_max}: {', '.join(group)}")
        logger.info(
            f"Classification finished: {len(record.final)}/{len(self.knots)} knots resolved, "
            f"classifying index {record.classifying_index}"
        )
        if strict and record.unresolved:
            raise ClassificationIncomplete(record, record.unresolved)
        return record

    def _record(self, result: InvariantResult, record: ClassificationRecord) -> None:
        record.invariants.setdefault(result.knot, {})[result.n] = result.invariant
        record.computed_at.setdefault(result.knot, []).append(result.n)
        if self.writer:
            self.writer.write_line(result.to_jsonable())

    def _bookkeep(
        self,
        knot: str,
        n: int,
        invariant: Invariant,
        queue: Deque[Tuple[str, int]],
        added: Set[Tuple[str, int]],
        seen: Dict[Key, List[Tuple[str, int]]],
        record: ClassificationRecord,
        overflow: Dict[Key, List[str]],
    ) -> None:
        key: Key = (n, invariant)
        if key not in seen:
            seen[key] = [(knot, n)]
            record.unique[key] = knot
            record.final[knot] = key
            return

        seen[key].append((knot, n))
        record.unique.pop(key, None)
        logger.debug(f"Collision at n={n}: {[k for k, _ in seen[key]]}")
        for other, other_n in seen[key]:
            record.final.pop(other, None)
            nxt = (other, other_n + 1)
            if nxt in added:
                continue
            if other_n + 1 > self.n_max:
                group = overflow.setdefault(key, [])
                if other not in group:
                    group.append(other)
                continue
            queue.append(nxt)
            added.add(nxt)


def classify(
    knots: Mapping[str, GridDiagram],
    n_start: int = 2,
    n_max: int = 7,
    settings: Optional[PipelineSettings] = None,
    jobs: int = 1,
    strict: bool = False,
) -> ClassificationRecord:
    return Classifier(knots, settings, n_start, n_max, jobs).run(strict)


def replay(
    record: ClassificationRecord,
    knots: Mapping[str, GridDiagram],
    n_start: int = 2,
    n_max: int = 7,
) -> ClassificationRecord:
    """
    Re-run the bookkeeping on a subfamily using invariants already computed
    for a larger family. A subfamily never needs a level the full run skipped.
    """

    def lookup(knot: str, text: str, n: int) -> InvariantResult:
        return InvariantResult(
            knot=knot, n=n, invariant=record.invariants[knot][n], generators=0, relators=0
        )

    return Classifier(knots, n_start=n_start, n_max=n_max, invariant_fn=lookup).run()
