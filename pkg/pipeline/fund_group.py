"""
Fundamental groups of cubical complexes.

shave -> collapsible subset -> quotient C-structure -> coreduction field ->
alpha-collapses -> presentation -> Tietze.
"""

import logging
from typing import Dict, List, Optional

from cubical.cstructure import CStructureView, collapse_field, from_quotient, presentation
from cubical.lattice import CubicalComplex
from cubical.morse import coreduction_dvf
from cubical.reduce import collapsible_subset, shave
from cubical.redundancy import RedundancyOracle
from groups.presentation import GroupPresentation
from groups.tietze import TietzeSettings, tietze_simplify
from pipeline.errors import ComplexError, DisconnectedComplexError
from pipeline.models import FundGroupRun, OrderingName, PipelineSettings, StageStats

logger = logging.getLogger(__name__)


def _check_input(k: CubicalComplex) -> None:
    if not len(k):
        raise ComplexError("Cannot compute the fundamental group of an empty complex")
    components = k.components("vertex")
    if len(components) != 1:
        raise DisconnectedComplexError(len(components))


def fund_group_run(
    k: CubicalComplex,
    ordering: OrderingName = "lex",
    seed: int = 0,
    tietze: Optional[TietzeSettings] = None,
    oracle: Optional[RedundancyOracle] = None,
) -> FundGroupRun:
    """One pass of the pipeline with a single ordering policy, keeping stage sizes."""
    _check_input(k)

    shaved = shave(k, ordering, seed, oracle)
    a = collapsible_subset(shaved, ordering, seed, oracle)

    c = from_quotient(shaved, a)
    sizes = (len(c.vertices), len(c.edges), len(c.faces))
    view = CStructureView(c)
    dvf = coreduction_dvf(view, ordering, seed)
    by_dim = dvf.critical_by_dimension(view)
    critical = (by_dim.get(0, 0), by_dim.get(1, 0), by_dim.get(2, 0))
    logger.info(f"Critical cells by dimension: {critical}")

    collapse_field(c, dvf)
    raw = presentation(c)
    simplified = tietze_simplify(raw, tietze)
    logger.info(
        f"Tietze ({ordering}): {raw.generators} generators / {len(raw.relators)} relators "
        f"-> {simplified.generators} / {len(simplified.relators)}"
    )

    stats = StageStats(
        ordering=ordering,
        cubes=len(k),
        shaved_cubes=len(shaved),
        collapsible_cubes=len(a),
        cstructure_cells=sizes,
        critical_cells=critical,
        generators_before=raw.generators,
        relators_before=len(raw.relators),
        generators_after=simplified.generators,
        relators_after=len(simplified.relators),
    )
    return FundGroupRun(raw=raw, presentation=simplified, stats=stats)


def fund_group(
    k: CubicalComplex,
    ordering: OrderingName = "lex",
    seed: int = 0,
    tietze: Optional[TietzeSettings] = None,
    oracle: Optional[RedundancyOracle] = None,
) -> GroupPresentation:
    """A Tietze-simplified presentation of the fundamental group of k."""
    return fund_group_run(k, ordering, seed, tietze, oracle).presentation


def best_fund_group(
    k: CubicalComplex,
    settings: Optional[PipelineSettings] = None,
    oracle: Optional[RedundancyOracle] = None,
) -> List[FundGroupRun]:
    """
    Run the configured ordering first; while the result has more than
    max_generators generators, try the retry orderings too. Returns every run
    made, the smallest presentation first.
    """
    settings = settings or PipelineSettings()
    runs: Dict[str, FundGroupRun] = {}
    run = fund_group_run(k, settings.ordering, settings.seed, settings.tietze, oracle)
    runs[settings.ordering] = run

    for ordering in settings.retry_orderings:
        best = min(runs.values(), key=lambda r: r.presentation.size_key())
        if best.presentation.generators <= settings.max_generators:
            break
        if ordering in runs:
            continue
        logger.warning(
            f"Presentation has {best.presentation.generators} generators "
            f"(> {settings.max_generators}); retrying with ordering {ordering}"
        )
        runs[ordering] = fund_group_run(k, ordering, settings.seed, settings.tietze, oracle)

    ranked = sorted(runs.values(), key=lambda r: r.presentation.size_key())
    logger.debug(
        f"Kept ordering {ranked[0].stats.ordering} out of {[r.stats.ordering for r in ranked]}"
    )
    return ranked
