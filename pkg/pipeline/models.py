from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from groups.presentation import (
    GroupPresentation,
    Invariant,
    format_invariant,
    invariant_to_jsonable,
)
from groups.tietze import TietzeSettings

OrderingName = Literal["lex", "revlex", "random"]


class PipelineSettings(BaseModel):
    ordering: OrderingName = "lex"
    seed: int = 0
    max_generators: int = Field(default=4, ge=0)
    retry_orderings: List[OrderingName] = Field(
        default_factory=lambda: ["lex", "revlex", "random"]
    )
    tietze: TietzeSettings = Field(default_factory=TietzeSettings)
    pad: int = Field(default=2, ge=2)


class StageStats(BaseModel):
    """Sizes recorded at each stage of one fundamental-group run."""

    ordering: OrderingName
    cubes: int
    shaved_cubes: int
    collapsible_cubes: int
    cstructure_cells: Tuple[int, int, int]
    critical_cells: Tuple[int, int, int]
    generators_before: int
    relators_before: int
    generators_after: int
    relators_after: int

    def to_jsonable(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


class FundGroupRun(BaseModel):
    model_config = ConfigDict(frozen=True)

    raw: GroupPresentation
    presentation: GroupPresentation
    stats: StageStats


class InvariantResult(BaseModel):
    """One line of the results file: I^n of one knot."""

    knot: str
    n: int
    invariant: Invariant
    generators: int
    relators: int

    def to_jsonable(self) -> Dict[str, Any]:
        return {
            "knot": self.knot,
            "n": self.n,
            "invariant": invariant_to_jsonable(self.invariant),
            "generators": self.generators,
            "relators": self.relators,
        }


class ClassificationRecord(BaseModel):
    """
    Outcome of a classification run.

    `final` maps each resolved knot to its (n, I^n) and `unique` is the
    reverse map; both are injective. `unresolved` lists knot groups that still
    collided when n_max was reached. `invariants` keeps every I^n computed,
    keyed by knot then n.
    """

    final: Dict[str, Tuple[int, Invariant]] = Field(default_factory=dict)
    unique: Dict[Tuple[int, Invariant], str] = Field(default_factory=dict)
    unresolved: List[List[str]] = Field(default_factory=list)
    invariants: Dict[str, Dict[int, Invariant]] = Field(default_factory=dict)
    computed_at: Dict[str, List[int]] = Field(default_factory=dict)

    @property
    def classifying_index(self) -> Optional[int]:
        if not self.final:
            return None
        return max(n for n, _ in self.final.values())

    @property
    def complete(self) -> bool:
        return not self.unresolved

    def index_of(self, knot: str) -> Optional[int]:
        entry = self.final.get(knot)
        return entry[0] if entry else None

    def rows(self) -> List[Tuple[str, int, str]]:
        return [
            (knot, n, format_invariant(inv))
            for knot, (n, inv) in sorted(self.final.items())
        ]

    def to_jsonable(self) -> Dict[str, Any]:
        return {
            "classifying_index": self.classifying_index,
            "final": {
                knot: {"n": n, "invariant": invariant_to_jsonable(inv)}
                for knot, (n, inv) in sorted(self.final.items())
            },
            "unresolved": [sorted(group) for group in self.unresolved],
        }
