import csv
import logging
import re
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Tuple, Union

import orjson

from knots.grid import GridDiagram
from pipeline.classify import replay
from pipeline.models import ClassificationRecord

logger = logging.getLogger(__name__)

_CROSSINGS = re.compile(r"^(\d+)[_a-z]")


def crossing_number(name: str) -> Optional[int]:
    """Crossing number read from names like `7_4` or `10a_12`; None otherwise."""
    match = _CROSSINGS.match(name)
    return int(match.group(1)) if match else None


def classifying_indexes_by_crossing(
    record: ClassificationRecord,
    knots: Mapping[str, GridDiagram],
    n_start: int = 2,
    n_max: int = 7,
) -> Dict[int, Optional[int]]:
    """N(c) for the subfamily of knots with at most c crossings, per c."""
    numbered = {name: crossing_number(name) for name in knots}
    crossings = sorted({c for c in numbered.values() if c is not None})
    result: Dict[int, Optional[int]] = {}
    for c in crossings:
        subfamily = {
            name: d for name, d in knots.items()
            if numbered[name] is not None and numbered[name] <= c
        }
        sub = replay(record, subfamily, n_start, n_max)
        result[c] = sub.classifying_index if sub.complete else None
    return result


def computation_distribution(record: ClassificationRecord) -> Dict[int, Dict[int, int]]:
    """Per crossing number c and level n, how many knots needed I^n computed."""
    table: Dict[int, Dict[int, int]] = {}
    for knot, levels in record.computed_at.items():
        c = crossing_number(knot)
        if c is None:
            continue
        row = table.setdefault(c, {})
        for n in set(levels):
            row[n] = row.get(n, 0) + 1
    return table


class ReportGenerator:
    """Writes the classification CSV and the Markdown summary of a run."""

    def __init__(
        self,
        results_dir: Union[str, Path],
        report_csv: str = "classification.csv",
        summary_file: str = "summary.md",
    ):
        self.results_dir = Path(results_dir)
        self.results_dir.mkdir(parents=True, exist_ok=True)
        self.csv_path = self.results_dir / report_csv
        self.summary_path = self.results_dir / summary_file

    def write_csv(self, record: ClassificationRecord) -> Path:
        with self.csv_path.open("w", newline="", encoding="utf-8") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["knot", "classifying_index", "invariant"])
            for row in record.rows():
                w.writerow(row)
            for group in record.unresolved:
                for knot in group:
                    w.writerow([knot, "", "unresolved"])
        logger.info(f"Classification CSV saved to: {self.csv_path}")
        return self.csv_path

    def summary_markdown(
        self,
        record: ClassificationRecord,
        knots: Mapping[str, GridDiagram],
        n_start: int = 2,
        n_max: int = 7,
    ) -> str:
        lines: List[str] = ["# Classification summary", ""]
        index = record.classifying_index
        lines.append(f"Knots: {len(knots)}")
        lines.append(f"Resolved: {len(record.final)}")
        lines.append(f"Classifying index: {index if record.complete else 'unresolved'}")
        lines.append("")

        by_crossing = classifying_indexes_by_crossing(record, knots, n_start, n_max)
        if by_crossing:
            lines += ["## Classifying index N(c) of the knots with at most c crossings", ""]
            lines.append("| c | N(c) |")
            lines.append("|---|------|")
            for c, value in by_crossing.items():
                lines.append(f"| {c} | {value if value is not None else 'unresolved'} |")
            lines.append("")

        distribution = computation_distribution(record)
        if distribution:
            levels = sorted({n for row in distribution.values() for n in row})
            lines += ["## Knots with c crossings for which I^n was computed", ""]
            lines.append("| c \\ n | " + " | ".join(str(n) for n in levels) + " |")
            lines.append("|---" * (len(levels) + 1) + "|")
            for c in sorted(distribution):
                row = distribution[c]
                total = sum(1 for k in knots if crossing_number(k) == c)
                cells = [_share(row.get(n, 0), total) for n in levels]
                lines.append(f"| {c} | " + " | ".join(cells) + " |")
            lines.append("")

        if record.unresolved:
            lines += ["## Unresolved groups", ""]
            for group in record.unresolved:
                lines.append(f"- {', '.join(group)}")
            lines.append("")
        return "\n".join(lines)

    def write_summary(
        self,
        record: ClassificationRecord,
        knots: Mapping[str, GridDiagram],
        n_start: int = 2,
        n_max: int = 7,
    ) -> Path:
        self.summary_path.write_text(
            self.summary_markdown(record, knots, n_start, n_max), encoding="utf-8"
        )
        logger.info(f"Summary report saved to: {self.summary_path}")
        return self.summary_path

    def write_record_json(self, record: ClassificationRecord, name: str = "record.json") -> Path:
        path = self.results_dir / name
        path.write_bytes(
            orjson.dumps(record.to_jsonable(), option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS)
        )
        return path

    def generate(
        self,
        record: ClassificationRecord,
        knots: Mapping[str, GridDiagram],
        n_start: int = 2,
        n_max: int = 7,
    ) -> Tuple[Path, Path]:
        return self.write_csv(record), self.write_summary(record, knots, n_start, n_max)


def _share(count: int, total: int) -> str:
    if not total:
        return str(count)
    return f"{count} ({round(100 * count / total)}%)"
