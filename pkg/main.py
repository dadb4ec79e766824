#!/usr/bin/env python3
"""
cubeknot - Fundamental groups of cubical complexes and knot classification

Computes presentations of fundamental groups of 3D cubical sets by discrete
Morse theory, embeds knot complements from grid diagrams, and classifies knot
families by abelianizations of their low-index subgroups.
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Dict, Optional, Union

import orjson

# Add current directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from cubical.complex_io import load_complex, looks_like_complex, save_complex
from cubical.lattice import CubicalComplex
from cubical.redundancy import build_table, configure_default_oracle
from groups.invariant import invariant_In
from groups.presentation import format_invariant, invariant_to_jsonable
from groups.smith import abelianization
from knots.embedding import embed_complement
from knots.grid import GridDiagram, load_knot_table, parse_entry
from pipeline.cache import InvariantCache
from pipeline.classify import Classifier
from pipeline.config import ConfigLoader
from pipeline.errors import ClassificationIncomplete, CubeknotError
from pipeline.fund_group import best_fund_group
from pipeline.models import PipelineSettings
from pipeline.report import ReportGenerator
from pipeline.writer import ResultsWriter

EXIT_OK = 0
EXIT_UNRESOLVED = 2
EXIT_INPUT_ERROR = 3

LOG_FORMAT = "[%(asctime)s] %(levelname)s: %(message)s"
LOG_DATEFMT = "%Y-%m-%d %H:%M:%S"

# Configure logging
logging.basicConfig(level=logging.INFO, format=LOG_FORMAT, datefmt=LOG_DATEFMT)
logger = logging.getLogger(__name__)


class Cubeknot:
    def __init__(self, config_path: Optional[str] = None, config_file: Optional[str] = None):
        self.config_path = config_path
        self.config_file = config_file
        self.config: Optional[ConfigLoader] = None
        self.settings: Optional[PipelineSettings] = None
        self.cache: Optional[InvariantCache] = None

    def _setup_logging(self):
        """Apply the configured level and add the file handler."""
        logging_config = self.config.get_logging_config()
        level = getattr(logging, str(logging_config.get("level", "INFO")).upper(), logging.INFO)
        logging.getLogger().setLevel(level)

        log_file = logging_config.get("file")
        if not log_file:
            return
        log_file = Path(log_file)
        log_file.parent.mkdir(parents=True, exist_ok=True)

        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(level)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=LOG_DATEFMT))
        logging.getLogger().addHandler(file_handler)
        logger.info(f"Logging to file: {log_file}")

    def _load_configuration(self):
        """Load and validate configuration."""
        try:
            config_dir = self.config_path if self.config_path else "config"
            self.config = ConfigLoader(config_dir=config_dir, config_file=self.config_file)
            self.settings = self.config.pipeline_settings()
            logger.info("Configuration loaded successfully")
        except Exception as e:
            logger.error(f"Failed to load configuration: {e}")
            sys.exit(EXIT_INPUT_ERROR)

    def _initialize_components(self, cache_dir: Optional[str] = None, use_cache: bool = True):
        """Configure the redundancy oracle and the invariant cache."""
        configure_default_oracle(self.config.get("redundancy.table_path"))

        cache_config = self.config.get_cache_config()
        if use_cache and cache_config.get("enabled", True):
            self.cache = InvariantCache(
                cache_dir or cache_config.get("dir", "cache"),
                cache_config.get("pipeline_version", "1"),
            )
            logger.info(f"Invariant cache at {self.cache.dir}")
        else:
            logger.info("Invariant cache is disabled.")

    def setup(self, cache_dir: Optional[str] = None, use_cache: bool = True):
        self._load_configuration()
        self._setup_logging()
        self._initialize_components(cache_dir, use_cache)

    # --- input ---
    def _read_input(
        self, path: str, transpose: bool = False
    ) -> Union[CubicalComplex, GridDiagram]:
        text = Path(path).read_text(encoding="utf-8")
        if looks_like_complex(text):
            return load_complex(path)
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            _, sep, rest = line.partition(":")
            diagram = parse_entry(rest if sep else line)
            return diagram.transpose() if transpose else diagram
        raise CubeknotError(f"{path} holds neither a complex nor a diagram")

    def _complex_of(self, source: Union[CubicalComplex, GridDiagram]) -> CubicalComplex:
        if isinstance(source, GridDiagram):
            return embed_complement(source, self.settings.pad).complement
        return source

    # --- commands ---
    def fundgroup(self, path: str, ordering: Optional[str], seed: Optional[int], fmt: str,
                  transpose: bool) -> int:
        settings = self.settings
        if ordering is not None or seed is not None:
            settings = settings.model_copy(
                update={
                    "ordering": ordering or settings.ordering,
                    "seed": settings.seed if seed is None else seed,
                }
            )
        k = self._complex_of(self._read_input(path, transpose))
        runs = best_fund_group(k, settings)
        best = runs[0]
        h1 = abelianization(best.presentation)
        if fmt == "json":
            payload = {
                "presentation": best.presentation.to_jsonable(),
                "abelianization": str(h1),
                "runs": [run.stats.to_jsonable() for run in runs],
            }
            print(orjson.dumps(payload, option=orjson.OPT_INDENT_2).decode())
        else:
            print(best.presentation.to_text())
            print(f"H1 = {h1}")
            for run in runs:
                s = run.stats
                print(
                    f"{s.ordering}: g/r {s.generators_before}/{s.relators_before}"
                    f" -> {s.generators_after}/{s.relators_after}"
                )
        return EXIT_OK

    def invariant(self, path: str, n: int, transpose: bool) -> int:
        k = self._complex_of(self._read_input(path, transpose))
        p = best_fund_group(k, self.settings)[0].presentation
        inv = invariant_In(p, n)
        print(f"I^{n} = {format_invariant(inv)}")
        logger.debug(orjson.dumps(invariant_to_jsonable(inv)).decode())
        return EXIT_OK

    def classify(self, table: str, n_start: Optional[int], n_max: Optional[int],
                 jobs: Optional[int], transpose: bool, strict: bool) -> int:
        classify_config = self.config.get_classify_config()
        n_start = n_start or classify_config.get("n_start", 2)
        n_max = n_max or classify_config.get("n_max", 7)
        jobs = jobs or classify_config.get("jobs", 1)
        transpose = transpose or bool(self.config.get("knots.transpose", False))
        knots: Dict[str, GridDiagram] = load_knot_table(table, transpose=transpose)

        results_config = self.config.get_results_config()
        results_dir = Path(results_config.get("dir", "results"))
        reporter = ReportGenerator(
            results_dir,
            results_config.get("report_csv", "classification.csv"),
            results_config.get("summary_file", "summary.md"),
        )
        results_path = results_dir / results_config.get("results_file", "results.jsonl")

        with ResultsWriter(results_path, truncate=True) as writer:
            classifier = Classifier(
                knots,
                self.settings,
                n_start=n_start,
                n_max=n_max,
                jobs=jobs,
                cache=self.cache,
                writer=writer,
                table_path=self.config.get("redundancy.table_path"),
            )
            try:
                record = classifier.run(strict=strict)
            except ClassificationIncomplete as e:
                record = e.record

        reporter.generate(record, knots, n_start, n_max)
        print(f"Classifying index: {record.classifying_index}")
        if record.unresolved:
            for group in record.unresolved:
                print(f"Unresolved: {', '.join(group)}")
            return EXIT_UNRESOLVED
        return EXIT_OK

    def build_lookup_table(self, out: str, jobs: int, limit: Optional[int]) -> int:
        kwargs = {"limit": limit} if limit else {}
        path = build_table(out, jobs=jobs, **kwargs)
        print(f"Redundancy table written to {path}")
        return EXIT_OK

    def embed(self, path: str, pad: Optional[int], transpose: bool, out: Optional[str]) -> int:
        source = self._read_input(path, transpose)
        if not isinstance(source, GridDiagram):
            raise CubeknotError(f"{path} does not hold a grid diagram")
        embedding = embed_complement(source, pad if pad is not None else self.settings.pad)
        print(
            f"knot cubes: {len(embedding.knot_cubes)}, box cubes: {len(embedding.box)}, "
            f"complement cubes: {len(embedding.complement)}, "
            f"chi: {embedding.complement.euler_characteristic()}"
        )
        if out:
            save_complex(embedding.complement, out)
        return EXIT_OK

    def serve(self) -> int:
        import uvicorn

        from api.server import create_app

        api_config = self.config.get_api_config()
        if not api_config.get("enabled", False):
            print("API server is disabled in the configuration. Exiting.")
            return EXIT_OK
        host = api_config.get("host", "127.0.0.1")
        port = api_config.get("port", 8088)
        print(f"INFO: API server running at http://{host}:{port}")
        uvicorn.run(create_app(self.config), host=host, port=port)
        return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="cubeknot - knot groups from cubical complexes")
    parser.add_argument(
        "--config",
        type=str,
        help="Path to the configuration directory (e.g., 'config/'). Defaults to 'config'.",
    )
    parser.add_argument("--config-file", type=str, help="Explicit configuration file.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fundgroup", help="Presentation of the fundamental group")
    p.add_argument("input", help="Complex dump or grid/braid file")
    p.add_argument("--ordering", choices=["lex", "revlex", "random"])
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--transpose", action="store_true")

    p = sub.add_parser("invariant", help="I^n of a complex or knot")
    p.add_argument("input")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--transpose", action="store_true")

    p = sub.add_parser("classify", help="Classify a knot table")
    p.add_argument("table")
    p.add_argument("--n-start", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--jobs", type=int)
    p.add_argument("--cache", type=str, help="Cache directory (overrides cache.dir)")
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--transpose", action="store_true")
    p.add_argument("--strict", action="store_true", help="Fail instead of reporting unresolved groups")

    p = sub.add_parser("lookup-table", help="Redundancy lookup table")
    table_sub = p.add_subparsers(dest="table_command", required=True)
    b = table_sub.add_parser("build")
    b.add_argument("out")
    b.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    b.add_argument("--limit", type=int, help="Only compute masks below this value")

    p = sub.add_parser("embed", help="Embed a knot complement")
    p.add_argument("input")
    p.add_argument("--pad", type=int)
    p.add_argument("--transpose", action="store_true")
    p.add_argument("--out", type=str, help="Write the complement as a complex dump")

    sub.add_parser("serve", help="Run the HTTP API")
    return parser


def main(argv=None) -> int:
    """Main entry point."""
    args = build_parser().parse_args(argv)
    app = Cubeknot(config_path=args.config, config_file=args.config_file)
    use_cache = not getattr(args, "no_cache", False)
    app.setup(cache_dir=getattr(args, "cache", None), use_cache=use_cache)

    try:
        if args.command == "fundgroup":
            return app.fundgroup(args.input, args.ordering, args.seed, args.format, args.transpose)
        if args.command == "invariant":
            return app.invariant(args.input, args.n, args.transpose)
        if args.command == "classify":
            return app.classify(
                args.table, args.n_start, args.n_max, args.jobs, args.transpose, args.strict
            )
        if args.command == "lookup-table":
            return app.build_lookup_table(args.out, args.jobs, args.limit)
        if args.command == "embed":
            return app.embed(args.input, args.pad, args.transpose, args.out)
        if args.command == "serve":
            return app.serve()
    except (CubeknotError, OSError, ValueError) as e:
        logger.error(f"Input error: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
