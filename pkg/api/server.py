import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from groups.invariant import invariant_In
from groups.presentation import format_invariant, invariant_to_jsonable
from groups.smith import abelianization
from knots.grid import parse_entry
from pipeline.classify import knot_presentation
from pipeline.config import ConfigLoader
from pipeline.errors import CubeknotError
from pipeline.writer import read_recent

logger = logging.getLogger(__name__)


# --- Pydantic Models ---
class InvariantRequest(BaseModel):
    grid: str = Field(description="Grid literal such as [[2,5],[1,3],...] or 'braid 1,1,1'")
    n: int = Field(default=2, ge=1, le=7)


class InvariantResponse(BaseModel):
    grid: str
    n: int
    presentation: str
    abelianization: str
    invariant: str
    groups: List[Dict[str, Any]]


class ErrorResponse(BaseModel):
    detail: str


def create_app(config: Optional[ConfigLoader] = None) -> FastAPI:
    config = config or ConfigLoader()
    api_config = config.get_api_config()
    settings = config.pipeline_settings()
    results_file = Path(config.get("results.dir", "results")) / config.get(
        "results.results_file", "results.jsonl"
    )

    app = FastAPI(
        title="cubeknot API",
        description="Knot group presentations and low-index subgroup invariants.",
        version="0.1.0",
    )

    def require_enabled() -> None:
        if not api_config.get("enabled", False):
            raise HTTPException(status_code=404, detail="API is not enabled in the configuration.")

    @app.get("/", summary="API Status")
    async def root():
        return {
            "status": "running" if api_config.get("enabled", False) else "disabled",
            "title": "cubeknot API",
        }

    @app.get(
        "/results/recent",
        response_model=List[Dict[str, Any]],
        summary="Get Recent Results",
        description="Returns the latest lines of the classification results file, oldest first.",
    )
    async def get_recent_results(limit: int = 20):
        require_enabled()
        try:
            return read_recent(results_file, limit)
        except OSError as e:
            raise HTTPException(status_code=500, detail=f"Failed to read results file: {e}")

    @app.post(
        "/invariant",
        response_model=InvariantResponse,
        summary="Compute I^n of a Knot",
        description="Embeds the knot complement, extracts its group and returns the abelianizations of all subgroups of index at most n.",
        responses={
            400: {"model": ErrorResponse, "description": "Invalid grid or braid"},
            404: {"model": ErrorResponse, "description": "API disabled"},
        },
    )
    def post_invariant(request: InvariantRequest):
        require_enabled()
        try:
            diagram = parse_entry(request.grid)
            p = knot_presentation(diagram, settings)
            invariant = invariant_In(p, request.n)
        except CubeknotError as e:
            raise HTTPException(status_code=400, detail=str(e))

        logger.info(f"API invariant request n={request.n}: {format_invariant(invariant)}")
        return InvariantResponse(
            grid=diagram.to_text(),
            n=request.n,
            presentation=p.to_text(),
            abelianization=str(abelianization(p)),
            invariant=format_invariant(invariant),
            groups=invariant_to_jsonable(invariant),
        )

    return app


# --- Uvicorn Runner ---
if __name__ == "__main__":
    import uvicorn

    logging.basicConfig(
        level=logging.INFO,
        format="[%(asctime)s] %(levelname)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
    loader = ConfigLoader()
    api_config = loader.get_api_config()
    if api_config.get("enabled", False):
        host = api_config.get("host", "127.0.0.1")
        port = api_config.get("port", 8088)
        print(f"Starting cubeknot API server on http://{host}:{port}")
        uvicorn.run(create_app(loader), host=host, port=port)
    else:
        print("API server is disabled in the configuration. Exiting.")
