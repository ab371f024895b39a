"""FastAPI service wrapping the kernel.

One generic job endpoint mirrors the CLI exactly; mathematical failures and
input errors come back as structured reports (HTTP 200) so clients read one
shape everywhere.  Malformed request bodies are rejected by pydantic (422).
"""

from __future__ import annotations

from fastapi import FastAPI

from . import __version__
from .jobs import CONVENTION_TABLE, CONVENTIONS_VERSION, JobSpec, report_to_dict, run
from .schemas import ConventionsModel, HealthModel, JobReportModel, JobRequest

app = FastAPI(
    title="gcalg",
    version=__version__,
    description=(
        "Exact checks, constructions and decompositions for finite graded "
        "associative conformal algebras over the affine line."
    ),
)


@app.get("/health", response_model=HealthModel)
def health() -> HealthModel:
    return HealthModel(status="ok", version=__version__)


@app.get("/conventions", response_model=ConventionsModel)
def conventions() -> ConventionsModel:
    return ConventionsModel(version=CONVENTIONS_VERSION, table=list(CONVENTION_TABLE))


@app.post("/jobs", response_model=JobReportModel)
def submit_job(request: JobRequest) -> JobReportModel:
    options = request.options.model_dump(exclude_none=True)
    report = run(JobSpec(request.command, request.document, options))
    return JobReportModel(**report_to_dict(report))
