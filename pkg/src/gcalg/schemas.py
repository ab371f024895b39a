"""Pydantic request/response models for the HTTP service.

The document payload is the same JSON object the CLI reads from a file; its
deep validation lives in the kernel (iofmt), not here.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

CommandName = Literal[
    "validate",
    "check-axioms",
    "construct-cur",
    "cend-assoc",
    "trivialize",
    "decompose",
    "recover",
    "simplicity",
]


class JobOptions(BaseModel):
    degree_bound: int = 2
    seed: int = 0
    mutation: Optional[str] = None
    timing: bool = False


class JobRequest(BaseModel):
    command: CommandName
    document: dict = Field(default_factory=dict)
    options: JobOptions = Field(default_factory=JobOptions)


class CheckRecordModel(BaseModel):
    name: str
    verdict: str
    detail: dict = Field(default_factory=dict)


class JobReportModel(BaseModel):
    command: str
    verdict: str
    exit_code: int
    seed: int
    conventions: str
    version: str
    records: list[CheckRecordModel]
    certificate: Optional[dict] = None
    elapsed_ms: Optional[int] = None


class HealthModel(BaseModel):
    status: str
    version: str


class ConventionsModel(BaseModel):
    version: str
    table: list[tuple[str, str]]
