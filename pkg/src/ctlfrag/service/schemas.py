"""Request and response models shared by the HTTP service and the CLI."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field


class FormulaRequest(BaseModel):
    formula: str


class ParseResponse(BaseModel):
    formula: str
    size: int
    temporal_depth: int
    operators: list[str]
    propositions: list[str]
    nnf: bool


class NnfResponse(BaseModel):
    nnf: str
    size: int


class DepthResponse(BaseModel):
    depth: int


class EncodeResponse(BaseModel):
    structure: str
    elements: int
    gaifman_edges: int


class DecomposeRequest(BaseModel):
    formula: str | None = None
    structure: str | None = None
    exact: bool = False
    element_limit: int = Field(default=12, gt=0)


class DecomposeResponse(BaseModel):
    decomposition: str
    width: int
    exact: bool


class ParamResponse(BaseModel):
    value: int
    pathwidth: int
    temporal_depth: int
    exact: bool


class SatRequest(BaseModel):
    formula: str
    method: Literal["pipeline", "tree", "brute"] = "pipeline"
    max_worlds: int = Field(default=3, gt=0)
    depth: int | None = Field(default=None, ge=0)


class SatResponse(BaseModel):
    method: str
    status: Literal["sat", "unsat", "budget_exhausted"]
    witness: str | None = None
    witness_world: int | None = None
    examined: int | None = None
    depth_used: int | None = None


class MsoEvalRequest(BaseModel):
    structure: str
    formula: str
    elements: dict[str, int] = {}
    sets: dict[str, list[int]] = {}


class MsoEvalResponse(BaseModel):
    value: bool


class ReduceRequest(BaseModel):
    instance: str
    variant: Literal["ax-ag", "ax-eg", "ag", "au"]


class ReduceResponse(BaseModel):
    formula: str
    parts: dict[str, str]
    operators: list[str]
    temporal_depth: int


class VerifyReductionRequest(BaseModel):
    instance: str
    variant: Literal["ax-ag", "ax-eg", "ag", "au"]
    world_bound: int = Field(default=5, gt=0)
    search_budget: int = Field(default=4_000_000, gt=0)


class VerifyReductionResponse(BaseModel):
    variant: str
    answer: Literal["yes", "no"]
    passed: bool
    assignment: dict[str, bool] | None = None
    witness_ok: bool | None = None
    witness_worlds: int | None = None
    chain_counterexample: dict[str, bool] | None = None
    search_status: str | None = None
    structures_examined: int | None = None


class ScanRequest(BaseModel):
    family: Literal["disjunction", "empty"]
    variant: Literal["ax-ag", "ax-eg", "ag", "au"]
    start: int = Field(default=2, gt=0)
    stop: int = Field(default=7, gt=0)
    blocks: int = Field(default=1, gt=0)


class ScanRow(BaseModel):
    n: int
    temporal_depth: int
    pathwidth_upper: int


class ScanResponse(BaseModel):
    rows: list[ScanRow]


class HealthResponse(BaseModel):
    status: str
    version: str
