"""Request/response models for the inference service.

Paths in requests refer to the service host's filesystem; with the
embedded (in-process) client that is simply the local filesystem.
"""

import math

from pydantic import BaseModel, Field


class ErrorResponse(BaseModel):
    error: str
    detail: str = ""


class PackageRequest(BaseModel):
    manifest_path: str
    payload_dir: str
    out_dir: str


class PackageResponse(BaseModel):
    package_path: str
    manifest: dict


class ValidateRequest(BaseModel):
    package_path: str


class ValidateResponse(BaseModel):
    manifest: dict


class InferRequest(BaseModel):
    package_path: str
    learner: str
    input_path: str
    hyperparams: dict = Field(default_factory=dict)
    draw: bool = False


class InferResponse(BaseModel):
    targets: list[dict]
    rendered: list[str]
    drawn_ppm_base64: str | None = None


class BenchRequest(BaseModel):
    package_path: str
    learner: str
    input_path: str
    hyperparams: dict = Field(default_factory=dict)
    warmup_iters: int = Field(default=10, ge=0)
    measure_iters: int = Field(default=100, ge=1)
    min_fps: float = Field(default=25.0, gt=0)
    max_mem_bytes: int = Field(default=1 << 30, gt=0)


class BenchResponse(BaseModel):
    report: dict
    violations: list[dict]  # {metric, measured, budget}
    passed: bool


class SimRequest(BaseModel):
    seed: int
    steps: int = Field(ge=1)
    noise_sigma: float = Field(default=0.0, ge=0)
    kappa: float = Field(default=1.0, gt=0)
    max_step: float = Field(default=math.pi / 18, gt=0)
    probe_step: float = Field(default=0.2, gt=0, le=0.5)


class SimResponse(BaseModel):
    rows: list[dict]
    final_angular_error: float


class FitRequest(BaseModel):
    learner: str
    data_path: str
    data_type: str
    out_dir: str
    hyperparams: dict = Field(default_factory=dict)


class FitResponse(BaseModel):
    package_path: str
    stats: dict


class DatasetInspectRequest(BaseModel):
    path: str
    dataset_type: str


class DatasetInspectResponse(BaseModel):
    length: int
    classes: list[str]


class HealthResponse(BaseModel):
    status: str
    version: str
    learners: list[str]
