"""FastAPI service wrapping the core package.

Every endpoint is a thin adapter: parse the request model, call the same
core functions the library exposes, shape the response. Rendering goes
through engine.to_string so service (and CLI) output never drifts from
in-process results.
"""

import base64
import json
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..active import ActiveBearingLearner, SphereBearingEnv, run_episode
from ..bench import BenchConfig, check_budgets, run_benchmark
from ..datasets import ExternalDataset
from ..engine import BoundingBox, Vector, draw_bounding_boxes, open_image, to_string, to_wire
from ..engine.image_io import encode_image
from ..errors import FileNotFound, PerceptkitError, SchemaViolation, UsageError
from ..learners import registry
from ..packaging import Manifest, validate_package, write_package
from . import schemas


def load_inputs(path: str):
    """Read an inference input file: an image, or JSON vector(s)."""
    p = Path(path)
    if not p.is_file():
        raise FileNotFound(str(p))
    suffix = p.suffix.lower()
    if suffix in (".ppm", ".pgm"):
        return [open_image(p)]
    if suffix == ".json":
        try:
            raw = json.loads(p.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise SchemaViolation(f"{p}: invalid JSON: {exc}") from exc
        if isinstance(raw, list) and raw and all(
                isinstance(v, (int, float)) for v in raw):
            return [Vector(raw)]
        if isinstance(raw, list) and raw and all(isinstance(v, list) for v in raw):
            return [Vector(v) for v in raw]
        raise UsageError(f"{p}: JSON input must be a vector or a list of vectors")
    raise UsageError(f"unsupported input type {suffix!r} (use .ppm/.pgm/.json)")


def _load_learner(name: str, package_path: str, hyperparams: dict):
    learner = registry.create(name, hyperparams)
    learner.load(package_path)
    return learner


def _flatten_targets(result) -> list:
    return list(result) if isinstance(result, (list, tuple)) else [result]


def create_app() -> FastAPI:
    app = FastAPI(title="perceptkit service", version=__version__)

    @app.exception_handler(PerceptkitError)
    async def _domain_error(request: Request, exc: PerceptkitError):
        return JSONResponse(status_code=400, content=schemas.ErrorResponse(
            error=exc.name, detail=str(exc)).model_dump())

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return schemas.HealthResponse(status="ok", version=__version__,
                                      learners=registry.names())

    @app.post("/package", response_model=schemas.PackageResponse)
    def package(req: schemas.PackageRequest):
        manifest_file = Path(req.manifest_path)
        if not manifest_file.is_file():
            raise FileNotFound(str(manifest_file))
        try:
            raw = json.loads(manifest_file.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise SchemaViolation(f"{manifest_file}: invalid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise SchemaViolation(f"{manifest_file}: manifest must be a JSON object")
        manifest = Manifest.from_json_dict({"checksums": {}, **raw})
        payload_dir = Path(req.payload_dir)
        payloads = {}
        for rel in manifest.model_paths:
            f = payload_dir / rel
            if not f.is_file():
                raise FileNotFound(f"payload {rel!r} not found under {payload_dir}")
            payloads[rel] = f.read_bytes()
        dest = write_package(manifest, payloads, req.out_dir)
        return schemas.PackageResponse(package_path=str(dest),
                                       manifest=validate_package(dest).to_json_dict())

    @app.post("/validate", response_model=schemas.ValidateResponse)
    def validate(req: schemas.ValidateRequest):
        return schemas.ValidateResponse(
            manifest=validate_package(req.package_path).to_json_dict())

    @app.post("/infer", response_model=schemas.InferResponse)
    def infer(req: schemas.InferRequest):
        learner = _load_learner(req.learner, req.package_path, req.hyperparams)
        inputs = load_inputs(req.input_path)
        targets = []
        for item in inputs:
            targets.extend(_flatten_targets(learner.infer(item)))

        drawn = None
        if req.draw:
            boxes = [t for t in targets if isinstance(t, BoundingBox)]
            if len(boxes) != len(targets) or len(inputs) != 1 or not hasattr(
                    inputs[0], "convert"):
                raise UsageError("--draw requires box outputs on a single image input")
            class_names = learner.classes or []
            annotated = draw_bounding_boxes(inputs[0], boxes, class_names)
            drawn = base64.b64encode(encode_image(annotated)).decode("ascii")

        return schemas.InferResponse(
            targets=[to_wire(t) for t in targets],
            rendered=[to_string(t) for t in targets],
            drawn_ppm_base64=drawn,
        )

    @app.post("/bench", response_model=schemas.BenchResponse)
    def bench(req: schemas.BenchRequest):
        learner = _load_learner(req.learner, req.package_path, req.hyperparams)
        prepared = load_inputs(req.input_path)[0]
        cfg = BenchConfig(warmup_iters=req.warmup_iters,
                          measure_iters=req.measure_iters,
                          min_fps=req.min_fps, max_mem_bytes=req.max_mem_bytes)
        report = run_benchmark(lambda: learner.infer(prepared), cfg)
        violations = check_budgets(report, cfg)
        return schemas.BenchResponse(
            report=report.to_json_dict(),
            violations=[{"metric": v.metric, "measured": v.measured,
                         "budget": v.budget} for v in violations],
            passed=not violations)

    @app.post("/sim", response_model=schemas.SimResponse)
    def sim(req: schemas.SimRequest):
        env = SphereBearingEnv(kappa=req.kappa, noise_sigma=req.noise_sigma,
                               max_step=req.max_step, max_steps=req.steps)
        learner = ActiveBearingLearner({"probe_step": req.probe_step,
                                        "step_scale": req.max_step})
        learner.fit(None)
        trace = run_episode(env, learner, seed=req.seed)
        rows = [json.loads(s.to_json()) for s in trace.steps]
        return schemas.SimResponse(rows=rows,
                                   final_angular_error=trace.final_angular_error)

    @app.post("/fit", response_model=schemas.FitResponse)
    def fit(req: schemas.FitRequest):
        ds = ExternalDataset(req.data_path, req.data_type).open()
        learner = registry.create(req.learner, req.hyperparams)
        stats = learner.fit(ds)
        learner.save(req.out_dir)
        return schemas.FitResponse(package_path=req.out_dir, stats=stats)

    @app.post("/datasets/inspect", response_model=schemas.DatasetInspectResponse)
    def dataset_inspect(req: schemas.DatasetInspectRequest):
        ds = ExternalDataset(req.path, req.dataset_type).open()
        return schemas.DatasetInspectResponse(length=len(ds),
                                              classes=list(ds.class_names))

    return app
