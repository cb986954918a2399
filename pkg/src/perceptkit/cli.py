"""Command-line client for the toolkit service.

The CLI is a thin client: every command builds a request for the HTTP
service and formats the response. By default the service app runs
embedded in-process (no network, same filesystem); pass --server to talk
to a remote instance instead.

Exit codes: 0 success, 1 operational error, 2 usage error, 3 budget
violation. These are stable.
"""

import argparse
import base64
import json
import math
import sys
from pathlib import Path

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _nonnegative_float(text: str) -> float:
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _hp_pair(text: str):
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    key, raw = text.split("=", 1)
    for cast in (int, float):
        try:
            return key, cast(raw)
        except ValueError:
            continue
    if raw in ("true", "false"):
        return key, raw == "true"
    return key, raw


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="perceptkit",
        description="Robotics perception kernel: packages, inference, "
                    "benchmarks, active-perception simulation.")
    parser.add_argument("--server", default=None,
                        help="URL of a running service; default runs embedded")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("package", help="bundle payload files into a model package")
    p.add_argument("--manifest", required=True)
    p.add_argument("--payload-dir", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("validate", help="check a package's schema and checksums")
    p.add_argument("path")

    p = sub.add_parser("infer", help="run inference with a packaged model")
    p.add_argument("--model", required=True)
    p.add_argument("--learner", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--draw", default=None, metavar="OUT_PPM",
                   help="write the input image annotated with box outputs")

    p = sub.add_parser("bench", help="benchmark packaged-model inference")
    p.add_argument("--model", required=True)
    p.add_argument("--learner", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--json", required=True, dest="json_out")
    p.add_argument("--min-fps", type=float, default=25.0)
    p.add_argument("--max-mem", type=_positive_int, default=1 << 30)
    p.add_argument("--warmup", type=int, default=10)
    p.add_argument("--iters", type=_positive_int, default=100)
    p.add_argument("--mem-severity", choices=["strict", "warn"], default="strict",
                   help="whether a memory budget failure affects the exit code")

    p = sub.add_parser("sim", help="run an active-perception episode")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--steps", type=_positive_int, required=True)
    p.add_argument("--noise", type=_nonnegative_float, default=0.0)
    p.add_argument("--trace", required=True)
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--max-step", type=float, default=math.pi / 18)
    p.add_argument("--probe-step", type=float, default=0.2)

    p = sub.add_parser("fit", help="train a learner on a dataset and package it")
    p.add_argument("--learner", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--data-type", required=True,
                   choices=["image_folder", "coco_subset"])
    p.add_argument("--out", required=True)
    p.add_argument("--hp", action="append", type=_hp_pair, default=[],
                   metavar="KEY=VALUE")

    p = sub.add_parser("dataset-inspect", help="print dataset length and classes")
    p.add_argument("path")
    p.add_argument("--type", required=True, dest="dataset_type",
                   choices=["image_folder", "coco_subset"])

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8077)

    return parser


def make_client(server: str | None):
    if server:
        import httpx
        return httpx.Client(base_url=server, timeout=300.0)
    import warnings
    with warnings.catch_warnings():
        # stderr belongs to diagnostics; keep the embedded transport's
        # import-time deprecation chatter out of it
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import create_app
    return TestClient(create_app(), raise_server_exceptions=False)


def _fail(payload: dict) -> int:
    name = payload.get("error", "InternalError")
    detail = payload.get("detail", "")
    print(f"{name}: {detail}" if detail else name, file=sys.stderr)
    return EXIT_USAGE if name == "UsageError" else EXIT_ERROR


def _call(client, path: str, body: dict):
    """POST and unwrap; returns (data, exit_code). data is None on failure."""
    try:
        resp = client.post(path, json=body)
    except Exception as exc:  # transport-level failure (remote server only)
        print(f"TransferFailed: {exc}", file=sys.stderr)
        return None, EXIT_ERROR
    if resp.status_code == 200:
        return resp.json(), EXIT_OK
    if resp.status_code == 422:
        print(f"usage error: {resp.text}", file=sys.stderr)
        return None, EXIT_USAGE
    try:
        payload = resp.json()
    except ValueError:
        payload = {"error": "InternalError", "detail": resp.text}
    return None, _fail(payload)


def cmd_package(client, args) -> int:
    data, code = _call(client, "/package", {
        "manifest_path": args.manifest,
        "payload_dir": args.payload_dir,
        "out_dir": args.out,
    })
    if code:
        return code
    print(data["package_path"])
    return EXIT_OK


def cmd_validate(client, args) -> int:
    data, code = _call(client, "/validate", {"package_path": args.path})
    if code:
        return code
    m = data["manifest"]
    print(f"name={m['name']}")
    print(f"format={m['model_format']}")
    print(f"paths={','.join(m['model_paths'])}")
    return EXIT_OK


def cmd_infer(client, args) -> int:
    data, code = _call(client, "/infer", {
        "package_path": args.model,
        "learner": args.learner,
        "input_path": args.input,
        "draw": args.draw is not None,
    })
    if code:
        return code
    for line in data["rendered"]:
        print(line)
    if args.draw is not None:
        Path(args.draw).write_bytes(base64.b64decode(data["drawn_ppm_base64"]))
    return EXIT_OK


def cmd_bench(client, args) -> int:
    data, code = _call(client, "/bench", {
        "package_path": args.model,
        "learner": args.learner,
        "input_path": args.input,
        "warmup_iters": args.warmup,
        "measure_iters": args.iters,
        "min_fps": args.min_fps,
        "max_mem_bytes": args.max_mem,
    })
    if code:
        return code
    Path(args.json_out).write_text(json.dumps(data["report"], indent=2) + "\n",
                                   encoding="utf-8")
    report = data["report"]
    print(f"pass_fps={str(report['pass_fps']).lower()}")
    print(f"pass_mem={str(report['pass_mem']).lower()}")

    enforced = 0
    for v in data["violations"]:
        demoted = v["metric"] == "mem" and args.mem_severity == "warn"
        kind = "budget warning" if demoted else "budget violation"
        print(f"{kind}: {v['metric']} measured {v['measured']:g} "
              f"vs budget {v['budget']:g}", file=sys.stderr)
        enforced += 0 if demoted else 1
    return EXIT_BUDGET if enforced else EXIT_OK


def cmd_sim(client, args) -> int:
    data, code = _call(client, "/sim", {
        "seed": args.seed,
        "steps": args.steps,
        "noise_sigma": args.noise,
        "kappa": args.kappa,
        "max_step": args.max_step,
        "probe_step": args.probe_step,
    })
    if code:
        return code
    with open(args.trace, "w", encoding="utf-8") as f:
        for row in data["rows"]:
            f.write(json.dumps(row) + "\n")
    print(f"final_angular_error={data['final_angular_error']:.6f}")
    return EXIT_OK


def cmd_fit(client, args) -> int:
    data, code = _call(client, "/fit", {
        "learner": args.learner,
        "data_path": args.data,
        "data_type": args.data_type,
        "out_dir": args.out,
        "hyperparams": dict(args.hp),
    })
    if code:
        return code
    print(data["package_path"])
    print(f"stats: {json.dumps(data['stats'], sort_keys=True)}", file=sys.stderr)
    return EXIT_OK


def cmd_dataset_inspect(client, args) -> int:
    data, code = _call(client, "/datasets/inspect", {
        "path": args.path,
        "dataset_type": args.dataset_type,
    })
    if code:
        return code
    print(f"length={data['length']}")
    for i, name in enumerate(data["classes"]):
        print(f"{i} {name}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app
    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


_COMMANDS = {
    "package": cmd_package,
    "validate": cmd_validate,
    "infer": cmd_infer,
    "bench": cmd_bench,
    "sim": cmd_sim,
    "fit": cmd_fit,
    "dataset-inspect": cmd_dataset_inspect,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        return cmd_serve(args)
    client = make_client(args.server)
    try:
        return _COMMANDS[args.command](client, args)
    finally:
        client.close()


if __name__ == "__main__":
    sys.exit(main())
