"""Latency/FPS/memory benchmarking against real-time budgets.

The default budgets are the toolkit's real-time definition: at least
25 inference frames per second, and at most 1 GB of resident memory per
model. Peak memory comes from a background thread polling the process
RSS at ~200 Hz; the report records the method so numbers stay honest.
"""

import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from ..errors import InferFailed

FPS_BUDGET = 25.0
MEM_BUDGET_BYTES = 1 << 30

_RSS_POLL_SECONDS = 0.005  # >= 100 Hz sampling


@dataclass(frozen=True)
class BenchConfig:
    warmup_iters: int = 10
    measure_iters: int = 100
    min_fps: float = FPS_BUDGET
    max_mem_bytes: int = MEM_BUDGET_BYTES

    def __post_init__(self):
        if self.measure_iters < 1 or self.warmup_iters < 0:
            raise ValueError("measure_iters must be >= 1 and warmup_iters >= 0")
        if self.min_fps <= 0 or self.max_mem_bytes <= 0:
            raise ValueError("budgets must be positive")


@dataclass
class BenchReport:
    latencies: list                 # per-iteration wall time, nanoseconds
    mean_latency: float
    median_latency: float
    p95_latency: float
    fps: float
    peak_mem_bytes: int
    mem_method: str                 # allocator_instrumented | rss_sampled | unavailable
    pass_fps: bool
    pass_mem: bool

    def to_json_dict(self) -> dict:
        return {
            "latencies": list(self.latencies),
            "mean_latency": self.mean_latency,
            "median_latency": self.median_latency,
            "p95_latency": self.p95_latency,
            "fps": self.fps,
            "peak_mem_bytes": self.peak_mem_bytes,
            "mem_method": self.mem_method,
            "pass_fps": self.pass_fps,
            "pass_mem": self.pass_mem,
        }

    def write_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), indent=2) + "\n",
                              encoding="utf-8")


@dataclass(frozen=True)
class BudgetViolation:
    metric: str
    measured: float
    budget: float

    def __str__(self) -> str:
        return f"{self.metric}: measured {self.measured:g} vs budget {self.budget:g}"


class _RssSampler:
    """Polls process RSS from a side thread; the hot loop never sees it."""

    def __init__(self):
        try:
            import psutil
            self._proc = psutil.Process()
        except Exception:
            self._proc = None
        self.peak = 0
        self._stop = threading.Event()
        self._thread = None

    @property
    def available(self) -> bool:
        return self._proc is not None

    def _run(self):
        while not self._stop.is_set():
            try:
                rss = self._proc.memory_info().rss
            except Exception:
                break
            if rss > self.peak:
                self.peak = rss
            self._stop.wait(_RSS_POLL_SECONDS)

    def __enter__(self):
        if self.available:
            self.peak = self._proc.memory_info().rss
            self._thread = threading.Thread(target=self._run, daemon=True)
            self._thread.start()
        return self

    def __exit__(self, *exc):
        if self._thread is not None:
            self._stop.set()
            self._thread.join(timeout=2.0)


def nearest_rank_p95(sorted_latencies: list) -> float:
    import math
    n = len(sorted_latencies)
    rank = max(1, math.ceil(0.95 * n))
    return sorted_latencies[rank - 1]


def run_benchmark(infer_fn, cfg: BenchConfig | None = None) -> BenchReport:
    """Time `infer_fn` on a monotonic clock; warmup iterations are discarded.

    Raises InferFailed (with the 0-based call index across warmup plus
    measurement) if the callable raises; no partial report is produced.
    """
    cfg = cfg or BenchConfig()
    calls = 0
    for _ in range(cfg.warmup_iters):
        try:
            infer_fn()
        except Exception as exc:
            raise InferFailed(calls, exc) from exc
        calls += 1

    latencies = []
    with _RssSampler() as sampler:
        span_start = time.perf_counter_ns()
        for _ in range(cfg.measure_iters):
            t0 = time.perf_counter_ns()
            try:
                infer_fn()
            except Exception as exc:
                raise InferFailed(calls, exc) from exc
            latencies.append(time.perf_counter_ns() - t0)
            calls += 1
        span = time.perf_counter_ns() - span_start

    ordered = sorted(latencies)
    fps = cfg.measure_iters / (span / 1e9)
    peak = sampler.peak if sampler.available else 0
    method = "rss_sampled" if sampler.available else "unavailable"
    pass_mem = peak <= cfg.max_mem_bytes if sampler.available else True
    return BenchReport(
        latencies=latencies,
        mean_latency=sum(latencies) / len(latencies),
        median_latency=(ordered[len(ordered) // 2] if len(ordered) % 2
                        else (ordered[len(ordered) // 2 - 1] + ordered[len(ordered) // 2]) / 2),
        p95_latency=nearest_rank_p95(ordered),
        fps=fps,
        peak_mem_bytes=peak,
        mem_method=method,
        pass_fps=fps >= cfg.min_fps,
        pass_mem=pass_mem,
    )


def check_budgets(report: BenchReport, cfg: BenchConfig | None = None) -> list:
    """Empty list means every budget holds; entries name what was broken."""
    cfg = cfg or BenchConfig()
    violations = []
    if report.fps < cfg.min_fps:
        violations.append(BudgetViolation("fps", report.fps, cfg.min_fps))
    if report.mem_method != "unavailable" and report.peak_mem_bytes > cfg.max_mem_bytes:
        violations.append(BudgetViolation("mem", float(report.peak_mem_bytes),
                                          float(cfg.max_mem_bytes)))
    return violations
