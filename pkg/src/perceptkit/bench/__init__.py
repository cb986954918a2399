"""Real-time benchmark harness and budget checking."""

from .harness import (
    FPS_BUDGET,
    MEM_BUDGET_BYTES,
    BenchConfig,
    BenchReport,
    BudgetViolation,
    check_budgets,
    nearest_rank_p95,
    run_benchmark,
)

__all__ = [
    "BenchConfig", "BenchReport", "BudgetViolation", "FPS_BUDGET",
    "MEM_BUDGET_BYTES", "check_budgets", "nearest_rank_p95", "run_benchmark",
]
