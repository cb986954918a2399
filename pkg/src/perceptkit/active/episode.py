"""Closed-loop episodes: observe -> infer -> act, with a JSONL trace."""

import json
from dataclasses import dataclass
from pathlib import Path

_ROW_FIELDS = ("step", "theta", "phi", "a1", "a2", "intensity", "angular_error")


@dataclass(frozen=True)
class EpisodeStep:
    step: int
    theta: float
    phi: float
    a1: float
    a2: float
    intensity: float
    angular_error: float

    def to_json(self) -> str:
        return json.dumps({k: getattr(self, k) for k in _ROW_FIELDS})


@dataclass
class EpisodeTrace:
    steps: list

    @property
    def final_angular_error(self) -> float:
        return self.steps[-1].angular_error

    def best_so_far_errors(self) -> list:
        out, best = [], float("inf")
        for s in self.steps:
            best = min(best, s.angular_error)
            out.append(best)
        return out

    def actions(self) -> list:
        return [(s.a1, s.a2) for s in self.steps[1:]]

    def write_jsonl(self, path) -> None:
        Path(path).write_text(
            "".join(s.to_json() + "\n" for s in self.steps), encoding="utf-8")


def run_episode(env, learner, seed: int | None = None,
                max_steps: int | None = None) -> EpisodeTrace:
    """Reset env and learner, then loop until the environment reports done.

    Row 0 records the reset state (with the identity action); row i the
    state after step i. Deterministic given (seed, learner state).
    """
    obs = env.reset(seed)
    learner.reset()
    steps = [EpisodeStep(0, obs.theta, obs.phi, 0.0, 0.0, obs.intensity,
                         env.angular_error())]
    limit = max_steps if max_steps is not None else env.max_steps
    for i in range(1, limit + 1):
        _, action = learner.infer_active(obs)
        obs, _, done = env.step(action)
        steps.append(EpisodeStep(i, obs.theta, obs.phi, action.axes[0],
                                 action.axes[1], obs.intensity,
                                 env.angular_error()))
        if done:
            break
    return EpisodeTrace(steps)


def read_jsonl(path) -> EpisodeTrace:
    steps = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        row = json.loads(line)
        steps.append(EpisodeStep(**{k: row[k] for k in _ROW_FIELDS}))
    return EpisodeTrace(steps)
