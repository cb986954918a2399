"""Active perception: environments, the bearing agent, episode running."""

from .agent import ActiveBearingLearner, DirectionEstimate
from .env import (
    DEFAULT_MAX_STEP,
    DONE_INTENSITY,
    Environment,
    Observation,
    SphereBearingEnv,
    angular_distance,
    unit_vector,
    wrap_angle,
)
from .episode import EpisodeStep, EpisodeTrace, read_jsonl, run_episode

__all__ = [
    "ActiveBearingLearner", "DEFAULT_MAX_STEP", "DirectionEstimate",
    "DONE_INTENSITY", "Environment", "EpisodeStep", "EpisodeTrace",
    "Observation", "SphereBearingEnv", "angular_distance", "read_jsonl",
    "run_episode", "unit_vector", "wrap_angle",
]
