"""Gym-style environment contract and the sphere-bearing sensing task.

A signal source sits in a hidden direction on the unit sphere. The agent
points a sensor given by (azimuth theta, elevation phi) and reads an
intensity exp(-kappa * angular_error) plus optional Gaussian noise, so
moving toward the source strictly improves the reading. Two control axes
move the pose; theta wraps, phi clamps at the poles.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

from ..engine import Action
from ..errors import AxisCountInvalid, EpisodeDone, NotReset
from ..rng import SplitMix64

DEFAULT_MAX_STEP = math.pi / 18.0
DONE_INTENSITY = 0.999


@dataclass(frozen=True)
class Observation:
    intensity: float
    theta: float
    phi: float


class Environment(ABC):
    """reset(seed) -> Observation; step(Action) -> (Observation, reward, done)."""

    @abstractmethod
    def reset(self, seed: int | None = None) -> Observation:
        ...

    @abstractmethod
    def step(self, action: Action):
        ...


def unit_vector(theta: float, phi: float) -> tuple:
    c = math.cos(phi)
    return (c * math.cos(theta), c * math.sin(theta), math.sin(phi))


def angular_distance(u: tuple, v: tuple) -> float:
    dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
    return math.acos(max(-1.0, min(1.0, dot)))


def wrap_angle(theta: float) -> float:
    """Wrap into [-pi, pi)."""
    return (theta + math.pi) % (2.0 * math.pi) - math.pi


class SphereBearingEnv(Environment):

    def __init__(self, kappa: float = 1.0, noise_sigma: float = 0.0,
                 max_step: float = DEFAULT_MAX_STEP, max_steps: int = 200):
        if kappa <= 0:
            raise ValueError(f"kappa must be > 0, got {kappa}")
        if noise_sigma < 0:
            raise ValueError(f"noise_sigma must be >= 0, got {noise_sigma}")
        if max_step <= 0 or max_steps < 1:
            raise ValueError("max_step must be > 0 and max_steps >= 1")
        self.kappa = kappa
        self.noise_sigma = noise_sigma
        self.max_step = max_step
        self.max_steps = max_steps
        self._rng = SplitMix64(0)
        self._hidden = None
        self._theta = 0.0
        self._phi = 0.0
        self._steps = 0
        self._done = False

    # -- instrumentation (not visible to agents through observations) ------

    @property
    def pose(self) -> tuple:
        return (self._theta, self._phi)

    @property
    def hidden_direction(self) -> tuple:
        return self._hidden

    def angular_error(self) -> float:
        return angular_distance(unit_vector(self._theta, self._phi), self._hidden)

    # -- contract -----------------------------------------------------------

    def _clean_intensity(self) -> float:
        return math.exp(-self.kappa * self.angular_error())

    def _observe(self) -> Observation:
        noise = self._rng.normal(self.noise_sigma) if self.noise_sigma > 0 else 0.0
        return Observation(self._clean_intensity() + noise, self._theta, self._phi)

    def reset(self, seed: int | None = None) -> Observation:
        if seed is not None:
            self._rng = SplitMix64(seed)
        z = 2.0 * self._rng.uniform() - 1.0
        azimuth = 2.0 * math.pi * self._rng.uniform()
        r = math.sqrt(max(0.0, 1.0 - z * z))
        self._hidden = (r * math.cos(azimuth), r * math.sin(azimuth), z)
        self._theta = 0.0
        self._phi = 0.0
        self._steps = 0
        self._done = False
        return self._observe()

    def step(self, action: Action):
        if self._hidden is None:
            raise NotReset("call reset() before step()")
        if self._done:
            raise EpisodeDone("episode finished; call reset() to start a new one")
        if len(action.axes) != 2:
            raise AxisCountInvalid(
                f"this environment takes 2-axis actions, got {len(action.axes)}")
        a1, a2 = action.axes
        self._theta = wrap_angle(self._theta + a1 * self.max_step)
        self._phi = max(-math.pi / 2.0, min(math.pi / 2.0, self._phi + a2 * self.max_step))
        self._steps += 1

        obs = self._observe()
        self._done = (self._steps >= self.max_steps
                      or self._clean_intensity() > DONE_INTENSITY)
        return obs, obs.intensity, self._done
