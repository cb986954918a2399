"""A gradient hill-climbing bearing estimator with active sensing output.

The agent runs a repeating probe cycle of small +theta, -theta, +phi,
-phi excursions, then estimates the local intensity gradient by central
finite differences and emits a climb action along it. The climb length
shrinks as the signal strengthens (distance is estimated from -ln I), so
the pose settles onto the source instead of orbiting it.
"""

import json
import math

from ..engine import Action, Target
from ..errors import BadHyperparam, FormatMismatch
from ..learners import LearnerActive, LearnerState, registry, resolve_hyperparams, validate_stats
from ..packaging import Manifest, read_payload, validate_package, write_package
from .env import DEFAULT_MAX_STEP, SphereBearingEnv, unit_vector

PAYLOAD_NAME = "active_bearing.json"

_SCHEMA = {"probe_step": (float, 0.2), "step_scale": (float, DEFAULT_MAX_STEP)}

# cycle positions: 0..4 are probe/return moves, 5 is the climb decision
_PROBE_MOVES = {
    0: lambda p: (p, 0.0),      # out to +theta
    1: lambda p: (-2 * p, 0.0),  # across to -theta
    2: lambda p: (p, p),        # back to center theta, out to +phi
    3: lambda p: (0.0, -2 * p),  # across to -phi
    4: lambda p: (0.0, p),      # back to center
}


class DirectionEstimate(Target):
    """The agent's current best guess of the source direction (unit 3-vector)."""

    def __init__(self, direction, confidence=None, suggested_action=None):
        super().__init__(confidence, suggested_action)
        self.direction = tuple(float(v) for v in direction)

    def __str__(self) -> str:
        d = ", ".join(f"{v:.6f}" for v in self.direction)
        return f"DirectionEstimate(({d}){self._suffix()})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, DirectionEstimate) and self._eq_base(other)
                and self.direction == other.direction)

    __repr__ = __str__


class ActiveBearingLearner(LearnerActive):

    def __init__(self, hyperparams=None):
        super().__init__()
        hp = resolve_hyperparams(hyperparams, _SCHEMA)
        if not 0.0 < hp["probe_step"] <= 0.5:
            raise BadHyperparam(
                f"probe_step must lie in (0, 0.5] so return moves stay in [-1, 1], "
                f"got {hp['probe_step']}")
        if hp["step_scale"] <= 0:
            raise BadHyperparam(f"step_scale must be > 0, got {hp['step_scale']}")
        self.probe_step = hp["probe_step"]
        self.step_scale = hp["step_scale"]  # radians the env moves per unit action
        self.reset()

    # -- probing ------------------------------------------------------------

    def reset(self) -> None:
        self._cycle = 0
        self._samples = {}   # cycle position -> intensity
        self._best = None    # (intensity, theta, phi)

    def _note(self, obs) -> None:
        if self._best is None or obs.intensity > self._best[0]:
            self._best = (obs.intensity, obs.theta, obs.phi)

    def _climb_action(self, obs) -> Action:
        g_theta = self._samples.get(1, 0.0) - self._samples.get(2, 0.0)
        g_phi = self._samples.get(3, 0.0) - self._samples.get(4, 0.0)
        norm = math.hypot(g_theta, g_phi)
        if norm < 1e-15:
            return Action([0.0, 0.0])  # degenerate gradient: stay put
        # distance estimate from the signal model I ~ exp(-d); caps the
        # climb so the pose settles instead of overshooting the source
        distance = -math.log(min(max(obs.intensity, 1e-12), 1.0))
        magnitude = min(1.0, distance / self.step_scale)
        a1 = g_theta / norm * magnitude
        a2 = g_phi / norm * magnitude

        # Keep the probe pattern away from the chart poles. At |phi| = pi/2
        # the theta axis has no authority and the elevation clamp pins the
        # pose, so an ascent that crests the pole would stall there. When
        # the rim binds, theta gets the full climb magnitude instead.
        rim = math.pi / 2.0 - 2.5 * self.probe_step * self.step_scale
        next_phi = obs.phi + a2 * self.step_scale
        if next_phi > rim and a2 > 0:
            a2 = max(0.0, (rim - obs.phi) / self.step_scale)
            a1 = math.copysign(magnitude, g_theta) if g_theta != 0.0 else 0.0
        elif next_phi < -rim and a2 < 0:
            a2 = min(0.0, (-rim - obs.phi) / self.step_scale)
            a1 = math.copysign(magnitude, g_theta) if g_theta != 0.0 else 0.0
        return Action([a1, a2])

    def infer_active(self, obs):
        self._require_ready()
        self._note(obs)
        if self._cycle == 5:
            action = self._climb_action(obs)
            self._samples = {}
        else:
            self._samples[self._cycle] = obs.intensity
            action = Action(_PROBE_MOVES[self._cycle](self.probe_step))
        self._cycle = (self._cycle + 1) % 6
        estimate = DirectionEstimate(unit_vector(self._best[1], self._best[2]),
                                     suggested_action=action)
        return estimate, action

    def infer(self, obs) -> DirectionEstimate:
        estimate, _ = self.infer_active(obs)
        return estimate

    # -- lifecycle ----------------------------------------------------------

    def fit(self, dataset=None) -> dict:
        """The policy has no trainable parameters; fit() marks it ready."""
        self._state = LearnerState.TRAINED
        self.reset()
        return validate_stats({"trainable_parameters": 0})

    def eval(self, dataset) -> dict:
        """Run one noiseless episode per item; items carry the seed as data[0]."""
        self._require_ready()
        from .episode import run_episode  # local import avoids a cycle
        errors = []
        for i in range(len(dataset)):
            data, _ = dataset.get(i)
            seed = int(data.numpy()[0])
            env = SphereBearingEnv(max_step=self.step_scale)
            trace = run_episode(env, self, seed=seed)
            errors.append(trace.final_angular_error)
        return validate_stats({
            "episodes": len(errors),
            "mean_final_error": sum(errors) / len(errors),
            "max_final_error": max(errors),
        })

    def save(self, path) -> None:
        self._require_ready()
        blob = json.dumps({"probe_step": self.probe_step,
                           "step_scale": self.step_scale},
                          sort_keys=True).encode("utf-8")
        manifest = Manifest(
            name="active_bearing",
            model_format="native",
            model_paths=[PAYLOAD_NAME],
            optimized=self._state is LearnerState.OPTIMIZED,
            inference_params={"probe_step": self.probe_step,
                              "step_scale": self.step_scale},
        )
        write_package(manifest, {PAYLOAD_NAME: blob}, path)

    def load(self, path) -> None:
        manifest = validate_package(path)
        if manifest.model_format != "native":
            raise FormatMismatch(
                f"bearing learner needs model_format='native', got {manifest.model_format!r}")
        try:
            cfg = json.loads(read_payload(path, manifest.model_paths[0]))
            probe_step = float(cfg["probe_step"])
            step_scale = float(cfg["step_scale"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise FormatMismatch(f"payload is not a bearing config: {exc}") from exc
        self.probe_step = probe_step
        self.step_scale = step_scale
        self.reset()
        self._state = LearnerState.OPTIMIZED if manifest.optimized else LearnerState.TRAINED


if "active_bearing" not in registry.names():
    registry.register("active_bearing", ActiveBearingLearner)
