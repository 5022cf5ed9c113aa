"""Episode runner and the parallel rollout engine."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

from ..agents.graph import AgentState
from ..envs.expr import render_number
from ..errors import PolicyUnavailableError
from ..util import stable_seed
from .trajectories import ANSWERED, TRUNCATED, Trajectory, TrajectoryStep

__all__ = ["run_episode", "rollout"]


def _task_answer_fields(task) -> tuple[str | None, str | None]:
    ideal = task.ideal
    if isinstance(ideal, float):
        ideal = render_number(ideal)
    return ideal, getattr(task, "unsure_letter", None)


def run_episode(env, policy, task, seed: int, metadata: dict | None = None) -> Trajectory:
    """Run one episode to completion; policy failure yields a void trajectory.

    A PolicyUnavailableError is recorded as a zero-step truncated trajectory
    rather than raised, so one dead endpoint cannot abort a whole rollout.
    """
    ideal, unsure_letter = _task_answer_fields(task)
    meta = dict(getattr(policy, "metadata", {}))
    if metadata:
        meta.update(metadata)
    observation = env.reset()
    state = AgentState()
    steps: list[TrajectoryStep] = []
    while True:
        state = state.with_observation(observation.text)
        try:
            action = policy(state)
        except PolicyUnavailableError as exc:
            return Trajectory(
                task_id=task.id,
                seed=seed,
                steps=(),
                terminal=TRUNCATED,
                ideal=ideal,
                unsure_letter=unsure_letter,
                metadata={**meta, "policy_error": str(exc)},
            )
        state = state.with_action(action)
        result = env.step(action)
        steps.append(TrajectoryStep(observation=observation.text, action=action, reward=result.reward))
        if result.done:
            return Trajectory(
                task_id=task.id,
                seed=seed,
                steps=tuple(steps),
                terminal=ANSWERED,
                answer_letter=env.submitted,
                ideal=ideal,
                unsure_letter=unsure_letter,
                metadata=meta,
            )
        if result.truncated:
            return Trajectory(
                task_id=task.id,
                seed=seed,
                steps=tuple(steps),
                terminal=TRUNCATED,
                ideal=ideal,
                unsure_letter=unsure_letter,
                metadata=meta,
            )
        observation = result


def rollout(
    env_factory,
    policy_factory,
    tasks,
    k: int,
    base_seed: int = 0,
    parallelism: int = 1,
) -> list[Trajectory]:
    """k episodes per task; results ordered by (task, replicate) regardless
    of execution interleaving. Each episode gets a seed derived from
    (base_seed, task id, replicate), so reruns are byte-identical.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    jobs = [(i, task, rep) for i, task in enumerate(tasks) for rep in range(k)]

    def run_one(job):
        _, task, rep = job
        seed = stable_seed(base_seed, task.id, rep)
        env = env_factory(task)
        policy = policy_factory(task, seed)
        return run_episode(env, policy, task, seed, metadata={"replicate": rep})

    if parallelism <= 1:
        return [run_one(job) for job in jobs]
    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(run_one, jobs))
