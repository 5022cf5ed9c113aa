"""Rollout, trajectory records, expert-iteration pipeline, and evaluation."""

from .metrics import (
    bootstrap_ci,
    consensus_at_k,
    consensus_outcomes,
    evaluate,
    group_by_task,
    pass_at_k,
    pass_outcomes,
)
from .rollout import rollout, run_episode
from .trajectories import (
    ANSWERED,
    TRUNCATED,
    Trajectory,
    TrajectoryBuffer,
    TrajectoryStep,
    atomic_write_text,
    ei_collect,
    export_sft,
    load_trajectories,
    write_trajectories,
)
from .weighting import PassRateTracker, sample_task_ids, task_weights

__all__ = [
    "ANSWERED",
    "TRUNCATED",
    "Trajectory",
    "TrajectoryStep",
    "TrajectoryBuffer",
    "ei_collect",
    "export_sft",
    "write_trajectories",
    "load_trajectories",
    "atomic_write_text",
    "run_episode",
    "rollout",
    "PassRateTracker",
    "task_weights",
    "sample_task_ids",
    "group_by_task",
    "consensus_outcomes",
    "consensus_at_k",
    "pass_outcomes",
    "pass_at_k",
    "bootstrap_ci",
    "evaluate",
]
