"""consensus@k / pass@k evaluation with bootstrap confidence intervals.

Consensus drops unsure-letter and truncated trajectories before the
majority vote; a tie picks the lexicographically smallest letter, and a
task whose votes were all dropped counts as incorrect so accuracies stay
comparable across k.
"""
from __future__ import annotations

from collections import Counter

import numpy as np

__all__ = [
    "group_by_task",
    "consensus_outcomes",
    "consensus_at_k",
    "pass_outcomes",
    "pass_at_k",
    "bootstrap_ci",
    "evaluate",
]


def group_by_task(trajectories) -> dict[str, list]:
    groups: dict[str, list] = {}
    for trajectory in trajectories:
        groups.setdefault(trajectory.task_id, []).append(trajectory)
    return groups


def _consensus_letter(group, k: int) -> str | None:
    votes = [
        t.answer_letter
        for t in group[:k]
        if t.terminal == "answered" and not t.unsure
    ]
    if not votes:
        return None
    counts = Counter(votes)
    return min(counts, key=lambda letter: (-counts[letter], letter))


def consensus_outcomes(trajectories, k: int) -> dict[str, bool]:
    if k <= 0:
        raise ValueError("k must be positive")
    outcomes = {}
    for task_id, group in group_by_task(trajectories).items():
        letter = _consensus_letter(group, k)
        outcomes[task_id] = letter is not None and letter == group[0].ideal
    return outcomes


def consensus_at_k(trajectories, k: int) -> float:
    outcomes = consensus_outcomes(trajectories, k)
    return sum(outcomes.values()) / len(outcomes)


def pass_outcomes(trajectories, k: int) -> dict[str, bool]:
    if k <= 0:
        raise ValueError("k must be positive")
    outcomes = {}
    for task_id, group in group_by_task(trajectories).items():
        outcomes[task_id] = any(t.correct for t in group[:k])
    return outcomes


def pass_at_k(trajectories, k: int) -> float:
    outcomes = pass_outcomes(trajectories, k)
    return sum(outcomes.values()) / len(outcomes)


def bootstrap_ci(
    outcomes,
    n_resamples: int = 1000,
    level: float = 0.95,
    seed: int = 0,
) -> tuple[float, float]:
    """Task-level percentile interval for the mean of binary outcomes."""
    values = np.asarray(list(outcomes), dtype=float)
    if values.size == 0:
        raise ValueError("outcomes are empty")
    if n_resamples < 100:
        raise ValueError("need at least 100 resamples")
    if not 0.0 < level < 1.0:
        raise ValueError("level must be in (0, 1)")
    rng = np.random.default_rng(seed)
    indices = rng.integers(0, values.size, size=(n_resamples, values.size))
    means = values[indices].mean(axis=1)
    tail = (1.0 - level) / 2.0
    low, high = np.quantile(means, [tail, 1.0 - tail])
    return float(low), float(high)


def evaluate(trajectories, max_k: int, seed: int = 0, n_resamples: int = 1000) -> list[dict]:
    """Metric rows {metric, k, value, ci_low, ci_high, n_tasks, seed} for
    consensus@k and pass@k, k = 1..max_k."""
    if max_k < 1:
        raise ValueError("max_k must be at least 1")
    n_tasks = len(group_by_task(trajectories))
    rows = []
    for metric, outcome_fn in (("consensus", consensus_outcomes), ("pass", pass_outcomes)):
        for k in range(1, max_k + 1):
            outcomes = outcome_fn(trajectories, k)
            values = list(outcomes.values())
            low, high = bootstrap_ci(values, n_resamples=n_resamples, seed=seed)
            rows.append(
                {
                    "metric": metric,
                    "k": k,
                    "value": sum(values) / len(values),
                    "ci_low": low,
                    "ci_high": high,
                    "n_tasks": n_tasks,
                    "seed": seed,
                }
            )
    return rows
