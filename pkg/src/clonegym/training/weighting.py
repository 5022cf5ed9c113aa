"""Difficulty-weighted task sampling from per-task pass-rate averages."""
from __future__ import annotations

import random

__all__ = ["PassRateTracker", "task_weights", "sample_task_ids"]

DEFAULT_ALPHA = 0.1
DEFAULT_SCALE = 20.0


class PassRateTracker:
    """Per-task exponential moving average of pass outcomes.

    Averages start at 0, so unseen tasks look maximally hard and receive
    full sampling weight.
    """

    def __init__(self, alpha: float = DEFAULT_ALPHA):
        if not 0.0 < alpha <= 1.0:
            raise ValueError("alpha must be in (0, 1]")
        self.alpha = alpha
        self._rates: dict[str, float] = {}

    def update(self, task_id: str, passed: bool) -> float:
        previous = self._rates.get(task_id, 0.0)
        updated = (1.0 - self.alpha) * previous + self.alpha * (1.0 if passed else 0.0)
        self._rates[task_id] = updated
        return updated

    def f_pass(self, task_id: str) -> float:
        return self._rates.get(task_id, 0.0)

    def snapshot(self) -> dict[str, float]:
        return dict(self._rates)


def task_weights(tracker: PassRateTracker, task_ids, scale: float = DEFAULT_SCALE) -> dict[str, float]:
    """P(task) proportional to scale * (1 - f_pass); uniform when all solved."""
    if scale <= 0:
        raise ValueError("scale must be positive")
    task_ids = list(task_ids)
    if not task_ids:
        raise ValueError("no tasks to weight")
    raw = {tid: scale * (1.0 - tracker.f_pass(tid)) for tid in task_ids}
    total = sum(raw.values())
    if total <= 0.0:
        uniform = 1.0 / len(task_ids)
        return {tid: uniform for tid in task_ids}
    return {tid: w / total for tid, w in raw.items()}


def sample_task_ids(weights: dict[str, float], n: int, rng: random.Random) -> list[str]:
    """n draws with replacement from the weighted distribution."""
    ids = list(weights)
    return rng.choices(ids, weights=[weights[t] for t in ids], k=n)
