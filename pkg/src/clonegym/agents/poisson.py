"""Score-function gradient demo on a single Poisson sampling node.

The loss L(x) = |x - t| does not depend on the rate directly, so the
gradient of E[L] in the rate k is estimated through the log-likelihood:
d/dk ln P(x | k) = x/k - 1 for the Poisson mass function.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["PoissonNode", "poisson_score_gradient", "fit_poisson_rate"]

RATE_FLOOR = 1e-3


@dataclass
class PoissonNode:
    """Stochastic node emitting Poisson(k) counts; k stays positive."""

    k: float

    def __post_init__(self) -> None:
        if self.k <= 0:
            raise ValueError("rate k must be positive")

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.poisson(self.k, size=size)

    def apply_gradient(self, gradient: float, lr: float) -> None:
        """Gradient-descent step on E[L], projected onto k >= 1e-3."""
        self.k = max(RATE_FLOOR, self.k - lr * gradient)


def poisson_score_gradient(
    node: PoissonNode, target: float, batch: int, rng: np.random.Generator
) -> float:
    """(1/B) sum of |x_i - t| * (x_i / k - 1) over B Poisson(k) draws."""
    if batch < 1:
        raise ValueError("batch must be at least 1")
    draws = node.sample(rng, batch)
    loss = np.abs(draws - target)
    score = draws / node.k - 1.0
    return float(np.mean(loss * score))


def fit_poisson_rate(
    k0: float = 20.0,
    target: float = 13.0,
    lr: float = 0.01,
    batch: int = 8,
    steps: int = 2000,
    seed: int = 0,
) -> list[float]:
    """SGD on the rate; returns the k trajectory including the start value."""
    node = PoissonNode(k=k0)
    rng = np.random.default_rng(seed)
    history = [node.k]
    for _ in range(steps):
        gradient = poisson_score_gradient(node, target, batch, rng)
        node.apply_gradient(gradient, lr)
        history.append(node.k)
    return history
