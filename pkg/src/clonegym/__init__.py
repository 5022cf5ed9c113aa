"""clonegym: deterministic in-silico cloning tools, agent environments, and
a rollout/evaluation harness built on top of them."""
from __future__ import annotations

from .errors import SimulationError
from .sequences import (
    CIRCULAR,
    LINEAR,
    Sequence,
    SequencePool,
    add,
    merge,
    reverse_complement,
    slice_sequence,
    view_sequence_stats,
)
from .codons import translate

__all__ = [
    "SimulationError",
    "CIRCULAR",
    "LINEAR",
    "Sequence",
    "SequencePool",
    "add",
    "merge",
    "reverse_complement",
    "slice_sequence",
    "view_sequence_stats",
    "translate",
]

__version__ = "0.1.0"
