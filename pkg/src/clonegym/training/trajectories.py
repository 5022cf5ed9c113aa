"""Episode records, the rejection-sampling buffer, and the SFT exporter."""
from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field

from ..envs.base import ToolCall
from ..errors import EmptyBufferError

__all__ = [
    "ANSWERED",
    "TRUNCATED",
    "TrajectoryStep",
    "Trajectory",
    "TrajectoryBuffer",
    "ei_collect",
    "export_sft",
    "write_trajectories",
    "load_trajectories",
    "atomic_write_text",
]

ANSWERED = "answered"
TRUNCATED = "truncated"

SFT_SYSTEM_PROMPT = (
    "You solve tasks by calling tools, one call per turn. Reply with a "
    'single tool call as a fenced JSON block like {"tool": "name", '
    '"args": {...}}. When you are confident in the final answer, call '
    "submit_answer."
)


@dataclass(frozen=True)
class TrajectoryStep:
    """Observation shown to the agent, the action taken, the reward received."""

    observation: str
    action: ToolCall
    reward: float


@dataclass(frozen=True)
class Trajectory:
    """One episode. Return is the undiscounted reward sum.

    ideal and unsure_letter are copied down from the task record so that
    evaluation needs no task lookup; metadata carries policy settings such
    as sampling temperature.
    """

    task_id: str
    seed: int
    steps: tuple[TrajectoryStep, ...]
    terminal: str
    answer_letter: str | None = None
    ideal: str | None = None
    unsure_letter: str | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.terminal not in (ANSWERED, TRUNCATED):
            raise ValueError(f"unknown terminal state {self.terminal!r}")
        if self.terminal == ANSWERED and self.answer_letter is None:
            raise ValueError("answered trajectories must carry the answer")
        if self.terminal == TRUNCATED and self.answer_letter is not None:
            raise ValueError("truncated trajectories cannot carry an answer")

    @property
    def episode_return(self) -> float:
        return sum(step.reward for step in self.steps)

    @property
    def correct(self) -> bool:
        return (
            self.terminal == ANSWERED
            and self.ideal is not None
            and self.answer_letter == self.ideal
        )

    @property
    def unsure(self) -> bool:
        return (
            self.terminal == ANSWERED
            and self.unsure_letter is not None
            and self.answer_letter == self.unsure_letter
        )

    def to_json(self) -> str:
        return json.dumps(
            {
                "task_id": self.task_id,
                "seed": self.seed,
                "steps": [
                    {
                        "observation": s.observation,
                        "action": {"tool": s.action.tool, "args": s.action.args},
                        "reward": s.reward,
                    }
                    for s in self.steps
                ],
                "return": self.episode_return,
                "terminal": self.terminal,
                "answer_letter": self.answer_letter,
                "ideal": self.ideal,
                "unsure_letter": self.unsure_letter,
                "metadata": self.metadata,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "Trajectory":
        obj = json.loads(text)
        steps = tuple(
            TrajectoryStep(
                observation=s["observation"],
                action=ToolCall(tool=s["action"]["tool"], args=s["action"]["args"]),
                reward=float(s["reward"]),
            )
            for s in obj["steps"]
        )
        traj = cls(
            task_id=obj["task_id"],
            seed=int(obj["seed"]),
            steps=steps,
            terminal=obj["terminal"],
            answer_letter=obj.get("answer_letter"),
            ideal=obj.get("ideal"),
            unsure_letter=obj.get("unsure_letter"),
            metadata=obj.get("metadata", {}),
        )
        recorded = obj.get("return")
        if recorded is not None and abs(recorded - traj.episode_return) > 1e-9:
            raise ValueError("recorded return does not match the reward sum")
        return traj


class TrajectoryBuffer:
    """Append-only store admitting only returns strictly above the threshold."""

    def __init__(self, threshold: float):
        self.threshold = threshold
        self._entries: list[Trajectory] = []

    def append(self, trajectory: Trajectory) -> None:
        if not trajectory.episode_return > self.threshold:
            raise ValueError(
                f"return {trajectory.episode_return} is not above threshold {self.threshold}"
            )
        self._entries.append(trajectory)

    @property
    def entries(self) -> tuple[Trajectory, ...]:
        return tuple(self._entries)

    def __len__(self) -> int:
        return len(self._entries)


def ei_collect(buffer: TrajectoryBuffer, trajectories, rho: float | None = None) -> TrajectoryBuffer:
    """Append exactly the trajectories with return > rho (strict)."""
    if rho is None:
        rho = buffer.threshold
    for trajectory in trajectories:
        if trajectory.episode_return > rho:
            buffer.append(trajectory)
    return buffer


def _transcript(trajectory: Trajectory, system_prompt: str) -> list[dict]:
    messages = [{"role": "system", "content": system_prompt}]
    for i, step in enumerate(trajectory.steps):
        role = "user" if i == 0 else "tool"
        messages.append({"role": role, "content": step.observation})
        messages.append(
            {
                "role": "assistant",
                "tool_call": {"tool": step.action.tool, "args": step.action.args},
            }
        )
    return messages


def export_sft(buffer: TrajectoryBuffer, path: str, system_prompt: str = SFT_SYSTEM_PROMPT) -> int:
    """Write one role-tagged transcript per trajectory; returns the line count."""
    if len(buffer) == 0:
        raise EmptyBufferError("cannot export an empty trajectory buffer")
    lines = []
    for trajectory in buffer.entries:
        record = {
            "task_id": trajectory.task_id,
            "seed": trajectory.seed,
            "return": trajectory.episode_return,
            "messages": _transcript(trajectory, system_prompt),
        }
        lines.append(json.dumps(record, sort_keys=True))
    atomic_write_text(path, "\n".join(lines) + "\n")
    return len(lines)


def write_trajectories(trajectories, path: str) -> int:
    lines = [t.to_json() for t in trajectories]
    atomic_write_text(path, "\n".join(lines) + "\n" if lines else "")
    return len(lines)


def load_trajectories(path: str) -> list[Trajectory]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                out.append(Trajectory.from_json(line))
    return out


def atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
