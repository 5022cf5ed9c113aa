"""Policies over agent state: chat-backed ReAct, scripted, and noisy-answer.

A policy is called with an AgentState whose last entry is the pending
observation and returns the next ToolCall. Policies hold configuration
only; episode state lives in the transcript, so one instance can serve
concurrent episodes.
"""
from __future__ import annotations

import random
import re

from ..envs.base import ToolCall
from ..util import stable_seed
from .chat import ChatReply
from .graph import AgentState

__all__ = [
    "DEFAULT_SYSTEM_PROMPT",
    "NOOP_CALL",
    "parse_tool_call",
    "build_messages",
    "react_policy",
    "ReactPolicy",
    "ScriptedPolicy",
    "NoisyAnswerPolicy",
]

DEFAULT_SYSTEM_PROMPT = (
    "You solve tasks by calling tools, one call per turn. Reply with a "
    'single tool call, either via the structured tool-call field or as a '
    'fenced JSON block like {"tool": "name", "args": {...}}. When you are '
    "confident in the final answer, call submit_answer."
)

# unknown everywhere, so the environment renders an invalid-call observation
NOOP_CALL = ToolCall(tool="noop", args={})

_FENCED = re.compile(r"```(?:json)?\s*\n(.*?)```", re.DOTALL)


def parse_tool_call(reply: ChatReply) -> ToolCall | None:
    """Structured field first, then any fenced JSON block in the content."""
    if reply.tool_call is not None:
        return reply.tool_call
    for block in _FENCED.findall(reply.content):
        candidates = [block] + [line for line in block.splitlines() if line.strip()]
        for candidate in candidates:
            try:
                return ToolCall.from_json(candidate)
            except ValueError:
                continue
    return None


def build_messages(state: AgentState, system_prompt: str = DEFAULT_SYSTEM_PROMPT) -> list[dict]:
    """Transcript as a role-tagged message list ending in the pending observation."""
    if len(state) % 2 != 1:
        raise ValueError("state must end with an observation awaiting an action")
    messages = [{"role": "system", "content": system_prompt}]
    for i, (kind, value) in enumerate(state.entries):
        if kind == "observation":
            role = "user" if i == 0 else "tool"
            messages.append({"role": role, "content": str(value)})
        else:
            call = value.call if hasattr(value, "call") else value
            content = call.to_json() if isinstance(call, ToolCall) else str(value)
            messages.append({"role": "assistant", "content": content})
    return messages


def react_policy(client, schemas, state: AgentState, system_prompt: str = DEFAULT_SYSTEM_PROMPT) -> ToolCall:
    """One chat request; one parse retry; then the no-op invalid call.

    Transport failures surface as PolicyUnavailableError from the client
    after its own retries.
    """
    messages = build_messages(state, system_prompt)
    for _ in range(2):
        reply = client.complete(messages, schemas)
        call = parse_tool_call(reply)
        if call is not None:
            return call
    return NOOP_CALL


class ReactPolicy:
    def __init__(self, client, schemas, system_prompt: str = DEFAULT_SYSTEM_PROMPT):
        self.client = client
        self.schemas = tuple(schemas)
        self.system_prompt = system_prompt

    def __call__(self, state: AgentState) -> ToolCall:
        return react_policy(self.client, self.schemas, state, self.system_prompt)

    @property
    def metadata(self) -> dict:
        return {
            "policy": "react",
            "model": getattr(self.client, "model", "mock"),
            "temperature": getattr(self.client, "temperature", 0.0),
        }


class ScriptedPolicy:
    """Plays back a fixed call list, then no-ops until the episode ends."""

    def __init__(self, calls):
        self.calls = tuple(calls)

    def __call__(self, state: AgentState) -> ToolCall:
        index = len(state.actions)
        if index < len(self.calls):
            return self.calls[index]
        return NOOP_CALL

    @property
    def metadata(self) -> dict:
        return {"policy": "scripted", "temperature": 0.0}


class NoisyAnswerPolicy:
    """Submits immediately; correct with probability p, errors uniform.

    The letter is drawn once from a seed-derived RNG, so a fixed
    (task, seed) pair always submits the same letter.
    """

    def __init__(self, task, seed: int, p_correct: float = 0.6):
        if not 0.0 <= p_correct <= 1.0:
            raise ValueError("p_correct must be in [0, 1]")
        self.p_correct = p_correct
        rng = random.Random(stable_seed(seed, "noisy-answer", task.id))
        if rng.random() < p_correct or len(task.letters) == 1:
            self.letter = task.ideal
        else:
            wrong = [l for l in task.letters if l != task.ideal]
            self.letter = wrong[rng.randrange(len(wrong))]

    def __call__(self, state: AgentState) -> ToolCall:
        return ToolCall(tool="submit_answer", args={"answer": self.letter})

    @property
    def metadata(self) -> dict:
        return {"policy": "noisy", "p_correct": self.p_correct, "temperature": 0.0}
